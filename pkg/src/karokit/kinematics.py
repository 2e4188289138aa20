"""Forward/inverse kinematics and workspace sampling for the 6-row DH arm.

Poses are plain 4x4 ``numpy`` arrays.  Joint vectors are ordered
``(theta1, theta2, theta3, d4, theta5, theta6)`` in rad/m.  Workspace points
are expressed in the arm base frame (frame 0); :func:`mount_transform`
maps that frame into the robot body frame.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from karokit.model import DHRow, ManipulatorSpec, RobotSpec

RANGE_SLACK = 1e-12
DEFAULT_REVOLUTE_SAMPLES = 15
DEFAULT_PRISMATIC_SAMPLES = 9
IK_DAMPING = 0.05
IK_RESTARTS = 8
_CHUNK = 65536


class JointRangeError(ValueError):
    pass


def dh_matrix(r, alpha, d, theta) -> np.ndarray:
    """Link transform for DH parameters; broadcasts over array arguments.

    Returns shape ``(..., 4, 4)``.
    """
    r, alpha, d, theta = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (r, alpha, d, theta)))
    ct, st = np.cos(theta), np.sin(theta)
    ca, sa = np.cos(alpha), np.sin(alpha)
    out = np.zeros(r.shape + (4, 4))
    out[..., 0, 0] = ct
    out[..., 0, 1] = -st * ca
    out[..., 0, 2] = st * sa
    out[..., 0, 3] = r * ct
    out[..., 1, 0] = st
    out[..., 1, 1] = ct * ca
    out[..., 1, 2] = -ct * sa
    out[..., 1, 3] = r * st
    out[..., 2, 1] = sa
    out[..., 2, 2] = ca
    out[..., 2, 3] = d
    out[..., 3, 3] = 1.0
    return out


def _row_params(row: DHRow, q):
    if row.prismatic:
        return row.r, row.alpha, row.d + q, row.theta
    return row.r, row.alpha, row.d, row.theta + q


def in_range(row: DHRow, q: float) -> bool:
    return row.lo - RANGE_SLACK <= q <= row.hi + RANGE_SLACK


def check_joints(arm: ManipulatorSpec, q: Sequence[float]) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape != (len(arm.dh_rows),):
        raise ValueError(f"expected {len(arm.dh_rows)} joint values, got shape {q.shape}")
    for i, (row, qi) in enumerate(zip(arm.dh_rows, q)):
        if not in_range(row, qi):
            raise JointRangeError(f"joint {i + 1} value {qi!r} outside [{row.lo}, {row.hi}]")
    return q


def dh_transform(row: DHRow, q: float) -> np.ndarray:
    """A_i for one row with its joint variable substituted."""
    if not in_range(row, q):
        raise JointRangeError(f"joint value {q!r} outside [{row.lo}, {row.hi}]")
    return dh_matrix(*_row_params(row, q))


def is_rigid(T: np.ndarray, tol: float = 1e-9) -> bool:
    R = T[:3, :3]
    return (np.allclose(T[3], [0, 0, 0, 1], atol=tol)
            and np.allclose(R.T @ R, np.eye(3), atol=tol)
            and abs(np.linalg.det(R) - 1.0) <= tol)


def frames(arm: ManipulatorSpec, q: Sequence[float]) -> list[np.ndarray]:
    """Cumulative transforms T_0..T_n (T_0 is the identity)."""
    q = check_joints(arm, q)
    out = [np.eye(4)]
    for row, qi in zip(arm.dh_rows, q):
        out.append(out[-1] @ dh_matrix(*_row_params(row, qi)))
    return out


def fk_pose(arm: ManipulatorSpec, q: Sequence[float]) -> np.ndarray:
    """End-effector pose A1 A2 ... A6 in the arm base frame."""
    return frames(arm, q)[-1]


def fk_partial(arm: ManipulatorSpec, q: Sequence[float], start: int, stop: int) -> np.ndarray:
    """Product of A_{start+1} .. A_stop (zero-based slice of rows)."""
    q = check_joints(arm, q)
    T = np.eye(4)
    for row, qi in zip(arm.dh_rows[start:stop], q[start:stop]):
        T = T @ dh_matrix(*_row_params(row, qi))
    return T


def fk_positions(arm: ManipulatorSpec, Q: np.ndarray) -> np.ndarray:
    """Vectorized end-effector positions for joint array ``Q`` of shape (N, 6).

    No range checking; callers sample inside the ranges.
    """
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    T = None
    for i, row in enumerate(arm.dh_rows):
        A = dh_matrix(*_row_params(row, Q[:, i]))
        T = A if T is None else T @ A
    return T[:, :3, 3].copy()


def home(arm: ManipulatorSpec) -> np.ndarray:
    """Home joint vector: every variable at zero, clipped into its range."""
    return np.clip(np.zeros(len(arm.dh_rows)), arm.lower, arm.upper)


# --------------------------------------------------------------------------
# workspace


def grid_axes(arm: ManipulatorSpec, density: int | Sequence[int] | None = None,
              prismatic: int = DEFAULT_PRISMATIC_SAMPLES) -> list[np.ndarray]:
    """Per-joint sample values.

    An integer density applies to revolute joints; prismatic joints use
    ``prismatic``.  Full-turn joints skip the duplicate endpoint.
    """
    rows = arm.dh_rows
    if density is None:
        density = DEFAULT_REVOLUTE_SAMPLES
    if isinstance(density, int):
        counts = [prismatic if row.prismatic else density for row in rows]
    else:
        counts = list(density)
        if len(counts) != len(rows):
            raise ValueError("per-joint density must have one entry per joint")
    axes = []
    for row, n in zip(rows, counts):
        if n < 1:
            raise ValueError("density must be positive")
        if n == 1:
            axes.append(np.array([0.5 * (row.lo + row.hi)]))
        elif not row.prismatic and row.hi - row.lo >= 2 * math.pi - 1e-9:
            axes.append(np.linspace(row.lo, row.hi, n, endpoint=False))
        else:
            axes.append(np.linspace(row.lo, row.hi, n))
    return axes


@dataclass
class WorkspaceCloud:
    """Reachable end-effector positions (base frame) plus how they were drawn."""

    points: np.ndarray
    strategy: str
    arm: ManipulatorSpec = field(repr=False)
    counts: tuple[int, ...] = ()
    seed: int | None = None
    _axes: list[np.ndarray] | None = field(default=None, repr=False)
    _random: np.ndarray | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.points)

    def joints(self, index) -> np.ndarray:
        """Joint vectors that produced ``points[index]``."""
        index = np.asarray(index)
        if self._random is not None:
            return self._random[index]
        sub = np.unravel_index(index, self.counts)
        return np.stack([ax[s] for ax, s in zip(self._axes, sub)], axis=-1)

    @property
    def max_reach(self) -> float:
        return float(np.sqrt(np.max(np.einsum("ij,ij->i", self.points, self.points))))

    @property
    def min_z(self) -> float:
        return float(self.points[:, 2].min())


def _prefix_transforms(arm: ManipulatorSpec, axes: list[np.ndarray], k: int) -> np.ndarray:
    """T_0k over the tensor grid of the first ``k`` joints, C-ordered."""
    T = np.eye(4)[None]
    for row, ax in zip(arm.dh_rows[:k], axes[:k]):
        A = dh_matrix(*_row_params(row, ax))
        T = (T[:, None] @ A[None]).reshape(-1, 4, 4)
    return T


def _grid_block(R: np.ndarray, t: np.ndarray, tail: np.ndarray) -> np.ndarray:
    return (np.einsum("aij,bj->abi", R, tail) + t[:, None, :]).reshape(-1, 3)


def workspace_sample(arm: ManipulatorSpec, strategy: str = "grid",
                     density: int | Sequence[int] | None = None, seed: int = 0,
                     workers: int = 1, prismatic: int = DEFAULT_PRISMATIC_SAMPLES) -> WorkspaceCloud:
    """Sample end-effector positions over the joint ranges.

    ``grid`` enumerates a tensor grid (``density`` samples per revolute
    joint); ``random`` draws ``density`` uniform joint vectors from ``seed``.
    The result does not depend on ``workers``: blocks are placed by index.
    """
    if strategy == "grid":
        axes = grid_axes(arm, density, prismatic)
        counts = tuple(len(a) for a in axes)
        # The grid factors as (first k joints) x (remaining joints): position =
        # R_0k @ p_k,tail + t_0k, so each half is evaluated once.
        k = len(axes) - 2 if len(axes) > 2 else 0
        head = _prefix_transforms(arm, axes, k)
        tail_T = np.eye(4)[None]
        for row, ax in zip(arm.dh_rows[k:], axes[k:]):
            tail_T = (tail_T[:, None] @ dh_matrix(*_row_params(row, ax))[None]).reshape(-1, 4, 4)
        tail = tail_T[:, :3, 3]
        R, t = head[:, :3, :3], head[:, :3, 3]
        step = max(1, _CHUNK * 16 // len(tail))
        bounds = [(s, min(s + step, len(head))) for s in range(0, len(head), step)]
        points = np.empty((len(head) * len(tail), 3))
        n = len(tail)
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                parts = pool.map(lambda b: _grid_block(R[b[0]:b[1]], t[b[0]:b[1]], tail), bounds)
                for (s, e), part in zip(bounds, parts):
                    points[s * n:e * n] = part
        else:
            for s, e in bounds:
                points[s * n:e * n] = _grid_block(R[s:e], t[s:e], tail)
        return WorkspaceCloud(points, "grid", arm, counts, seed, _axes=axes)
    if strategy == "random":
        n = 100_000 if density is None else int(density)
        if n < 1:
            raise ValueError("density must be positive")
        rng = np.random.default_rng(seed)
        lo, hi = np.array(arm.lower), np.array(arm.upper)
        Q = lo + (hi - lo) * rng.random((n, len(lo)))
        points = np.concatenate([fk_positions(arm, Q[s:s + _CHUNK]) for s in range(0, n, _CHUNK)])
        return WorkspaceCloud(points, "random", arm, (n,), seed, _random=Q)
    raise ValueError(f"unknown strategy {strategy!r}")


def reachability_query(cloud: WorkspaceCloud, point: Sequence[float], tol: float) -> bool:
    """True iff some cloud point lies within ``tol`` of ``point``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    return nearest_distance(cloud, point) <= tol


def nearest_distance(cloud: WorkspaceCloud, point: Sequence[float]) -> float:
    diff = cloud.points - np.asarray(point, dtype=float)
    return float(np.sqrt(np.min(np.einsum("ij,ij->i", diff, diff))))


def excluded_sector(arm: ManipulatorSpec) -> float:
    """Angular width (rad) of base yaw that joint 1 cannot point the arm plane into.

    The arm plane contains both the +x and -x directions of frame 1, so the
    excluded yaw is what neither direction covers.
    """
    row = arm.dh_rows[0]
    span = min(row.hi - row.lo, 2 * math.pi)
    return max(0.0, 2 * math.pi - 2 * span) if span < math.pi else 0.0


def write_cloud_csv(cloud: WorkspaceCloud, path: str | Path, decimals: int = 6) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y", "z"])
        fmt = f"{{:.{decimals}f}}"
        for x, y, z in cloud.points:
            w.writerow([fmt.format(x), fmt.format(y), fmt.format(z)])


# --------------------------------------------------------------------------
# inverse kinematics


@dataclass(frozen=True)
class IKResult:
    q: np.ndarray
    residual: float
    iterations: int
    success: bool


def _numeric_jacobian(arm: ManipulatorSpec, q: np.ndarray, eps: float = 1e-6) -> np.ndarray:
    n = len(q)
    Q = np.repeat(q[None, :], 2 * n, axis=0)
    for i in range(n):
        Q[2 * i, i] += eps
        Q[2 * i + 1, i] -= eps
    P = fk_positions(arm, Q)
    return ((P[0::2] - P[1::2]) / (2 * eps)).T


def _dls(arm: ManipulatorSpec, target: np.ndarray, q: np.ndarray, tol: float, max_iters: int,
         damping: float) -> tuple[np.ndarray, float, int]:
    lo, hi = np.array(arm.lower), np.array(arm.upper)
    err = target - fk_positions(arm, q)[0]
    res = float(np.linalg.norm(err))
    lam = damping
    for it in range(max_iters):
        if res <= tol:
            return q, res, it
        J = _numeric_jacobian(arm, q)
        taken = False
        for _ in range(8):
            dq = J.T @ np.linalg.solve(J @ J.T + lam * lam * np.eye(3), err)
            q_new = np.clip(q + dq, lo, hi)
            err_new = target - fk_positions(arm, q_new)[0]
            res_new = float(np.linalg.norm(err_new))
            if res_new < res:
                taken = True
                lam = max(lam * 0.5, 1e-4)
                break
            lam *= 2.0
        if not taken:
            return q, res, it + 1
        q, err, res = q_new, err_new, res_new
    return q, res, max_iters


def ik_solve(arm: ManipulatorSpec, target, q0: Sequence[float], tol: float = 1e-4,
             max_iters: int = 200, damping: float = IK_DAMPING, restarts: int = IK_RESTARTS,
             seed: int = 0) -> IKResult:
    """Position-only damped least-squares IK on a finite-difference Jacobian.

    ``target`` is a position or a 4x4 pose (only its translation is used).
    Iterates stay clipped to the joint ranges.  Damping adapts: halved after
    an improving step, doubled (up to 8 times) until a step improves.  When a
    run stalls short of ``tol``, up to ``restarts`` further runs start from
    uniform joint vectors drawn with ``seed``.  The best iterate is returned,
    with ``success=False`` if none met ``tol``.
    """
    target = np.asarray(target, dtype=float)
    if target.shape == (4, 4):
        target = target[:3, 3]
    lo, hi = np.array(arm.lower), np.array(arm.upper)
    q = check_joints(arm, q0).copy()
    rng = None
    best = (q, math.inf)
    total = 0
    for attempt in range(restarts + 1):
        if attempt:
            rng = np.random.default_rng(seed) if rng is None else rng
            q = lo + (hi - lo) * rng.random(len(lo))
        q, res, iters = _dls(arm, target, q, tol, max_iters, damping)
        total += iters
        if res < best[1]:
            best = (q, res)
        if res <= tol:
            break
    return IKResult(best[0], best[1], total, best[1] <= tol)


# --------------------------------------------------------------------------
# body frame helpers and chassis clearance


def mount_transform(robot: RobotSpec) -> np.ndarray:
    m = robot.mount
    c, s = math.cos(m.yaw), math.sin(m.yaw)
    return np.array([[c, -s, 0, m.x], [s, c, 0, m.y], [0, 0, 1, m.z], [0, 0, 0, 1.0]])


def body_to_base(robot: RobotSpec, p: Sequence[float]) -> np.ndarray:
    """Express a body-frame point in the arm base frame."""
    T = np.linalg.inv(mount_transform(robot))
    return (T @ np.append(np.asarray(p, dtype=float), 1.0))[:3]


def base_to_body(robot: RobotSpec, points: np.ndarray) -> np.ndarray:
    T = mount_transform(robot)
    points = np.atleast_2d(points)
    return points @ T[:3, :3].T + T[:3, 3]


def box_signed_distance(robot: RobotSpec, points: np.ndarray) -> np.ndarray:
    """Signed distance from body-frame points to the chassis box (negative inside)."""
    box = robot.chassis
    centre = np.array([0.0, 0.0, 0.5 * (box.bottom + box.top)])
    half = np.array([0.5 * box.length, 0.5 * box.width, 0.5 * box.height])
    d = np.abs(np.atleast_2d(points) - centre) - half
    outside = np.linalg.norm(np.maximum(d, 0.0), axis=-1)
    inside = np.minimum(d.max(axis=-1), 0.0)
    return outside + inside


def arm_skeleton(robot: RobotSpec, q: Sequence[float], samples_per_segment: int = 16) -> np.ndarray:
    """Body-frame points along the arm segments from joint 2 to the end-effector.

    The fixed column between the mount and joint 2 is excluded: it stands on
    the chassis by design.
    """
    origins = np.array([T[:3, 3] for T in frames(robot.manipulator, q)[1:]])
    t = np.linspace(0.0, 1.0, samples_per_segment + 1)[:, None]
    pts = [origins[:1]]
    for a, b in zip(origins[:-1], origins[1:]):
        pts.append(a + t[1:] * (b - a))
    return base_to_body(robot, np.concatenate(pts))


def body_clearance(robot: RobotSpec, q: Sequence[float], samples_per_segment: int = 16) -> float:
    """Smallest signed distance between the arm skeleton and the chassis box."""
    return float(box_signed_distance(robot, arm_skeleton(robot, q, samples_per_segment)).min())


def collision_free(robot: RobotSpec, cloud: WorkspaceCloud, samples_per_segment: int = 4) -> np.ndarray:
    """Boolean mask of cloud samples whose skeleton stays outside the chassis."""
    arm = robot.manipulator
    T_mount = mount_transform(robot)
    mask = np.empty(len(cloud), dtype=bool)
    t = np.linspace(0.0, 1.0, samples_per_segment + 1)[1:]
    for s in range(0, len(cloud), _CHUNK):
        Q = cloud.joints(np.arange(s, min(s + _CHUNK, len(cloud))))
        T = np.broadcast_to(T_mount, (len(Q), 4, 4))
        origins = []
        for i, row in enumerate(arm.dh_rows):
            T = T @ dh_matrix(*_row_params(row, Q[:, i]))
            origins.append(T[:, :3, 3])
        worst = box_signed_distance(robot, origins[0])
        for a, b in zip(origins[:-1], origins[1:]):
            for ti in t:
                worst = np.minimum(worst, box_signed_distance(robot, a + ti * (b - a)))
        mask[s:s + len(Q)] = worst >= 0.0
    return mask


def subset(cloud: WorkspaceCloud, mask: np.ndarray) -> WorkspaceCloud:
    """Cloud restricted to ``mask``; joint lookups are not kept."""
    idx = np.flatnonzero(mask)
    return WorkspaceCloud(cloud.points[idx], "subset", cloud.arm, (len(idx),), cloud.seed,
                          _random=cloud.joints(idx))


def reach_targets(robot: RobotSpec, front: float = 0.92, rear: float = 0.23) -> dict[str, np.ndarray]:
    """Body-frame points ``front`` m past the front flipper tips and ``rear`` m
    behind the rear tips (flippers flat), at shoulder (joint 2) height."""
    tip = robot.levers.la + robot.levers.lb
    z = robot.mount.z + robot.manipulator.dh_rows[0].d
    return {"front": np.array([tip + front, 0.0, z]), "rear": np.array([-tip - rear, 0.0, z])}


def workspace_metrics(robot: RobotSpec, cloud: WorkspaceCloud, front: float = 0.92,
                      rear: float = 0.23) -> dict[str, float]:
    """Summary numbers for a cloud: reach, depth, and the flipper-tip queries."""
    body = base_to_body(robot, cloud.points)
    targets = reach_targets(robot, front, rear)
    out = {
        "samples": float(len(cloud)),
        "max_reach_m": cloud.max_reach,
        "min_z_base_m": cloud.min_z,
        "min_x_body_m": float(body[:, 0].min()),
        "max_x_body_m": float(body[:, 0].max()),
        "max_abs_y_body_m": float(np.abs(body[:, 1]).max()),
        "rear_bound_x_body_m": float(targets["rear"][0]),
        "excluded_sector_deg": math.degrees(excluded_sector(cloud.arm)),
    }
    for name, p in targets.items():
        out[f"{name}_query_distance_m"] = nearest_distance(cloud, body_to_base(robot, p))
    return out
