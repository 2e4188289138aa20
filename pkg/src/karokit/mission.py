"""Quasi-static obstacle negotiation in the sagittal plane.

Body frame: origin O midway between the main pulley axles, x forward, z up.
Every pulley is a circle of the track radius ``b``; flipper angles are
positive when the tip swings below the axle line.  Contacts are rigid points
with no slip and no terrain friction model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np
import tomli

from karokit import power, statics
from karokit.model import RobotSpec, SpecParseError

CONTACT_TOL = 1e-9
PITCH_STEP = math.radians(0.1)


class Variant(str, Enum):
    NONE = "none"
    FRONT_REGULAR = "front-pair-regular"
    FRONT_TRIANGULAR = "front-pair-triangular"
    TWO_PAIR_TWO_LINK = "two-pair-two-link"
    TRIANGULAR_PLUS_REGULAR = "triangular-plus-regular"
    TWO_PAIR_REGULAR = "two-pair-regular"

    @classmethod
    def parse(cls, value: str | Variant) -> Variant:
        if isinstance(value, cls):
            return value
        aliases = {"a": cls.NONE, "b": cls.FRONT_REGULAR, "c": cls.FRONT_TRIANGULAR,
                   "d": cls.TWO_PAIR_TWO_LINK, "e": cls.TRIANGULAR_PLUS_REGULAR,
                   "f": cls.TWO_PAIR_REGULAR}
        return aliases.get(value) or cls(value)


@dataclass(frozen=True)
class FlipperConfig:
    """Flipper layout.  Triangular pairs act as short levers; the two-link
    pair has a fixed bend between its links and no track on the inner link."""

    variant: Variant = Variant.TWO_PAIR_REGULAR
    lb: float = 0.31
    la: float = 0.26
    triangular_ratio: float = 0.5
    bend: float = math.radians(30.0)

    @classmethod
    def for_spec(cls, spec: RobotSpec, variant: str | Variant = Variant.TWO_PAIR_REGULAR) -> FlipperConfig:
        return cls(Variant.parse(variant), spec.levers.lb, spec.levers.la,
                   spec.mission.triangular_lever_ratio, spec.mission.two_link_bend)

    @property
    def front(self) -> str | None:
        return {Variant.NONE: None, Variant.FRONT_REGULAR: "regular",
                Variant.FRONT_TRIANGULAR: "triangular", Variant.TWO_PAIR_TWO_LINK: "two-link",
                Variant.TRIANGULAR_PLUS_REGULAR: "triangular",
                Variant.TWO_PAIR_REGULAR: "regular"}[self.variant]

    @property
    def rear(self) -> str | None:
        return {Variant.TWO_PAIR_TWO_LINK: "two-link", Variant.TRIANGULAR_PLUS_REGULAR: "regular",
                Variant.TWO_PAIR_REGULAR: "regular"}.get(self.variant)

    def tip(self, kind: str | None, beta: float) -> tuple[float, float]:
        """Tip-pulley centre relative to the pivot, pointing outward (+x)."""
        if kind == "regular":
            return self.lb * math.cos(beta), -self.lb * math.sin(beta)
        if kind == "triangular":
            r = self.lb * self.triangular_ratio
            return r * math.cos(beta), -r * math.sin(beta)
        if kind == "two-link":
            h = 0.5 * self.lb
            return (h * math.cos(beta) + h * math.cos(beta + self.bend),
                    -h * math.sin(beta) - h * math.sin(beta + self.bend))
        raise ValueError(f"no flipper of kind {kind!r}")

    def tracked_reach(self, kind: str | None) -> float:
        """How far past the pivot a flat (beta = 0) flipper extends the belly."""
        if kind == "regular":
            return self.lb
        if kind == "triangular":
            return self.lb * self.triangular_ratio
        return 0.0


@dataclass(frozen=True)
class Posture:
    """Chassis pitch (incline of the supporting plane) and flipper angles, rad."""

    pitch: float = 0.0
    front: float = 0.0
    rear: float = 0.0


def _circles(spec: RobotSpec, posture: Posture, config: FlipperConfig) -> dict[str, tuple[float, float]]:
    la = spec.levers.la
    out = {"rear_main": (-la, 0.0), "front_main": (la, 0.0)}
    if config.front:
        dx, dz = config.tip(config.front, posture.front)
        out["front_tip"] = (la + dx, dz)
    if config.rear:
        dx, dz = config.tip(config.rear, posture.rear)
        out["rear_tip"] = (-la - dx, dz)
    return out


def com_position(spec: RobotSpec, posture: Posture = Posture(),
                 config: FlipperConfig | None = None) -> tuple[float, float]:
    """Mass-weighted side-view COM ``(x, z)`` in the body frame.

    A flipper pair's mass sits halfway along it; a configuration without that
    pair keeps the mass lumped at the pivot so totals stay comparable.
    """
    config = FlipperConfig.for_spec(spec) if config is None else config
    la = spec.levers.la
    parts = [(spec.chassis_mass, spec.levers.l1, spec.chassis_com_height),
             (spec.manipulator_mass, spec.levers.l3, spec.manipulator_com_height)]
    for kind, beta, sign in ((config.front, posture.front, 1.0), (config.rear, posture.rear, -1.0)):
        if kind is None:
            parts.append((spec.flipper_pair_mass, sign * la, 0.0))
        else:
            dx, dz = config.tip(kind, beta)
            parts.append((spec.flipper_pair_mass, sign * (la + 0.5 * dx), 0.5 * dz))
    m = sum(p[0] for p in parts)
    if m == 0:
        return 0.0, 0.0
    return (sum(p[0] * p[1] for p in parts) / m, sum(p[0] * p[2] for p in parts) / m)


def _to_world(x, z, pitch):
    c, s = math.cos(pitch), math.sin(pitch)
    return x * c - z * s, x * s + z * c


def contacts(spec: RobotSpec, posture: Posture, config: FlipperConfig | None = None) -> list[str]:
    """Pulleys touching the supporting plane (body parallel to the plane)."""
    config = FlipperConfig.for_spec(spec) if config is None else config
    circ = _circles(spec, posture, config)
    low = min(z for _, z in circ.values())
    return sorted(name for name, (_, z) in circ.items() if z <= low + CONTACT_TOL)


def stability_margin(spec: RobotSpec, posture: Posture, config: FlipperConfig | None = None) -> float:
    """Signed horizontal distance from the COM to the nearest support edge.

    The robot rests on a plane inclined at ``posture.pitch``; negative means
    the COM lies outside the support interval (tipover).
    """
    config = FlipperConfig.for_spec(spec) if config is None else config
    circ = _circles(spec, posture, config)
    b = spec.track_radius
    names = contacts(spec, posture, config)
    xs = [_to_world(circ[n][0], circ[n][1] - b, posture.pitch)[0] for n in names]
    cx, cz = com_position(spec, posture, config)
    xc = _to_world(cx, cz, posture.pitch)[0]
    return min(xc - min(xs), max(xs) - xc)


# --------------------------------------------------------------------------
# step climbing


@dataclass(frozen=True)
class Verdict:
    feasible: bool
    reason: str  # "feasible" or "infeasible:<factor>"
    detail: dict = field(default_factory=dict)
    schedule: tuple[Posture, ...] = ()

    def __str__(self) -> str:
        return self.reason


def _angles(step: float, limit: float) -> np.ndarray:
    n = int(round(limit / step))
    return np.arange(n + 1) * step


def reach_height(spec: RobotSpec, config: FlipperConfig) -> tuple[float, float]:
    """Highest step edge the leading pulley can engage, and the raise angle used.

    The edge engages when it is no higher than the leading pulley's centre,
    so the contact normal still lifts.  Flippers are raised up to (not
    including) vertical.
    """
    b = spec.track_radius
    if config.front is None:
        return b, 0.0
    raises = _angles(spec.mission.beta_step, spec.mission.flipper_range)
    raises = raises[raises < math.pi / 2 - 1e-12]
    heights = np.array([b + config.tip(config.front, -a)[1] for a in raises])
    heights = np.maximum(heights, b)
    i = int(np.argmax(heights))
    return float(heights[i]), float(raises[i])


def _raise_for(spec: RobotSpec, config: FlipperConfig, h: float) -> float:
    """Smallest sweep raise angle that engages an edge of height ``h``."""
    b = spec.track_radius
    if config.front is None or h <= b:
        return 0.0
    for a in _angles(spec.mission.beta_step, spec.mission.flipper_range):
        if a >= math.pi / 2 - 1e-12:
            break
        if h <= b + config.tip(config.front, -a)[1] + 1e-12:
            return float(a)
    return math.nan


def climb_envelope(spec: RobotSpec, config: FlipperConfig, beta_rear: float) -> tuple[np.ndarray, np.ndarray]:
    """Pitch grid and the largest step height the robot tips over at each pitch.

    With the front flippers flat, the underside ahead of the rear main pulley
    is one straight belly.  The lowest pulley rests on the lower ground and
    the step edge touches the belly.  At pitch ``phi`` the robot tips forward
    onto the step once the COM passes the edge; the returned ``H[phi]`` is the
    highest edge for which that happens with the edge still on the belly.
    Heights at or below ``H`` are also climbable at some lower pitch, so the
    feasible set is downward closed.
    """
    b = spec.track_radius
    la = spec.levers.la
    posture = Posture(0.0, 0.0, beta_rear)
    circ = np.array(list(_circles(spec, posture, config).values()))
    cx, cz = com_position(spec, posture, config)
    belly_front = la + (config.tracked_reach(config.front) if config.front else 0.0)

    phi = np.arange(1, int(round(math.radians(90) / PITCH_STEP))) * PITCH_STEP
    c, s = np.cos(phi), np.sin(phi)
    low = np.min(circ[:, 0][None, :] * s[:, None] + circ[:, 1][None, :] * c[:, None], axis=1)
    z_off = b - low
    # belly point x_b (body) sits at world height x_b*s - b*c + z_off
    # COM ahead of edge  <=>  x_b <= x_com - (z_com + b) tan(phi)
    x_tip_over = cx - (cz + b) * np.tan(phi)
    x_top = np.minimum(belly_front, x_tip_over)
    H = x_top * s - b * c + z_off
    x_rear_min = -la
    L = x_rear_min * s - b * c + z_off
    H = np.where(H >= L, H, -np.inf)
    return phi, H


def _traction_pitch_limit(spec: RobotSpec) -> float:
    """Largest pitch at which the traction chain stays within its overload allowance."""
    dt = spec.traction_drivetrain
    available, _ = statics.drivetrain_output(dt)
    cap = available * spec.mission.torque_overload_factor
    ratio = cap * dt.motors_in_parallel / (spec.total_mass * spec.gravity * spec.track_radius)
    return math.pi / 2 if ratio >= 1 else math.asin(ratio)


def _traction_demand(spec: RobotSpec, pitch: float, mass: float | None = None) -> float:
    case = statics.RampCase(mass=spec.total_mass if mass is None else mass, slope=pitch,
                            g=spec.gravity, track_radius=spec.track_radius)
    return statics.traction_torque(case, spec.traction_drivetrain.motors_in_parallel)


def step_limits(spec: RobotSpec, config: FlipperConfig) -> dict:
    """Height thresholds for each limiting factor, per the rear-flipper sweep."""
    lim = _step_limits(spec, config)
    return {**lim, "per_rear": list(lim["per_rear"])}


@lru_cache(maxsize=256)
def _step_limits(spec: RobotSpec, config: FlipperConfig) -> dict:
    reach, _ = reach_height(spec, config)
    phi_cap = _traction_pitch_limit(spec)
    rear = (_angles(spec.mission.beta_step, spec.mission.flipper_range) if config.rear
            else np.array([0.0]))
    best_tip, best_torque = -math.inf, -math.inf
    per_rear = []
    for br in rear:
        phi, H = climb_envelope(spec, config, float(br))
        tip = float(H.max())
        torque = float(H[phi <= phi_cap].max()) if np.any(phi <= phi_cap) else -math.inf
        per_rear.append((float(br), tip, torque))
        best_tip, best_torque = max(best_tip, tip), max(best_torque, torque)
    return {"reach": reach, "tipover": best_tip, "torque": best_torque, "per_rear": tuple(per_rear),
            "pitch_cap": phi_cap}


def max_step_height(spec: RobotSpec, config: FlipperConfig | str = Variant.TWO_PAIR_REGULAR) -> float:
    if not isinstance(config, FlipperConfig):
        config = FlipperConfig.for_spec(spec, config)
    lim = step_limits(spec, config)
    return max(0.0, min(lim["reach"], max(min(t, q) for _, t, q in lim["per_rear"])))


def step_feasibility(spec: RobotSpec, config: FlipperConfig | str, step_height: float) -> Verdict:
    """Can the robot climb a step of ``step_height`` metres?

    Checks, in order: the leading pulley can engage the edge (reach); some
    rear-flipper angle lets the COM pass the edge before the robot stands up
    (tipover); the traction demand at that pitch stays within the chain's
    continuous torque times the overload allowance (torque).
    """
    if not isinstance(config, FlipperConfig):
        config = FlipperConfig.for_spec(spec, config)
    if step_height <= 0:
        return Verdict(True, "feasible", {"height_margin": math.inf})
    lim = step_limits(spec, config)
    detail = {"reach_limit": lim["reach"], "tipover_limit": lim["tipover"],
              "torque_limit": lim["torque"]}
    raise_angle = _raise_for(spec, config, step_height)
    if step_height > lim["reach"] + 1e-12:
        return Verdict(False, "infeasible:reach", detail)
    candidates = [(min(t, q) - step_height, -br, br) for br, t, q in lim["per_rear"]
                  if min(t, q) >= step_height]
    if not candidates:
        tipped = any(t >= step_height for _, t, _ in lim["per_rear"])
        return Verdict(False, "infeasible:torque" if tipped else "infeasible:tipover", detail)
    margin, _, beta_rear = max(candidates)
    phi, H = climb_envelope(spec, config, beta_rear)
    pitch = float(phi[np.argmax(H >= step_height)])
    op = statics.operating_point_check(spec.traction_drivetrain, _traction_demand(spec, pitch))
    detail.update({"height_margin": margin, "rear_flipper_deg": math.degrees(beta_rear),
                   "front_raise_deg": math.degrees(raise_angle),
                   "tip_over_pitch_deg": math.degrees(pitch),
                   "traction_per_motor_nm": op.required_torque, "torque_margin": op.margin,
                   "continuous_exceeded": op.exceeds})
    schedule = (Posture(0.0, -raise_angle, 0.0), Posture(pitch, 0.0, beta_rear))
    return Verdict(True, "feasible", detail, schedule)


# --------------------------------------------------------------------------
# gap crossing


def gap_feasibility(spec: RobotSpec, gap_width: float,
                    config: FlipperConfig | str = Variant.TWO_PAIR_REGULAR) -> Verdict:
    """Flippers flat, robot rolls level across a gap of ``gap_width``.

    At every offset the COM must stay inside the hull of the belly sections
    resting on either lip.  Offsets tested are the contact-change points and
    the midpoints between them, which covers every case of the piecewise
    linear margin.
    """
    if not isinstance(config, FlipperConfig):
        config = FlipperConfig.for_spec(spec, config)
    if gap_width <= 0:
        return Verdict(True, "feasible", {"min_margin": math.inf})
    la = spec.levers.la
    front = la + (config.tracked_reach(config.front) if config.front else 0.0)
    rear = -la - (config.tracked_reach(config.rear) if config.rear else 0.0)
    xc, _ = com_position(spec, Posture(), config)
    w = gap_width
    crit = sorted({-front, -rear, w - front, w - rear, -xc, w - xc})
    offsets = set(crit)
    offsets.update(0.5 * (a + b) for a, b in zip(crit[:-1], crit[1:]))
    offsets.update((crit[0] - 0.1, crit[-1] + 0.1))
    worst = math.inf
    worst_at = None
    for p in sorted(offsets):
        lo, hi = p + rear, p + front
        segs = []
        if lo < 0:
            segs.append((lo, min(hi, 0.0)))
        if hi > w:
            segs.append((max(lo, w), hi))
        if not segs:
            margin = -math.inf
        else:
            s_lo, s_hi = min(s[0] for s in segs), max(s[1] for s in segs)
            com = p + xc
            margin = min(com - s_lo, s_hi - com)
        if margin < worst:
            worst, worst_at = margin, p
    ok = worst >= -1e-12
    detail = {"min_margin": worst, "worst_offset": worst_at, "supported_length": front - rear,
              "max_gap": max(0.0, min(front - xc, xc - rear))}
    return Verdict(ok, "feasible" if ok else "infeasible:tipover", detail)


# --------------------------------------------------------------------------
# scenarios


@dataclass(frozen=True)
class Element:
    kind: str  # ramp | step | gap | stair
    incline: float = 0.0  # rad, ramp and stair
    height: float = 0.0  # step height
    width: float = 0.0  # gap width
    tread: float = 0.0
    riser: float = 0.0
    variant: Variant = Variant.TWO_PAIR_REGULAR
    postures: tuple[Posture, ...] = ()
    name: str = ""


@dataclass(frozen=True)
class MissionScenario:
    name: str
    elements: tuple[Element, ...]


def _element_report(spec: RobotSpec, el: Element) -> dict:
    config = FlipperConfig.for_spec(spec, el.variant)
    out: dict = {"name": el.name or el.kind, "kind": el.kind, "variant": config.variant.value}
    pitch = 0.0
    demand_mass = spec.system_weight
    if el.kind in ("ramp", "stair"):
        pitch = el.incline
        postures = el.postures or (Posture(pitch, 0.0, 0.0),)
        margins = [stability_margin(spec, Posture(pitch, p.front, p.rear), config) for p in postures]
        stab = max(margins)
        out.update({"incline_deg": math.degrees(pitch), "stability_margin_m": stab,
                    "posture_margins_m": margins})
        reasons = [] if stab >= 0 else ["infeasible:tipover"]
        if el.kind == "stair":
            nosing = math.hypot(el.tread, el.riser)
            la = spec.levers.la
            length = 2 * la + config.tracked_reach(config.front) + config.tracked_reach(config.rear)
            first = step_feasibility(spec, config, el.riser)
            out.update({"nosing_pitch_m": nosing, "supported_length_m": length,
                        "first_step": first.reason})
            if length < 2 * nosing:
                reasons.append("infeasible:reach")
            if not first.feasible:
                reasons.append(first.reason)
    elif el.kind == "step":
        v = step_feasibility(spec, config, el.height)
        out.update({"height_m": el.height, **v.detail})
        pitch = math.radians(v.detail.get("tip_over_pitch_deg", 0.0))
        demand_mass = spec.total_mass
        reasons = [] if v.feasible else [v.reason]
    elif el.kind == "gap":
        v = gap_feasibility(spec, el.width, config)
        out.update({"width_m": el.width, **v.detail})
        reasons = [] if v.feasible else [v.reason]
    else:
        raise ValueError(f"unknown element kind {el.kind!r}")

    dt = spec.traction_drivetrain
    demand = _traction_demand(spec, pitch, demand_mass)
    op = statics.operating_point_check(dt, demand)
    if op.required_torque > op.available_torque * spec.mission.torque_overload_factor:
        reasons.append("infeasible:torque")
    current = op.motor_current * dt.motors_in_parallel
    out.update({
        "traction_per_motor_nm": demand,
        "torque_margin": op.margin,
        "continuous_exceeded": op.exceeds,
        "actuator_current_a": current,
        "endurance_at_demand_min": power.endurance_estimate(spec.actuator_battery, current),
    })
    out["verdict"] = reasons[0] if reasons else "feasible"
    out["feasible"] = not reasons
    return out


def scenario_run(spec: RobotSpec, scenario: MissionScenario) -> dict:
    """Evaluate every element; the report is a plain JSON-ready dict."""
    elements = [_element_report(spec, el) for el in scenario.elements]
    return {"scenario": scenario.name, "elements": elements,
            "feasible": all(e["feasible"] for e in elements)}


def _posture_from(raw: dict, path: str) -> Posture:
    allowed = {"pitch_deg", "front_deg", "rear_deg"}
    if set(raw) - allowed:
        raise SpecParseError(f"{path}: unknown key(s) {sorted(set(raw) - allowed)}")
    return Posture(math.radians(raw.get("pitch_deg", 0.0)), math.radians(raw.get("front_deg", 0.0)),
                   math.radians(raw.get("rear_deg", 0.0)))


def scenario_from_dict(data: dict, default_name: str = "scenario") -> MissionScenario:
    allowed = {"spec_version", "name", "elements"}
    if set(data) - allowed:
        raise SpecParseError(f"unknown scenario key(s) {sorted(set(data) - allowed)}")
    fields = {"kind", "name", "incline_deg", "height_m", "width_m", "tread_m", "riser_m",
              "variant", "postures"}
    elements = []
    for i, raw in enumerate(data.get("elements", [])):
        path = f"elements[{i}]"
        if set(raw) - fields:
            raise SpecParseError(f"{path}: unknown key(s) {sorted(set(raw) - fields)}")
        kind = raw.get("kind")
        if kind not in ("ramp", "step", "gap", "stair"):
            raise SpecParseError(f"{path}.kind: expected ramp|step|gap|stair, got {kind!r}")
        el = Element(
            kind=kind, name=raw.get("name", ""),
            incline=math.radians(raw.get("incline_deg", 0.0)),
            height=float(raw.get("height_m", 0.0)), width=float(raw.get("width_m", 0.0)),
            tread=float(raw.get("tread_m", 0.0)), riser=float(raw.get("riser_m", 0.0)),
            variant=Variant.parse(raw.get("variant", Variant.TWO_PAIR_REGULAR.value)),
            postures=tuple(_posture_from(p, f"{path}.postures[{j}]")
                           for j, p in enumerate(raw.get("postures", []))),
        )
        dims = {"ramp": [el.incline], "step": [el.height], "gap": [el.width],
                "stair": [el.incline, el.tread, el.riser]}[kind]
        if any(not d > 0 for d in dims):
            raise SpecParseError(f"{path}: dimensions must be positive")
        elements.append(el)
    return MissionScenario(data.get("name", default_name), tuple(elements))


def load_scenario(path: str | Path) -> MissionScenario:
    path = Path(path)
    try:
        data = tomli.loads(path.read_text(encoding="utf-8"))
    except tomli.TOMLDecodeError as exc:
        raise SpecParseError(f"malformed scenario: {exc}") from exc
    return scenario_from_dict(data, path.stem)


def bundled_scenarios() -> dict[str, Path]:
    root = Path(str(resources.files("karokit") / "data" / "scenarios"))
    return {p.stem: p for p in sorted(root.glob("*.toml"))}


def resolve_scenario(name_or_path: str) -> MissionScenario:
    bundled = bundled_scenarios()
    if name_or_path in bundled:
        return load_scenario(bundled[name_or_path])
    path = Path(name_or_path)
    if path.exists():
        return load_scenario(path)
    raise KeyError(f"unknown scenario {name_or_path!r}; bundled: {', '.join(bundled)}")


def beta_sweep(spec: RobotSpec, betas: Sequence[float], pitch: float = 0.0,
               config: FlipperConfig | None = None) -> list[tuple[float, float, list[str]]]:
    """Stability margin and contact set while both flippers sweep together."""
    return [(b, stability_margin(spec, Posture(pitch, b, b), config),
             contacts(spec, Posture(pitch, b, b), config)) for b in betas]
