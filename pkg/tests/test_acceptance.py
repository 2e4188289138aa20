"""Acceptance criteria 1-10 on the bundled Karo spec.

Each test records a single PASS/FAIL line, printed in the terminal summary
under "acceptance criteria".
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from karokit import kinematics as kin
from karokit import karo, mission, ocu, power, report, statics
from karokit.ocu import CommandDatagram, LinkModel, Mode, SafetyState, TimedFrame
from test_kinematics import chain_oracle
from test_mission import factors, perturbed

KARO = karo()


def close(a, b, rel=None, abs_=None):
    return a == pytest.approx(b, rel=rel, abs=abs_)


def test_criterion_01_ramp_torque(spec, criterion):
    case = statics.RampCase(85.0, math.radians(40), 9.8, 0.12)
    total, per = statics.traction_torque(case, 1), statics.traction_torque(case, 2)
    ok = close(total, 64.25, rel=0.005) and close(per, 32.12, rel=0.005)
    criterion(1, f"ramp torque {total:.2f} N m total, {per:.2f} N m per motor", ok)
    assert ok


def test_criterion_02_drivetrain(spec, criterion):
    torque, _ = statics.drivetrain_output(spec.traction_drivetrain)
    speed = statics.ground_speed(spec.traction_drivetrain, spec.track_radius)
    row = {r.id: r for r in report.statics_rows(spec)}["ground_speed"]
    ok = (close(torque, 33.6, rel=0.005) and close(speed, 0.69, abs_=0.005)
          and row.kind == "discrepancy" and row.published == 0.8 and row.passed)
    criterion(2, f"chain output {torque:.2f} N m; ground speed {speed:.3f} m/s "
                 f"(0.8 m/s claim flagged as discrepancy)", ok)
    assert ok


def test_criterion_03_flipper_statics(spec, criterion):
    case = statics.FlipperLiftCase.from_spec(spec)
    f1, f2 = statics.flipper_reactions(case)
    t = statics.flipper_torque(case)
    ok = (f1 + f2 == pytest.approx(833.98, abs=1e-9) and close(f1, 392.8, rel=0.02)
          and close(f2, 441.2, rel=0.02) and close(t, 136.7, rel=0.02))
    criterion(3, f"F1 {f1:.1f} N, F2 {f2:.1f} N, sum {f1 + f2:.2f} N, torque {t:.1f} N m", ok)
    assert ok


def test_criterion_04_motor_current(spec, criterion):
    re50 = spec.traction_drivetrain.motor
    i = statics.motor_current(re50, 405.0)
    ok = close(i, 10.76, abs_=0.005) and i <= 10.8 and statics.motor_current(re50, 0.0) == re50.no_load_current
    criterion(4, f"RE 50 at 405 mNm draws {i:.2f} A (limit 10.8 A); zero torque gives I0", ok)
    assert ok


def test_criterion_05_workspace(spec, criterion):
    cloud = kin.workspace_sample(spec.manipulator, "grid")
    m = kin.workspace_metrics(spec, cloud)
    ok = (abs(m["max_reach_m"] - 1.30) <= 0.01 and m["min_z_base_m"] <= -0.48
          and m["front_query_distance_m"] <= 0.05 and m["rear_query_distance_m"] <= 0.05
          and m["min_x_body_m"] >= m["rear_bound_x_body_m"] - 0.05)
    criterion(5, f"reach {m['max_reach_m']:.3f} m, min z {m['min_z_base_m']:.3f} m, "
                 f"front/rear query {m['front_query_distance_m']:.1e}/{m['rear_query_distance_m']:.1e} m, "
                 f"rearmost body x {m['min_x_body_m']:.3f} m", ok)
    assert ok


def test_criterion_06_fk_ik(spec, criterion):
    arm = spec.manipulator
    lo, hi = np.array(arm.lower), np.array(arm.upper)
    Q = lo + (hi - lo) * np.random.default_rng(2024).random((1000, 6))
    fk_err = max(np.abs(kin.fk_pose(arm, q) - chain_oracle(arm.dh_rows, q)).max() for q in Q)
    hits = 0
    for seed in range(100):
        q = lo + (hi - lo) * np.random.default_rng(seed).random(6)
        target = kin.fk_pose(arm, q)
        res = kin.ik_solve(arm, target, kin.home(arm), seed=seed)
        hits += np.linalg.norm(kin.fk_pose(arm, res.q)[:3, 3] - target[:3, 3]) <= 1e-4
    ok = fk_err <= 1e-9 and hits >= 95
    criterion(6, f"FK max deviation {fk_err:.1e} over 1000 vectors; IK round trips {hits}/100", ok)
    assert ok


def test_criterion_07_power(spec, criterion):
    prof = power.load_profiles()
    center = power.mission_energy(prof["center"], spec)
    stair = power.mission_energy(prof["stair_debris"], spec)
    e4 = power.endurance_estimate(spec.actuator_battery, 4.0)
    drop = power.endurance_drop(center, stair)
    ok = (close(e4, 150.0, abs_=1e-9) and close(stair.actuator_minutes, 42.0, abs_=1e-9)
          and close(center.actuator_minutes, 74.0, abs_=1e-9) and abs(drop - 0.43) <= 0.01)
    criterion(7, f"4 A gives {e4:.1f} min; stair {stair.actuator_minutes:.1f} min, "
                 f"center {center.actuator_minutes:.1f} min, drop {drop:.1%}", ok)
    assert ok


_monotone_failures = []


@settings(max_examples=200)
@given(factors)
def _monotone_under_perturbation(f):
    spec = perturbed(KARO, f)
    for variant in mission.Variant:
        flags = [mission.step_feasibility(spec, variant, h).feasible for h in np.linspace(0.02, 0.6, 12)]
        if any(b and not a for a, b in zip(flags, flags[1:])):
            _monotone_failures.append(("step", variant, f))
    flags = [mission.gap_feasibility(spec, w).feasible for w in np.linspace(0.01, 1.3, 40)]
    if any(b and not a for a, b in zip(flags, flags[1:])):
        _monotone_failures.append(("gap", None, f))


def test_criterion_08_mission(spec, criterion):
    _monotone_failures.clear()
    _monotone_under_perturbation()
    h = {v: mission.max_step_height(spec, v) for v in ("two-pair-regular", "front-pair-regular", "none")}
    gap = mission.gap_feasibility(spec, 0.45)
    ok = (not _monotone_failures and h["two-pair-regular"] >= h["front-pair-regular"] >= h["none"]
          and gap.feasible)
    criterion(8, f"monotone over 200 perturbed specs; max step f {h['two-pair-regular']:.3f} >= "
                 f"b {h['front-pair-regular']:.3f} >= none {h['none']:.3f} m; 0.45 m gap {gap.reason}", ok)
    assert ok


def test_criterion_09_ocu(criterion):
    checks = []
    # unarmed suppression, every mode
    for mode in Mode:
        g = ocu.gate_command(SafetyState(), CommandDatagram(1, mode, (0.7, -0.7)), 0.0)
        checks.append(not g.accepted and g.axes == (0.0, 0.0))
    # replay suppression, every sequence at or below the last one
    for seq in range(0, 6):
        state = SafetyState(armed=True, last_sequence=5)
        g = ocu.gate_command(state, CommandDatagram(seq, Mode.DRIVE, (0.5,), True), 1.0)
        checks.append(g.reason == "stale" and state.last_sequence == 5)
    # watchdog boundary at the timeout, both sides
    for dt, expect in ((499.999, False), (500.0, False), (500.001, True)):
        checks.append(ocu.watchdog_check(SafetyState(armed=True), dt) == expect)
    n, p = 10_000, 0.3
    frames = [TimedFrame(float(i), b"x") for i in range(n)]
    delivered = len(ocu.link_deliver(LinkModel(drop_probability=p, seed=0), frames))
    drop_ok = abs((n - delivered) / n - p) <= 0.02
    frame = ocu.encode(CommandDatagram(7, Mode.FLIPPER, (0.5, -1.0, 1.0, 0.25), True))
    rejected = 0
    for i in range(len(frame) * 8):
        bad = bytearray(frame)
        bad[i // 8] ^= 1 << (i % 8)
        try:
            ocu.decode(bytes(bad))
        except ocu.FrameError:
            rejected += 1
    ok = all(checks) and drop_ok and rejected == len(frame) * 8
    criterion(9, f"gate cases {sum(checks)}/{len(checks)}; drop rate {(n - delivered) / n:.4f} vs {p}; "
                 f"bit flips rejected {rejected}/{len(frame) * 8}", ok)
    assert ok


def test_criterion_10_not_reproducible(criterion):
    # nothing to compute: these results need hardware, so the property suites stand in
    assert len(report.NOT_REPRODUCIBLE) == 4
    criterion(10, "not reproducible at desk scale: " + "; ".join(report.NOT_REPRODUCIBLE), True)
