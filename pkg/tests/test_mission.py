import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from karokit import karo, mission, statics
from karokit.mission import FlipperConfig, Posture, Variant

KARO = karo()
VARIANTS = list(Variant)


def perturbed(spec, f):
    """Spec with masses, levers, radius and COM heights scaled by factors in ``f``."""
    m1, m2, m3 = spec.chassis_mass * f[0], spec.flipper_pair_mass * f[1], spec.manipulator_mass * f[2]
    lv = dataclasses.replace(spec.levers, l1=spec.levers.l1 * f[3], l3=spec.levers.l3 * f[4],
                             la=spec.levers.la * f[5], lb=spec.levers.lb * f[6])
    return dataclasses.replace(spec, chassis_mass=m1, flipper_pair_mass=m2, manipulator_mass=m3,
                               total_mass=m1 + 2 * m2 + m3, levers=lv, track_radius=spec.track_radius * f[7],
                               chassis_com_height=spec.chassis_com_height * f[8],
                               manipulator_com_height=spec.manipulator_com_height * f[9])


factors = st.lists(st.floats(0.7, 1.3), min_size=10, max_size=10)


@settings(max_examples=200)
@given(factors, st.sampled_from(VARIANTS))
def test_step_feasibility_monotone_under_perturbation(f, variant):
    spec = perturbed(KARO, f)
    flags = [mission.step_feasibility(spec, variant, h).feasible for h in np.linspace(0.02, 0.6, 12)]
    assert all(a or not b for a, b in zip(flags, flags[1:]))


@settings(max_examples=200)
@given(factors)
def test_gap_feasibility_monotone_under_perturbation(f):
    spec = perturbed(KARO, f)
    flags = [mission.gap_feasibility(spec, w).feasible for w in np.linspace(0.01, 1.3, 40)]
    assert all(a or not b for a, b in zip(flags, flags[1:]))


@settings(max_examples=200)
@given(factors)
def test_dominance_under_perturbation(f):
    spec = perturbed(KARO, f)
    h = {v: mission.max_step_height(spec, v) for v in ("none", "front-pair-regular", "two-pair-regular")}
    assert h["two-pair-regular"] >= h["front-pair-regular"] >= h["none"]


def test_dominance_bundled():
    h = {v: mission.max_step_height(KARO, v) for v in VARIANTS}
    assert h[Variant.TWO_PAIR_REGULAR] >= h[Variant.FRONT_REGULAR] >= h[Variant.NONE]


def test_step_examples():
    assert mission.step_feasibility(KARO, "none", 0.31).reason == "infeasible:reach"
    v = mission.step_feasibility(KARO, "two-pair-regular", 0.30)
    assert v.feasible and len(v.schedule) == 2
    assert mission.step_feasibility(KARO, "none", 0.0).feasible


def test_step_limits_by_factor():
    v = mission.step_feasibility(KARO, "front-pair-regular", 0.3)
    assert v.reason == "infeasible:tipover"
    weak = dataclasses.replace(KARO, mission=dataclasses.replace(KARO.mission, torque_overload_factor=1.0))
    m = dataclasses.replace(weak.traction_drivetrain.motor, nominal_torque=60.0)
    weak = dataclasses.replace(weak, traction_drivetrain=dataclasses.replace(weak.traction_drivetrain, motor=m))
    assert mission.step_feasibility(weak, "two-pair-regular", 0.4).reason == "infeasible:torque"


def belly_oracle(spec, config, beta_rear, pitch_deg):
    """Highest tip-over edge at one pitch by sampling the flat belly densely."""
    b, la = spec.track_radius, spec.levers.la
    post = Posture(0.0, 0.0, beta_rear)
    circ = np.array(list(mission._circles(spec, post, config).values()))
    phi = math.radians(pitch_deg)
    c, s = math.cos(phi), math.sin(phi)
    R = np.array([[c, -s], [s, c]])
    centres = circ @ R.T
    lift = b - centres[:, 1].min()
    front = la + config.tracked_reach(config.front)
    xb = np.linspace(-la, front, 20001)
    pts = np.column_stack([xb, np.full_like(xb, -b)]) @ R.T
    pts[:, 1] += lift
    cx, cz = mission.com_position(spec, post, config)
    com_x = (R @ [cx, cz])[0]
    ok = pts[:, 0] <= com_x
    return pts[ok, 1].max() if ok.any() else -math.inf


@pytest.mark.parametrize("variant,beta_deg", [("none", 0), ("two-pair-regular", 0),
                                              ("two-pair-regular", 45), ("two-pair-regular", 80)])
def test_climb_envelope_matches_sampled_oracle(variant, beta_deg):
    config = FlipperConfig.for_spec(KARO, variant)
    phi, H = mission.climb_envelope(KARO, config, math.radians(beta_deg))
    for pitch in (5.0, 15.0, 30.0, 45.0, 60.0):
        i = int(np.argmin(np.abs(np.degrees(phi) - pitch)))
        expected = belly_oracle(KARO, config, math.radians(beta_deg), float(np.degrees(phi[i])))
        if np.isfinite(H[i]):
            assert H[i] == pytest.approx(expected, abs=2e-4)


def test_reach_limits():
    b, lb = KARO.track_radius, KARO.levers.lb
    assert mission.reach_height(KARO, FlipperConfig.for_spec(KARO, "none"))[0] == b
    reach, raise_angle = mission.reach_height(KARO, FlipperConfig.for_spec(KARO, "f"))
    assert reach == pytest.approx(b + lb * math.sin(math.radians(89)))
    assert raise_angle == pytest.approx(math.radians(89))


def test_gap_examples(spec):
    assert mission.gap_feasibility(spec, 0.45).feasible
    assert mission.gap_feasibility(spec, 0.01).feasible
    length = 2 * (spec.levers.la + spec.levers.lb)
    assert not mission.gap_feasibility(spec, length).feasible


def test_gap_threshold_matches_closed_form(spec):
    x, _ = mission.com_position(spec)
    half = spec.levers.la + spec.levers.lb
    w = half - abs(x)
    assert mission.gap_feasibility(spec, w - 1e-6).feasible
    assert not mission.gap_feasibility(spec, w + 1e-6).feasible


def test_com_matches_flipper_statics(spec):
    case = statics.FlipperLiftCase.from_spec(spec)
    f1, f2 = statics.flipper_reactions(case)
    x, _ = mission.com_position(spec)
    assert x == pytest.approx((f2 - f1) * case.tip_lever / (case.total_mass * case.g), abs=1e-12)


def test_com_symmetric_at_origin(spec):
    sym = dataclasses.replace(spec, levers=dataclasses.replace(spec.levers, l1=0.0, l3=0.0))
    x, _ = mission.com_position(sym)
    assert x == pytest.approx(0.0, abs=1e-12)


@given(st.floats(-1.5, 1.5))
def test_equal_flipper_angles_keep_com_x(beta):
    x0, _ = mission.com_position(KARO)
    x, _ = mission.com_position(KARO, Posture(0.0, beta, beta))
    assert x == pytest.approx(x0, abs=1e-12)


def test_margin_half_support_when_centred(spec):
    sym = dataclasses.replace(spec, levers=dataclasses.replace(spec.levers, l1=0.0, l3=0.0))
    config = FlipperConfig.for_spec(sym, "none")
    assert mission.stability_margin(sym, Posture(), config) == pytest.approx(sym.levers.la)


def test_margin_zero_single_contact_under_com(spec):
    beta = 0.3
    config = FlipperConfig.for_spec(spec, "front-pair-regular")
    x_tip = spec.levers.la + spec.levers.lb * math.cos(beta)
    m = spec
    l1 = (m.total_mass * x_tip - m.manipulator_mass * m.levers.l3
          - m.flipper_pair_mass * 0.5 * m.levers.lb * math.cos(beta)) / m.chassis_mass
    aligned = dataclasses.replace(spec, levers=dataclasses.replace(spec.levers, l1=l1))
    post = Posture(0.0, beta, 0.0)
    assert mission.contacts(aligned, post, config) == ["front_tip"]
    assert mission.stability_margin(aligned, post, config) == pytest.approx(0.0, abs=1e-12)


def test_ramp_margin_positive(spec):
    assert mission.stability_margin(spec, Posture(math.radians(40))) > 0


def test_margin_continuous_except_at_contact_changes(spec):
    step = 1e-3
    betas = np.arange(-0.6, 0.6, step)
    sweep = mission.beta_sweep(spec, betas, pitch=math.radians(20))
    bound = 2 * (spec.levers.la + spec.levers.lb) * step
    changes = 0
    for (b0, m0, c0), (b1, m1, c1) in zip(sweep, sweep[1:]):
        if abs(m1 - m0) > bound:
            assert c0 != c1
            changes += 1
    assert changes >= 1  # flippers dropping below the main pulleys take over the support


def test_scenarios(spec):
    ramp = mission.scenario_run(spec, mission.resolve_scenario("ramp40"))
    assert ramp["feasible"]
    assert ramp["elements"][0]["traction_per_motor_nm"] == pytest.approx(32.12, rel=0.005)
    stair = mission.scenario_run(spec, mission.resolve_scenario("stair45"))["elements"][0]
    assert stair["feasible"]
    assert stair["torque_margin"] < 0 and stair["continuous_exceeded"]
    assert mission.scenario_run(spec, mission.MissionScenario("empty", ()))["elements"] == []


def test_scenario_deterministic(spec):
    scen = mission.resolve_scenario("course")
    assert mission.scenario_run(spec, scen) == mission.scenario_run(spec, scen)


def test_scenario_parse_errors(tmp_path):
    bad = tmp_path / "s.toml"
    bad.write_text('[[elements]]\nkind = "ramp"\nincline_deg = -3.0\n')
    with pytest.raises(Exception, match="positive"):
        mission.load_scenario(bad)
    bad.write_text('[[elements]]\nkind = "cliff"\n')
    with pytest.raises(Exception, match="kind"):
        mission.load_scenario(bad)
    bad.write_text('[[elements]]\nkind = "gap"\nwidth_m = 0.2\ncolour = 1\n')
    with pytest.raises(Exception, match="unknown"):
        mission.load_scenario(bad)


def test_variant_aliases():
    assert Variant.parse("f") is Variant.TWO_PAIR_REGULAR
    assert Variant.parse("none") is Variant.NONE
    with pytest.raises(ValueError):
        Variant.parse("z")
