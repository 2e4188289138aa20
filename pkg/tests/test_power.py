import dataclasses

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from karokit import karo, power
from karokit.model import SpecParseError

BAT = karo().actuator_battery


@pytest.fixture(scope="module")
def profiles():
    return power.load_profiles()


def test_rated_current_endurance(spec):
    assert power.endurance_estimate(spec.electronics_battery, 4.0) == pytest.approx(150.0)


def test_profiles_reproduce_observed_endurance(spec, profiles):
    stair = power.mission_energy(profiles["stair_debris"], spec)
    center = power.mission_energy(profiles["center"], spec)
    assert stair.actuator_minutes == pytest.approx(42.0, abs=1e-9)
    assert center.actuator_minutes == pytest.approx(74.0, abs=1e-9)
    assert stair.meets_30min_mission
    assert power.endurance_drop(center, stair) == pytest.approx(0.43, abs=0.01)


def test_electronics_calibration(spec, profiles):
    cur = profiles["center"].average_electronics_current
    assert float(power.voltage_at(spec.electronics_battery, cur, 60.0)) == pytest.approx(11.45, abs=0.05)
    assert power.calibrated_current(spec.electronics_battery, 60.0, 11.45) == pytest.approx(cur)


def test_curve_endpoints(spec):
    bat = spec.actuator_battery
    curve = power.discharge_curve(bat, 14.285714285714286, 60.0)
    assert curve[0, 1] == bat.full_voltage
    assert curve[-1, 0] == pytest.approx(42 * 60)
    assert curve[-1, 1] == pytest.approx(bat.cutoff_voltage)
    assert np.all(np.diff(curve[:, 1]) <= 0)


def test_curve_flat_past_horizon(spec):
    bat = spec.actuator_battery
    curve = power.discharge_curve(bat, 20.0, 60.0, duration=60 * 60)
    assert np.all(curve[curve[:, 0] >= 30 * 60, 1] == bat.cutoff_voltage)


def test_zero_duration_single_sample(spec):
    curve = power.discharge_curve(spec.actuator_battery, 10.0, 1.0, duration=0.0)
    assert curve.shape == (1, 2)


def test_errors(spec):
    with pytest.raises(ValueError):
        power.endurance_estimate(spec.actuator_battery, 0.0)
    with pytest.raises(power.OverCurrentError):
        power.endurance_estimate(spec.actuator_battery, 101.0)
    with pytest.raises(ValueError):
        power.discharge_curve(spec.actuator_battery, 1.0, 0.0)


def test_zero_duration_request_is_feasible(spec):
    p = power.MissionProfile("idle", 50.0, 3.0, duration_requested=0.0)
    assert power.mission_energy(p, spec).meets_requested


@given(st.floats(0.1, 100.0), st.floats(1.1, 10.0))
def test_inverse_proportional(i, k):
    assert power.endurance_estimate(BAT, i / k) == pytest.approx(k * power.endurance_estimate(BAT, i))


@given(st.floats(0.1, 50.0))
def test_halving_capacity_halves_endurance(i):
    half = dataclasses.replace(BAT, capacity=BAT.capacity / 2)
    assert power.endurance_estimate(half, i) == pytest.approx(power.endurance_estimate(BAT, i) / 2)


@given(st.floats(0.5, 60.0), st.floats(1.0, 600.0))
def test_curve_monotone(i, step):
    curve = power.discharge_curve(BAT, i, step)
    assert np.all(np.diff(curve[:, 1]) <= 1e-12)
    assert curve[-1, 1] == pytest.approx(BAT.cutoff_voltage)


def test_profile_file_rejects_unknown_key(tmp_path):
    p = tmp_path / "p.toml"
    p.write_text("[profile.x]\naverage_actuator_current_a = 1.0\naverage_electronics_current_a = 1.0\nfoo = 1\n")
    with pytest.raises(SpecParseError):
        power.load_profiles(p)


def test_resolve_profile():
    assert power.resolve_profile("center").name == "center"
    with pytest.raises(KeyError):
        power.resolve_profile("nope")
