import dataclasses
import math

import pytest

from karokit import model
from karokit.model import (SpecParseError, SpecValidationError, dumps_spec, karo, loads_spec,
                           spec_to_dict, validate_spec)


def _mutate(text: str, old: str, new: str) -> str:
    assert old in text
    return text.replace(old, new, 1)


@pytest.fixture(scope="module")
def text():
    return model.bundled_spec_path().read_text(encoding="utf-8")


def test_bundled_spec_values(spec):
    assert spec.system_weight == 85.0
    assert spec.track_radius == 0.12
    assert spec.total_mass == pytest.approx(85.1, abs=1e-12)
    assert spec.gravity == 9.8
    assert len(spec.manipulator.dh_rows) == 6
    assert validate_spec(spec) == []


def test_mass_closure_violation(text):
    bad = _mutate(text, "total_kg = 85.1", "total_kg = 85.0")
    with pytest.raises(SpecValidationError) as exc:
        loads_spec(bad)
    assert exc.value.diagnostics[0].field == "total_mass"


def test_efficiency_out_of_range(text):
    bad = _mutate(text, "efficiency = 0.83", "efficiency = 1.2")
    with pytest.raises(SpecValidationError) as exc:
        loads_spec(bad)
    assert any("efficiency" in d.field for d in exc.value.diagnostics)


def test_lb_zero_single_diagnostic(spec):
    bad = dataclasses.replace(spec, levers=dataclasses.replace(spec.levers, lb=0.0))
    diags = validate_spec(bad)
    assert len(diags) == 1 and diags[0].field == "levers.lb"


def test_five_dh_rows_single_diagnostic(spec):
    arm = dataclasses.replace(spec.manipulator, dh_rows=spec.manipulator.dh_rows[:5])
    diags = validate_spec(dataclasses.replace(spec, manipulator=arm))
    assert len(diags) == 1 and diags[0].field.startswith("manipulator")


def test_unknown_key_rejected(text):
    with pytest.raises(SpecParseError):
        loads_spec(_mutate(text, "chassis_kg = 50.0", "chassis_kg = 50.0\nchasis_kg = 50.0"))


def test_malformed_toml_rejected():
    with pytest.raises(SpecParseError):
        loads_spec("spec_version = = 1")


def test_missing_version_rejected(text):
    with pytest.raises(SpecParseError):
        loads_spec(_mutate(text, "spec_version = 1\n", ""))


def test_motor_datasheet_consistency(spec):
    m = dataclasses.replace(spec.traction_drivetrain.motor, max_continuous_current=5.0)
    dt = dataclasses.replace(spec.traction_drivetrain, motor=m)
    diags = validate_spec(dataclasses.replace(spec, traction_drivetrain=dt))
    assert [d.field for d in diags] == ["traction_drivetrain.motor.max_continuous_current"]


def test_battery_voltage_order(spec):
    bat = dataclasses.replace(spec.actuator_battery, cutoff_voltage=30.0)
    diags = validate_spec(dataclasses.replace(spec, actuator_battery=bat))
    assert diags and diags[0].field.startswith("actuator_battery")


def test_round_trip_exact(spec):
    again = loads_spec(dumps_spec(spec))
    assert again == spec
    assert spec_to_dict(again) == spec_to_dict(spec)


def test_drivetrain_products(spec):
    dt = spec.traction_drivetrain
    assert dt.ratio == 104.0
    assert dt.efficiency == pytest.approx(0.83 * 0.96)


def test_burst_current(spec):
    assert spec.actuator_battery.burst_current == pytest.approx(100.0)


def test_angles_parsed_to_radians(spec):
    row1 = spec.manipulator.dh_rows[0]
    assert row1.alpha == pytest.approx(-math.pi / 2)
    assert row1.hi == pytest.approx(math.radians(80))


def test_spec_hash_stable():
    p = model.bundled_spec_path()
    assert model.spec_hash(p) == model.spec_hash(p)
    assert len(model.spec_hash(p)) == 64


def test_karo_is_fresh_equal():
    assert karo() == karo()
