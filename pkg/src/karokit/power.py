"""Battery endurance by coulomb counting, with a linear voltage sag."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
import tomli

from karokit.model import BatterySpec, RobotSpec, SpecParseError

MISSION_MIN = 30.0


class OverCurrentError(ValueError):
    """Average current exceeds the pack's burst rating."""


@dataclass(frozen=True)
class MissionProfile:
    name: str
    average_actuator_current: float  # A
    average_electronics_current: float  # A
    duration_requested: float = MISSION_MIN  # min
    note: str = ""

    def __post_init__(self):
        if min(self.average_actuator_current, self.average_electronics_current) < 0:
            raise ValueError("currents must be nonnegative")
        if self.duration_requested < 0:
            raise ValueError("duration must be nonnegative")


@dataclass(frozen=True)
class EnduranceReport:
    profile: str
    actuator_minutes: float
    electronics_minutes: float
    actuator_energy_wh: float
    electronics_energy_wh: float
    meets_30min_mission: bool
    meets_requested: bool

    @property
    def minutes(self) -> float:
        return min(self.actuator_minutes, self.electronics_minutes)

    @property
    def energy_wh(self) -> float:
        return self.actuator_energy_wh + self.electronics_energy_wh


def endurance_estimate(battery: BatterySpec, avg_current: float) -> float:
    """Minutes until the pack's capacity is drawn at ``avg_current`` amperes."""
    if not avg_current > 0:
        raise ValueError("average current must be positive")
    if avg_current > battery.burst_current:
        raise OverCurrentError(
            f"{avg_current} A exceeds burst rating {battery.burst_current} A of {battery.name!r}")
    return 60.0 * (battery.capacity / 1000.0) / avg_current


def voltage_at(battery: BatterySpec, avg_current: float, t_min) -> np.ndarray:
    """Pack voltage after ``t_min`` minutes: linear to cutoff, then flat."""
    horizon = endurance_estimate(battery, avg_current)
    frac = np.clip(np.asarray(t_min, dtype=float) / horizon, 0.0, 1.0)
    return battery.full_voltage - (battery.full_voltage - battery.cutoff_voltage) * frac


def discharge_curve(battery: BatterySpec, avg_current: float, step: float,
                    duration: float | None = None) -> np.ndarray:
    """``(t_s, volts)`` samples every ``step`` seconds.

    ``duration`` (s) defaults to the endurance horizon; the curve is flat at
    the cutoff voltage past the horizon.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    horizon_s = endurance_estimate(battery, avg_current) * 60.0
    end = horizon_s if duration is None else duration
    n = int(math.floor(end / step + 1e-9))
    t = np.arange(n + 1) * step
    if t[-1] < end - 1e-9:
        t = np.append(t, end)
    return np.column_stack([t, voltage_at(battery, avg_current, t / 60.0)])


def calibrated_current(battery: BatterySpec, t_min: float, volts: float) -> float:
    """Average current that makes the linear sag pass through ``(t_min, volts)``."""
    drop = battery.full_voltage - volts
    if not 0 < drop < battery.full_voltage - battery.cutoff_voltage:
        raise ValueError("calibration voltage must lie strictly between full and cutoff")
    horizon = t_min * (battery.full_voltage - battery.cutoff_voltage) / drop
    return 60.0 * (battery.capacity / 1000.0) / horizon


def _energy(battery: BatterySpec, current: float, minutes: float) -> float:
    return current * battery.nominal_voltage * minutes / 60.0


def mission_energy(profile: MissionProfile, spec: RobotSpec) -> EnduranceReport:
    """Per-pack endurance and energy drawn over the requested duration."""
    packs = []
    for battery, current in ((spec.actuator_battery, profile.average_actuator_current),
                             (spec.electronics_battery, profile.average_electronics_current)):
        minutes = math.inf if current == 0 else endurance_estimate(battery, current)
        used = min(profile.duration_requested, minutes)
        packs.append((minutes, _energy(battery, current, used)))
    (act_min, act_wh), (el_min, el_wh) = packs
    shortest = min(act_min, el_min)
    return EnduranceReport(
        profile=profile.name,
        actuator_minutes=act_min,
        electronics_minutes=el_min,
        actuator_energy_wh=act_wh,
        electronics_energy_wh=el_wh,
        meets_30min_mission=shortest >= MISSION_MIN,
        meets_requested=profile.duration_requested == 0 or shortest >= profile.duration_requested,
    )


def endurance_drop(reference: EnduranceReport, other: EnduranceReport) -> float:
    """Fractional actuator-endurance loss going from ``reference`` to ``other``."""
    return 1.0 - other.actuator_minutes / reference.actuator_minutes


# --------------------------------------------------------------------------
# bundled profiles


def _profiles_path() -> Path:
    return Path(str(resources.files("karokit") / "data" / "profiles.toml"))


def load_profiles(path: str | Path | None = None) -> dict[str, MissionProfile]:
    """Mission profiles keyed by name from a TOML file (bundled by default)."""
    path = _profiles_path() if path is None else Path(path)
    try:
        data = tomli.loads(path.read_text(encoding="utf-8"))
    except tomli.TOMLDecodeError as exc:
        raise SpecParseError(f"malformed profile file: {exc}") from exc
    allowed = {"average_actuator_current_a", "average_electronics_current_a",
               "duration_requested_min", "note"}
    out = {}
    for key, raw in data.get("profile", {}).items():
        extra = set(raw) - allowed
        if extra:
            raise SpecParseError(f"profile.{key}: unknown key(s) {sorted(extra)}")
        out[key] = MissionProfile(
            name=key,
            average_actuator_current=float(raw["average_actuator_current_a"]),
            average_electronics_current=float(raw["average_electronics_current_a"]),
            duration_requested=float(raw.get("duration_requested_min", MISSION_MIN)),
            note=raw.get("note", ""),
        )
    if set(data) - {"profile"}:
        raise SpecParseError(f"unknown top-level key(s): {sorted(set(data) - {'profile'})}")
    return out


def resolve_profile(name_or_path: str) -> MissionProfile | dict[str, MissionProfile]:
    """A bundled profile by name, or every profile in a TOML file."""
    bundled = load_profiles()
    if name_or_path in bundled:
        return bundled[name_or_path]
    path = Path(name_or_path)
    if path.exists():
        return load_profiles(path)
    raise KeyError(f"unknown profile {name_or_path!r}; bundled: {', '.join(sorted(bundled))}")


def write_curve_csv(curve: np.ndarray, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t_s", "voltage_v"])
        for t, v in curve:
            w.writerow([f"{t:.3f}", f"{v:.6f}"])
