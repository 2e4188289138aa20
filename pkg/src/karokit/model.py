"""Declarative robot description: data types, TOML loading, validation.

Configuration files are TOML with SI units spelled out in key suffixes
(``track_radius_m``, ``chassis_kg``).  Angles may be given either as
``*_deg`` or ``*_rad``; they are stored in radians.  Motor datasheet values
keep their datasheet units (mNm, rpm, mAh) because every consumer works in
those units.  Unknown keys are rejected.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import tomli
import tomli_w

SPEC_VERSION = 1
MASS_CLOSURE_TOL = 1e-9  # kg
DATASHEET_TOL = 0.05


class SpecError(ValueError):
    """Base class for robot-spec problems."""


class SpecParseError(SpecError):
    """The file is not valid TOML or does not follow the schema."""


class SpecValidationError(SpecError):
    """The file parsed but violates an invariant."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        first = diagnostics[0]
        super().__init__(f"{first.field}: {first.rule} (value={first.value!r})")


@dataclass(frozen=True)
class Diagnostic:
    field: str
    value: Any
    rule: str

    def __str__(self) -> str:
        return f"{self.field} = {self.value!r}: {self.rule}"

    def as_dict(self) -> dict:
        value = self.value if isinstance(self.value, (int, float, str, bool)) else repr(self.value)
        return {"field": self.field, "value": value, "rule": self.rule}


# --------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class MotorSpec:
    """DC motor datasheet values (mNm, rpm, mNm/A, A, V)."""

    name: str
    nominal_torque: float
    nominal_speed: float
    torque_constant: float
    no_load_current: float
    nominal_voltage: float
    max_continuous_current: float


@dataclass(frozen=True)
class GearStage:
    name: str
    ratio: float
    efficiency: float


@dataclass(frozen=True)
class Drivetrain:
    motor: MotorSpec
    stages: tuple[GearStage, ...]
    motors_in_parallel: int = 1

    @property
    def ratio(self) -> float:
        return math.prod(s.ratio for s in self.stages)

    @property
    def efficiency(self) -> float:
        return math.prod(s.efficiency for s in self.stages)


@dataclass(frozen=True)
class DHRow:
    """One Denavit-Hartenberg row.

    ``theta`` is the home offset added to a revolute joint variable, ``d`` the
    offset added to a prismatic one.  ``lo``/``hi`` bound the joint variable.
    """

    r: float
    alpha: float
    d: float
    theta: float
    kind: str = "revolute"
    lo: float = -math.pi
    hi: float = math.pi

    @property
    def prismatic(self) -> bool:
        return self.kind == "prismatic"


@dataclass(frozen=True)
class ManipulatorSpec:
    dh_rows: tuple[DHRow, ...]
    gripper: bool
    arm_total_mass: float  # m_t
    distal_mass: float  # m_c, links 3-7
    com_lever_total: float  # l_t
    com_lever_distal: float  # l_c
    full_extension: float  # l_ex
    link2_length: float  # l_j
    joint2_drive: Drivetrain

    @property
    def lower(self) -> tuple[float, ...]:
        return tuple(row.lo for row in self.dh_rows)

    @property
    def upper(self) -> tuple[float, ...]:
        return tuple(row.hi for row in self.dh_rows)


@dataclass(frozen=True)
class BatterySpec:
    name: str
    capacity: float  # mAh
    c_rating: float
    nominal_voltage: float
    full_voltage: float
    cutoff_voltage: float

    @property
    def burst_current(self) -> float:
        return self.c_rating * self.capacity / 1000.0


@dataclass(frozen=True)
class Levers:
    l1: float
    l2: float
    l3: float
    la: float
    lb: float


@dataclass(frozen=True)
class Footprint:
    length: float
    width: float
    height: float


@dataclass(frozen=True)
class ChassisBox:
    """Axis-aligned chassis box in the body frame (origin on the axle line)."""

    length: float
    width: float
    bottom: float
    top: float

    @property
    def height(self) -> float:
        return self.top - self.bottom


@dataclass(frozen=True)
class ArmMount:
    x: float
    y: float
    z: float
    yaw: float


@dataclass(frozen=True)
class Ratings:
    """Declared performance ratings; stored, not derived."""

    payload_flat_kg: float
    arm_payload_full_extension_kg: float
    max_speed_flat_m_s: float
    max_incline_deg: float
    max_stair_incline_deg: float
    max_gap_m: float
    charge_time_80_min: float
    charge_time_100_min: float


@dataclass(frozen=True)
class MissionParams:
    torque_overload_factor: float = 1.25
    triangular_lever_ratio: float = 0.5
    two_link_bend: float = math.radians(30.0)
    beta_step: float = math.radians(1.0)
    flipper_range: float = math.radians(90.0)


@dataclass(frozen=True)
class RobotSpec:
    name: str
    chassis_mass: float  # m1
    flipper_pair_mass: float  # m2, one pair
    manipulator_mass: float  # m3
    total_mass: float  # M
    system_weight: float  # declared weight used by the ramp sizing
    gravity: float
    track_radius: float  # b
    levers: Levers
    chassis_com_height: float
    manipulator_com_height: float
    footprint: Footprint
    chassis: ChassisBox
    mount: ArmMount
    traction_drivetrain: Drivetrain
    flipper_drivetrain: Drivetrain
    manipulator: ManipulatorSpec
    actuator_battery: BatterySpec
    electronics_battery: BatterySpec
    ratings: Ratings
    mission: MissionParams = field(default_factory=MissionParams)
    spec_version: int = SPEC_VERSION


# --------------------------------------------------------------------------
# validation


def _positive(diags: list[Diagnostic], name: str, value: float) -> None:
    if not (value > 0 and math.isfinite(value)):
        diags.append(Diagnostic(name, value, "must be strictly positive"))


def _validate_motor(diags: list[Diagnostic], prefix: str, m: MotorSpec) -> None:
    before = len(diags)
    for attr in ("nominal_torque", "nominal_speed", "torque_constant", "no_load_current",
                 "nominal_voltage", "max_continuous_current"):
        _positive(diags, f"{prefix}.{attr}", getattr(m, attr))
    if len(diags) == before:
        expected = m.nominal_torque / m.torque_constant + m.no_load_current
        if abs(m.max_continuous_current - expected) > DATASHEET_TOL * expected:
            diags.append(Diagnostic(
                f"{prefix}.max_continuous_current", m.max_continuous_current,
                f"datasheet mismatch: nominal_torque/Km + I0 = {expected:.4g} A (5% tolerance)"))


def _validate_drivetrain(diags: list[Diagnostic], prefix: str, dt: Drivetrain) -> None:
    _validate_motor(diags, f"{prefix}.motor", dt.motor)
    if not dt.stages:
        diags.append(Diagnostic(f"{prefix}.stages", [], "at least one gear stage required"))
    for i, st in enumerate(dt.stages):
        if not st.ratio > 0:
            diags.append(Diagnostic(f"{prefix}.stages[{i}].ratio", st.ratio, "must be > 0"))
        if not 0 < st.efficiency <= 1:
            diags.append(Diagnostic(f"{prefix}.stages[{i}].efficiency", st.efficiency,
                                    "must lie in (0, 1]"))
    if dt.motors_in_parallel < 1:
        diags.append(Diagnostic(f"{prefix}.motors_in_parallel", dt.motors_in_parallel,
                                "must be >= 1"))


def _validate_battery(diags: list[Diagnostic], prefix: str, bat: BatterySpec) -> None:
    _positive(diags, f"{prefix}.capacity", bat.capacity)
    _positive(diags, f"{prefix}.c_rating", bat.c_rating)
    _positive(diags, f"{prefix}.nominal_voltage", bat.nominal_voltage)
    if not bat.full_voltage > bat.cutoff_voltage:
        diags.append(Diagnostic(f"{prefix}.full_voltage", bat.full_voltage,
                                "must exceed cutoff_voltage"))


def _validate_manipulator(diags: list[Diagnostic], arm: ManipulatorSpec) -> None:
    rows = arm.dh_rows
    if len(rows) != 6:
        diags.append(Diagnostic("manipulator.dh_rows", len(rows), "exactly 6 DH rows required"))
        return
    for i, row in enumerate(rows):
        if row.kind not in ("revolute", "prismatic"):
            diags.append(Diagnostic(f"manipulator.dh_rows[{i}].kind", row.kind,
                                    "must be 'revolute' or 'prismatic'"))
        if not row.lo <= row.hi:
            diags.append(Diagnostic(f"manipulator.dh_rows[{i}].range", (row.lo, row.hi),
                                    "range min must not exceed max"))
        if row.prismatic and row.lo < 0:
            diags.append(Diagnostic(f"manipulator.dh_rows[{i}].range", (row.lo, row.hi),
                                    "prismatic stroke must be nonnegative"))
    for name in ("arm_total_mass", "distal_mass", "com_lever_total", "com_lever_distal",
                 "full_extension", "link2_length"):
        _positive(diags, f"manipulator.{name}", getattr(arm, name))
    links = sum(abs(row.r) + abs(row.d) for row in rows)
    stroke = sum(row.hi for row in rows if row.prismatic)
    if arm.full_extension > links + stroke + 1e-9:
        diags.append(Diagnostic("manipulator.full_extension", arm.full_extension,
                                f"exceeds link lengths plus stroke ({links + stroke:.4g} m)"))
    _validate_drivetrain(diags, "manipulator.joint2_drive", arm.joint2_drive)


def validate_spec(spec: RobotSpec) -> list[Diagnostic]:
    """Return every violated invariant; an empty list means the spec is valid."""
    diags: list[Diagnostic] = []
    for name in ("chassis_mass", "flipper_pair_mass", "manipulator_mass", "total_mass",
                 "system_weight", "gravity", "track_radius"):
        _positive(diags, name, getattr(spec, name))
    mass_sum = spec.chassis_mass + 2 * spec.flipper_pair_mass + spec.manipulator_mass
    if abs(mass_sum - spec.total_mass) > MASS_CLOSURE_TOL:
        diags.append(Diagnostic("total_mass", spec.total_mass,
                                f"mass closure: m1 + 2*m2 + m3 = {mass_sum:.6g} kg"))
    for name in ("l1", "l2", "l3", "la", "lb"):
        value = getattr(spec.levers, name)
        if name in ("la", "lb"):
            _positive(diags, f"levers.{name}", value)
        elif not (value >= 0 and math.isfinite(value)):
            diags.append(Diagnostic(f"levers.{name}", value, "must be nonnegative"))
    for name in ("length", "width", "height"):
        _positive(diags, f"footprint.{name}", getattr(spec.footprint, name))
    _positive(diags, "chassis.length", spec.chassis.length)
    _positive(diags, "chassis.width", spec.chassis.width)
    if not spec.chassis.top > spec.chassis.bottom:
        diags.append(Diagnostic("chassis.top", spec.chassis.top, "must exceed chassis.bottom"))
    _validate_drivetrain(diags, "traction_drivetrain", spec.traction_drivetrain)
    _validate_drivetrain(diags, "flipper_drivetrain", spec.flipper_drivetrain)
    _validate_manipulator(diags, spec.manipulator)
    _validate_battery(diags, "actuator_battery", spec.actuator_battery)
    _validate_battery(diags, "electronics_battery", spec.electronics_battery)
    mp = spec.mission
    if not mp.torque_overload_factor >= 1:
        diags.append(Diagnostic("mission.torque_overload_factor", mp.torque_overload_factor,
                                "must be >= 1"))
    if not 0 < mp.triangular_lever_ratio <= 1:
        diags.append(Diagnostic("mission.triangular_lever_ratio", mp.triangular_lever_ratio,
                                "must lie in (0, 1]"))
    _positive(diags, "mission.beta_step", mp.beta_step)
    if spec.spec_version != SPEC_VERSION:
        diags.append(Diagnostic("spec_version", spec.spec_version,
                                f"unsupported; expected {SPEC_VERSION}"))
    return diags


# --------------------------------------------------------------------------
# TOML parsing


class _Table:
    """Consumes keys from a TOML table and complains about leftovers."""

    def __init__(self, data: Any, path: str):
        if not isinstance(data, dict):
            raise SpecParseError(f"{path or '<root>'}: expected a table")
        self.data = dict(data)
        self.path = path

    def _key(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def take(self, key: str, kind: type | tuple[type, ...] = (int, float), default: Any = ...) -> Any:
        if key not in self.data:
            if default is ...:
                raise SpecParseError(f"missing key {self._key(key)}")
            return default
        value = self.data.pop(key)
        if kind in ((int, float), float) and isinstance(value, bool):
            raise SpecParseError(f"{self._key(key)}: expected a number")
        if not isinstance(value, kind):
            raise SpecParseError(f"{self._key(key)}: expected {kind}, got {type(value).__name__}")
        return float(value) if kind in ((int, float), float) else value

    def number(self, key: str, default: Any = ...) -> float:
        return self.take(key, (int, float), default)

    def angle(self, stem: str, default: Any = ...) -> float:
        has_deg, has_rad = f"{stem}_deg" in self.data, f"{stem}_rad" in self.data
        if has_deg and has_rad:
            raise SpecParseError(f"{self._key(stem)}: give either _deg or _rad, not both")
        if has_rad:
            return self.number(f"{stem}_rad")
        if has_deg:
            return math.radians(self.number(f"{stem}_deg"))
        if default is ...:
            raise SpecParseError(f"missing key {self._key(stem)}_deg")
        return default

    def table(self, key: str) -> _Table:
        return _Table(self.take(key, dict), self._key(key))

    def done(self) -> None:
        if self.data:
            extra = ", ".join(self._key(k) for k in sorted(self.data))
            raise SpecParseError(f"unknown key(s): {extra}")


def _pair(t: _Table, key: str) -> tuple[float, float]:
    value = t.take(key, list)
    if len(value) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        raise SpecParseError(f"{t._key(key)}: expected [min, max]")
    return float(value[0]), float(value[1])


def _parse_motor(t: _Table) -> MotorSpec:
    m = MotorSpec(
        name=t.take("name", str, ""),
        nominal_torque=t.number("nominal_torque_mnm"),
        nominal_speed=t.number("nominal_speed_rpm"),
        torque_constant=t.number("torque_constant_mnm_per_a"),
        no_load_current=t.number("no_load_current_a"),
        nominal_voltage=t.number("nominal_voltage_v"),
        max_continuous_current=t.number("max_continuous_current_a"),
    )
    t.done()
    return m


def _parse_drivetrain(t: _Table) -> Drivetrain:
    motor = _parse_motor(t.table("motor"))
    stages = []
    for i, raw in enumerate(t.take("stages", list)):
        st = _Table(raw, f"{t.path}.stages[{i}]")
        stages.append(GearStage(name=st.take("name", str, ""), ratio=st.number("ratio"),
                                efficiency=st.number("efficiency")))
        st.done()
    count = t.take("motors_in_parallel", int, 1)
    t.done()
    return Drivetrain(motor=motor, stages=tuple(stages), motors_in_parallel=count)


def _parse_dh(raw: Any, path: str) -> DHRow:
    t = _Table(raw, path)
    kind = t.take("joint", str)
    if kind == "prismatic":
        lo, hi = _pair(t, "range_m")
    elif kind == "revolute":
        if "range_rad" in t.data:
            lo, hi = _pair(t, "range_rad")
        else:
            lo, hi = (math.radians(v) for v in _pair(t, "range_deg"))
    else:
        raise SpecParseError(f"{path}.joint: expected 'revolute' or 'prismatic', got {kind!r}")
    row = DHRow(r=t.number("r_m"), alpha=t.angle("alpha"), d=t.number("d_m"),
                theta=t.angle("theta_offset"), kind=kind, lo=lo, hi=hi)
    t.done()
    return row


def _parse_battery(t: _Table) -> BatterySpec:
    b = BatterySpec(
        name=t.take("name", str, ""),
        capacity=t.number("capacity_mah"),
        c_rating=t.number("c_rating"),
        nominal_voltage=t.number("nominal_voltage_v"),
        full_voltage=t.number("full_voltage_v"),
        cutoff_voltage=t.number("cutoff_voltage_v"),
    )
    t.done()
    return b


def spec_from_dict(data: dict) -> RobotSpec:
    """Build a RobotSpec from a parsed TOML document (no invariant checks)."""
    root = _Table(data, "")
    version = root.take("spec_version", int)
    name = root.take("name", str, "robot")
    gravity = root.number("gravity_m_s2", 9.8)

    masses = root.table("masses")
    m1, m2, m3 = masses.number("chassis_kg"), masses.number("flipper_pair_kg"), masses.number("manipulator_kg")
    total = masses.number("total_kg")
    system_weight = masses.number("system_weight_kg", total)
    masses.done()

    geo = root.table("geometry")
    track_radius = geo.number("track_radius_m")
    lv = geo.table("levers")
    levers = Levers(l1=lv.number("l1_m"), l2=lv.number("l2_m"), l3=lv.number("l3_m"),
                    la=lv.number("la_m"), lb=lv.number("lb_m"))
    lv.done()
    com = geo.table("com_heights")
    chassis_com_h, arm_com_h = com.number("chassis_m"), com.number("manipulator_m")
    com.done()
    fp = geo.table("footprint")
    footprint = Footprint(fp.number("length_m"), fp.number("width_m"), fp.number("height_m"))
    fp.done()
    cb = geo.table("chassis_box")
    chassis = ChassisBox(cb.number("length_m"), cb.number("width_m"), cb.number("bottom_m"),
                         cb.number("top_m"))
    cb.done()
    mt = geo.table("arm_mount")
    mount = ArmMount(mt.number("x_m"), mt.number("y_m"), mt.number("z_m"), mt.angle("yaw", 0.0))
    mt.done()
    geo.done()

    traction = _parse_drivetrain(root.table("traction_drivetrain"))
    flipper = _parse_drivetrain(root.table("flipper_drivetrain"))

    arm = root.table("manipulator")
    rows = tuple(_parse_dh(r, f"manipulator.dh[{i}]") for i, r in enumerate(arm.take("dh", list)))
    manip = ManipulatorSpec(
        dh_rows=rows,
        gripper=arm.take("gripper", bool, True),
        arm_total_mass=arm.number("total_mass_kg"),
        distal_mass=arm.number("distal_mass_kg"),
        com_lever_total=arm.number("com_lever_total_m"),
        com_lever_distal=arm.number("com_lever_distal_m"),
        full_extension=arm.number("full_extension_m"),
        link2_length=arm.number("link2_length_m"),
        joint2_drive=_parse_drivetrain(arm.table("joint2_drive")),
    )
    arm.done()

    bats = root.table("batteries")
    actuator = _parse_battery(bats.table("actuator"))
    electronics = _parse_battery(bats.table("electronics"))
    bats.done()

    rt = root.table("ratings")
    ratings = Ratings(**{k: rt.number(k) for k in Ratings.__dataclass_fields__})
    rt.done()

    mission = MissionParams()
    if "mission" in root.data:
        mp = root.table("mission")
        d = MissionParams()
        mission = MissionParams(
            torque_overload_factor=mp.number("torque_overload_factor", d.torque_overload_factor),
            triangular_lever_ratio=mp.number("triangular_lever_ratio", d.triangular_lever_ratio),
            two_link_bend=mp.angle("two_link_bend", d.two_link_bend),
            beta_step=mp.angle("beta_step", d.beta_step),
            flipper_range=mp.angle("flipper_range", d.flipper_range),
        )
        mp.done()
    root.done()

    return RobotSpec(
        name=name, chassis_mass=m1, flipper_pair_mass=m2, manipulator_mass=m3, total_mass=total,
        system_weight=system_weight, gravity=gravity, track_radius=track_radius, levers=levers,
        chassis_com_height=chassis_com_h, manipulator_com_height=arm_com_h, footprint=footprint,
        chassis=chassis, mount=mount, traction_drivetrain=traction, flipper_drivetrain=flipper,
        manipulator=manip, actuator_battery=actuator, electronics_battery=electronics,
        ratings=ratings, mission=mission, spec_version=version,
    )


def loads_spec(text: str) -> RobotSpec:
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise SpecParseError(f"malformed TOML: {exc}") from exc
    spec = spec_from_dict(data)
    diags = validate_spec(spec)
    if diags:
        raise SpecValidationError(diags)
    return spec


def load_spec(path: str | Path) -> RobotSpec:
    """Load and validate a robot spec file."""
    return loads_spec(Path(path).read_text(encoding="utf-8"))


def bundled_spec_path() -> Path:
    return Path(str(resources.files("karokit") / "data" / "karo.toml"))


def karo() -> RobotSpec:
    """The bundled Karo description."""
    return load_spec(bundled_spec_path())


def spec_hash(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# --------------------------------------------------------------------------
# serialization


def _motor_dict(m: MotorSpec) -> dict:
    return {
        "name": m.name,
        "nominal_torque_mnm": m.nominal_torque,
        "nominal_speed_rpm": m.nominal_speed,
        "torque_constant_mnm_per_a": m.torque_constant,
        "no_load_current_a": m.no_load_current,
        "nominal_voltage_v": m.nominal_voltage,
        "max_continuous_current_a": m.max_continuous_current,
    }


def _drivetrain_dict(dt: Drivetrain) -> dict:
    return {
        "motors_in_parallel": dt.motors_in_parallel,
        "motor": _motor_dict(dt.motor),
        "stages": [{"name": s.name, "ratio": s.ratio, "efficiency": s.efficiency} for s in dt.stages],
    }


def _dh_dict(row: DHRow) -> dict:
    out: dict[str, Any] = {"joint": row.kind, "r_m": row.r, "alpha_rad": row.alpha, "d_m": row.d,
                           "theta_offset_rad": row.theta}
    if row.prismatic:
        out["range_m"] = [row.lo, row.hi]
    else:
        out["range_rad"] = [row.lo, row.hi]
    return out


def _battery_dict(b: BatterySpec) -> dict:
    return {"name": b.name, "capacity_mah": b.capacity, "c_rating": b.c_rating,
            "nominal_voltage_v": b.nominal_voltage, "full_voltage_v": b.full_voltage,
            "cutoff_voltage_v": b.cutoff_voltage}


def spec_to_dict(spec: RobotSpec) -> dict:
    arm = spec.manipulator
    mp = spec.mission
    return {
        "spec_version": spec.spec_version,
        "name": spec.name,
        "gravity_m_s2": spec.gravity,
        "masses": {"chassis_kg": spec.chassis_mass, "flipper_pair_kg": spec.flipper_pair_mass,
                   "manipulator_kg": spec.manipulator_mass, "total_kg": spec.total_mass,
                   "system_weight_kg": spec.system_weight},
        "geometry": {
            "track_radius_m": spec.track_radius,
            "levers": {f"{k}_m": getattr(spec.levers, k) for k in ("l1", "l2", "l3", "la", "lb")},
            "com_heights": {"chassis_m": spec.chassis_com_height,
                            "manipulator_m": spec.manipulator_com_height},
            "footprint": {"length_m": spec.footprint.length, "width_m": spec.footprint.width,
                          "height_m": spec.footprint.height},
            "chassis_box": {"length_m": spec.chassis.length, "width_m": spec.chassis.width,
                            "bottom_m": spec.chassis.bottom, "top_m": spec.chassis.top},
            "arm_mount": {"x_m": spec.mount.x, "y_m": spec.mount.y, "z_m": spec.mount.z,
                          "yaw_rad": spec.mount.yaw},
        },
        "traction_drivetrain": _drivetrain_dict(spec.traction_drivetrain),
        "flipper_drivetrain": _drivetrain_dict(spec.flipper_drivetrain),
        "manipulator": {
            "gripper": arm.gripper,
            "total_mass_kg": arm.arm_total_mass,
            "distal_mass_kg": arm.distal_mass,
            "com_lever_total_m": arm.com_lever_total,
            "com_lever_distal_m": arm.com_lever_distal,
            "full_extension_m": arm.full_extension,
            "link2_length_m": arm.link2_length,
            "dh": [_dh_dict(r) for r in arm.dh_rows],
            "joint2_drive": _drivetrain_dict(arm.joint2_drive),
        },
        "batteries": {"actuator": _battery_dict(spec.actuator_battery),
                      "electronics": _battery_dict(spec.electronics_battery)},
        "ratings": {k: getattr(spec.ratings, k) for k in Ratings.__dataclass_fields__},
        "mission": {"torque_overload_factor": mp.torque_overload_factor,
                    "triangular_lever_ratio": mp.triangular_lever_ratio,
                    "two_link_bend_rad": mp.two_link_bend, "beta_step_rad": mp.beta_step,
                    "flipper_range_rad": mp.flipper_range},
    }


def dumps_spec(spec: RobotSpec) -> str:
    """Serialize to TOML; angles are written in radians so reloading is exact."""
    return tomli_w.dumps(spec_to_dict(spec))
