"""Quasi-static sizing: ramp traction, flipper lift, arm joints, drivetrains.

Terrain friction is ignored; drivetrain losses enter only through stage
efficiencies.  Accelerations are carried in the case types and default to
zero.  Motor torque is called ``load_torque`` rather than ``M`` so it does
not collide with the robot mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from karokit.model import Drivetrain, MotorSpec, RobotSpec


@dataclass(frozen=True)
class RampCase:
    mass: float
    slope: float  # rad
    g: float = 9.8
    track_radius: float = 0.12
    accel: float = 0.0

    def __post_init__(self):
        if not 0 <= self.slope <= math.pi / 2:
            raise ValueError("slope must lie in [0, 90] degrees")
        if self.mass <= 0 or self.g <= 0 or self.track_radius <= 0:
            raise ValueError("mass, g and track radius must be positive")


@dataclass(frozen=True)
class FlipperLiftCase:
    m1: float
    m2: float  # one flipper pair
    m3: float
    l1: float
    l3: float
    la: float
    lb: float
    beta: float = 0.0
    g: float = 9.8
    accel: float = 0.0
    angular_accel: float = 0.0
    inertia: float = 0.0
    l2: float = 0.0

    @property
    def total_mass(self) -> float:
        return self.m1 + 2 * self.m2 + self.m3

    @property
    def tip_lever(self) -> float:
        """Distance from O to each flipper tip contact."""
        return self.la + self.lb * math.cos(self.beta)

    @classmethod
    def from_spec(cls, spec: RobotSpec, beta: float = 0.0) -> FlipperLiftCase:
        lv = spec.levers
        return cls(m1=spec.chassis_mass, m2=spec.flipper_pair_mass, m3=spec.manipulator_mass,
                   l1=lv.l1, l3=lv.l3, la=lv.la, lb=lv.lb, beta=beta, g=spec.gravity, l2=lv.l2)


@dataclass(frozen=True)
class JointLoadCase:
    m_t: float
    m_c: float
    m_ex: float
    l_t: float
    l_c: float
    l_ex: float
    l_j: float
    g: float = 9.8

    def __post_init__(self):
        if min(self.m_t, self.m_c, self.m_ex) < 0:
            raise ValueError("masses must be nonnegative")
        if not self.l_ex >= self.l_j >= 0:
            raise ValueError("need l_ex >= l_j >= 0")

    @classmethod
    def from_spec(cls, spec: RobotSpec, m_ex: float = 0.0, l_ex: float | None = None) -> JointLoadCase:
        arm = spec.manipulator
        return cls(m_t=arm.arm_total_mass, m_c=arm.distal_mass, m_ex=m_ex, l_t=arm.com_lever_total,
                   l_c=arm.com_lever_distal, l_ex=arm.full_extension if l_ex is None else l_ex,
                   l_j=arm.link2_length, g=spec.gravity)


@dataclass(frozen=True)
class OperatingPoint:
    required_torque: float  # Nm at the drivetrain output
    available_torque: float  # continuous, Nm
    output_speed: float  # rpm at nominal motor speed
    motor_torque: float  # mNm
    motor_current: float  # A
    max_continuous_current: float
    margin: float  # (available - required) / available

    @property
    def exceeds(self) -> bool:
        return self.motor_current > self.max_continuous_current + 1e-9 or self.margin < -1e-12


def ramp_traction(case: RampCase) -> float:
    """Total traction force (N) to hold or climb the slope."""
    return case.mass * case.g * math.sin(case.slope) + case.mass * case.accel


def traction_torque(case: RampCase, motor_count: int = 2) -> float:
    """Per-motor output torque (N m) for the ramp case."""
    if motor_count < 1:
        raise ValueError("motor_count must be >= 1")
    return ramp_traction(case) * case.track_radius / motor_count


def flipper_reactions(case: FlipperLiftCase) -> tuple[float, float]:
    """Tip reactions ``(F1, F2)`` with the robot held up by both flipper pairs.

    Force balance plus moment balance about O.  The two flipper-pair weights
    act symmetrically about O and cancel in the moment balance; chassis and
    arm weights act at ``l1`` and ``l3`` on the F2 side.
    """
    lever = case.tip_lever
    if abs(lever) < 1e-12:
        raise ValueError("degenerate flipper geometry: la + lb*cos(beta) = 0")
    m = case.total_mass
    vertical = m * (case.g + case.accel)
    moment = case.g * (case.m1 * case.l1 + case.m3 * case.l3) - case.inertia * case.angular_accel
    diff = moment / lever  # F2 - F1
    return 0.5 * (vertical - diff), 0.5 * (vertical + diff)


def flipper_torque(case: FlipperLiftCase) -> float:
    """Torque (N m) on the more loaded flipper pair: max(F1, F2) * lb * cos(beta)."""
    f1, f2 = flipper_reactions(case)
    return max(f1, f2) * case.lb * math.cos(case.beta)


def joint_static_torque(case: JointLoadCase, joint: int) -> float:
    """Holding torque (N m) of arm joint 2 or 3 at full extension."""
    g = case.g
    if joint == 2:
        return case.m_t * g * case.l_t + case.m_ex * g * case.l_ex
    if joint == 3:
        return case.m_c * g * case.l_c + case.m_ex * g * (case.l_ex - case.l_j)
    raise ValueError("joint must be 2 or 3")


def max_payload(case: JointLoadCase, available_torque: float) -> float:
    """Largest external mass joint 2 can hold at ``l_ex`` with ``available_torque``."""
    return max(0.0, (available_torque - case.m_t * case.g * case.l_t) / (case.g * case.l_ex))


def drivetrain_output(dt: Drivetrain) -> tuple[float, float]:
    """Continuous output torque (N m) and output speed (rpm) of one motor's chain."""
    torque = dt.motor.nominal_torque / 1000.0
    for stage in dt.stages:
        torque *= stage.ratio * stage.efficiency
    return torque, dt.motor.nominal_speed / dt.ratio


def ground_speed(dt: Drivetrain, track_radius: float) -> float:
    """Track surface speed (m/s) at the chain's nominal output speed."""
    _, rpm = drivetrain_output(dt)
    return rpm * 2 * math.pi / 60.0 * track_radius


def motor_current(motor: MotorSpec, load_torque: float) -> float:
    """Current (A) drawn at ``load_torque`` (mNm): I = M/Km + I0."""
    if load_torque < 0:
        raise ValueError("load_torque must be nonnegative")
    return load_torque / motor.torque_constant + motor.no_load_current


def operating_point_check(dt: Drivetrain, required_output_torque: float) -> OperatingPoint:
    """Reflect an output torque demand back to one motor and rate it."""
    if required_output_torque < 0:
        raise ValueError("required torque must be nonnegative")
    available, speed = drivetrain_output(dt)
    motor_nm = required_output_torque
    for stage in reversed(dt.stages):
        motor_nm = motor_nm / stage.ratio / stage.efficiency
    motor_mnm = motor_nm * 1000.0
    return OperatingPoint(
        required_torque=required_output_torque,
        available_torque=available,
        output_speed=speed,
        motor_torque=motor_mnm,
        motor_current=motor_current(dt.motor, motor_mnm),
        max_continuous_current=dt.motor.max_continuous_current,
        margin=(available - required_output_torque) / available,
    )


def shaft_torsion_stress(torque: float, shaft_diameter: float) -> float:
    """Peak shear stress (Pa) in a solid round shaft: 16 T / (pi d^3)."""
    if shaft_diameter <= 0:
        raise ValueError("shaft diameter must be positive")
    return 16.0 * torque / (math.pi * shaft_diameter ** 3)
