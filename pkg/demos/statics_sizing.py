"""
Sizing the Karo drivetrains from quasi-static loads.

Walks from the ramp torque to the motor current it implies, then does the
same for the flipper lift.
"""

import math

from karokit import karo, statics

spec = karo()
g = spec.gravity

# Climbing a 40 deg ramp, two traction motors share the load
ramp = statics.RampCase(spec.system_weight, math.radians(40), g, spec.track_radius)
per_motor = statics.traction_torque(ramp, 2)
print(f"ramp 40 deg: {statics.traction_torque(ramp, 1):.2f} N m total, {per_motor:.2f} N m per motor")

op = statics.operating_point_check(spec.traction_drivetrain, per_motor)
print(f"traction chain gives {op.available_torque:.2f} N m continuous, "
      f"margin {op.margin:+.1%}, motor current {op.motor_current:.2f} A")

speed = statics.ground_speed(spec.traction_drivetrain, spec.track_radius)
print(f"ground speed at nominal motor speed: {speed:.3f} m/s")

# Lifting the chassis on the flipper tips
lift = statics.FlipperLiftCase.from_spec(spec)
f1, f2 = statics.flipper_reactions(lift)
t = statics.flipper_torque(lift)
print(f"flipper lift: F1 {f1:.1f} N, F2 {f2:.1f} N, pivot torque {t:.1f} N m")
flip = statics.operating_point_check(spec.flipper_drivetrain, t)
print(f"flipper chain margin {flip.margin:+.1%}")

# Sweep the flipper angle: torque shrinks as the tips come under the pivot
for deg in (0, 30, 60, 90):
    case = statics.FlipperLiftCase.from_spec(spec, beta=math.radians(deg))
    print(f"  beta {deg:2d} deg -> {statics.flipper_torque(case):6.1f} N m")
