"""
Obstacle feasibility for each flipper layout: steps, gaps and the bundled course.
"""

import math

from karokit import karo, mission

spec = karo()

print("max step height by layout")
for v in mission.Variant:
    print(f"  {v.value:24s} {mission.max_step_height(spec, v):.3f} m")

for h in (0.10, 0.20, 0.30, 0.45):
    print(f"step {h:.2f} m:", mission.step_feasibility(spec, "two-pair-regular", h).reason)

gap = mission.gap_feasibility(spec, 0.45)
print(f"gap 0.45 m: {gap.reason}, widest gap {gap.detail['max_gap']:.3f} m")

# stability while both flippers swing together on a 20 deg slope
sweep = mission.beta_sweep(spec, [math.radians(d) for d in range(-30, 31, 10)], pitch=math.radians(20))
for beta, margin, touching in sweep:
    print(f"  beta {math.degrees(beta):5.0f} deg margin {margin:+.3f} m on {', '.join(touching)}")

report = mission.scenario_run(spec, mission.resolve_scenario("course"))
for el in report["elements"]:
    print(f"{el['name']:10s} {el['verdict']:20s} {el['traction_per_motor_nm']:.1f} N m per motor")
