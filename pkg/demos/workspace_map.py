"""
Reachable workspace of the 6-DOF arm, sampled on a joint grid.

Writes three projection SVGs next to this script.
"""

from pathlib import Path

from karokit import karo, kinematics, plots

spec = karo()
arm = spec.manipulator
out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

cloud = kinematics.workspace_sample(arm, "grid", 11)
print(f"{len(cloud)} samples, counts per joint {cloud.counts}")

m = kinematics.workspace_metrics(spec, cloud)
print(f"max reach {m['max_reach_m']:.3f} m, lowest point {m['min_z_base_m']:.3f} m (base frame)")
print(f"body x range [{m['min_x_body_m']:.2f}, {m['max_x_body_m']:.2f}] m")
print(f"front target miss {m['front_query_distance_m']:.2e} m, rear {m['rear_query_distance_m']:.2e} m")

# drop poses that pass through the chassis box
free = kinematics.subset(cloud, kinematics.collision_free(spec, cloud))
print(f"{len(free)} of {len(cloud)} poses clear the chassis")

body = kinematics.base_to_body(spec, free.points)
for name in plots.PROJECTIONS:
    plots.write(out / f"workspace_{name}.svg", plots.workspace_svg(body, name, f"workspace ({name})", "demo"))
print("svgs in", out)
