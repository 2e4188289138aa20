"""
Damped least-squares IK: pick random joint vectors, go forward, come back.
"""

import numpy as np

from karokit import karo, kinematics

arm = karo().manipulator
lo, hi = np.array(arm.lower), np.array(arm.upper)
rng = np.random.default_rng(42)

residuals = []
for seed in range(20):
    q = lo + (hi - lo) * rng.random(6)
    target = kinematics.fk_pose(arm, q)
    res = kinematics.ik_solve(arm, target, kinematics.home(arm), seed=seed)
    residuals.append(res.residual)
    print(f"seed {seed:2d}: residual {res.residual:.1e} m after {res.iterations:4d} iterations"
          f"{'' if res.success else '  (failed)'}")

print(f"worst residual {max(residuals):.1e} m")

# a point well outside the 1.3 m sphere cannot be reached
far = kinematics.ik_solve(arm, [2.5, 0.0, 0.3], kinematics.home(arm), restarts=2)
print(f"unreachable target: success={far.success}, residual {far.residual:.2f} m")
