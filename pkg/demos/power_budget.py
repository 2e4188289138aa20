"""
Battery endurance for the bundled mission profiles.
"""

from karokit import karo, power

spec = karo()
bat = spec.actuator_battery

for amps in (2.0, 4.0, 10.0, 20.0):
    print(f"{amps:5.1f} A -> {power.endurance_estimate(bat, amps):6.1f} min")

profiles = power.load_profiles()
results = {name: power.mission_energy(p, spec) for name, p in profiles.items()}
for name, r in results.items():
    print(f"{name:14s} actuator {r.actuator_minutes:5.1f} min, 30 min mission "
          f"{'ok' if r.meets_30min_mission else 'short'}")

drop = power.endurance_drop(results["center"], results["stair_debris"])
print(f"endurance drop center -> stair/debris: {drop:.1%}")

curve = power.discharge_curve(bat, profiles["stair_debris"].average_actuator_current, 300.0)
print("voltage every 5 min:", " ".join(f"{v:.2f}" for v in curve[:, 1]))
