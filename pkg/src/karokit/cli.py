"""``karokit`` command line.

Every run prints a JSON envelope (or a flat CSV with ``--format csv``) and,
with ``--out DIR``, writes its artifacts there.  Outputs carry the tool
version and the spec file's SHA-256 and nothing time-dependent, so identical
inputs give byte-identical files.

Exit codes: 0 success, 1 validation or analysis failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import tomli

from karokit import __version__, kinematics, mission, ocu, plots, power, report, statics
from karokit.model import (RobotSpec, SpecError, SpecParseError, SpecValidationError,
                           bundled_spec_path, load_spec, spec_hash, validate_spec)

PUBLISHED, DERIVED, ASSUMPTION = "published", "derived", "assumption"
SUBCOMMANDS = ("validate", "fk", "workspace", "statics", "power", "mission", "ocu-sim", "report")
STATICS_CASES = ("ramp40", "flipper", "joints", "drivetrains", "motor", "torsion")


class UsageError(Exception):
    pass


def num(value: float, unit: str, provenance: str = DERIVED) -> dict:
    return {"value": value, "unit": unit, "provenance": provenance}


def tag(obj: Any, provenance: str = DERIVED) -> Any:
    """Wrap every bare number in ``obj`` with a provenance tag."""
    if isinstance(obj, dict):
        if "provenance" in obj and "value" in obj:
            return obj
        return {k: tag(v, provenance) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [tag(v, provenance) for v in obj]
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, float, np.integer, np.floating)):
        return {"value": obj, "provenance": provenance}
    return obj


def _clean(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any, str, str]]:
    rows = []
    if isinstance(obj, dict) and "provenance" in obj and "value" in obj:
        return [(prefix, obj["value"], obj.get("unit", ""), obj["provenance"])]
    if isinstance(obj, dict):
        for k in sorted(obj):
            rows += _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            rows += _flatten(v, f"{prefix}[{i}]")
    else:
        rows.append((prefix, obj, "", ""))
    return rows


def to_csv(envelope: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["field", "value", "unit", "provenance"])
    for row in _flatten(_clean(envelope["results"])):
        w.writerow(row)
    return buf.getvalue()


# --------------------------------------------------------------------------


def _spec_path(args) -> Path:
    return Path(args.spec or os.environ.get("KARO_SPEC") or bundled_spec_path())


def _load(args) -> tuple[RobotSpec, str]:
    path = _spec_path(args)
    spec = load_spec(path)
    return spec, spec_hash(path)


def _outdir(args) -> Path | None:
    if not args.out:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _envelope(sub: str, digest: str, inputs: dict, results: dict) -> dict:
    return {"tool": "karokit", "version": __version__, "spec_sha256": digest,
            "subcommand": sub, "inputs": inputs, "results": results}


def _parse_joints(text: str, arm, radians: bool) -> np.ndarray:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--joints: {exc}") from exc
    if len(vals) != len(arm.dh_rows):
        raise UsageError(f"--joints needs {len(arm.dh_rows)} values, got {len(vals)}")
    if not radians:
        vals = [v if row.prismatic else math.radians(v) for v, row in zip(vals, arm.dh_rows)]
    return np.array(vals)


# --------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> tuple[dict, int]:
    path = _spec_path(args)
    try:
        spec = load_spec(path)
        diags = []
    except SpecValidationError as exc:
        diags = [d.as_dict() for d in exc.diagnostics]
    digest = spec_hash(path)
    if not diags:
        diags = [d.as_dict() for d in validate_spec(spec)]
    env = _envelope("validate", digest, {"spec": str(args.spec or path.name)},
                    {"valid": not diags, "diagnostics": diags,
                     "diagnostic_count": num(len(diags), "count")})
    return env, 0 if not diags else 1


def cmd_fk(args) -> tuple[dict, int]:
    spec, digest = _load(args)
    arm = spec.manipulator
    q = _parse_joints(args.joints, arm, args.radians)
    T = kinematics.fk_pose(arm, q)
    body = kinematics.base_to_body(spec, T[:3, 3])[0]
    results = {
        "pose_base": [[num(float(v), "") for v in row] for row in T],
        "position_base_m": [num(float(v), "m") for v in T[:3, 3]],
        "position_body_m": [num(float(v), "m") for v in body],
        "body_clearance_m": num(kinematics.body_clearance(spec, q), "m"),
    }
    inputs = {"joints": args.joints, "units": "rad/m" if args.radians else "deg/m"}
    return _envelope("fk", digest, inputs, results), 0


def cmd_workspace(args) -> tuple[dict, int]:
    spec, digest = _load(args)
    arm = spec.manipulator
    args.seed = 0 if args.seed is None else args.seed
    if args.samples:
        cloud = kinematics.workspace_sample(arm, "random", args.samples, seed=args.seed)
    else:
        cloud = kinematics.workspace_sample(arm, "grid", args.grid, seed=args.seed,
                                            workers=args.workers)
    metrics = kinematics.workspace_metrics(spec, cloud)
    body = kinematics.base_to_body(spec, cloud.points)
    sub = f"{cloud.strategy}, {len(cloud)} samples, spec {digest[:12]}"
    out = _outdir(args)
    artifacts = []
    if out is not None:
        if args.full_csv:
            kinematics.write_cloud_csv(cloud, out / "workspace.csv")
        else:
            _write_voxels(body, out / "workspace.csv", args.voxel)
        artifacts.append("workspace.csv")
        for name in plots.PROJECTIONS:
            fname = f"workspace_{name}.svg"
            plots.write(out / fname, plots.workspace_svg(body, name, f"workspace, {name} view (body frame)",
                                                         sub))
            artifacts.append(fname)
    provenance = {"max_reach_m": PUBLISHED, "min_z_base_m": PUBLISHED,
                  "front_query_distance_m": PUBLISHED, "rear_query_distance_m": PUBLISHED}
    results = {k: num(v, "count" if k == "samples" else ("deg" if k.endswith("deg") else "m"),
                      provenance.get(k, DERIVED)) for k, v in metrics.items()}
    results["artifacts"] = artifacts
    inputs = {"strategy": cloud.strategy, "grid": args.grid or kinematics.DEFAULT_REVOLUTE_SAMPLES,
              "samples": args.samples, "seed": args.seed, "counts": list(cloud.counts)}
    env = _envelope("workspace", digest, inputs, results)
    if out is not None:
        plots.write(out / "workspace.json", dumps(env))
    return env, 0


def _write_voxels(body: np.ndarray, path: Path, voxel: float) -> None:
    """Occupied voxels (body frame, voxel centres) with their sample counts."""
    idx = np.floor(body / voxel).astype(np.int64)
    keys, counts = np.unique(idx, axis=0, return_counts=True)
    centres = (keys + 0.5) * voxel
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x_m", "y_m", "z_m", "samples"])
        for (x, y, z), c in zip(centres, counts):
            w.writerow([f"{x:.4f}", f"{y:.4f}", f"{z:.4f}", int(c)])


def _statics_case(spec: RobotSpec, case: str) -> dict:
    g = spec.gravity
    if case == "ramp40":
        ramp = statics.RampCase(spec.system_weight, math.radians(40.0), g, spec.track_radius)
        per = statics.traction_torque(ramp, spec.traction_drivetrain.motors_in_parallel)
        op = statics.operating_point_check(spec.traction_drivetrain, per)
        return {"inputs": {"mass_kg": num(spec.system_weight, "kg", PUBLISHED),
                           "slope_deg": num(40.0, "deg", PUBLISHED), "g": num(g, "m/s^2", PUBLISHED),
                           "track_radius_m": num(spec.track_radius, "m", PUBLISHED)},
                "traction_force_n": num(statics.ramp_traction(ramp), "N"),
                "torque_total_nm": num(statics.traction_torque(ramp, 1), "N m", PUBLISHED),
                "torque_per_motor_nm": num(per, "N m", PUBLISHED),
                "available_per_motor_nm": num(op.available_torque, "N m", PUBLISHED),
                "motor_current_a": num(op.motor_current, "A"),
                "margin": num(op.margin, "fraction"), "continuous_exceeded": op.exceeds}
    if case == "flipper":
        lift = statics.FlipperLiftCase.from_spec(spec)
        f1, f2 = statics.flipper_reactions(lift)
        t = statics.flipper_torque(lift)
        op = statics.operating_point_check(spec.flipper_drivetrain, t)
        return {"inputs": {"total_mass_kg": num(lift.total_mass, "kg", PUBLISHED),
                           "beta_deg": num(0.0, "deg", ASSUMPTION)},
                "f1_n": num(f1, "N", PUBLISHED), "f2_n": num(f2, "N", PUBLISHED),
                "weight_sum_n": num(f1 + f2, "N", PUBLISHED),
                "torque_nm": num(t, "N m", PUBLISHED),
                "chain_output_nm": num(op.available_torque, "N m"),
                "chain_output_published_nm": num(151.4, "N m", PUBLISHED),
                "margin": num(op.margin, "fraction"), "continuous_exceeded": op.exceeds}
    if case == "joints":
        jc = statics.JointLoadCase.from_spec(spec)
        avail, _ = statics.drivetrain_output(spec.manipulator.joint2_drive)
        return {"t2_nm": num(statics.joint_static_torque(jc, 2), "N m"),
                "t3_nm": num(statics.joint_static_torque(jc, 3), "N m"),
                "t2_published": num(3.4, "kgf m", PUBLISHED), "t3_published": num(1.2, "kgf m", PUBLISHED),
                "joint2_available_nm": num(avail, "N m", PUBLISHED),
                "max_payload_kg": num(statics.max_payload(jc, avail), "kg"),
                "payload_published_kg": num(5.6, "kg", PUBLISHED),
                "t2_with_5_6kg_nm": num(statics.joint_static_torque(
                    statics.JointLoadCase.from_spec(spec, m_ex=5.6), 2), "N m")}
    if case == "drivetrains":
        out = {}
        for name, dt in (("traction", spec.traction_drivetrain), ("flipper", spec.flipper_drivetrain),
                         ("joint2", spec.manipulator.joint2_drive)):
            t, rpm = statics.drivetrain_output(dt)
            out[name] = {"torque_nm": num(t, "N m"), "speed_rpm": num(rpm, "rpm"),
                         "ratio": num(dt.ratio, ""), "efficiency": num(dt.efficiency, "fraction")}
        out["traction"]["ground_speed_m_s"] = num(statics.ground_speed(spec.traction_drivetrain,
                                                                       spec.track_radius), "m/s")
        out["traction"]["ground_speed_published_m_s"] = num(spec.ratings.max_speed_flat_m_s, "m/s", PUBLISHED)
        out["flipper"]["rate_deg_s"] = num(out["flipper"]["speed_rpm"]["value"] * 6.0, "deg/s")
        return out
    if case == "motor":
        out = {}
        for name, m in (("traction", spec.traction_drivetrain.motor), ("flipper", spec.flipper_drivetrain.motor)):
            out[name] = {"current_at_nominal_a": num(statics.motor_current(m, m.nominal_torque), "A"),
                         "no_load_current_a": num(statics.motor_current(m, 0.0), "A", PUBLISHED),
                         "max_continuous_a": num(m.max_continuous_current, "A", PUBLISHED)}
        return out
    if case == "torsion":
        return {"torque_nm": num(152.0, "N m", PUBLISHED), "shaft_diameter_m": num(0.030, "m", ASSUMPTION),
                "stress_mpa": num(statics.shaft_torsion_stress(152.0, 0.030) / 1e6, "MPa")}
    raise UsageError(f"unknown statics case {case!r}; choose from {', '.join(STATICS_CASES)}")


def cmd_statics(args) -> tuple[dict, int]:
    spec, digest = _load(args)
    cases = STATICS_CASES if args.case in (None, "all") else (args.case,)
    results = {c: _statics_case(spec, c) for c in cases}
    env = _envelope("statics", digest, {"case": args.case or "all"}, results)
    out = _outdir(args)
    if out is not None:
        plots.write(out / "statics.json", dumps(env))
    return env, 0


def cmd_power(args) -> tuple[dict, int]:
    spec, digest = _load(args)
    if args.profile:
        try:
            got = power.resolve_profile(args.profile)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from exc
        profiles = got if isinstance(got, dict) else {got.name: got}
    else:
        profiles = power.load_profiles()
    out = _outdir(args)
    results = {}
    for name in sorted(profiles):
        p = profiles[name]
        rep = power.mission_energy(p, spec)
        entry = {
            "actuator_current_a": num(p.average_actuator_current, "A"),
            "electronics_current_a": num(p.average_electronics_current, "A"),
            "actuator_minutes": num(rep.actuator_minutes, "min", PUBLISHED),
            "electronics_minutes": num(rep.electronics_minutes, "min"),
            "energy_wh": num(rep.energy_wh, "Wh"),
            "meets_30min_mission": rep.meets_30min_mission,
            "meets_requested": rep.meets_requested,
        }
        curves = []
        for pack, bat, cur in (("actuator", spec.actuator_battery, p.average_actuator_current),
                               ("electronics", spec.electronics_battery, p.average_electronics_current)):
            if cur > 0 and out is not None:
                fname = f"discharge_{name}_{pack}.csv"
                power.write_curve_csv(power.discharge_curve(bat, cur, args.step), out / fname)
                curves.append(fname)
        entry["artifacts"] = curves
        results[name] = entry
    ref = {n: power.mission_energy(p, spec) for n, p in profiles.items()}
    if "center" in ref and "stair_debris" in ref:
        results["endurance_drop_center_to_stair"] = num(
            power.endurance_drop(ref["center"], ref["stair_debris"]), "fraction", PUBLISHED)
    env = _envelope("power", digest, {"profile": args.profile or "all", "step_s": args.step}, results)
    if out is not None:
        plots.write(out / "power.json", dumps(env))
    return env, 0


def cmd_mission(args) -> tuple[dict, int]:
    spec, digest = _load(args)
    names = [args.case] if args.case else sorted(mission.bundled_scenarios())
    out = _outdir(args)
    results: dict = {}
    ok = True
    for name in names:
        try:
            scen = mission.resolve_scenario(name)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from exc
        rep = mission.scenario_run(spec, scen)
        ok &= rep["feasible"]
        results[scen.name] = tag(rep)
        if out is not None:
            for i, el in enumerate(scen.elements):
                config = mission.FlipperConfig.for_spec(spec, el.variant)
                if el.kind == "step":
                    v = mission.step_feasibility(spec, config, el.height)
                    postures = v.schedule or (mission.Posture(),)
                elif el.kind in ("ramp", "stair"):
                    postures = tuple(mission.Posture(el.incline, p.front, p.rear) for p in el.postures) \
                        or (mission.Posture(el.incline),)
                else:
                    postures = (mission.Posture(),)
                plots.write(out / f"mission_{scen.name}_{i}_{el.kind}.svg",
                            plots.posture_svg(spec, postures, config, f"{scen.name}: {el.name or el.kind}",
                                              f"{config.variant.value}, spec {digest[:12]}"))
    heights = {v.value: num(mission.max_step_height(spec, v), "m") for v in mission.Variant}
    results["max_step_height_by_variant"] = heights
    env = _envelope("mission", digest, {"case": args.case or "all"}, results)
    if out is not None:
        plots.write(out / "mission.json", dumps(env))
    return env, 0


def _ocu_script(args) -> dict:
    if args.case in (None, "heartbeat"):
        return {}
    bundled = Path(str(resources.files("karokit") / "data" / "ocu")) / f"{args.case}.toml"
    path = bundled if bundled.exists() else Path(args.case)
    if not path.exists():
        raise UsageError(f"ocu script {args.case!r} not found")
    try:
        return tomli.loads(path.read_text(encoding="utf-8"))
    except tomli.TOMLDecodeError as exc:
        raise SpecParseError(f"malformed ocu script: {exc}") from exc


def cmd_ocu_sim(args) -> tuple[dict, int]:
    path = _spec_path(args)
    digest = spec_hash(path)
    script = _ocu_script(args)
    allowed = {"link", "safety", "heartbeat", "command"}
    if set(script) - allowed:
        raise SpecParseError(f"unknown ocu script key(s) {sorted(set(script) - allowed)}")
    link = script.get("link", {})
    safety = script.get("safety", {})
    model = ocu.LinkModel(
        latency=args.latency if args.latency is not None else link.get("latency_ms", 0.0),
        jitter=args.jitter if args.jitter is not None else link.get("jitter_ms", 0.0),
        drop_probability=args.drop if args.drop is not None else link.get("drop_probability", 0.0),
        seed=args.seed if args.seed is not None else link.get("seed", 0))
    timeout = args.timeout if args.timeout is not None else safety.get("heartbeat_timeout_ms", 500.0)
    tick = safety.get("tick_ms", 100.0)
    commands = []
    for raw in script.get("command", []):
        commands.append((float(raw["time_ms"]), ocu.CommandDatagram(
            int(raw["sequence"]), ocu.Mode[str(raw.get("mode", "drive")).upper()],
            tuple(raw.get("axes", ())), bool(raw.get("arm", False)))))
    if not commands:
        hb = script.get("heartbeat", {})
        n = args.frames if args.frames is not None else int(hb.get("n", 100))
        commands = ocu.heartbeat_commands(n, float(hb.get("period_ms", 100.0)),
                                          tuple(hb.get("axes", (0.5, 0.0))))
    commands.sort(key=lambda c: c[0])
    res = ocu.simulate(model, commands, timeout, tick, duration=safety.get("duration_ms"),
                       initially_armed=bool(safety.get("initially_armed", False)))
    results = {"summary": tag(res.summary()), "events": [tag(e.as_dict()) for e in res.events]}
    inputs = {"case": args.case or "heartbeat", "latency_ms": model.latency, "jitter_ms": model.jitter,
              "drop_probability": model.drop_probability, "seed": model.seed,
              "heartbeat_timeout_ms": timeout, "tick_ms": tick}
    env = _envelope("ocu-sim", digest, inputs, results)
    out = _outdir(args)
    if out is not None:
        plots.write(out / "ocu_events.json", dumps(env))
    return env, 0


def cmd_report(args) -> tuple[dict, int]:
    digest = spec_hash(bundled_spec_path())
    rows = report.golden_suite(grid=args.grid)
    failed = [r.id for r in rows if not r.passed]
    results = {"rows": [tag(r.as_dict(), PUBLISHED if r.kind != DERIVED else DERIVED) for r in rows],
               "passed": not failed, "failed": failed,
               "not_reproducible": list(report.NOT_REPRODUCIBLE)}
    env = _envelope("report", digest, {"spec": "bundled", "grid": args.grid or kinematics.DEFAULT_REVOLUTE_SAMPLES},
                    results)
    out = _outdir(args)
    if out is not None:
        plots.write(out / "report.json", dumps(env))
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "criterion", "kind", "quantity", "unit", "reference", "computed", "published", "status"])
        for r in rows:
            w.writerow([r.id, r.criterion, r.kind, r.quantity, r.unit, repr(r.reference), repr(r.computed),
                        "" if r.published is None else repr(r.published), "pass" if r.passed else "fail"])
        plots.write(out / "report.csv", buf.getvalue())
    print(report.table(rows), file=sys.stderr)
    return env, 0 if not failed else 1


# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="robot spec TOML (default: $KARO_SPEC or the bundled Karo spec)")
    common.add_argument("--out", help="directory for artifacts")
    common.add_argument("--format", choices=("json", "csv"), default="json", help="stdout format")
    common.add_argument("--seed", type=int, default=None, help="RNG seed")

    p = _Parser(prog="karokit", description="Design checks for a flippered tracked rescue robot.")
    p.add_argument("--version", action="version", version=f"karokit {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    sub.add_parser("validate", parents=[common], help="check a spec file")
    fk = sub.add_parser("fk", parents=[common], help="forward kinematics at one joint vector")
    fk.add_argument("--joints", required=True, help="six comma-separated values (deg or m)")
    fk.add_argument("--radians", action="store_true", help="revolute values are in radians")

    ws = sub.add_parser("workspace", parents=[common], help="sample the reachable workspace")
    ws.add_argument("--grid", type=int, default=None, help="samples per revolute joint (default 15)")
    ws.add_argument("--samples", type=int, default=None, help="use N uniform random samples instead")
    ws.add_argument("--workers", type=int, default=1)
    ws.add_argument("--voxel", type=float, default=0.02, help="CSV voxel edge in m")
    ws.add_argument("--full-csv", action="store_true", help="write every sampled point")

    st = sub.add_parser("statics", parents=[common], help="sizing analyses")
    st.add_argument("--case", choices=STATICS_CASES + ("all",), default=None)

    pw = sub.add_parser("power", parents=[common], help="battery endurance per profile")
    pw.add_argument("--profile", help="bundled profile name or a profile TOML path")
    pw.add_argument("--step", type=float, default=60.0, help="discharge curve step in s")

    ms = sub.add_parser("mission", parents=[common], help="obstacle feasibility scenarios")
    ms.add_argument("--case", help="bundled scenario name or a scenario TOML path")

    oc = sub.add_parser("ocu-sim", parents=[common], help="replay commands over a lossy link")
    oc.add_argument("--case", help="bundled script name (teleop) or a command script TOML; default: generated heartbeat")
    oc.add_argument("--latency", type=float, default=None, help="ms")
    oc.add_argument("--jitter", type=float, default=None, help="ms")
    oc.add_argument("--drop", type=float, default=None, help="drop probability")
    oc.add_argument("--timeout", type=float, default=None, help="heartbeat timeout in ms")
    oc.add_argument("--frames", type=int, default=None, help="heartbeat frames to send")

    rp = sub.add_parser("report", parents=[common], help="golden-number suite on the bundled spec")
    rp.add_argument("--grid", type=int, default=None, help="workspace samples per revolute joint")
    return p


HANDLERS = {"validate": cmd_validate, "fk": cmd_fk, "workspace": cmd_workspace, "statics": cmd_statics,
            "power": cmd_power, "mission": cmd_mission, "ocu-sim": cmd_ocu_sim, "report": cmd_report}


def _fail(fmt: str, code: int, kind: str, message: str, synopsis: str = "") -> int:
    if fmt == "json":
        print(dumps({"error": kind, "message": message, "exit_code": code}), end="")
    else:
        if synopsis:
            print(synopsis, file=sys.stderr, end="")
        print(f"error: {message}", file=sys.stderr)
    return code


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    fmt = "json" if "--format=json" in argv or ("--format" in argv and argv[argv.index("--format") + 1:][:1] == ["json"]) \
        else "text"
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(SUBCOMMANDS))
        env, code = HANDLERS[args.command](args)
    except UsageError as exc:
        return _fail(fmt, 2, "usage", str(exc), parser.format_usage())
    except SpecValidationError as exc:
        return _fail(fmt, 1, "validation", "; ".join(str(d) for d in exc.diagnostics) or str(exc))
    except (SpecError, kinematics.JointRangeError, ValueError, OSError) as exc:
        return _fail(fmt, 1, type(exc).__name__, str(exc))
    if args.format == "csv":
        print(to_csv(env), end="")
    else:
        print(dumps(env), end="")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
