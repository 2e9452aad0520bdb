"""Command-line front end: rollouts, optimization runs, experiment sweeps.

Every command writes its artifacts into the chosen output directory and
finishes by hashing them into ``manifest.json``; ``verify`` re-hashes a run
directory against that record.  Data files are deterministic for a fixed
(scenario, seed, flags) triple at any thread count, so reruns can be
compared byte for byte; the manifest's metadata block carries the one
exception, wall-clock duration.

Exit codes: 0 success, 1 error, 2 a rollout that terminated early but was
still exported, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__, analysis, optimizer, runio, scenario
from .errors import HmpError, ScenarioInfeasible
from .rollout import Termination, cost as rollout_cost, export_rollout

log = logging.getLogger("hmp.cli")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_EARLY_TERMINATION = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _setup_logging():
    level_name = os.environ.get("HMP_LOG", "warning").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _load_scenario(ref):
    """A scenario argument is a file path or a single-scene preset name."""
    path = Path(ref)
    if path.is_file():
        return scenario.load(path)
    if ref in scenario.preset_names():
        got = scenario.preset(ref)
        if isinstance(got, list):
            raise HmpError(f"{ref} is a sweep preset; run it with the sweep command")
        return got
    raise HmpError(f"no scenario file or preset named {ref!r}")


def _load_theta(path, s):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    theta = np.asarray(doc["theta"], dtype=float)
    theta = s.dmp.check_theta(theta)
    recorded = doc.get("scenario_sha256")
    if recorded and recorded != s.sha256:
        log.warning("theta file %s was optimized for a different scenario", path)
    return theta


def _manifest_meta(args, s, seed, t0, extra=None):
    meta = {
        "command": [Path(sys.argv[0]).name] + list(sys.argv[1:]),
        "tool_version": __version__,
        "scenario_sha256": None if s is None else s.sha256,
        "seed": seed,
        "duration_s": round(time.time() - t0, 3),
    }
    if extra:
        meta.update(extra)
    return meta


def cmd_rollout(args):
    t0 = time.time()
    s = _load_scenario(args.scenario)
    if args.zero:
        theta = s.zero_theta()
        theta_source = "zero"
    else:
        theta = _load_theta(args.theta, s)
        theta_source = str(args.theta)
    r = s.simulate(theta)
    c = rollout_cost(r, s.dmp)
    pos_err, ang_err = analysis.goal_error(r, s.dmp)
    out = Path(args.out)
    export_rollout(
        r,
        out,
        "rollout",
        meta={
            "scenario_name": s.name,
            "scenario_sha256": s.sha256,
            "theta_source": theta_source,
            "seed": args.seed,
            "cost": c,
        },
    )
    s.save(out / "scenario_resolved.json")
    runio.write_manifest(out, _manifest_meta(args, s, args.seed, t0))
    print(f"termination: {r.termination.value}  t_end: {r.t_end:.3f} s")
    print(f"phi: {r.phi_end:.6f}  cost: {c:.6f}  "
          f"goal error: {pos_err * 1e3:.2f} mm, {ang_err:.4f} rad")
    return EXIT_OK if r.termination is Termination.COMPLETED else EXIT_EARLY_TERMINATION


def _run_optimize(s, out, cfg, n_threads):
    """Optimize one scenario and write its artifacts; no manifest here.

    Returns ``(exit_code, summary_row)``; the trace is written even when the
    run proves infeasible so the failure can be inspected.
    """
    out = Path(out)

    def show(rec):
        best = float(np.min(rec.sample_costs))
        tag = "accepted" if rec.accepted else "rejected"
        print(
            f"iter {rec.iteration:3d}  best sample {best:12.6f}  "
            f"candidate {rec.candidate_cost:12.6f} {tag}  "
            f"incumbent {rec.incumbent_cost:12.6f}"
        )

    s.save(out / "scenario_resolved.json")
    try:
        theta, trace = optimizer.optimize(s, config=cfg, n_threads=n_threads, progress=show)
    except ScenarioInfeasible as e:
        runio.atomic_write_text(out / "trace.json", e.trace.to_json())
        runio.atomic_write_text(out / "cost_curve.csv", e.trace.cost_curve_csv())
        print(f"infeasible: {e}")
        row = {"sweep_point": s.name, "success": False,
               "final_cost": e.trace.records[-1].incumbent_cost, "push_side": ""}
        return EXIT_ERROR, row

    runio.atomic_write_text(out / "trace.json", trace.to_json())
    runio.atomic_write_text(out / "cost_curve.csv", trace.cost_curve_csv())
    c, best = s.policy_cost(theta)
    theta_doc = {
        "theta": [[float(v) for v in row] for row in theta],
        "shape": list(theta.shape),
        "cost": float(c),
        "scenario_sha256": s.sha256,
        "seed": cfg.seed,
    }
    runio.atomic_write_text(out / "theta_best.json", runio.canonical_json(theta_doc))
    export_rollout(
        best, out, "rollout_best",
        meta={"scenario_name": s.name, "scenario_sha256": s.sha256,
              "seed": cfg.seed, "cost": float(c)},
    )
    ok = analysis.is_success(best, s.dmp)
    pos_err, ang_err = analysis.goal_error(best, s.dmp)
    side = analysis.push_side(best) if s.params.n_books >= 2 else ""
    print(
        f"done: {len(trace.records)} iterations, "
        f"{'converged' if trace.converged else 'iteration limit'}; "
        f"final cost {c:.6f} ({best.termination.value}), "
        f"goal error {pos_err * 1e3:.2f} mm / {ang_err:.4f} rad"
    )
    row = {"sweep_point": s.name, "success": ok, "final_cost": float(c), "push_side": side}
    return EXIT_OK, row


def _bbo_overrides(cfg, args):
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.iters is not None:
        cfg = replace(cfg, max_iters=args.iters)
    return cfg


def cmd_optimize(args):
    t0 = time.time()
    s = _load_scenario(args.scenario)
    cfg = _bbo_overrides(s.bbo, args)
    code, _ = _run_optimize(s, args.out, cfg, args.threads)
    runio.write_manifest(Path(args.out), _manifest_meta(args, s, cfg.seed, t0))
    return code


def cmd_sweep(args):
    t0 = time.time()
    got = scenario.preset(args.preset)
    scenes = got if isinstance(got, list) else [got]
    out = Path(args.out)
    rows = []
    for s in scenes:
        print(f"=== {s.name} ===")
        cfg = _bbo_overrides(s.bbo, args)
        _, row = _run_optimize(s, out / s.name, cfg, args.threads)
        rows.append(row)
    lines = ["sweep_point,success,final_cost,push_side"]
    for row in rows:
        lines.append(
            f"{row['sweep_point']},{'true' if row['success'] else 'false'},"
            f"{row['final_cost']!r},{row['push_side']}"
        )
    runio.atomic_write_text(out / "summary.csv", "\n".join(lines) + "\n")
    runio.write_manifest(out, _manifest_meta(args, None, args.seed, t0,
                                             extra={"preset": args.preset}))
    n_ok = sum(1 for row in rows if row["success"])
    print(f"sweep {args.preset}: {n_ok}/{len(rows)} points succeeded")
    return EXIT_OK if n_ok > 0 else EXIT_ERROR


def _read_rollout_csv(path):
    import csv as csvmod

    with open(path, encoding="utf-8", newline="") as fh:
        reader = csvmod.DictReader(fh)
        cols = {name: [] for name in reader.fieldnames}
        for rec in reader:
            for name, v in rec.items():
                cols[name].append(float(v))
    return {name: np.array(v) for name, v in cols.items()}


def cmd_export_plot_data(args):
    run = Path(args.run_dir)
    needed = [run / "scenario_resolved.json", run / "trace.json", run / "rollout_best.csv"]
    missing = [str(p) for p in needed if not p.is_file()]
    if missing:
        print(f"error: not an optimize run directory; missing {', '.join(missing)}",
              file=sys.stderr)
        return EXIT_ERROR
    s = scenario.load(needed[0])
    with open(needed[1], encoding="utf-8") as fh:
        trace_doc = json.load(fh)
    cols = _read_rollout_csv(needed[2])
    plots = run / "plots"

    axis = analysis.insertion_axis(s.dmp)
    u0 = np.asarray(s.dmp.u0, float)[:2]
    depth = (cols["zb_x"] - u0[0]) * axis[0] + (cols["zb_y"] - u0[1]) * axis[1]
    lines = ["depth,f_ctrl_x,f_ctrl_y,f_ctrl_tau"]
    for i in range(len(depth)):
        lines.append(",".join(repr(float(v)) for v in (
            depth[i], cols["f_ctrl_x"][i], cols["f_ctrl_y"][i], cols["f_ctrl_tau"][i])))
    runio.atomic_write_text(plots / "force_vs_depth.csv", "\n".join(lines) + "\n")

    lines = ["iteration,cost"]
    for rec in trace_doc["iterations"]:
        lines.append(f"{rec['iteration']},{rec['incumbent_cost']!r}")
    runio.atomic_write_text(plots / "cost_vs_iteration.csv", "\n".join(lines) + "\n")

    lines = ["iteration,t,f_ctrl_x,f_ctrl_y,f_ctrl_tau"]
    for rec in trace_doc["iterations"]:
        r = s.simulate(np.asarray(rec["theta"], dtype=float))
        for i in range(len(r.times)):
            f = r.forces[i]
            lines.append(f"{rec['iteration']},"
                         + ",".join(repr(float(v)) for v in (r.times[i], f[0], f[1], f[2])))
    runio.atomic_write_text(plots / "iteration_force_traces.csv", "\n".join(lines) + "\n")

    manifest = runio.load_manifest(run) if (run / runio.MANIFEST_NAME).is_file() else {"meta": {}}
    meta = manifest.get("meta", {})
    meta["plot_export"] = {"tool_version": __version__}
    runio.write_manifest(run, meta)
    print(f"wrote {plots}/force_vs_depth.csv, cost_vs_iteration.csv, iteration_force_traces.csv")
    return EXIT_OK


def cmd_verify(args):
    problems = runio.verify_manifest(args.run_dir)
    for p in problems:
        print(p)
    if problems:
        return EXIT_ERROR
    n = len(runio.load_manifest(args.run_dir).get("files", {}))
    print(f"ok: {n} files match the manifest")
    return EXIT_OK


def cmd_preset_list(args):
    for name in scenario.preset_names():
        print(name)
    return EXIT_OK


def cmd_preset_dump(args):
    got = scenario.preset(args.name)
    if isinstance(got, list):
        text = runio.canonical_json([s.resolved for s in got])
    else:
        text = got.canonical_text
    if args.out:
        runio.atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="hmp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hmp {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True, metavar="command")

    p = sub.add_parser("rollout", help="integrate one policy and export the trajectory")
    p.add_argument("--scenario", required=True, help="scenario file or preset name")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="recorded in the manifest")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--zero", action="store_true", help="run the straight-line policy")
    group.add_argument("--theta", help="policy weights file (theta_best.json)")
    p.set_defaults(func=cmd_rollout)

    p = sub.add_parser("optimize", help="search policy space on one scenario")
    p.add_argument("--scenario", required=True, help="scenario file or preset name")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override the scenario's seed")
    p.add_argument("--iters", type=int, default=None, help="override max iterations")
    p.add_argument("--threads", type=int, default=1, help="parallel rollout evaluations")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep", help="optimize every scene of a sweep preset")
    p.add_argument("preset", help="sweep preset name")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override every point's seed")
    p.add_argument("--iters", type=int, default=None, help="override max iterations")
    p.add_argument("--threads", type=int, default=1, help="parallel rollout evaluations")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export-plot-data", help="derive plot-ready CSVs from an optimize run")
    p.add_argument("run_dir", help="directory written by the optimize command")
    p.set_defaults(func=cmd_export_plot_data)

    p = sub.add_parser("verify", help="re-hash a run directory against its manifest")
    p.add_argument("run_dir", help="directory containing manifest.json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("preset", help="list or dump built-in scenarios")
    psub = p.add_subparsers(dest="preset_cmd", required=True, metavar="action")
    pl = psub.add_parser("list", help="print preset names")
    pl.set_defaults(func=cmd_preset_list)
    pd = psub.add_parser("dump", help="print a preset's resolved JSON")
    pd.add_argument("name")
    pd.add_argument("--out", default=None, help="write to a file instead of stdout")
    pd.set_defaults(func=cmd_preset_dump)

    return parser


def main(argv=None):
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except FileNotFoundError as e:
        print(f"error: no such file: {e.filename or e}", file=sys.stderr)
        return EXIT_ERROR
    except (HmpError, OSError, KeyError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
