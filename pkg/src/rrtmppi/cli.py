"""Command-line entry point.

Subcommands: rrt (offline plan), plan (closed-loop run), mppi (fixed-mean
baseline run), bench (mode x seed sweep), sample-size (bound calculator),
render (SVG picture).  Exit codes: 0 success, 2 malformed scenario,
3 planning failure, 4 internal invariant violation.  Failures print a
single machine-readable JSON line to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FsPath

import numpy as np

from . import bench as bench_mod
from . import rrt as rrt_mod
from .mppi import DegenerateSampleError
from .planner import SpliceError, run
from .render import render_svg, save_svg
from .rrt import StartInCollisionError
from .sample_size import (AssumptionViolation, SampleSizeInputs, gamma_bound,
                          k1, k2, required_sample_size)
from .scenario import Scenario, ScenarioError, load_scenario

EXIT_OK = 0
EXIT_SCENARIO = 2
EXIT_PLANNING = 3
EXIT_INVARIANT = 4


class PlanningFailure(RuntimeError):
    pass


def _fail(code: int, message: str) -> int:
    print(json.dumps({"error": message, "exit_code": code}), file=sys.stderr)
    return code


def _out_dir(args, sc: Scenario) -> FsPath:
    out = args.out or sc.output_dir or "."
    path = FsPath(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load(args) -> Scenario:
    sc = load_scenario(args.scenario)
    if getattr(args, "replan_radius", None) is not None:
        sc.planner.replan_radius = args.replan_radius
    if getattr(args, "freeze_obstacles", False):
        sc.planner.mppi.freeze_obstacle_time = True
    return sc


def _parse_seeds(spec: str) -> list[int]:
    """'0,1,5' or '0:10' (half-open range)."""
    if ":" in spec:
        lo, hi = spec.split(":", 1)
        return list(range(int(lo), int(hi)))
    return [int(s) for s in spec.split(",") if s != ""]


def _parse_floats(spec: str) -> list[float]:
    return [float(s) for s in spec.split(",") if s != ""]


def _cmd_rrt(args) -> int:
    sc = _load(args)
    seed = args.seed if args.seed is not None else sc.seeds[0]
    cfg = sc.planner.rrt
    path = rrt_mod.plan(sc.env, cfg, t=0.0, rng=np.random.default_rng(seed))
    if path is None:
        raise PlanningFailure(f"no path found within {cfg.max_iters} iterations")
    out = _out_dir(args, sc) / f"rrt_path_seed{seed}.csv"
    bench_mod.write_path_csv(path, out)
    print(f"path: {len(path)} waypoints, length {path.length():.2f} -> {out}")
    return EXIT_OK


def _run_one(args, mode: str) -> int:
    sc = _load(args)
    seed = args.seed if args.seed is not None else sc.seeds[0]
    rec = run(sc.env, sc.planner, mode=mode, dyn=sc.dynamics, seed=seed,
              start=sc.start, threads=args.threads)
    if rec.outcome == "plan-failed":
        raise PlanningFailure("offline tree planning failed")
    tag = mode.replace(":", "_").replace(",", "_")
    out = _out_dir(args, sc) / f"traj_{tag}_seed{seed}.csv"
    bench_mod.write_trajectory_csv(rec, out)
    final = rec.final_state()
    print(f"{rec.outcome}: {len(rec.steps)} steps, "
          f"final ({final.x:.2f}, {final.y:.2f}), "
          f"replans {len(rec.replans)} -> {out}")
    return EXIT_OK


def _cmd_plan(args) -> int:
    return _run_one(args, args.mode)


def _cmd_mppi(args) -> int:
    mean = _parse_floats(args.mean)
    if len(mean) != 2:
        raise ScenarioError("--mean expects 'v,omega'")
    return _run_one(args, f"fixed:{mean[0]},{mean[1]}")


def _cmd_bench(args) -> int:
    sc = _load(args)
    modes = args.modes.split(";") if args.modes else None
    seeds = _parse_seeds(args.seeds) if args.seeds else None
    report = bench_mod.sweep(sc, modes=modes, seeds=seeds, threads=args.threads)
    out = _out_dir(args, sc) / "bench.csv"
    bench_mod.write_bench_csv(report, out)
    for mode, agg in report.aggregates.items():
        print(f"{mode}: {agg['successes']}/{agg['runs']} reached goal, "
              f"mean wall {agg['mean_total_ms']:.0f} ms")
    print(f"rows -> {out}")
    return EXIT_OK


def _cmd_sample_size(args) -> int:
    means = _parse_floats(args.mean)
    variances = _parse_floats(args.var)
    if len(means) != len(variances):
        raise ScenarioError("--mean and --var need the same number of channels")
    grid = _parse_floats(args.mean_grid) if args.mean_grid else [None]
    rows = []
    for m in grid:
        mean = tuple(means) if m is None else tuple(m for _ in means)
        inputs = SampleSizeInputs(eps1=args.eps1, rho1=args.rho1,
                                  eps2=args.eps2, rho2=args.rho2,
                                  e1_hat=args.e1, mean=mean,
                                  var=tuple(variances))
        rows.append((mean, gamma_bound(mean, variances),
                     k1(args.eps1, args.rho1), k2(inputs),
                     required_sample_size(inputs)))
    print("mean,gamma,k1,k2,k_required")
    for mean, gamma, a, b, need in rows:
        mtxt = "/".join(repr(x) for x in mean)
        print(f"{mtxt},{gamma!r},{a},{b},{need}")
    return EXIT_OK


def _cmd_render(args) -> int:
    sc = _load(args)
    tree = None
    nominal = None
    executed = None
    if args.mode:
        seed = args.seed if args.seed is not None else sc.seeds[0]
        rec = run(sc.env, sc.planner, mode=args.mode, dyn=sc.dynamics,
                  seed=seed, start=sc.start, threads=args.threads)
        if rec.outcome == "plan-failed":
            raise PlanningFailure("offline tree planning failed")
        nominal = rec.final_path
        executed = [(s.state.x, s.state.y) for s in rec.steps]
    markup = render_svg(sc.env, tree=tree, nominal=nominal, executed=executed)
    save_svg(markup, args.out)
    print(f"svg -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rrtmppi",
        description="Sampling-based planner benchmarks on a noisy car model.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_common(p, out_file=False):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=1)
        if out_file:
            p.add_argument("--out", required=True, help="output SVG file")
        else:
            p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--freeze-obstacles", action="store_true",
                       help="rollouts see obstacles frozen at the step time")
        p.add_argument("--replan-radius", type=float, default=None)
        return p

    p = with_common(sub.add_parser("rrt", help="offline tree plan only"))
    p.set_defaults(func=_cmd_rrt)

    p = with_common(sub.add_parser("plan", help="one closed-loop run"))
    p.add_argument("--mode", default="rrt-mppi",
                   help="rrt-mppi or fixed:v,omega")
    p.set_defaults(func=_cmd_plan)

    p = with_common(sub.add_parser("mppi", help="fixed-mean baseline run"))
    p.add_argument("--mean", default="1,0", help="fixed mean 'v,omega'")
    p.set_defaults(func=_cmd_mppi)

    p = with_common(sub.add_parser("bench", help="sweep modes x seeds"))
    p.add_argument("--modes", default=None,
                   help="semicolon-separated mode list")
    p.add_argument("--seeds", default=None, help="'0,1,2' or '0:10'")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("sample-size", help="concentration-bound calculator")
    p.add_argument("--eps1", type=float, required=True)
    p.add_argument("--rho1", type=float, required=True)
    p.add_argument("--eps2", type=float, required=True)
    p.add_argument("--rho2", type=float, required=True)
    p.add_argument("--e1", type=float, required=True,
                   help="estimated mean weight E1")
    p.add_argument("--mean", default="0,0", help="per-channel control mean")
    p.add_argument("--var", default="1,1", help="per-channel control variance")
    p.add_argument("--mean-grid", default=None,
                   help="optional list of scalar means to tabulate")
    p.set_defaults(func=_cmd_sample_size)

    p = with_common(sub.add_parser("render", help="draw scenario or run as SVG"),
                    out_file=True)
    p.add_argument("--mode", default=None,
                   help="if set, run this mode and draw the trajectory")
    p.set_defaults(func=_cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        return _fail(EXIT_SCENARIO, str(exc))
    except (PlanningFailure, StartInCollisionError) as exc:
        return _fail(EXIT_PLANNING, str(exc))
    except (AssumptionViolation, DegenerateSampleError, SpliceError) as exc:
        return _fail(EXIT_INVARIANT, str(exc))
    except ValueError as exc:
        return _fail(EXIT_SCENARIO, str(exc))


if __name__ == "__main__":
    sys.exit(main())
