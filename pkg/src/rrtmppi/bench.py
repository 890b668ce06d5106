"""Benchmark sweeps over (mode, seed) cells, plus the CSV writers.

Floats are written with repr so values round-trip exactly; identical runs
therefore produce byte-identical files, which the determinism checks rely
on.  Wall-clock columns are excluded from that guarantee.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .planner import REACHED, PlannerConfig, RunRecord, run
from .rrt import Path
from .scenario import Scenario

TRAJECTORY_COLUMNS = ["step", "t", "x", "y", "theta", "phi", "v", "omega",
                      "deviation", "replanned", "min_rollout_cost", "ess"]


@dataclass
class BenchRow:
    mode: str
    seed: int
    outcome: str
    steps: int
    sim_time: float
    goal_distance: float
    collision_steps: int
    replan_count: int
    replan_successes: int
    offline_ms: float
    mppi_ms: float
    replan_ms: float
    total_ms: float


@dataclass
class BenchReport:
    rows: list[BenchRow]
    aggregates: dict[str, dict[str, float]]   # per mode


def _row_from_record(rec: RunRecord, goal) -> BenchRow:
    final = rec.final_state()
    return BenchRow(
        mode=rec.mode,
        seed=rec.seed,
        outcome=rec.outcome,
        steps=len(rec.steps),
        sim_time=rec.steps[-1].t if rec.steps else 0.0,
        goal_distance=math.hypot(final.x - goal[0], final.y - goal[1]),
        collision_steps=rec.collision_steps(),
        replan_count=len(rec.replans),
        replan_successes=sum(1 for e in rec.replans if e.success),
        offline_ms=rec.timings["offline_ms"],
        mppi_ms=rec.timings["mppi_ms"],
        replan_ms=rec.timings["replan_ms"],
        total_ms=rec.timings["total_ms"],
    )


def sweep(sc: Scenario, modes: list[str] | None = None,
          seeds: list[int] | None = None, threads: int = 1,
          keep_records: bool = False):
    """Run every (mode, seed) cell in order; row order is fixed by the lists."""
    modes = sc.modes if modes is None else modes
    seeds = sc.seeds if seeds is None else seeds
    rows: list[BenchRow] = []
    records: list[RunRecord] = []
    for mode in modes:
        for seed in seeds:
            rec = run(sc.env, sc.planner, mode=mode, dyn=sc.dynamics,
                      seed=seed, start=sc.start, threads=threads)
            rows.append(_row_from_record(rec, sc.env.goal))
            if keep_records:
                records.append(rec)
    aggregates = {}
    for mode in modes:
        cell = [r for r in rows if r.mode == mode]
        wins = [r for r in cell if r.outcome == REACHED]
        aggregates[mode] = {
            "runs": len(cell),
            "successes": len(wins),
            "success_rate": len(wins) / len(cell) if cell else math.nan,
            "mean_steps_to_goal": (sum(r.steps for r in wins) / len(wins)
                                   if wins else math.nan),
            "mean_total_ms": (sum(r.total_ms for r in cell) / len(cell)
                              if cell else math.nan),
        }
    report = BenchReport(rows, aggregates)
    return (report, records) if keep_records else report


def write_bench_csv(report: BenchReport, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["mode", "seed", "outcome", "steps", "sim_time",
                         "goal_distance", "collision_steps", "replan_count",
                         "replan_successes", "offline_ms", "mppi_ms",
                         "replan_ms", "total_ms"])
        for r in report.rows:
            writer.writerow([r.mode, r.seed, r.outcome, r.steps,
                             _num(r.sim_time), _num(r.goal_distance),
                             r.collision_steps, r.replan_count,
                             r.replan_successes, f"{r.offline_ms:.3f}",
                             f"{r.mppi_ms:.3f}", f"{r.replan_ms:.3f}",
                             f"{r.total_ms:.3f}"])


def _num(v) -> str:
    # repr of a builtin float round-trips exactly; numpy scalars do not
    return repr(float(v))


def trajectory_rows(rec: RunRecord):
    for s in rec.steps:
        yield [s.step, _num(s.t), _num(s.state.x), _num(s.state.y),
               _num(s.state.theta), _num(s.state.phi), _num(s.control.v),
               _num(s.control.omega), _num(s.deviation), int(s.replanned),
               _num(s.min_rollout_cost), _num(s.ess)]


def write_trajectory_csv(rec: RunRecord, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRAJECTORY_COLUMNS)
        writer.writerows(trajectory_rows(rec))


def write_path_csv(path_obj: Path, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "x", "y"])
        for i, (x, y) in enumerate(path_obj.waypoints):
            writer.writerow([i, repr(float(x)), repr(float(y))])
