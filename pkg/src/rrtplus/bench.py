"""Benchmark harness: planners x scenarios x seeded runs.

Run ``t`` of every (scenario, planner) pair uses seed ``base_seed + t``, so the
raw results do not depend on how trials are spread over worker processes.
Statistics are computed over solved runs only; the solve rate is reported
next to them.
"""
from __future__ import annotations

import csv
import io
import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

from .cspace import make_rng
from .planners import (
    PLANNER_NAMES,
    SOLVED,
    STEP_DIAGONAL,
    PlannerParams,
    StagedOptions,
    run_planner,
)
from .scenario import scenario_from_dict, scenario_to_dict

RAW_COLUMNS = ("scenario", "planner", "run", "status", "wall_time_s", "samples_used",
               "stage_solved_in")
AGG_COLUMNS = ("scenario", "planner", "runs", "solved", "solve_rate", "mean_s", "median_s",
               "std_s", "min_s")


@dataclass(frozen=True)
class RunRecord:
    scenario: str
    planner: str
    run: int
    status: str
    wall_time_s: float
    samples_used: int
    stage_solved_in: Optional[int] = None

    @property
    def solved(self) -> bool:
        return self.status == SOLVED


@dataclass(frozen=True)
class Aggregate:
    scenario: str
    planner: str
    runs: int
    solved: int
    solve_rate: float
    mean_s: Optional[float]
    median_s: Optional[float]
    std_s: Optional[float]
    min_s: Optional[float]


def aggregate(rows: list[RunRecord]) -> list[Aggregate]:
    """Per (scenario, planner) statistics in first-appearance order."""
    groups: dict[tuple, list[RunRecord]] = {}
    for r in rows:
        groups.setdefault((r.scenario, r.planner), []).append(r)
    out = []
    for (sc, pl), rs in groups.items():
        times = [r.wall_time_s for r in rs if r.solved]
        out.append(Aggregate(
            scenario=sc,
            planner=pl,
            runs=len(rs),
            solved=len(times),
            solve_rate=len(times) / len(rs),
            mean_s=statistics.fmean(times) if times else None,
            median_s=statistics.median(times) if times else None,
            std_s=(statistics.stdev(times) if len(times) > 1 else 0.0) if times else None,
            min_s=min(times) if times else None,
        ))
    return out


@dataclass(eq=False)
class BenchReport:
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    paths: dict = field(default_factory=dict, repr=False)

    def aggregates(self) -> list[Aggregate]:
        return aggregate(self.rows)

    def fastest(self) -> dict[str, RunRecord]:
        """Single fastest solved run per scenario, across planners."""
        best: dict[str, RunRecord] = {}
        for r in self.rows:
            if r.solved and (r.scenario not in best or r.wall_time_s < best[r.scenario].wall_time_s):
                best[r.scenario] = r
        return best

    def __eq__(self, other):
        if not isinstance(other, BenchReport):
            return NotImplemented
        return self.rows == other.rows and self.metadata == other.metadata


@dataclass
class BenchConfig:
    scenarios: list
    planners: list
    runs: int = 100
    time_limit: float = 60.0
    base_seed: int = 0
    parallelism: int = 1
    staged: StagedOptions = field(default_factory=StagedOptions)
    max_samples: Optional[int] = None
    record_timing: bool = True
    keep_paths: bool = False
    step_rule: str = STEP_DIAGONAL

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not self.time_limit > 0:
            raise ValueError("time_limit must be positive")
        bad = [p for p in self.planners if p not in PLANNER_NAMES]
        if bad:
            raise ValueError(f"unknown planners: {', '.join(bad)}")


def scenario_label(spec) -> str:
    return spec.kind


def _trial(task):
    label, scen_dict, planner, run, seed, cfg = task
    spec = scenario_from_dict(scen_dict)
    problem = spec.problem()
    params = PlannerParams.for_problem(problem, planner, step_rule=cfg["step_rule"],
                                       max_time=cfg["time_limit"], max_samples=cfg["max_samples"])
    res = run_planner(planner, problem, params, make_rng(seed), cfg["staged"])
    rec = RunRecord(
        scenario=label,
        planner=planner,
        run=run,
        status=res.status,
        wall_time_s=res.wall_time if cfg["record_timing"] else 0.0,
        samples_used=res.samples_used,
        stage_solved_in=res.stage_solved_in,
    )
    path = [q.tolist() for q in res.path] if (cfg["keep_paths"] and res.solved) else None
    return rec, path


def run_benchmark(config: BenchConfig, progress=None) -> BenchReport:
    """Execute every trial and collect a report.

    ``progress``, if given, is called with each finished :class:`RunRecord`.
    """
    cfg = dict(time_limit=config.time_limit, max_samples=config.max_samples,
               staged=config.staged, record_timing=config.record_timing,
               keep_paths=config.keep_paths, step_rule=config.step_rule)
    tasks = []
    for spec in config.scenarios:
        d = scenario_to_dict(spec)
        label = scenario_label(spec)
        for planner in config.planners:
            for t in range(config.runs):
                tasks.append((label, d, planner, t, config.base_seed + t, cfg))
    if config.parallelism > 1:
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            results = []
            for out in pool.map(_trial, tasks):
                results.append(out)
                if progress:
                    progress(out[0])
    else:
        results = []
        for task in tasks:
            out = _trial(task)
            results.append(out)
            if progress:
                progress(out[0])
    report = BenchReport(rows=[r for r, _ in results])
    if config.keep_paths:
        report.paths = {(r.scenario, r.planner, r.run): p for r, p in results if p is not None}
    return report


# ---------------------------------------------------------------------------
# Export / import
# ---------------------------------------------------------------------------


def _cell(v) -> str:
    if v is None:
        return ""
    return repr(v) if isinstance(v, float) else str(v)


def export_report(report: BenchReport, fmt: str = "csv") -> str:
    """Serialize to ``"csv"`` or ``"json"``.

    CSV layout: the raw header and rows, then (when non-empty) a blank line,
    ``# aggregates`` and the aggregate table, then ``# metadata`` with one
    JSON-encoded value per key.
    """
    if fmt == "json":
        doc = {
            "metadata": report.metadata,
            "raw": [asdict(r) for r in report.rows],
            "aggregates": [asdict(a) for a in report.aggregates()],
            "fastest": [asdict(r) for r in report.fastest().values()],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RAW_COLUMNS)
    for r in report.rows:
        w.writerow([_cell(getattr(r, c)) for c in RAW_COLUMNS])
    aggs = report.aggregates()
    if aggs:
        buf.write("\n# aggregates\n")
        w.writerow(AGG_COLUMNS)
        for a in aggs:
            w.writerow([_cell(getattr(a, c)) for c in AGG_COLUMNS])
    if report.metadata:
        buf.write("\n# metadata\n")
        w.writerow(("key", "value"))
        for k in sorted(report.metadata):
            w.writerow((k, json.dumps(report.metadata[k], sort_keys=True)))
    return buf.getvalue()


def _record_from_cells(cells: dict) -> RunRecord:
    sis = cells["stage_solved_in"]
    return RunRecord(
        scenario=cells["scenario"],
        planner=cells["planner"],
        run=int(cells["run"]),
        status=cells["status"],
        wall_time_s=float(cells["wall_time_s"]),
        samples_used=int(cells["samples_used"]),
        stage_solved_in=None if sis in ("", None) else int(sis),
    )


def parse_report(text: str, fmt: str = "csv") -> BenchReport:
    """Inverse of :func:`export_report`; aggregates are recomputed, not read."""
    if fmt == "json":
        doc = json.loads(text)
        return BenchReport(rows=[_record_from_cells(r) for r in doc["raw"]],
                           metadata=dict(doc.get("metadata", {})))
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    sections: list[list[str]] = [[]]
    for line in text.splitlines():
        if line == "":
            sections.append([])
        else:
            sections[-1].append(line)
    raw = list(csv.DictReader(sections[0]))
    rows = [_record_from_cells(c) for c in raw]
    metadata = {}
    for sec in sections[1:]:
        if sec and sec[0] == "# metadata":
            for k, v in csv.reader(sec[2:]):
                metadata[k] = json.loads(v)
    return BenchReport(rows=rows, metadata=metadata)


def median_with_failures(rows: list[RunRecord], scenario: str, planner: str) -> float:
    """Median solve time counting unsolved runs as infinitely slow."""
    times = [r.wall_time_s if r.solved else math.inf
             for r in rows if r.scenario == scenario and r.planner == planner]
    if not times:
        raise ValueError(f"no runs for {scenario}/{planner}")
    return statistics.median(times)
