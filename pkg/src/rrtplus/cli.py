"""Command-line front end.

Subcommands::

    rrtplus plan      run one planner on one scenario, print the result as JSON
    rrtplus bench     planners x environments x seeded runs, write a CSV/JSON report
    rrtplus render    draw a solution path from a ``plan`` result as SVG
    rrtplus scenario  generate a scenario file

Exit codes: 0 success, 1 usage or configuration error, 2 planning did not
solve (timeout or budget exhausted). Machine output goes to stdout or files,
progress messages to stderr. ``RRTPLUS_SEED`` overrides the default seed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .bench import BenchConfig, BenchReport, export_report, run_benchmark
from .cspace import make_rng
from .planners import (
    PLANNER_NAMES,
    STEP_AXIS,
    STEP_DIAGONAL,
    PlannerParams,
    StagedOptions,
    run_planner,
)
from .render import render_solution_svg
from .scenario import (
    KIND_ALIASES,
    ScenarioError,
    canonical_kind,
    dumps_scenario,
    load_scenario,
    make_scenario,
    scenario_to_dict,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNSOLVED = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for "not solved"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get("RRTPLUS_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"RRTPLUS_SEED must be an integer, got {raw!r}") from None


def _planner_list(text: str) -> list[str]:
    if text == "all":
        return list(PLANNER_NAMES)
    names = [t.strip() for t in text.split(",") if t.strip()]
    bad = [n for n in names if n not in PLANNER_NAMES]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"unknown planner(s) {', '.join(bad) or text!r}; choose from {', '.join(PLANNER_NAMES)} or 'all'")
    return names


def _planner_name(text: str) -> str:
    if text not in PLANNER_NAMES:
        raise argparse.ArgumentTypeError(
            f"unknown planner {text!r}; choose from {', '.join(PLANNER_NAMES)}")
    return text


def _env_list(text: str) -> list[str]:
    kinds = [t.strip() for t in text.split(",") if t.strip()]
    try:
        return [canonical_kind(k) for k in kinds]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _env_kind(text: str) -> str:
    try:
        return canonical_kind(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _release_order(text: str):
    if text == "random":
        return None
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            "release order must be 'random' or a comma-separated permutation of 0..n-1") from None


def _positive(kind):
    def conv(text):
        v = kind(text)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"expected a positive value, got {text}")
        return v
    return conv


def _add_scenario_flags(p, with_file=True):
    if with_file:
        p.add_argument("--scenario", metavar="FILE", help="scenario JSON file (overrides --env)")
    p.add_argument("--env", type=_env_kind, default="empty",
                   help=f"generator kind: {', '.join(sorted(KIND_ALIASES))} (default: empty)")
    p.add_argument("--dof", type=_positive(int), default=17, help="number of chain links (default: 17)")
    p.add_argument("--scenario-seed", type=int, default=0,
                   help="seed for the random environment generators (default: 0)")


def _add_staged_flags(p):
    g = p.add_argument_group("staged (+) planners")
    g.add_argument("--qtotal", type=_positive(int), default=StagedOptions.q_total,
                   help=f"final-stage sample budget Q_total (default: {StagedOptions.q_total})")
    g.add_argument("--stage-time", type=_positive(float), default=None,
                   help="split this many seconds over the stages instead of sample counts")
    g.add_argument("--release-order", type=_release_order, default=None,
                   help="'random' (default) or a comma-separated permutation of DoF indices")
    g.add_argument("--stage-source", choices=("prioritized", "affine"), default="prioritized")
    g.add_argument("--closed-final", action="store_true",
                   help="stop after the final stage's budget instead of running to the time limit")


def _add_step_flag(p):
    p.add_argument("--step", choices=(STEP_DIAGONAL, STEP_AXIS), default=STEP_DIAGONAL,
                   help="extension step: 0.2 x C-space box diagonal (default) or "
                        "0.15 x mean joint range")


def _staged_options(args) -> StagedOptions:
    return StagedOptions(q_total=args.qtotal, stage_time=args.stage_time,
                         stage_source=args.stage_source, release_order=args.release_order,
                         open_final=not args.closed_final)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rrtplus", description="Staged subspace RRT planners for planar chains.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("plan", help="solve one scenario with one planner")
    _add_scenario_flags(p)
    p.add_argument("--planner", type=_planner_name, default="rrt-connect+")
    p.add_argument("--seed", type=int, default=None, help="planner seed (default: $RRTPLUS_SEED or 0)")
    p.add_argument("--timeout", type=_positive(float), default=60.0, help="seconds (default: 60)")
    p.add_argument("--max-samples", type=_positive(int), default=None)
    p.add_argument("--svg", metavar="FILE", help="write an SVG of the solution here")
    p.add_argument("--frames", type=int, default=10, help="poses drawn in the SVG (default: 10)")
    p.add_argument("--timing", action="store_true",
                   help="include wall_time in the JSON (makes output run-dependent)")
    _add_step_flag(p)
    _add_staged_flags(p)
    p.set_defaults(func=cmd_plan)

    b = sub.add_parser("bench", help="run the benchmark protocol")
    b.add_argument("--envs", type=_env_list, default=["empty", "easy-random", "cluttered-random", "horn"],
                   help="comma-separated environment kinds (default: all four)")
    b.add_argument("--dof", type=_positive(int), default=17)
    b.add_argument("--scenario-seed", type=int, default=0)
    b.add_argument("--planners", type=_planner_list, default=list(PLANNER_NAMES),
                   help="'all' or a comma-separated list")
    b.add_argument("--runs", type=_positive(int), default=20)
    b.add_argument("--timeout", type=_positive(float), default=30.0)
    b.add_argument("--seed", type=int, default=None, help="base seed; run t uses seed + t")
    b.add_argument("--max-samples", type=_positive(int), default=None)
    b.add_argument("--jobs", type=_positive(int), default=1, help="worker processes")
    b.add_argument("--out", metavar="FILE", help="report path; .json selects JSON, anything else CSV")
    b.add_argument("--format", choices=("csv", "json"), default=None,
                   help="override the format implied by --out")
    b.add_argument("--svg-dir", metavar="DIR", help="render the fastest solution per environment here")
    b.add_argument("--frames", type=int, default=10)
    b.add_argument("--no-timing", action="store_true",
                   help="record 0 for wall times so reports are byte-reproducible")
    b.add_argument("--quiet", action="store_true", help="no progress on stderr")
    _add_step_flag(b)
    _add_staged_flags(b)
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("render", help="render a plan result as SVG")
    _add_scenario_flags(r)
    r.add_argument("--result", metavar="FILE", required=True,
                   help="JSON written by 'rrtplus plan' ('-' for stdin)")
    r.add_argument("--out", metavar="FILE", help="SVG path (default: stdout)")
    r.add_argument("--frames", type=int, default=10)
    r.set_defaults(func=cmd_render)

    s = sub.add_parser("scenario", help="generate a scenario JSON file")
    _add_scenario_flags(s, with_file=False)
    s.add_argument("--seed", type=int, default=None, help="alias for --scenario-seed")
    s.add_argument("--gap", type=_positive(float), default=None, help="horn corridor width")
    s.add_argument("--count", type=_positive(int), default=None, help="number of random obstacles")
    s.add_argument("--self-collision", choices=("on", "off"), default=None)
    s.add_argument("--out", metavar="FILE", help="output path (default: stdout)")
    s.set_defaults(func=cmd_scenario)
    return parser


# ---------------------------------------------------------------------------


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _write(path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from None


def _load_scenario(args):
    if getattr(args, "scenario", None):
        try:
            return load_scenario(args.scenario)
        except OSError as exc:
            raise UsageError(f"cannot read {args.scenario}: {exc.strerror or exc}") from None
        except Exception as exc:  # json, schema or geometry errors
            raise UsageError(f"malformed scenario file {args.scenario}: {exc}") from None
    return make_scenario(args.env, args.dof, args.scenario_seed)


def _check_order(order, n):
    if order is not None and sorted(order) != list(range(n)):
        raise UsageError(f"--release-order must be a permutation of 0..{n - 1}")


def cmd_plan(args) -> int:
    spec = _load_scenario(args)
    seed = _default_seed() if args.seed is None else args.seed
    _check_order(args.release_order, spec.robot.num_links)
    problem = spec.problem()
    params = PlannerParams.for_problem(problem, args.planner, step_rule=args.step,
                                       max_time=args.timeout, max_samples=args.max_samples)
    _progress(f"planning {args.planner} on {spec.environment.kind} "
              f"({spec.robot.num_links} DoF), seed {seed}")
    result = run_planner(args.planner, problem, params, make_rng(seed), _staged_options(args))
    _progress(f"{result.status} after {result.samples_used} samples, {result.wall_time:.3f} s")
    doc = {
        "planner": args.planner,
        "seed": seed,
        "environment": spec.environment.kind,
        "dof": spec.robot.num_links,
        "scenario_seed": spec.seed,
        "result": result.to_dict(include_timing=args.timing),
    }
    if args.svg and result.solved:
        _write(args.svg, render_solution_svg(spec, result.path, frames=args.frames))
    elif args.svg:
        _progress("no solution; SVG not written")
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if result.solved else EXIT_UNSOLVED


def cmd_bench(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    fmt = args.format or ("json" if args.out and args.out.lower().endswith(".json") else "csv")
    if args.out:
        parent = Path(args.out).resolve().parent
        if not parent.is_dir():
            raise UsageError(f"cannot write {args.out}: directory does not exist")
    specs = [make_scenario(kind, args.dof, args.scenario_seed) for kind in args.envs]
    staged = _staged_options(args)
    _check_order(staged.release_order, args.dof)
    config = BenchConfig(
        scenarios=specs, planners=args.planners, runs=args.runs, time_limit=args.timeout,
        base_seed=seed, parallelism=args.jobs, staged=staged, max_samples=args.max_samples,
        record_timing=not args.no_timing, keep_paths=bool(args.svg_dir), step_rule=args.step,
    )
    total = len(specs) * len(args.planners) * args.runs
    done = [0]

    def progress(rec):
        done[0] += 1
        if not args.quiet:
            _progress(f"[{done[0]}/{total}] {rec.scenario} {rec.planner} run {rec.run}: "
                      f"{rec.status} {rec.wall_time_s:.3f} s")

    report: BenchReport = run_benchmark(config, progress=progress)
    report.metadata = {
        "dof": args.dof,
        "environments": args.envs,
        "planners": args.planners,
        "runs": args.runs,
        "timeout_s": args.timeout,
        "base_seed": seed,
        "scenario_seed": args.scenario_seed,
        "q_total": staged.q_total,
        "stage_time_s": staged.stage_time,
        "stage_source": staged.stage_source,
        "release_order": "random" if staged.release_order is None else list(staged.release_order),
        "open_final": staged.open_final,
        "max_samples": args.max_samples,
        "step_rule": args.step,
        "timing_recorded": not args.no_timing,
        "version": __version__,
    }
    text = export_report(report, fmt)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    if args.svg_dir:
        out_dir = Path(args.svg_dir)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise UsageError(f"cannot create {out_dir}: {exc.strerror or exc}") from None
        by_kind = {s.environment.kind: s for s in specs}
        for kind, rec in report.fastest().items():
            path = report.paths[(rec.scenario, rec.planner, rec.run)]
            svg = render_solution_svg(by_kind[kind], path, frames=args.frames)
            _write(out_dir / f"{kind}-{args.dof}dof.svg", svg)
    return EXIT_OK


def cmd_render(args) -> int:
    spec = _load_scenario(args)
    try:
        raw = sys.stdin.read() if args.result == "-" else Path(args.result).read_text(encoding="utf-8")
        doc = json.loads(raw)
    except OSError as exc:
        raise UsageError(f"cannot read {args.result}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.result} is not JSON: {exc}") from None
    res = doc.get("result", doc)
    path = res.get("path") or []
    if res.get("status") != "solved" or not path:
        raise UsageError(f"{args.result} holds no solved path")
    if len(path[0]) != spec.robot.num_links:
        raise UsageError(f"path has {len(path[0])} joints but the scenario has {spec.robot.num_links}")
    svg = render_solution_svg(spec, path, frames=args.frames)
    if args.out:
        _write(args.out, svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def cmd_scenario(args) -> int:
    seed = args.scenario_seed if args.seed is None else args.seed
    kw = {}
    if args.gap is not None:
        kw["gap"] = args.gap
    if args.count is not None:
        kw["count"] = args.count
    if args.self_collision is not None:
        kw["self_collision"] = args.self_collision == "on"
    spec = make_scenario(args.env, args.dof, seed, **kw)
    text = dumps_scenario(spec)
    if args.out:
        _write(args.out, text)
        _progress(f"wrote {args.out} ({len(scenario_to_dict(spec)['obstacles'])} obstacles)")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ScenarioError, ValueError) as exc:
        print(f"rrtplus: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
