"""Command line front end: ``gen``, ``plan``, ``validate`` and ``sweep``.

Exit codes: 0 success, 2 infeasible, 3 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional, Sequence

from .baselines import GaConfig, genetic_plan, shortest_time_plan
from .model import DEFAULT_MIX, Scenario, generate_scenario, parse_mix, radii, validate_scenario
from .solver import Infeasible, SolverConfig, solve
from .trajectory import InvalidAssociation, Plan, trajectory_csv, validate_plan

log = logging.getLogger("handover_uav")

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_INPUT = 3

METHODS = ("proposed", "shortest_time", "genetic")
AXES = ("t_max", "snr_threshold_db")


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# config


def _pick(cls, doc: dict):
    known = {f.name for f in fields(cls)}
    unknown = set(doc) - known
    if unknown:
        raise InputError(f"unknown {cls.__name__} keys: {sorted(unknown)}")
    return cls(**doc)


def load_config(path: Optional[str]) -> tuple[SolverConfig, GaConfig]:
    """Read ``{"solver": {...}, "genetic": {...}}``; missing sections keep defaults."""
    if path is None:
        return SolverConfig(), GaConfig()
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return _pick(SolverConfig, doc.get("solver", {})), _pick(GaConfig, doc.get("genetic", {}))
    except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        raise InputError(f"bad config {path}: {exc}") from exc


def default_config_json() -> str:
    return json.dumps({"solver": asdict(SolverConfig()), "genetic": asdict(GaConfig())}, indent=2) + "\n"


def load_scenario(path: str) -> Scenario:
    try:
        return Scenario.load(path)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"cannot read scenario {path}: {exc}") from exc


def run_method(scenario: Scenario, method: str, solver_cfg: SolverConfig, ga_cfg: GaConfig) -> Plan:
    if method == "proposed":
        return solve(scenario, solver_cfg)
    if method == "shortest_time":
        return shortest_time_plan(scenario, solver_cfg.feasibility_tolerance)
    if method == "genetic":
        return genetic_plan(scenario, ga_cfg, solver_cfg.feasibility_tolerance)
    raise InputError(f"unknown method {method!r}")


def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    try:
        mix = parse_mix(args.mix) if args.mix else DEFAULT_MIX
        scenario = generate_scenario(args.seed, args.region, mix)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.t_max is not None:
        scenario = scenario.with_t_max(args.t_max)
    _write(scenario.dumps(), args.out)
    print(f"M={scenario.num_gbs} region_m={args.region:g} seed={args.seed}", file=sys.stderr)
    for gid, r in radii(scenario).items():
        print(f"  GBS {gid}: radius_m={'none' if r is None else f'{r:.1f}'}", file=sys.stderr)
    return EXIT_OK


def cmd_plan(args) -> int:
    scenario = load_scenario(args.scenario)
    solver_cfg, ga_cfg = load_config(args.config)
    if args.k is not None or args.max_dual_iters is not None:
        solver_cfg = SolverConfig(
            **{
                **asdict(solver_cfg),
                **({"k_candidates": args.k} if args.k is not None else {}),
                **({"max_dual_iters": args.max_dual_iters} if args.max_dual_iters is not None else {}),
            }
        )
    if args.seed is not None:
        ga_cfg = GaConfig(**{**asdict(ga_cfg), "seed": args.seed})
    for d in validate_scenario(scenario):
        log.warning("scenario: %s", d.message)
    try:
        plan = run_method(scenario, args.method, solver_cfg, ga_cfg)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        if exc.min_time is not None:
            print(f"min_time_s={exc.min_time:.6f}", file=sys.stderr)
        return EXIT_INFEASIBLE
    trace = validate_plan(scenario, plan, solver_cfg.feasibility_tolerance)
    plan.solver_meta["validated"] = trace.feasible
    if args.format == "csv":
        _write(trajectory_csv(scenario, plan, args.dt), args.out)
    else:
        _write(plan.dumps(), args.out)
    print(f"method={args.method}", file=sys.stderr)
    print(f"association={list(plan.association)}", file=sys.stderr)
    print(f"handovers={plan.handovers}", file=sys.stderr)
    print(f"time_s={plan.mission_time:.6f}", file=sys.stderr)
    if not trace.feasible:
        print(f"validation failed: {trace.first_violation}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_validate(args) -> int:
    scenario = load_scenario(args.scenario)
    try:
        plan = Plan.load(args.plan)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"cannot read plan {args.plan}: {exc}") from exc
    known = {g.id for g in scenario.gbs_list}
    missing = sorted({w.serving_gbs for w in plan.waypoints} - known | set(plan.association) - known)
    if missing:
        raise InputError(f"plan refers to GBS ids absent from the scenario: {missing}")
    trace = validate_plan(scenario, plan)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t_s", "x_m", "y_m", "from_gbs", "to_gbs"])
        for e in trace.handover_events:
            w.writerow([e.time, e.location[0], e.location[1], e.from_gbs, e.to_gbs])
        _write(buf.getvalue(), args.out)
    else:
        _write(trace.dumps(), args.out)
    print(f"feasible={str(trace.feasible).lower()} events={len(trace.handover_events)}", file=sys.stderr)
    for v in trace.violations:
        print(f"violation[{v.constraint}]: {v.message}", file=sys.stderr)
    return EXIT_OK if trace.feasible else EXIT_INFEASIBLE


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple[float, ...]
    base_scenario: str
    methods: tuple[str, ...] = METHODS

    def __post_init__(self):
        if self.axis not in AXES:
            raise InputError(f"axis must be one of {AXES}")
        if not self.values:
            raise InputError("sweep needs at least one value")
        diffs = [b - a for a, b in zip(self.values, self.values[1:])]
        if not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
            raise InputError("sweep values must be strictly monotone")
        bad = set(self.methods) - set(METHODS)
        if bad or not self.methods:
            raise InputError(f"unknown methods {sorted(bad)}")

    @classmethod
    def load(cls, path: str) -> "SweepSpec":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
            return cls(doc["axis"], tuple(float(v) for v in doc["values"]), doc["base_scenario"], tuple(doc.get("methods", METHODS)))
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad sweep spec {path}: {exc}") from exc


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    method: str
    handovers: Optional[int]
    time_s: Optional[float]
    feasible: bool


def _sweep_point(job) -> SweepRow:
    scenario, axis, value, method, solver_cfg, ga_cfg = job
    # coverage radii depend on the SNR threshold, so every point re-solves from scratch
    sc = scenario.with_t_max(value) if axis == "t_max" else scenario.with_snr_threshold_db(value)
    try:
        plan = run_method(sc, method, solver_cfg, ga_cfg)
    except Infeasible:
        return SweepRow(value, method, None, None, False)
    ok = validate_plan(sc, plan, solver_cfg.feasibility_tolerance).feasible
    return SweepRow(value, method, plan.handovers, plan.mission_time, ok)


def run_sweep(
    scenario: Scenario,
    spec: SweepSpec,
    solver_cfg: SolverConfig = SolverConfig(),
    ga_cfg: GaConfig = GaConfig(),
    jobs: int = 1,
) -> list[SweepRow]:
    work = [(scenario, spec.axis, v, m, solver_cfg, ga_cfg) for v in spec.values for m in spec.methods]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            rows = list(ex.map(_sweep_point, work))
    else:
        rows = [_sweep_point(w) for w in work]
    return sorted(rows, key=lambda r: (r.axis_value, spec.methods.index(r.method)))


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["axis_value", "method", "handovers", "time_s", "feasible"])
    for r in rows:
        w.writerow(
            [
                repr(r.axis_value),
                r.method,
                "" if r.handovers is None else r.handovers,
                "" if r.time_s is None else f"{r.time_s:.6f}",
                str(r.feasible).lower(),
            ]
        )
    return buf.getvalue()


def read_sweep_csv(text: str) -> list[SweepRow]:
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(
            SweepRow(
                float(rec["axis_value"]),
                rec["method"],
                int(rec["handovers"]) if rec["handovers"] else None,
                float(rec["time_s"]) if rec["time_s"] else None,
                rec["feasible"] == "true",
            )
        )
    return rows


AXIS_LABELS = {"t_max": "mission time threshold T_max (s)", "snr_threshold_db": "SNR threshold (dB)"}
METHOD_LABELS = {"proposed": "proposed", "shortest_time": "shortest path", "genetic": "genetic algorithm"}


def sweep_svg(rows: Sequence[SweepRow], axis: str) -> str:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.fonttype"] = "path"
    plt.rcParams["svg.hashsalt"] = "handover-uav"
    fig, ax = plt.subplots(figsize=(5, 3.8))
    markers = {"proposed": "o", "shortest_time": "s", "genetic": "^"}
    for method in dict.fromkeys(r.method for r in rows):
        pts = [(r.axis_value, r.handovers) for r in rows if r.method == method and r.handovers is not None]
        if pts:
            xs, ys = zip(*pts)
            ax.plot(xs, ys, marker=markers.get(method, "x"), label=METHOD_LABELS.get(method, method))
    ax.set_xlabel(AXIS_LABELS[axis])
    ax.set_ylabel("number of handovers")
    ax.yaxis.get_major_locator().set_params(integer=True)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()


def cmd_sweep(args) -> int:
    if args.spec:
        spec = SweepSpec.load(args.spec)
    else:
        if not (args.axis and args.values and args.scenario):
            raise InputError("sweep needs --spec or all of --axis, --values and --scenario")
        try:
            values = tuple(float(v) for v in args.values.split(","))
        except ValueError as exc:
            raise InputError(f"bad --values: {exc}") from exc
        methods = tuple(args.methods.split(",")) if args.methods else METHODS
        spec = SweepSpec(args.axis, values, args.scenario, methods)
    scenario = load_scenario(spec.base_scenario)
    solver_cfg, ga_cfg = load_config(args.config)
    if args.seed is not None:
        ga_cfg = GaConfig(**{**asdict(ga_cfg), "seed": args.seed})
    rows = run_sweep(scenario, spec, solver_cfg, ga_cfg, args.jobs)
    out = Path(args.out or "sweep.csv")
    out.write_text(sweep_csv(rows), encoding="utf-8")
    out.with_suffix(".svg").write_text(sweep_svg(rows, spec.axis), encoding="utf-8")
    print(f"wrote {out} and {out.with_suffix('.svg')}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global flags; SUPPRESS keeps them from clobbering values given earlier
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=d(None), help="scenario seed (gen) or GA seed (plan, sweep)")
    p.add_argument("--config", default=d(None), help="JSON file with 'solver' and 'genetic' sections")
    p.add_argument("--out", default=d(None), help="output path (default: stdout, or sweep.csv for sweep)")
    p.add_argument("--format", choices=("json", "csv"), default=d("json"))
    p.add_argument("-v", "--verbose", action="store_true", default=d(False))
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    p = argparse.ArgumentParser(prog="handover-uav", description=__doc__, parents=[_global_flags(suppress=False)])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a random scenario file")
    g.add_argument("--region", type=float, default=10_000.0, help="square side in meters")
    g.add_argument("--mix", default=None, help="name:count:power_dbm:height_m[,...]; default: 1 large, 2 medium, 17 small")
    g.add_argument("--t-max", type=float, default=None)
    g.set_defaults(func=cmd_gen)

    pl = sub.add_parser("plan", parents=[common], help="plan a trajectory")
    pl.add_argument("scenario")
    pl.add_argument("--method", choices=METHODS, default="proposed")
    pl.add_argument("--k", type=int, default=None, help="number of K-shortest candidates")
    pl.add_argument("--max-dual-iters", type=int, default=None)
    pl.add_argument("--dt", type=float, default=1.0, help="sample spacing for --format csv")
    pl.set_defaults(func=cmd_plan)

    v = sub.add_parser("validate", parents=[common], help="check a plan against a scenario")
    v.add_argument("scenario")
    v.add_argument("plan")
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("sweep", parents=[common], help="handovers versus T_max or SNR threshold")
    s.add_argument("--spec", default=None, help="sweep spec JSON (axis, values, base_scenario, methods)")
    s.add_argument("--scenario", default=None)
    s.add_argument("--axis", choices=AXES, default=None)
    s.add_argument("--values", default=None, help="comma separated, strictly monotone")
    s.add_argument("--methods", default=None, help="comma separated subset of " + ",".join(METHODS))
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "gen" and args.seed is None:
        args.seed = 0
    try:
        return args.func(args)
    except (InputError, InvalidAssociation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
