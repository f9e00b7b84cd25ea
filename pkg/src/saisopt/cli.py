"""Command-line front end.

Subcommands: `list` (benchmark catalog), `run` (one experiment), `sweep`
(population/iteration pairs under a fixed budget), `ablate` (full mask vs
single-operator runs with averaged convergence curves), and `compare`
(SAIS vs SOS under the same budget, with the evaluation-cost ratio).

Exit codes: 0 on success (non-convergence is a result, not an error), 2
for invalid flags or inconsistent configuration, 1 for runtime failures.
All statistics come from the harness; this layer only parses flags and
renders records.  JSON and CSV renderings carry the same full-precision
values; human-readable tables round to 6 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Optional

from .benchmarks import catalog_records, list_problems, make_problem
from .core import ConfigurationError, ContractViolationError, RunAbortedError
from .harness import (
    ExperimentSpec,
    SummaryStats,
    average_curve,
    compare_cost,
    run_experiment,
    sweep,
)
from .sais import OPERATORS, SaisConfig
from .sos import SosConfig

SCHEMA_VERSION = "1"
OUT_DIR_ENV = "SAISOPT_OUT_DIR"

SUMMARY_COLUMNS = [
    "problem_index", "problem_name", "algorithm", "mask", "pop", "iters",
    "trials", "seed", "tolerance", "success_rate", "iter_mean", "iter_std",
    "fitness_mean", "fitness_std", "mean_evals",
]

CURVE_COLUMNS = ["config_id", "iteration", "mean_best_fitness"]


def _fmt(value) -> str:
    """Full-precision scalar rendering; absent stats become literal n/a."""
    if value is None:
        return "n/a"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _mask_str(mask) -> str:
    return "+".join(mask)


def _parse_mask(text: str) -> tuple[str, ...]:
    if text.strip().lower() == "all":
        return OPERATORS
    parts = [p.strip().lower() for p in text.replace("+", ",").split(",") if p.strip()]
    return tuple(parts)


def _summary_dict(stats: SummaryStats) -> dict:
    return {
        "success_rate": stats.success_rate,
        "iteration_mean": stats.iteration_mean,
        "iteration_std": stats.iteration_std,
        "fitness_mean": stats.fitness_mean,
        "fitness_std": stats.fitness_std,
        "mean_evaluations": stats.mean_evaluations,
    }


def _summary_row(header: dict, stats: SummaryStats) -> list[str]:
    values = [
        header["problem_index"], header["problem_name"], header["algorithm"],
        header["mask"], header["pop"], header["iters"], header["trials"],
        header["seed"], header["tolerance"], stats.success_rate,
        stats.iteration_mean, stats.iteration_std, stats.fitness_mean,
        stats.fitness_std, stats.mean_evaluations,
    ]
    return [_fmt(v) for v in values]


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(record) -> str:
    return json.dumps(record, indent=2) + "\n"


def _resolve_out(path: Optional[str]) -> Optional[str]:
    if path is None:
        return None
    base = os.environ.get(OUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _emit(text: str, out: Optional[str]) -> None:
    path = _resolve_out(out)
    if path is None:
        sys.stdout.write(text)
    else:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w") as fh:
            fh.write(text)


def _sibling_path(out: Optional[str], suffix: str) -> Optional[str]:
    if out is None:
        return None
    stem, ext = os.path.splitext(out)
    return f"{stem}{suffix}{ext or '.csv'}"


def _curve_rows(config_id: str, curve) -> list[list[str]]:
    return [[config_id, str(t + 1), _fmt(float(v))] for t, v in enumerate(curve)]


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_list(args) -> int:
    records = catalog_records()
    if args.format == "json":
        _emit(_json_text({"schema_version": SCHEMA_VERSION, "problems": records}), args.out)
        return 0
    lines = [f"{'idx':>3}  {'name':<18} {'dim':>3}  {'domain':<18} {'min':>15}  {'tolerance':>9}"]
    for r in records:
        domain = f"[{r['lower']:g}, {r['upper']:g}]"
        flag = " (noisy)" if r["stochastic"] else ""
        lines.append(
            f"{r['index']:>3}  {r['name']:<18} {r['dimension']:>3}  {domain:<18} "
            f"{r['known_min']:>15.6g}  {r['tolerance']:>9.1g}{flag}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _run_header(entry, algorithm, mask, config, trials, seed, tolerance) -> dict:
    return {
        "problem_index": entry.index,
        "problem_name": entry.name,
        "algorithm": algorithm,
        "mask": _mask_str(mask) if algorithm == "sais" else "n/a",
        "pop": config.population_size,
        "iters": config.max_iterations,
        "trials": trials,
        "seed": seed,
        "tolerance": tolerance,
    }


def _effective_tolerance(entry, tolerance):
    return entry.problem.tolerance if tolerance is None else tolerance


def cmd_run(args) -> int:
    entry = make_problem(args.problem)
    mask = _parse_mask(args.mask)
    if args.algo == "sais":
        config = SaisConfig(population_size=args.pop, max_iterations=args.iters,
                            tolerance=args.tolerance, operator_mask=mask, seed=args.seed)
    else:
        config = SosConfig(population_size=args.pop, max_iterations=args.iters,
                           tolerance=args.tolerance, seed=args.seed)
    spec = ExperimentSpec(problem=args.problem, algorithm=args.algo, config=config,
                          trials=args.trials, base_seed=args.seed, budget=args.budget)
    spec.validate()

    stats, results = run_experiment(spec, workers=args.threads)
    tol = _effective_tolerance(entry, args.tolerance)
    header = _run_header(entry, args.algo, mask, config, args.trials, args.seed, tol)

    if args.format == "json":
        record = {"schema_version": SCHEMA_VERSION, "command": "run", **header,
                  "summary": _summary_dict(stats)}
        if args.per_trial:
            record["per_trial"] = [
                {"trial": k, "converged": r.converged,
                 "iterations_used": r.iterations_used,
                 "best_fitness": r.best_fitness, "evaluations": r.evaluations}
                for k, r in enumerate(results)
            ]
        if args.curve:
            curve = average_curve(results, args.iters)
            record["curve"] = [[t + 1, float(v)] for t, v in enumerate(curve)]
        _emit(_json_text(record), args.out)
    else:
        text = _csv_text(SUMMARY_COLUMNS, [_summary_row(header, stats)])
        if args.curve:
            curve = average_curve(results, args.iters)
            curve_text = _csv_text(CURVE_COLUMNS, _curve_rows("run", curve))
            side = _sibling_path(args.out, "_curves")
            if side is None:
                text = text + "\n" + curve_text
            else:
                _emit(curve_text, side)
        _emit(text, args.out)
    return 0


def _parse_pairs(text: str) -> list[tuple[int, int]]:
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        p, _, i = chunk.partition(":")
        pairs.append((int(p), int(i)))
    return pairs


def cmd_sweep(args) -> int:
    entry = make_problem(args.problem)
    pairs = _parse_pairs(args.pairs)
    if not pairs:
        raise ConfigurationError("at least one pop:iters pair is required")
    budget = int(args.budget) if args.budget is not None else None
    if budget is not None:
        for p, i in pairs:
            if p * i != budget:
                raise ConfigurationError(
                    f"budget violation: pair {p}:{i} gives {p * i}, expected {budget}"
                )

    rows = sweep(args.problem, args.algo, pairs, trials=args.trials,
                 base_seed=args.seed, budget=budget, tolerance=args.tolerance,
                 workers=args.threads)
    tol = _effective_tolerance(entry, args.tolerance)
    if args.format == "json":
        record = {
            "schema_version": SCHEMA_VERSION, "command": "sweep",
            "problem_index": entry.index, "problem_name": entry.name,
            "algorithm": args.algo, "trials": args.trials, "seed": args.seed,
            "tolerance": tol, "budget": budget,
            "rows": [{"pop": p, "iters": i, "summary": _summary_dict(stats)}
                     for (p, i), stats in rows],
        }
        _emit(_json_text(record), args.out)
    else:
        csv_rows = []
        for (p, i), stats in rows:
            cfg = SaisConfig(population_size=p, max_iterations=i) if args.algo == "sais" \
                else SosConfig(population_size=p, max_iterations=i)
            header = _run_header(entry, args.algo, OPERATORS, cfg, args.trials,
                                 args.seed, tol)
            csv_rows.append(_summary_row(header, stats))
        _emit(_csv_text(SUMMARY_COLUMNS, csv_rows), args.out)
    return 0


ABLATION_CONFIGS = (
    ("full", OPERATORS),
    ("mutualism-only", ("mutualism",)),
    ("commensalism-only", ("commensalism",)),
    ("parasitism-only", ("parasitism",)),
)


def cmd_ablate(args) -> int:
    entry = make_problem(args.problem)
    horizon = args.horizon if args.horizon is not None else args.iters
    tol = _effective_tolerance(entry, args.tolerance)

    blocks = []
    for config_id, mask in ABLATION_CONFIGS:
        config = SaisConfig(population_size=args.pop, max_iterations=args.iters,
                            tolerance=args.tolerance, operator_mask=mask, seed=args.seed)
        spec = ExperimentSpec(problem=args.problem, algorithm="sais", config=config,
                              trials=args.trials, base_seed=args.seed)
        spec.validate()
        stats, results = run_experiment(spec, workers=args.threads)
        curve = average_curve(results, horizon, mode=args.curve_mode)
        blocks.append((config_id, mask, stats, curve))

    if args.format == "json":
        record = {
            "schema_version": SCHEMA_VERSION, "command": "ablate",
            "problem_index": entry.index, "problem_name": entry.name,
            "algorithm": "sais", "pop": args.pop, "iters": args.iters,
            "trials": args.trials, "seed": args.seed, "tolerance": tol,
            "horizon": horizon,
            "configs": [
                {"config_id": cid, "mask": _mask_str(mask),
                 "summary": _summary_dict(stats),
                 "curve": [[t + 1, float(v)] for t, v in enumerate(curve)]}
                for cid, mask, stats, curve in blocks
            ],
        }
        _emit(_json_text(record), args.out)
    else:
        summary_rows = []
        curve_rows = []
        for cid, mask, stats, curve in blocks:
            config = SaisConfig(population_size=args.pop, max_iterations=args.iters)
            header = _run_header(entry, "sais", mask, config, args.trials,
                                 args.seed, tol)
            header["pop"], header["iters"] = args.pop, args.iters
            summary_rows.append(_summary_row(header, stats))
            curve_rows.extend(_curve_rows(cid, curve))
        text = _csv_text(SUMMARY_COLUMNS, summary_rows)
        curve_text = _csv_text(CURVE_COLUMNS, curve_rows)
        side = _sibling_path(args.out, "_curves")
        if side is None:
            text = text + "\n" + curve_text
        else:
            _emit(curve_text, side)
        _emit(text, args.out)
    return 0


def cmd_compare(args) -> int:
    entry = make_problem(args.problem)
    tol = _effective_tolerance(entry, args.tolerance)
    sais_config = SaisConfig(population_size=args.pop, max_iterations=args.iters,
                             tolerance=args.tolerance, seed=args.seed)
    sos_config = SosConfig(population_size=args.pop, max_iterations=args.iters,
                           tolerance=args.tolerance, seed=args.seed)
    for algo, config in (("sais", sais_config), ("sos", sos_config)):
        ExperimentSpec(problem=args.problem, algorithm=algo, config=config,
                       trials=args.trials, base_seed=args.seed).validate()

    sais_stats, sais_results = run_experiment(
        ExperimentSpec(problem=args.problem, algorithm="sais", config=sais_config,
                       trials=args.trials, base_seed=args.seed), workers=args.threads)
    sos_stats, sos_results = run_experiment(
        ExperimentSpec(problem=args.problem, algorithm="sos", config=sos_config,
                       trials=args.trials, base_seed=args.seed), workers=args.threads)

    def cost(results, n):
        vals = [(r.evaluations - n) / r.curve.shape[0] for r in results]
        return sum(vals) / len(vals)

    sais_cost = cost(sais_results, args.pop)
    sos_cost = cost(sos_results, args.pop)
    ratio = sos_cost / sais_cost

    if args.format == "json":
        record = {
            "schema_version": SCHEMA_VERSION, "command": "compare",
            "problem_index": entry.index, "problem_name": entry.name,
            "pop": args.pop, "iters": args.iters, "trials": args.trials,
            "seed": args.seed, "tolerance": tol,
            "sais": _summary_dict(sais_stats),
            "sos": _summary_dict(sos_stats),
            "cost": {"sais_evals_per_iteration": sais_cost,
                     "sos_evals_per_iteration": sos_cost,
                     "ratio": ratio},
        }
        _emit(_json_text(record), args.out)
    else:
        rows = []
        for algo, stats in (("sais", sais_stats), ("sos", sos_stats)):
            config = sais_config if algo == "sais" else sos_config
            header = _run_header(entry, algo, OPERATORS, config, args.trials,
                                 args.seed, tol)
            rows.append(_summary_row(header, stats))
        _emit(_csv_text(SUMMARY_COLUMNS, rows), args.out)
        report = (f"evals/iteration: sais={sais_cost:.6g} sos={sos_cost:.6g} "
                  f"ratio={ratio:.6g}\n")
        # keep the CSV stream clean when it goes to stdout
        (sys.stderr if args.out is None else sys.stdout).write(report)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(parser, *, algo=True) -> None:
    parser.add_argument("--problem", required=True,
                        help="catalog index (1..26) or case-insensitive name")
    if algo:
        parser.add_argument("--algo", choices=["sais", "sos"], default="sais")
    parser.add_argument("--trials", type=int, default=30)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tolerance", type=float, default=None,
                        help="override the problem's convergence tolerance")
    parser.add_argument("--out", default=None,
                        help=f"output file (relative paths join ${OUT_DIR_ENV})")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker processes for parallel trials")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="saisopt",
        description="Symbiotic artificial immune system / symbiotic organisms "
                    "search benchmark experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="print the 26-problem benchmark catalog")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("run", help="run one experiment (many seeded trials)")
    _add_common(p)
    p.add_argument("--pop", type=int, required=True)
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--mask", default="all",
                   help="operators to enable: 'all' or comma/plus-joined names")
    p.add_argument("--budget", type=int, default=None,
                   help="require pop*iters to equal this budget")
    p.add_argument("--per-trial", action="store_true", dest="per_trial",
                   help="include per-trial rows (json format)")
    p.add_argument("--curve", action="store_true",
                   help="include the averaged convergence curve")
    p.add_argument("--config", default=None,
                   help="JSON experiment spec; its keys override flags")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run pop:iters pairs under a fixed budget")
    _add_common(p)
    p.add_argument("--pairs", required=True,
                   help="comma-separated pop:iters pairs, e.g. '50:500000,500:50000'")
    p.add_argument("--budget", type=float, default=None,
                   help="every pair's pop*iters must equal this")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ablate", help="full mask vs single-operator runs + curves")
    _add_common(p, algo=False)
    p.add_argument("--pop", type=int, required=True)
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--horizon", type=int, default=None,
                   help="curve length (defaults to --iters)")
    p.add_argument("--curve-mode", choices=["hold_last", "active_only"],
                   default="hold_last", dest="curve_mode")
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("compare", help="SAIS vs SOS under identical budgets")
    _add_common(p, algo=False)
    p.add_argument("--pop", type=int, required=True)
    p.add_argument("--iters", type=int, required=True)
    p.set_defaults(func=cmd_compare)

    return parser


_CONFIG_KEYS = {
    "problem": str, "algo": str, "pop": int, "iters": int, "trials": int,
    "seed": int, "tolerance": float, "mask": str, "budget": int,
}


def _apply_config_file(args) -> None:
    if getattr(args, "config", None) is None:
        return
    with open(args.config) as fh:
        overrides = json.load(fh)
    for key, value in overrides.items():
        if key not in _CONFIG_KEYS:
            raise ConfigurationError(
                f"unknown config key {key!r}; valid: {sorted(_CONFIG_KEYS)}"
            )
        if value is not None:
            value = _CONFIG_KEYS[key](value)
        setattr(args, key, value)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_file(args)
        try:
            return args.func(args)
        except (ConfigurationError, ContractViolationError) as exc:
            parser.exit(2, f"saisopt: error: {exc}\n")
    except (ConfigurationError, ContractViolationError, OSError,
            json.JSONDecodeError) as exc:
        parser.exit(2, f"saisopt: error: {exc}\n")
    except RunAbortedError as exc:
        sys.stderr.write(f"saisopt: run failed: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
