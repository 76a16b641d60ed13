"""Command line interface.

Six subcommands cover the common workflows: ``evaluate`` one score file,
``compare`` several scorers on shared rows, ``simulate`` the built-in
synthetic study, ``sweep-c`` a one-parameter cost family, ``tune`` kNN by two
selection criteria, and ``equity`` for capacity-constrained selection.

Every command writes one structured JSON report (including a run manifest
with the full configuration, seeds and input digests) plus flat CSV tables
for anything curve-shaped.  Outputs carry no timestamps and all randomness is
seed-derived, so re-running a command with identical inputs and options
produces byte-identical files.  Exit codes: 0 on success, 2 on input or
option validation failures, 3 when the data is statistically degenerate for
the requested analysis.
"""

from __future__ import annotations

import argparse
import sys
from importlib.metadata import PackageNotFoundError, version as _dist_version
from pathlib import Path

import numpy as np

from .core import (
    CostCoefficients,
    DecisionRule,
    DegenerateDataError,
    EvalReport,
    LabeledScores,
    ValidationError,
)
from .dataio import (
    file_digest,
    read_bonus_table,
    read_features,
    read_scores,
    write_csv,
    write_json,
)
from .metrics import (
    accuracy,
    auc_rank,
    brier,
    calibration_curve,
    ece,
    net_trust,
    roc_points,
)
from .ranking import (
    EquityUtility,
    equity_brute_force,
    equity_select,
    preserves_ranking,
    preserves_ranking_by_group,
)
from .simstudy import (
    CLASSIFIERS,
    NORMAL_METHOD,
    SimStudyConfig,
    generate_realization,
    run_study,
    utility_threshold_curves,
)
from .stats import BootstrapConfig, bootstrap_ci, paired_max_utility_test, sem
from .learners import tune_and_compare
from .utility import (
    _candidate_counts,
    _utility_from_counts,
    age_discounted_coeffs,
    bayes_threshold,
    cost_family,
    utility_curve,
)

try:
    VERSION = _dist_version("utileval")
except PackageNotFoundError:  # running from a source tree
    VERSION = "0.1.0"

_INTERVAL_METRICS = ("auc", "brier", "accuracy", "ece", "net_trust", "u_max")


def _resolve_utility(spec: str, data: LabeledScores | None = None, age=None) -> CostCoefficients:
    """Interpret the --utility option."""
    if spec == "zero-one":
        return CostCoefficients.zero_one()
    if spec.startswith("c:"):
        try:
            c = float(spec[2:])
        except ValueError:
            raise ValidationError(f"invalid cost parameter in --utility {spec!r}") from None
        return cost_family(c)
    if spec == "age-contextual":
        if data is not None:
            return age_discounted_coeffs(data)
        if age is None:
            raise ValidationError(
                "--utility age-contextual requires an 'age' column in the input"
            )
        return age_discounted_coeffs(
            LabeledScores(
                scores=np.zeros(len(age)),
                labels=np.zeros(len(age), dtype=np.int64),
                context={"age": age},
            )
        )
    if spec == "columns":
        if data is None or data.coefficients is None:
            raise ValidationError(
                "--utility columns requires a11,a01,a10,a00 columns in the score file"
            )
        return data.coefficients
    raise ValidationError(
        f"unknown --utility {spec!r}; expected zero-one, c:<value>, "
        "age-contextual or columns"
    )


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _manifest(args, inputs, outputs) -> dict:
    options = {
        key: (str(value) if isinstance(value, Path) else value)
        for key, value in vars(args).items()
        if key != "func"
    }
    return {
        "tool": {"name": "utileval", "version": VERSION},
        "command": args.command,
        "options": options,
        "inputs": {str(path): file_digest(path) for path in inputs},
        "outputs": sorted(str(name) for name in outputs),
    }


def _unique_names(paths) -> list[str]:
    names = []
    for path in paths:
        stem = Path(path).stem
        name = stem
        suffix = 2
        while name in names:
            name = f"{stem}_{suffix}"
            suffix += 1
        names.append(name)
    return names


def _metric_intervals(data, coefficients, replicates, seed, bins):
    """One bootstrap run per metric; both interval levels share its replicates."""
    intervals = {}
    diagnostics = {}
    config = BootstrapConfig(replicates=replicates, level=0.95, seed=seed)
    for metric in _INTERVAL_METRICS:
        result = bootstrap_ci(data, metric, config, coefficients=coefficients, bins=bins)
        low68, high68 = np.percentile(result.values, [16.0, 84.0])
        intervals[f"{metric}@68"] = (float(low68), float(high68), 0.68)
        intervals[f"{metric}@95"] = (result.low, result.high, 0.95)
        diagnostics[metric] = {"redraws": result.redraws}
    return intervals, diagnostics


def cmd_evaluate(args) -> int:
    out = _out_dir(args)
    data = read_scores(args.scores, delimiter=args.delimiter)
    coefficients = _resolve_utility(args.utility, data=data)
    curve = utility_curve(data, coefficients)
    roc = roc_points(data)
    calibration = calibration_curve(data, bins=args.bins)
    metrics = {
        "auc": auc_rank(data),
        "brier": brier(data),
        "accuracy": accuracy(data, DecisionRule(0.5)),
        "ece": ece(calibration),
        "net_trust": net_trust(data),
        "u_max": curve.max_utility,
        "argmax_threshold": curve.best_threshold,
    }
    if coefficients.is_constant:
        metrics["analytic_threshold"] = bayes_threshold(coefficients)
    intervals: dict = {}
    diagnostics: dict = {}
    if args.replicates:
        intervals, diagnostics = _metric_intervals(
            data, coefficients, args.replicates, args.seed, args.bins
        )
    report = EvalReport(
        metrics=metrics,
        curves={
            "roc": [(float(x), float(y)) for x, y in roc],
            "calibration": [
                (b.mean_predicted, b.observed_frequency) for b in calibration.bins
            ],
            "utility": curve.points,
        },
        intervals=intervals,
    )
    checks = {}
    if data.reference_scores is not None:
        checks["preserves_reference_ranking"] = preserves_ranking(
            data.scores, data.reference_scores
        )
        if data.group is not None:
            checks["preserves_reference_ranking_by_group"] = preserves_ranking_by_group(
                data.scores, data.reference_scores, data.group
            )
    outputs = [
        "evaluate_report.json",
        "evaluate_roc.csv",
        "evaluate_calibration.csv",
        "evaluate_utility.csv",
    ]
    payload = {
        "manifest": _manifest(args, [args.scores], outputs),
        "report": report.to_dict(),
        "checks": checks,
        "bootstrap": diagnostics,
    }
    write_json(out / "evaluate_report.json", payload)
    write_csv(out / "evaluate_roc.csv", ["fpr", "tpr"], roc)
    write_csv(
        out / "evaluate_calibration.csv",
        ["bin_index", "mean_predicted", "observed_frequency", "count"],
        [
            (b.bin_index, b.mean_predicted, b.observed_frequency, b.count)
            for b in calibration.bins
        ],
    )
    write_csv(
        out / "evaluate_utility.csv",
        ["threshold", "utility"],
        zip(curve.thresholds, curve.utilities),
    )
    return 0


_COMPARE_METRICS = ("auc", "accuracy", "brier", "net_trust", "u_max")


def cmd_compare(args) -> int:
    if len(args.scores) < 2:
        raise ValidationError("compare requires at least two score files")
    out = _out_dir(args)
    datasets = [read_scores(path, delimiter=args.delimiter) for path in args.scores]
    names = _unique_names(args.scores)
    first = datasets[0]
    for name, data in zip(names[1:], datasets[1:]):
        if data.n != first.n or not np.array_equal(data.labels, first.labels):
            raise ValidationError(
                f"score files must describe the same rows: labels of {name!r} "
                "differ from the first file"
            )
    coefficients = _resolve_utility(args.utility, data=first)
    table = {}
    for name, data in zip(names, datasets):
        curve = utility_curve(data, coefficients)
        entry = {
            "auc": auc_rank(data),
            "accuracy": accuracy(data, DecisionRule(0.5)),
            "brier": brier(data),
            "net_trust": net_trust(data),
            "u_max": curve.max_utility,
            "argmax_threshold": curve.best_threshold,
        }
        if args.replicates:
            intervals, _ = _metric_intervals(
                data, coefficients, args.replicates, args.seed, args.bins
            )
            entry["intervals"] = {
                key: {"low": low, "high": high, "level": level}
                for key, (low, high, level) in intervals.items()
            }
        table[name] = entry
    pairwise = []
    config = BootstrapConfig(replicates=max(args.replicates, 100), level=0.95, seed=args.seed)
    for i in range(len(datasets)):
        for j in range(i + 1, len(datasets)):
            result = paired_max_utility_test(datasets[i], datasets[j], coefficients, config)
            pairwise.append(
                {
                    "a": names[i],
                    "b": names[j],
                    "diff_u_max": result.diff,
                    "low": result.low,
                    "high": result.high,
                    "level": result.level,
                    "p_value": result.p_value,
                }
            )
    winners = {}
    for metric in _COMPARE_METRICS:
        ordered = sorted(
            table, key=lambda name: table[name][metric], reverse=metric != "brier"
        )
        winners[metric] = ordered[0]
    outputs = ["compare_report.json", "compare_metrics.csv"]
    payload = {
        "manifest": _manifest(args, list(args.scores), outputs),
        "models": table,
        "paired_u_max_tests": pairwise,
        "winners": winners,
    }
    write_json(out / "compare_report.json", payload)
    rows = []
    for name in names:
        for metric in _COMPARE_METRICS:
            entry = table[name]
            interval = entry.get("intervals", {}).get(f"{metric}@95")
            rows.append(
                (
                    name,
                    metric,
                    entry[metric],
                    "" if interval is None else interval["low"],
                    "" if interval is None else interval["high"],
                )
            )
    write_csv(
        out / "compare_metrics.csv",
        ["model", "metric", "value", "low95", "high95"],
        rows,
    )
    return 0


def cmd_simulate(args) -> int:
    out = _out_dir(args)
    config = SimStudyConfig(
        n_samples=args.samples,
        n_realizations=args.realizations,
        master_seed=args.seed,
    )
    summary = run_study(config)
    zero_one_bands = utility_threshold_curves(
        config, CostCoefficients.zero_one(), grid_size=args.grid
    )
    cost_bands = utility_threshold_curves(
        config, cost_family(args.cost), grid_size=args.grid
    )
    # aggregate per-bin calibration across realizations
    observed: dict = {name: {} for name in CLASSIFIERS}
    predicted: dict = {name: {} for name in CLASSIFIERS}
    counts: dict = {name: {} for name in CLASSIFIERS}
    for r in range(config.n_realizations):
        realization = generate_realization(config, r)
        for name in CLASSIFIERS:
            curve = calibration_curve(realization.dataset(name), bins=args.bins)
            for b in curve.bins:
                observed[name].setdefault(b.bin_index, []).append(b.observed_frequency)
                predicted[name].setdefault(b.bin_index, []).append(b.mean_predicted)
                counts[name].setdefault(b.bin_index, []).append(b.count)
    calibration_rows = []
    for name in CLASSIFIERS:
        for bin_index in sorted(observed[name]):
            obs = np.asarray(observed[name][bin_index])
            p16, p84 = np.percentile(obs, [16.0, 84.0])
            calibration_rows.append(
                (
                    name,
                    bin_index,
                    float(np.mean(predicted[name][bin_index])),
                    float(obs.mean()),
                    float(p16),
                    float(p84),
                    float(np.mean(counts[name][bin_index])),
                )
            )
    outputs = [
        "simulate_summary.json",
        "simulate_distributions.csv",
        "simulate_calibration.csv",
        "simulate_utility_zero_one.csv",
        "simulate_utility_cost.csv",
    ]
    rate = summary.positive_rate
    payload = {
        "manifest": _manifest(args, [], outputs),
        "config": {
            "n_samples": config.n_samples,
            "n_realizations": config.n_realizations,
            "master_seed": config.master_seed,
            "normal_method": NORMAL_METHOD,
            "cost_parameter": args.cost,
        },
        "bands": summary.bands,
        "positive_rate": {
            "mean": float(rate.mean()),
            "p16": float(np.percentile(rate, 16.0)),
            "p50": float(np.percentile(rate, 50.0)),
            "p84": float(np.percentile(rate, 84.0)),
        },
    }
    write_json(out / "simulate_summary.json", payload)
    metric_names = sorted(next(iter(summary.values.values())).keys())
    rows = []
    for name in CLASSIFIERS:
        for r in range(config.n_realizations):
            rows.append(
                (name, r, *(summary.values[name][metric][r] for metric in metric_names))
            )
    write_csv(
        out / "simulate_distributions.csv",
        ["classifier", "realization", *metric_names],
        rows,
    )
    write_csv(
        out / "simulate_calibration.csv",
        [
            "classifier",
            "bin_index",
            "mean_predicted",
            "observed_mean",
            "observed_p16",
            "observed_p84",
            "mean_count",
        ],
        calibration_rows,
    )
    for bands, filename in (
        (zero_one_bands, "simulate_utility_zero_one.csv"),
        (cost_bands, "simulate_utility_cost.csv"),
    ):
        rows = []
        for name in CLASSIFIERS:
            stats = bands.stats[name]
            for t, mean, p16, p84 in zip(
                bands.thresholds, stats["mean"], stats["p16"], stats["p84"]
            ):
                rows.append((name, t, mean, p16, p84))
        write_csv(
            out / filename,
            ["classifier", "threshold", "mean_utility", "p16", "p84"],
            rows,
        )
    return 0


def _parse_grid(text: str, what: str) -> list[float]:
    try:
        values = [float(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise ValidationError(f"invalid {what} grid {text!r}") from None
    if not values:
        raise ValidationError(f"empty {what} grid")
    return values


def cmd_sweep_c(args) -> int:
    out = _out_dir(args)
    datasets = [read_scores(path, delimiter=args.delimiter) for path in args.scores]
    names = _unique_names(args.scores)
    first = datasets[0]
    for name, data in zip(names[1:], datasets[1:]):
        if data.n != first.n or not np.array_equal(data.labels, first.labels):
            raise ValidationError(
                f"score files must describe the same rows: labels of {name!r} "
                "differ from the first file"
            )
    grid = _parse_grid(args.grid, "cost")
    for c in grid:
        if c < 0:
            raise ValidationError(f"cost parameters must be >= 0, got {c}")

    def sweep_maxima(data: LabeledScores) -> list[float]:
        thresholds, tp, fp, fn, tn = _candidate_counts(data)
        out = []
        for c in grid:
            family = cost_family(c)
            utilities = _utility_from_counts(
                tp, fp, fn, tn, data.n, family.a11, family.a01, family.a10, family.a00
            )
            out.append(float(np.max(utilities)))
        return out

    points = {name: sweep_maxima(data) for name, data in zip(names, datasets)}
    resampled = {name: np.empty((args.replicates, len(grid))) for name in names}
    if args.replicates:
        rng = np.random.default_rng(np.random.SeedSequence([int(args.seed)]))
        for b in range(args.replicates):
            idx = rng.integers(0, first.n, first.n)
            for name, data in zip(names, datasets):
                resampled[name][b] = sweep_maxima(data.take(idx))
    rows = []
    models = {}
    for name in names:
        per_c = []
        for column, c in enumerate(grid):
            entry = {"c": c, "u_max": points[name][column]}
            if args.replicates >= 2:
                values = resampled[name][:, column]
                entry["u_max_mean"] = float(values.mean())
                entry["u_max_sem"] = sem(values)
            per_c.append(entry)
            rows.append(
                (
                    name,
                    c,
                    points[name][column],
                    entry.get("u_max_mean", ""),
                    entry.get("u_max_sem", ""),
                )
            )
        models[name] = per_c
    outputs = ["sweep_c_report.json", "sweep_c.csv"]
    payload = {
        "manifest": _manifest(args, list(args.scores), outputs),
        "grid": grid,
        "replicates": args.replicates,
        "models": models,
    }
    write_json(out / "sweep_c_report.json", payload)
    write_csv(
        out / "sweep_c.csv",
        ["model", "c", "u_max", "u_max_mean", "u_max_sem"],
        rows,
    )
    return 0


def cmd_tune(args) -> int:
    out = _out_dir(args)
    table = read_features(args.features, delimiter=args.delimiter)
    if args.utility == "columns":
        raise ValidationError("--utility columns is not available for feature files")
    coefficients = _resolve_utility(args.utility, age=table.age)
    k_grid = [int(k) for k in _parse_grid(args.k_grid, "k")]
    result = tune_and_compare(
        table.features,
        table.labels,
        k_grid,
        coefficients,
        repeats=args.repeats,
        seed=args.seed,
        n_folds=args.folds,
        test_fraction=args.test_fraction,
        grid_size=args.grid,
    )
    outputs = ["tune_report.json", "tune_cv.csv", "tune_utility.csv"]
    payload = {
        "manifest": _manifest(args, [args.features], outputs),
        "k_grid": list(result.k_grid),
        "repeats": result.repeats,
        "chosen_k": {
            "auc": result.chosen_k_auc,
            "accuracy": result.chosen_k_accuracy,
        },
        "max_utility": {
            "auc": {
                "per_repeat": result.max_utility_auc,
                "mean": result.mean_max_utility_auc,
                "sem": result.sem_max_utility_auc,
            },
            "accuracy": {
                "per_repeat": result.max_utility_accuracy,
                "mean": result.mean_max_utility_accuracy,
                "sem": result.sem_max_utility_accuracy,
            },
        },
    }
    write_json(out / "tune_report.json", payload)
    cv_rows = []
    sem_auc = result._sem(result.cv_auc)
    sem_accuracy = result._sem(result.cv_accuracy)
    for column, k in enumerate(result.k_grid):
        cv_rows.append(
            (
                k,
                float(result.cv_auc[:, column].mean()),
                "" if sem_auc is None else float(sem_auc[column]),
                float(result.cv_accuracy[:, column].mean()),
                "" if sem_accuracy is None else float(sem_accuracy[column]),
            )
        )
    write_csv(
        out / "tune_cv.csv",
        ["k", "mean_cv_auc", "sem_cv_auc", "mean_cv_accuracy", "sem_cv_accuracy"],
        cv_rows,
    )
    utility_rows = []
    for criterion, grid_values, grid_sem in (
        ("auc", result.utility_grid_auc, result.utility_grid_sem_auc),
        ("accuracy", result.utility_grid_accuracy, result.utility_grid_sem_accuracy),
    ):
        means = grid_values.mean(axis=0)
        for column, threshold in enumerate(result.thresholds):
            utility_rows.append(
                (
                    criterion,
                    float(threshold),
                    float(means[column]),
                    "" if grid_sem is None else float(grid_sem[column]),
                )
            )
    write_csv(
        out / "tune_utility.csv",
        ["criterion", "threshold", "mean_utility", "sem_utility"],
        utility_rows,
    )
    return 0


def cmd_equity(args) -> int:
    out = _out_dir(args)
    data = read_scores(args.scores, delimiter=args.delimiter)
    if data.reference_scores is None:
        raise ValidationError("equity selection requires a reference_score column")
    if data.group is None:
        raise ValidationError("equity selection requires a group column")
    bonus = read_bonus_table(args.bonus)
    benefit = data.context.get("benefit", data.reference_scores)
    spec = EquityUtility(benefit=benefit, group_bonus=bonus)
    result = equity_select(data.reference_scores, data.group, spec)
    oracle = None
    if args.check_oracle:
        brute = equity_brute_force(data.reference_scores, data.group, spec)
        oracle = {
            "total_utility": brute.total_utility,
            "group1_count": brute.group1_count,
            "chosen": brute.chosen,
            "agrees": bool(
                brute.total_utility == result.total_utility
                and np.array_equal(brute.chosen, result.chosen)
            ),
        }
    outputs = ["equity_report.json", "equity_profile.csv"]
    payload = {
        "manifest": _manifest(args, [args.scores, args.bonus], outputs),
        "capacity": spec.capacity,
        "benefit_source": "benefit" if "benefit" in data.context else "reference_score",
        "chosen": result.chosen,
        "group1_count": result.group1_count,
        "total_utility": result.total_utility,
        "utility_by_group1_count": result.utility_by_group1_count,
        "oracle": oracle,
    }
    write_json(out / "equity_report.json", payload)
    write_csv(
        out / "equity_profile.csv",
        ["group1_count", "utility", "feasible"],
        [
            (j, value, int(value == value))
            for j, value in enumerate(result.utility_by_group1_count)
        ],
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    common.add_argument(
        "--threads",
        type=int,
        default=1,
        help="reserved; execution is single-threaded and deterministic",
    )
    common.add_argument(
        "--out-dir", default=".", help="directory for report files (default .)"
    )
    common.add_argument(
        "--delimiter", default=",", help="input field delimiter (default ,)"
    )
    utility_help = (
        "utility family: zero-one, c:<value>, age-contextual, or columns "
        "(read a11,a01,a10,a00 from the file)"
    )

    parser = argparse.ArgumentParser(
        prog="utileval",
        description="Utility-focused evaluation of probabilistic binary classifiers.",
    )
    parser.add_argument("--version", action="version", version=f"utileval {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "evaluate", parents=[common], help="evaluate one score file"
    )
    p.add_argument("scores", help="delimited file with score and label columns")
    p.add_argument("--utility", default="zero-one", help=utility_help)
    p.add_argument("--bins", type=int, default=10, help="calibration bins (default 10)")
    p.add_argument(
        "--replicates",
        type=int,
        default=0,
        help="bootstrap replicates for intervals (default 0 = no intervals)",
    )
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser(
        "compare", parents=[common], help="compare scorers sharing the same rows"
    )
    p.add_argument("scores", nargs="+", help="two or more score files with identical labels")
    p.add_argument("--utility", default="zero-one", help=utility_help)
    p.add_argument("--bins", type=int, default=10, help="calibration bins (default 10)")
    p.add_argument(
        "--replicates", type=int, default=1000, help="bootstrap replicates (default 1000)"
    )
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser(
        "simulate", parents=[common], help="run the built-in synthetic study"
    )
    p.add_argument("--samples", type=int, default=15000, help="samples per realization")
    p.add_argument("--realizations", type=int, default=400, help="number of realizations")
    p.add_argument(
        "--cost", type=float, default=1.0, help="cost parameter for the second utility panel"
    )
    p.add_argument("--bins", type=int, default=10, help="calibration bins (default 10)")
    p.add_argument("--grid", type=int, default=201, help="threshold grid size (default 201)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser(
        "sweep-c", parents=[common], help="attainable utility across a cost grid"
    )
    p.add_argument("scores", nargs="+", help="score files with identical labels")
    p.add_argument(
        "--grid",
        default="0,0.25,0.5,0.75,1,1.5,2,3",
        help="comma-separated cost parameters (default 0,0.25,0.5,0.75,1,1.5,2,3)",
    )
    p.add_argument(
        "--replicates",
        type=int,
        default=200,
        help="bootstrap resamples for mean/SEM columns (default 200; 0 = point only)",
    )
    p.set_defaults(func=cmd_sweep_c)

    p = sub.add_parser(
        "tune", parents=[common], help="select k for kNN by AUC and by accuracy"
    )
    p.add_argument("features", help="delimited file with label and feature columns")
    p.add_argument(
        "--k-grid",
        default="5,15,45,85,151,201",
        help="comma-separated neighbor counts (default 5,15,45,85,151,201)",
    )
    p.add_argument("--folds", type=int, default=20, help="cross-validation folds (default 20)")
    p.add_argument("--repeats", type=int, default=20, help="train/test repetitions (default 20)")
    p.add_argument(
        "--test-fraction", type=float, default=0.3, help="held-out fraction (default 0.3)"
    )
    p.add_argument("--grid", type=int, default=201, help="threshold grid size (default 201)")
    p.add_argument("--utility", default="zero-one", help=utility_help)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser(
        "equity", parents=[common], help="capacity-constrained selection across two groups"
    )
    p.add_argument("scores", help="score file with reference_score and group columns")
    p.add_argument("--bonus", required=True, help="file with capacity+1 nondecreasing bonus values")
    p.add_argument(
        "--check-oracle",
        action="store_true",
        help="also run the exhaustive oracle (at most 20 rows) and report agreement",
    )
    p.set_defaults(func=cmd_equity)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegenerateDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
