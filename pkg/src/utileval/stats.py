"""Resampling-based uncertainty: percentile bootstrap and a paired test.

All resampling draws whole rows jointly, so scores, labels and any per-sample
side information stay aligned.  Intervals are plain percentile intervals of
the replicate values; with a shared seed the replicate stream is identical
across levels, which makes narrower intervals exact subsets of wider ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CostCoefficients,
    DecisionRule,
    DegenerateDataError,
    LabeledScores,
    ValidationError,
)
from .metrics import accuracy, auc_rank, brier, calibration_curve, ece, net_trust
from .utility import utility_curve

__all__ = [
    "BootstrapConfig",
    "BootstrapResult",
    "PairedTestResult",
    "bootstrap_ci",
    "paired_max_utility_test",
    "sem",
    "BOOTSTRAP_METRICS",
]

_MIN_INTERVAL_REPLICATES = 100


@dataclass(frozen=True)
class BootstrapConfig:
    """Replicate count, interval level and seed for bootstrap procedures."""

    replicates: int = 1000
    level: float = 0.95
    seed: int = 0

    def __post_init__(self) -> None:
        if int(self.replicates) != self.replicates or self.replicates < 1:
            raise ValidationError(f"replicates must be a positive integer, got {self.replicates}")
        object.__setattr__(self, "replicates", int(self.replicates))
        if not 0.0 < self.level < 1.0:
            raise ValidationError(f"level must be in (0, 1), got {self.level}")


def _metric_accuracy(data: LabeledScores, _: CostCoefficients | None, bins: int) -> float:
    return accuracy(data, DecisionRule(0.5))


def _metric_auc(data: LabeledScores, _: CostCoefficients | None, bins: int) -> float:
    return auc_rank(data)


def _metric_brier(data: LabeledScores, _: CostCoefficients | None, bins: int) -> float:
    return brier(data)


def _metric_ece(data: LabeledScores, _: CostCoefficients | None, bins: int) -> float:
    return ece(calibration_curve(data, bins=bins))


def _metric_net_trust(data: LabeledScores, _: CostCoefficients | None, bins: int) -> float:
    return net_trust(data)


def _metric_max_utility(
    data: LabeledScores, coefficients: CostCoefficients | None, bins: int
) -> float:
    if coefficients is None:
        raise ValidationError("the u_max metric requires cost coefficients")
    return utility_curve(data, coefficients).max_utility


BOOTSTRAP_METRICS = {
    "auc": _metric_auc,
    "brier": _metric_brier,
    "accuracy": _metric_accuracy,
    "ece": _metric_ece,
    "net_trust": _metric_net_trust,
    "u_max": _metric_max_utility,
}

# metrics undefined on single-class resamples, which are redrawn
_NEEDS_BOTH_CLASSES = {"auc"}


@dataclass(frozen=True)
class BootstrapResult:
    """Point estimate with a percentile interval and resampling diagnostics."""

    point: float
    low: float
    high: float
    level: float
    replicates: int
    redraws: int
    values: np.ndarray


def _resample_coefficients(
    data: LabeledScores, coefficients: CostCoefficients | None, idx: np.ndarray
) -> CostCoefficients | None:
    if coefficients is None:
        return None
    return coefficients.take(idx)


def bootstrap_ci(
    data: LabeledScores,
    metric: str,
    config: BootstrapConfig,
    coefficients: CostCoefficients | None = None,
    bins: int = 10,
) -> BootstrapResult:
    """Percentile bootstrap interval for a named metric.

    Rows are resampled with replacement; resamples on which the metric is
    undefined (a single-class draw for AUC) are redrawn and counted in
    ``redraws``.  Interval output requires at least 100 replicates.
    """
    if metric not in BOOTSTRAP_METRICS:
        raise ValidationError(
            f"unknown metric {metric!r}; expected one of {sorted(BOOTSTRAP_METRICS)}"
        )
    if config.replicates < _MIN_INTERVAL_REPLICATES:
        raise ValidationError(
            f"interval estimation requires >= {_MIN_INTERVAL_REPLICATES} replicates, "
            f"got {config.replicates}"
        )
    evaluate = BOOTSTRAP_METRICS[metric]
    point = evaluate(data, coefficients, bins)
    rng = np.random.default_rng(np.random.SeedSequence([int(config.seed)]))
    n = data.n
    needs_both = metric in _NEEDS_BOTH_CLASSES
    values = np.empty(config.replicates)
    redraws = 0
    budget = 100 * config.replicates
    for b in range(config.replicates):
        while True:
            idx = rng.integers(0, n, n)
            resample = data.take(idx)
            if needs_both and (resample.n_positive == 0 or resample.n_negative == 0):
                redraws += 1
                budget -= 1
                if budget <= 0:
                    raise DegenerateDataError(
                        f"bootstrap for {metric!r} exhausted its redraw budget; "
                        "the data is too close to single-class"
                    )
                continue
            values[b] = evaluate(resample, _resample_coefficients(data, coefficients, idx), bins)
            break
    tail = 100.0 * (1.0 - config.level) / 2.0
    low, high = np.percentile(values, [tail, 100.0 - tail])
    return BootstrapResult(
        point=float(point),
        low=float(low),
        high=float(high),
        level=config.level,
        replicates=config.replicates,
        redraws=redraws,
        values=values,
    )


@dataclass(frozen=True)
class PairedTestResult:
    """Paired bootstrap comparison of attainable utility between two scorers."""

    diff: float
    low: float
    high: float
    p_value: float
    level: float
    replicates: int
    diffs: np.ndarray


def paired_max_utility_test(
    data_a: LabeledScores,
    data_b: LabeledScores,
    coefficients: CostCoefficients,
    config: BootstrapConfig,
) -> PairedTestResult:
    """Bootstrap the difference in sweep-maximal utility on shared rows.

    Both datasets must score the same labeled rows; each replicate resamples
    one set of row indices and applies it to both sides, so the replicate
    differences are paired.  The two-sided p-value is twice the smaller tail
    fraction of the replicate differences around zero, clamped to
    [2/replicates, 1].
    """
    if data_a.n != data_b.n:
        raise ValidationError(
            f"paired test needs equal sizes, got {data_a.n} and {data_b.n}"
        )
    if not np.array_equal(data_a.labels, data_b.labels):
        raise ValidationError("paired test needs identical labels on both sides")
    if config.replicates < _MIN_INTERVAL_REPLICATES:
        raise ValidationError(
            f"interval estimation requires >= {_MIN_INTERVAL_REPLICATES} replicates, "
            f"got {config.replicates}"
        )
    point = (
        utility_curve(data_a, coefficients).max_utility
        - utility_curve(data_b, coefficients).max_utility
    )
    rng = np.random.default_rng(np.random.SeedSequence([int(config.seed)]))
    n = data_a.n
    diffs = np.empty(config.replicates)
    for b in range(config.replicates):
        idx = rng.integers(0, n, n)
        resample_a = data_a.take(idx)
        resample_b = data_b.take(idx)
        sub = coefficients.take(idx)
        diffs[b] = (
            utility_curve(resample_a, sub).max_utility
            - utility_curve(resample_b, sub).max_utility
        )
    tail = 100.0 * (1.0 - config.level) / 2.0
    low, high = np.percentile(diffs, [tail, 100.0 - tail])
    frac_low = np.count_nonzero(diffs <= 0.0) / config.replicates
    frac_high = np.count_nonzero(diffs >= 0.0) / config.replicates
    p_value = 2.0 * min(frac_low, frac_high)
    p_value = min(1.0, max(2.0 / config.replicates, p_value))
    return PairedTestResult(
        diff=float(point),
        low=float(low),
        high=float(high),
        p_value=float(p_value),
        level=config.level,
        replicates=config.replicates,
        diffs=diffs,
    )


def sem(values) -> float:
    """Standard error of the mean: sample standard deviation over sqrt(n)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 2:
        raise ValidationError("sem requires a one-dimensional array of at least 2 values")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("sem input contains non-finite values")
    return float(arr.std(ddof=1) / math.sqrt(arr.size))
