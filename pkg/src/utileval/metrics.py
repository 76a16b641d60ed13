"""Ranking and calibration metrics for scored binary data.

Two deliberately independent AUC estimators are provided: a direct pairwise
comparison (the definition, quadratic in the class sizes) and a mid-rank
estimator (the fast path).  They agree to within accumulated rounding error on
every dataset with both classes present, and the test suite holds them to 1e-12
of each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    ConfusionCounts,
    DecisionRule,
    DegenerateDataError,
    LabeledScores,
    ValidationError,
    confusion_at,
)

__all__ = [
    "auc_pairwise",
    "auc_rank",
    "roc_points",
    "brier",
    "accuracy",
    "CalibrationBin",
    "CalibrationCurve",
    "calibration_curve",
    "ece",
    "net_trust",
]

_PAIRWISE_CHUNK = 512


def _split_classes(data: LabeledScores) -> tuple[np.ndarray, np.ndarray]:
    positive = data.scores[data.labels == 1]
    negative = data.scores[data.labels == 0]
    if positive.size == 0 or negative.size == 0:
        raise DegenerateDataError(
            "AUC undefined: dataset contains only one class"
        )
    return positive, negative


def auc_pairwise(data: LabeledScores) -> float:
    """AUC as the mean pairwise comparison outcome.

    Every (positive, negative) score pair contributes 1 when the positive
    outscores the negative, 1/2 on a tie, and 0 otherwise.  Quadratic cost,
    chunked to bound memory; intended as the reference implementation.
    """
    positive, negative = _split_classes(data)
    total = 0.0
    for start in range(0, positive.size, _PAIRWISE_CHUNK):
        block = positive[start : start + _PAIRWISE_CHUNK, None] - negative[None, :]
        total += float(np.count_nonzero(block > 0)) + 0.5 * float(
            np.count_nonzero(block == 0)
        )
    return total / (float(positive.size) * float(negative.size))


def _mid_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing their average (mid) rank."""
    n = values.size
    _, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    starts = ends - counts
    # a tie run occupying sorted positions [start, end) has mid-rank
    # (start + 1 + end) / 2 in 1-based terms
    mid = (starts + ends + 1) / 2.0
    return mid[inverse]


def auc_rank(data: LabeledScores) -> float:
    """AUC via the rank-sum identity with mid-ranks for ties."""
    if data.n_positive == 0 or data.n_negative == 0:
        raise DegenerateDataError("AUC undefined: dataset contains only one class")
    ranks = _mid_ranks(data.scores)
    n_pos = data.n_positive
    n_neg = data.n_negative
    rank_sum = float(ranks[data.labels == 1].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (float(n_pos) * float(n_neg))


def roc_points(data: LabeledScores) -> np.ndarray:
    """ROC curve as an (m, 2) array of (fpr, tpr) points.

    One point per unique score used as an inclusive threshold, traversed from
    high to low, preceded by (0, 0); the lowest threshold accepts everything so
    the final point is (1, 1).  Trapezoidal area under these points equals the
    mid-rank AUC.
    """
    if data.n_positive == 0 or data.n_negative == 0:
        raise DegenerateDataError("ROC undefined: dataset contains only one class")
    order = np.argsort(data.scores, kind="mergesort")[::-1]
    sorted_scores = data.scores[order]
    sorted_labels = data.labels[order]
    cum_tp = np.cumsum(sorted_labels)
    cum_fp = np.cumsum(1 - sorted_labels)
    # inclusive thresholds realize the cumulative counts at the end of each
    # equal-score run
    run_ends = np.flatnonzero(np.diff(sorted_scores) != 0)
    run_ends = np.concatenate([run_ends, [data.n - 1]])
    tpr = cum_tp[run_ends] / data.n_positive
    fpr = cum_fp[run_ends] / data.n_negative
    return np.concatenate([[[0.0, 0.0]], np.column_stack([fpr, tpr])])


def brier(data: LabeledScores) -> float:
    """Mean squared difference between score and label."""
    diff = data.scores - data.labels
    return float(np.mean(diff * diff))


def accuracy(data: LabeledScores, rule: DecisionRule) -> float:
    """Fraction of correct predictions under ``rule``."""
    counts: ConfusionCounts = confusion_at(data, rule)
    return (counts.tp + counts.tn) / counts.n


@dataclass(frozen=True)
class CalibrationBin:
    bin_index: int
    mean_predicted: float
    observed_frequency: float
    count: int


@dataclass(frozen=True)
class CalibrationCurve:
    """Occupied equal-width score bins with their observed positive rates."""

    bins: tuple[CalibrationBin, ...]
    n_bins: int
    n: int


def calibration_curve(data: LabeledScores, bins: int = 10) -> CalibrationCurve:
    """Equal-width calibration bins over [0, 1]; empty bins are omitted.

    Samples are processed in score order so the per-bin sums — and therefore
    the curve and anything derived from it — are exactly invariant to
    permutations of the input rows.
    """
    if bins < 2:
        raise ValidationError(f"bins must be >= 2, got {bins}")
    order = np.argsort(data.scores, kind="mergesort")
    scores = data.scores[order]
    labels = data.labels[order]
    index = np.minimum((scores * bins).astype(np.int64), bins - 1)
    out = []
    for b in range(bins):
        mask = index == b
        count = int(np.count_nonzero(mask))
        if count == 0:
            continue
        out.append(
            CalibrationBin(
                bin_index=b,
                mean_predicted=float(scores[mask].sum() / count),
                observed_frequency=float(labels[mask].sum() / count),
                count=count,
            )
        )
    return CalibrationCurve(bins=tuple(out), n_bins=int(bins), n=data.n)


def ece(curve: CalibrationCurve) -> float:
    """Expected calibration error: count-weighted mean absolute bin gap."""
    if curve.n == 0 or not curve.bins:
        raise ValidationError("calibration curve is empty")
    total = 0.0
    for b in curve.bins:
        total += (b.count / curve.n) * abs(b.observed_frequency - b.mean_predicted)
    return total


def net_trust(data: LabeledScores) -> float:
    """Confidence-weighted agreement score.

    Each sample is predicted at threshold 0.5; its confidence is the predicted
    class probability (score for a positive call, one minus score otherwise).
    Correct predictions contribute the confidence, incorrect ones contribute
    one minus the confidence; the result is the mean contribution.
    """
    predicted = data.scores >= 0.5
    confidence = np.where(predicted, data.scores, 1.0 - data.scores)
    correct = predicted == (data.labels == 1)
    trust = np.where(correct, confidence, 1.0 - confidence)
    return float(np.mean(trust))
