"""Expected-utility evaluation of threshold rules, and exhaustive sweeps.

The empirical utility of a rule is the sample mean of per-outcome rewards and
penalties.  A sweep evaluates every decision vector a threshold rule can
produce on the data: one candidate threshold per unique score plus a sentinel
strictly above the maximum (the all-reject rule).  Because predictions use the
inclusive >= convention, this candidate set realizes every achievable decision
vector, so the sweep maximum dominates the utility of any real threshold.

Both the sweep and the pointwise evaluator reduce to the same arithmetic
expression over exact integer confusion counts (constant coefficients) or the
same elementwise selection and mean (per-sample coefficients).  The maximum is
therefore not merely close to, but bitwise equal to, the best pointwise value —
a property the rest of the package relies on, e.g. to show that strictly
increasing score transforms leave the attainable utility exactly unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, logit

from .core import (
    CostCoefficients,
    DecisionRule,
    LabeledScores,
    ValidationError,
    confusion_at,
)
from .ranking import preserves_ranking

__all__ = [
    "UtilityCurve",
    "empirical_utility",
    "utility_curve",
    "utility_at_thresholds",
    "bayes_threshold",
    "cost_family",
    "age_discounted_coeffs",
    "monotone_transform",
]

_SWEEP_CHUNK = 128


def _utility_from_counts(tp, fp, fn, tn, n, a11, a01, a10, a00):
    # shared between the pointwise evaluator (scalars) and the sweep (vectors);
    # identical operation order keeps the two bit-for-bit consistent
    return (a11 * tp - a01 * fp - a10 * fn + a00 * tn) / n


def _contributions(
    data: LabeledScores, coefficients: CostCoefficients
) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample utility contribution when predicted positive / negative."""
    a11, a01, a10, a00 = coefficients.as_vectors(data.n)
    positive = data.labels == 1
    when_accepted = np.where(positive, a11, -a01)
    when_rejected = np.where(positive, -a10, a00)
    return when_accepted, when_rejected


def empirical_utility(
    data: LabeledScores, coefficients: CostCoefficients, rule: DecisionRule
) -> float:
    """Mean utility of applying ``rule`` to ``data`` under ``coefficients``."""
    if coefficients.is_constant:
        counts = confusion_at(data, rule)
        return float(
            _utility_from_counts(
                counts.tp,
                counts.fp,
                counts.fn,
                counts.tn,
                counts.n,
                coefficients.a11,
                coefficients.a01,
                coefficients.a10,
                coefficients.a00,
            )
        )
    when_accepted, when_rejected = _contributions(data, coefficients)
    predicted = rule.apply(data.scores)
    return float(np.where(predicted, when_accepted, when_rejected).mean())


@dataclass(frozen=True)
class UtilityCurve:
    """Utility at every candidate threshold, in increasing threshold order.

    ``best_threshold`` is the smallest threshold attaining ``max_utility``;
    the final candidate sits strictly above the largest score and encodes the
    all-reject rule.
    """

    thresholds: np.ndarray
    utilities: np.ndarray
    best_threshold: float
    max_utility: float

    @property
    def points(self) -> list[tuple[float, float]]:
        return [(float(t), float(u)) for t, u in zip(self.thresholds, self.utilities)]


def _candidate_counts(data: LabeledScores):
    """Unique ascending thresholds with confusion counts, plus all-reject."""
    n = data.n
    order = np.argsort(data.scores, kind="mergesort")
    sorted_scores = data.scores[order]
    sorted_labels = data.labels[order]
    prefix_pos = np.concatenate([[0], np.cumsum(sorted_labels)])
    unique_scores, first_index = np.unique(sorted_scores, return_index=True)
    n_pos = data.n_positive
    n_neg = data.n_negative
    tp = n_pos - prefix_pos[first_index]
    accepted = n - first_index
    fp = accepted - tp
    sentinel = math.nextafter(float(sorted_scores[-1]), math.inf)
    thresholds = np.append(unique_scores, sentinel)
    tp = np.append(tp, 0)
    fp = np.append(fp, 0)
    return thresholds, tp, fp, n_pos - tp, n_neg - fp


def utility_curve(data: LabeledScores, coefficients: CostCoefficients) -> UtilityCurve:
    """Evaluate the utility of every achievable threshold rule on ``data``."""
    if coefficients.is_constant:
        thresholds, tp, fp, fn, tn = _candidate_counts(data)
        utilities = _utility_from_counts(
            tp,
            fp,
            fn,
            tn,
            data.n,
            coefficients.a11,
            coefficients.a01,
            coefficients.a10,
            coefficients.a00,
        )
    else:
        thresholds, _, _, _, _ = _candidate_counts(data)
        when_accepted, when_rejected = _contributions(data, coefficients)
        utilities = np.empty(thresholds.size)
        for start in range(0, thresholds.size, _SWEEP_CHUNK):
            block = thresholds[start : start + _SWEEP_CHUNK]
            decided = data.scores[None, :] >= block[:, None]
            utilities[start : start + _SWEEP_CHUNK] = np.where(
                decided, when_accepted[None, :], when_rejected[None, :]
            ).mean(axis=1)
    best = int(np.argmax(utilities))
    return UtilityCurve(
        thresholds=thresholds,
        utilities=np.asarray(utilities),
        best_threshold=float(thresholds[best]),
        max_utility=float(utilities[best]),
    )


def utility_at_thresholds(
    data: LabeledScores, coefficients: CostCoefficients, thresholds
) -> np.ndarray:
    """Empirical utility of ``data`` at each of an arbitrary threshold vector.

    Vectorized but arithmetically identical to calling
    :func:`empirical_utility` once per threshold.
    """
    grid = np.asarray(thresholds, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise ValidationError("thresholds must be a non-empty one-dimensional array")
    if not np.all(np.isfinite(grid)):
        raise ValidationError("thresholds contain non-finite values")
    if coefficients.is_constant:
        order = np.argsort(data.scores, kind="mergesort")
        sorted_scores = data.scores[order]
        prefix_pos = np.concatenate([[0], np.cumsum(data.labels[order])])
        first_accepted = np.searchsorted(sorted_scores, grid, side="left")
        n_pos = data.n_positive
        n_neg = data.n_negative
        tp = n_pos - prefix_pos[first_accepted]
        fp = (data.n - first_accepted) - tp
        return np.asarray(
            _utility_from_counts(
                tp,
                fp,
                n_pos - tp,
                n_neg - fp,
                data.n,
                coefficients.a11,
                coefficients.a01,
                coefficients.a10,
                coefficients.a00,
            )
        )
    when_accepted, when_rejected = _contributions(data, coefficients)
    out = np.empty(grid.size)
    for start in range(0, grid.size, _SWEEP_CHUNK):
        block = grid[start : start + _SWEEP_CHUNK]
        decided = data.scores[None, :] >= block[:, None]
        out[start : start + _SWEEP_CHUNK] = np.where(
            decided, when_accepted[None, :], when_rejected[None, :]
        ).mean(axis=1)
    return out


def bayes_threshold(coefficients: CostCoefficients) -> float:
    """Optimal decision threshold on calibrated scores, constant mode only.

    With non-negative rewards/penalties the expected-utility-maximizing rule
    accepts whenever the true positive probability reaches
    ``(a01 + a00) / (a11 + a00 + a10 + a01)``.
    """
    if not coefficients.is_constant:
        raise ValidationError(
            "analytic threshold requires constant coefficients; "
            "per-sample coefficients induce per-sample thresholds"
        )
    numerator = coefficients.a01 + coefficients.a00
    denominator = (
        coefficients.a11 + coefficients.a00 + coefficients.a10 + coefficients.a01
    )
    return numerator / denominator


def cost_family(c: float) -> CostCoefficients:
    """One-parameter cost family: unit rewards for correct decisions, a false
    positive costs ``c`` and a false negative costs ``c / 2``.

    ``c = 0`` reduces to plain accuracy.
    """
    c = float(c)
    if not math.isfinite(c) or c < 0.0:
        raise ValidationError(f"cost parameter must be a finite value >= 0, got {c}")
    return CostCoefficients.constant(1.0, c, 0.5 * c, 1.0)


def age_discounted_coeffs(data: LabeledScores) -> CostCoefficients:
    """Per-sample coefficients whose error costs shrink linearly with age.

    Requires an ``age`` context column in years on [0, 100].  Correct outcomes
    earn a unit reward; a false positive costs ``3 * (1 - age/100)`` and a
    false negative ``0.5 * (1 - age/100)``.
    """
    age = data.context.get("age")
    if age is None:
        raise ValidationError("age-discounted coefficients require an 'age' context column")
    if np.any((age < 0.0) | (age > 100.0)):
        bad = int(np.flatnonzero((age < 0.0) | (age > 100.0))[0])
        raise ValidationError(
            f"age out of range at row {bad}: {age[bad]!r} not in [0, 100]"
        )
    weight = 1.0 - age / 100.0
    return CostCoefficients(1.0, 3.0 * weight, 0.5 * weight, 1.0)


def monotone_transform(scores: np.ndarray, kind: str, parameter) -> np.ndarray:
    """Apply a strictly increasing map from [0, 1] into [0, 1].

    Kinds: ``"affine"`` with parameter ``(scale, offset)``, ``scale > 0``;
    ``"power"`` with exponent parameter ``> 0``; ``"logit-shift"`` adding a
    constant on the log-odds scale.  The output is checked to preserve the
    exact order and tie structure of the input — a transform that collapses
    distinct floats is rejected — so ranking metrics and attainable utilities
    are provably unchanged.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 1 or scores.size == 0:
        raise ValidationError("scores must be a non-empty one-dimensional array")
    if not np.all(np.isfinite(scores)) or np.any((scores < 0.0) | (scores > 1.0)):
        raise ValidationError("scores must lie in [0, 1]")
    if kind == "affine":
        try:
            scale, offset = (float(parameter[0]), float(parameter[1]))
        except (TypeError, IndexError) as exc:
            raise ValidationError(
                "affine transform expects a (scale, offset) parameter pair"
            ) from exc
        if not math.isfinite(scale) or scale <= 0.0:
            raise ValidationError(f"affine scale must be > 0, got {scale}")
        out = scale * scores + offset
    elif kind == "power":
        exponent = float(parameter)
        if not math.isfinite(exponent) or exponent <= 0.0:
            raise ValidationError(f"power exponent must be > 0, got {exponent}")
        out = scores**exponent
    elif kind == "logit-shift":
        shift = float(parameter)
        if not math.isfinite(shift):
            raise ValidationError("logit shift must be finite")
        with np.errstate(divide="ignore"):
            out = expit(logit(scores) + shift)
    else:
        raise ValidationError(f"unknown transform kind {kind!r}")
    if np.any((out < 0.0) | (out > 1.0)) or not np.all(np.isfinite(out)):
        raise ValidationError(
            f"{kind} transform with parameter {parameter!r} leaves [0, 1]"
        )
    if not preserves_ranking(out, scores):
        raise ValidationError(
            f"{kind} transform with parameter {parameter!r} is not strictly "
            "increasing on these scores (distinct values collapsed)"
        )
    return out
