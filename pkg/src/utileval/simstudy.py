"""Synthetic three-scorer study on a known generative model.

Each realization draws three independent standard normal features and labels
from a logistic model, then scores the samples with three classifiers that are
interesting to compare:

``bayes``
    the true conditional positive probability;
``shifted``
    the same log-odds plus a constant — perfectly order-preserving but
    systematically miscalibrated;
``coarse``
    the calibrated probability given only two of the three features — well
    calibrated but strictly less informative.

Normal variates are produced by applying the inverse normal CDF to uniforms
from a PCG64 generator ("inverse-cdf" method), and each realization derives
its own stream from (master_seed, realization_index), so results are
bit-reproducible for a fixed configuration no matter how realizations are
scheduled.  The drawing order within a realization is fixed: the three feature
vectors, then one uniform vector for the labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit, ndtri

from .core import CostCoefficients, DecisionRule, LabeledScores, ValidationError
from .metrics import brier, calibration_curve, ece, net_trust
from .utility import utility_at_thresholds, utility_curve

__all__ = [
    "CLASSIFIERS",
    "NORMAL_METHOD",
    "BAND_PERCENTILES",
    "SimStudyConfig",
    "Realization",
    "StudySummary",
    "ThresholdBands",
    "generate_realization",
    "run_study",
    "utility_threshold_curves",
]

CLASSIFIERS = ("bayes", "shifted", "coarse")
NORMAL_METHOD = "inverse-cdf"
BAND_PERCENTILES = (16.0, 50.0, 84.0)

_METRICS = (
    "max_utility",
    "accuracy_best",
    "accuracy_at_half",
    "brier",
    "ece",
    "net_trust",
)


@dataclass(frozen=True)
class SimStudyConfig:
    n_samples: int = 15000
    n_realizations: int = 400
    master_seed: int = 0
    coefficients: CostCoefficients = field(default_factory=CostCoefficients.zero_one)

    def __post_init__(self) -> None:
        if self.n_samples < 10:
            raise ValidationError(f"n_samples must be >= 10, got {self.n_samples}")
        if self.n_realizations < 1:
            raise ValidationError(
                f"n_realizations must be >= 1, got {self.n_realizations}"
            )


@dataclass(frozen=True)
class Realization:
    """Scores of the three classifiers and the sampled labels."""

    bayes_scores: np.ndarray
    shifted_scores: np.ndarray
    coarse_scores: np.ndarray
    labels: np.ndarray

    def dataset(self, classifier: str) -> LabeledScores:
        if classifier not in CLASSIFIERS:
            raise ValidationError(
                f"unknown classifier {classifier!r}; expected one of {CLASSIFIERS}"
            )
        return LabeledScores(
            scores=getattr(self, f"{classifier}_scores"), labels=self.labels
        )


def _standard_normals(rng: np.random.Generator, n: int) -> np.ndarray:
    u = rng.random(n)
    # rng.random can return exactly 0.0; nudge into (0, 1) for the inverse CDF
    u = np.where(u > 0.0, u, 2.0**-54)
    return ndtri(u)


def generate_realization(config: SimStudyConfig, index: int) -> Realization:
    """Draw realization ``index`` of the study, deterministically."""
    if index < 0 or index >= config.n_realizations:
        raise ValidationError(
            f"realization index {index} outside [0, {config.n_realizations})"
        )
    rng = np.random.default_rng(
        np.random.SeedSequence([int(config.master_seed), int(index)])
    )
    n = config.n_samples
    x1 = _standard_normals(rng, n)
    x2 = _standard_normals(rng, n)
    x3 = _standard_normals(rng, n)
    log_odds = 0.5 * x1 - x2 + 0.5 * x3
    bayes = expit(log_odds)
    shifted = expit(log_odds + 1.0)
    coarse = expit(0.5 * x1 - x2)
    labels = (rng.random(n) < bayes).astype(np.int64)
    return Realization(
        bayes_scores=bayes,
        shifted_scores=shifted,
        coarse_scores=coarse,
        labels=labels,
    )


@dataclass(frozen=True)
class StudySummary:
    """Per-realization metric values and their percentile bands.

    ``values[classifier][metric]`` is a vector with one entry per realization;
    ``bands[classifier][metric]`` is the (16th, 50th, 84th) percentile triple.
    ``accuracy_best`` is the accuracy at the accuracy-maximizing threshold
    (identical to ``max_utility`` when the configured coefficients are the
    accuracy coefficients); ``accuracy_at_half`` fixes the threshold at 0.5.
    """

    config: SimStudyConfig
    normal_method: str
    values: dict[str, dict[str, np.ndarray]]
    positive_rate: np.ndarray
    bands: dict[str, dict[str, tuple[float, float, float]]]


def _zero_one_is_configured(config: SimStudyConfig) -> bool:
    c = config.coefficients
    return c.is_constant and (c.a11, c.a01, c.a10, c.a00) == (1.0, 0.0, 0.0, 1.0)


def run_study(config: SimStudyConfig) -> StudySummary:
    """Evaluate all realizations and summarize with 16/50/84 bands."""
    zero_one = CostCoefficients.zero_one()
    reuse_sweep = _zero_one_is_configured(config)
    values = {
        name: {metric: np.empty(config.n_realizations) for metric in _METRICS}
        for name in CLASSIFIERS
    }
    positive_rate = np.empty(config.n_realizations)
    half = DecisionRule(0.5)
    for r in range(config.n_realizations):
        realization = generate_realization(config, r)
        positive_rate[r] = realization.labels.mean()
        for name in CLASSIFIERS:
            data = realization.dataset(name)
            curve = utility_curve(data, config.coefficients)
            accuracy_best = (
                curve.max_utility
                if reuse_sweep
                else utility_curve(data, zero_one).max_utility
            )
            store = values[name]
            store["max_utility"][r] = curve.max_utility
            store["accuracy_best"][r] = accuracy_best
            store["accuracy_at_half"][r] = np.mean(
                half.apply(data.scores) == (data.labels == 1)
            )
            store["brier"][r] = brier(data)
            store["ece"][r] = ece(calibration_curve(data, bins=10))
            store["net_trust"][r] = net_trust(data)
    bands = {
        name: {
            metric: tuple(np.percentile(series, BAND_PERCENTILES))
            for metric, series in values[name].items()
        }
        for name in CLASSIFIERS
    }
    return StudySummary(
        config=config,
        normal_method=NORMAL_METHOD,
        values=values,
        positive_rate=positive_rate,
        bands=bands,
    )


@dataclass(frozen=True)
class ThresholdBands:
    """Pointwise utility-versus-threshold summary across realizations.

    ``stats[classifier]`` holds ``mean``, ``p16`` and ``p84`` vectors aligned
    with ``thresholds``.
    """

    thresholds: np.ndarray
    coefficients: CostCoefficients
    stats: dict[str, dict[str, np.ndarray]]


def utility_threshold_curves(
    config: SimStudyConfig,
    coefficients: CostCoefficients | None = None,
    grid_size: int = 201,
) -> ThresholdBands:
    """Mean and 16/84 bands of utility on a fixed threshold grid over [0, 1]."""
    if grid_size < 2:
        raise ValidationError(f"grid_size must be >= 2, got {grid_size}")
    if coefficients is None:
        coefficients = config.coefficients
    thresholds = np.linspace(0.0, 1.0, grid_size)
    curves = {
        name: np.empty((config.n_realizations, grid_size)) for name in CLASSIFIERS
    }
    for r in range(config.n_realizations):
        realization = generate_realization(config, r)
        for name in CLASSIFIERS:
            curves[name][r] = utility_at_thresholds(
                realization.dataset(name), coefficients, thresholds
            )
    stats = {}
    for name in CLASSIFIERS:
        block = curves[name]
        p16, p84 = np.percentile(block, [16.0, 84.0], axis=0)
        stats[name] = {"mean": block.mean(axis=0), "p16": p16, "p84": p84}
    return ThresholdBands(
        thresholds=thresholds, coefficients=coefficients, stats=stats
    )
