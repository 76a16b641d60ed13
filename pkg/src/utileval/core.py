"""Core data model: scored datasets, cost coefficients, decision rules, reports.

Every downstream module shares the same decision convention: a score is turned
into a positive prediction exactly when it is greater than or equal to the
threshold.  Scores are probabilities (or probability-like values) in [0, 1];
thresholds are unrestricted reals so that an "accept nothing" rule can be
expressed by a threshold strictly above every observed score.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

__all__ = [
    "ValidationError",
    "DegenerateDataError",
    "CostCoefficients",
    "LabeledScores",
    "DecisionRule",
    "ConfusionCounts",
    "EvalReport",
    "confusion_at",
    "validate",
]


class ValidationError(ValueError):
    """Raised when inputs violate a documented precondition."""


class DegenerateDataError(ValueError):
    """Raised when data is too degenerate for a statistic to be defined."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def _as_float_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValidationError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    return arr


def _as_binary_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    out = np.asarray(arr, dtype=np.float64)
    if not np.all(np.isfinite(out)):
        raise ValidationError(f"{name} contains non-finite values")
    ints = out.astype(np.int64)
    if np.any(out != ints) or np.any((ints != 0) & (ints != 1)):
        raise ValidationError(f"{name} values must be 0 or 1")
    return ints


@dataclass(frozen=True)
class CostCoefficients:
    """Rewards and penalties for the four decision outcomes.

    ``a11`` rewards true positives, ``a00`` true negatives; ``a01`` penalizes
    false positives and ``a10`` false negatives.  All four are non-negative and
    at least one must be strictly positive.  Each may be a scalar (constant
    mode) or a per-sample vector (contextual mode); mixing is allowed and
    scalars broadcast against the vectors.
    """

    a11: float | np.ndarray
    a01: float | np.ndarray
    a10: float | np.ndarray
    a00: float | np.ndarray

    def __post_init__(self) -> None:
        n = None
        for name in ("a11", "a01", "a10", "a00"):
            raw = getattr(self, name)
            arr = np.asarray(raw, dtype=np.float64)
            if arr.ndim == 0:
                value = float(arr)
                if not math.isfinite(value):
                    raise ValidationError(f"coefficient {name} is not finite")
                if value < 0.0:
                    raise ValidationError(f"coefficient {name} must be >= 0, got {value}")
                object.__setattr__(self, name, value)
            elif arr.ndim == 1:
                if arr.size == 0:
                    raise ValidationError(f"coefficient {name} must be non-empty")
                if not np.all(np.isfinite(arr)):
                    raise ValidationError(f"coefficient {name} contains non-finite values")
                if np.any(arr < 0.0):
                    raise ValidationError(f"coefficient {name} must be >= 0 everywhere")
                if n is not None and arr.size != n:
                    raise ValidationError(
                        f"coefficient length mismatch: {name} has {arr.size}, expected {n}"
                    )
                n = arr.size
                object.__setattr__(self, name, _readonly(arr))
            else:
                raise ValidationError(f"coefficient {name} must be scalar or one-dimensional")
        if all(np.max(np.asarray(getattr(self, name))) == 0.0 for name in ("a11", "a01", "a10", "a00")):
            raise ValidationError("all cost coefficients are zero; at least one must be positive")

    @classmethod
    def zero_one(cls) -> "CostCoefficients":
        """Plain accuracy: unit reward for being right, no explicit penalties."""
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def constant(cls, a11: float, a01: float, a10: float, a00: float) -> "CostCoefficients":
        return cls(float(a11), float(a01), float(a10), float(a00))

    @property
    def is_constant(self) -> bool:
        return all(isinstance(getattr(self, name), float) for name in ("a11", "a01", "a10", "a00"))

    @property
    def n_samples(self) -> int | None:
        """Vector length in contextual mode, or None when fully constant."""
        for name in ("a11", "a01", "a10", "a00"):
            value = getattr(self, name)
            if isinstance(value, np.ndarray):
                return int(value.size)
        return None

    def as_vectors(self, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Broadcast all four coefficients to length-``n`` float vectors."""
        own = self.n_samples
        if own is not None and own != n:
            raise ValidationError(f"coefficient length {own} does not match data length {n}")
        out = []
        for name in ("a11", "a01", "a10", "a00"):
            value = getattr(self, name)
            if isinstance(value, np.ndarray):
                out.append(value)
            else:
                out.append(np.full(n, value))
        return tuple(out)

    def take(self, indices: np.ndarray) -> "CostCoefficients":
        """Row-subset contextual coefficients; constants pass through."""
        if self.is_constant:
            return self
        parts = []
        for name in ("a11", "a01", "a10", "a00"):
            value = getattr(self, name)
            parts.append(value[indices] if isinstance(value, np.ndarray) else value)
        return CostCoefficients(*parts)


@dataclass(frozen=True)
class LabeledScores:
    """A scored, labeled dataset plus optional side information.

    ``scores`` must lie in [0, 1]; ``labels`` are binary.  ``group`` (binary)
    supports group-wise analyses, ``reference_scores`` hold a second scorer to
    compare rankings against, ``context`` carries named real columns (for
    example age), and ``coefficients`` may hold per-row utility coefficients
    read from data files.  Arrays are normalized to read-only float/int views;
    instances are immutable and safe to share across threads.
    """

    scores: np.ndarray
    labels: np.ndarray
    group: np.ndarray | None = None
    reference_scores: np.ndarray | None = None
    context: Mapping[str, np.ndarray] = field(default_factory=dict)
    coefficients: CostCoefficients | None = None

    def __post_init__(self) -> None:
        scores = _as_float_vector(self.scores, "scores")
        if np.any((scores < 0.0) | (scores > 1.0)):
            bad = int(np.flatnonzero((scores < 0.0) | (scores > 1.0))[0])
            raise ValidationError(
                f"score out of range at row {bad}: {scores[bad]!r} not in [0, 1]"
            )
        labels = _as_binary_vector(self.labels, "labels")
        n = scores.size
        if labels.size != n:
            raise ValidationError(
                f"length mismatch: {n} scores but {labels.size} labels"
            )
        object.__setattr__(self, "scores", _readonly(scores))
        object.__setattr__(self, "labels", _readonly(labels))
        if self.group is not None:
            group = _as_binary_vector(self.group, "group")
            if group.size != n:
                raise ValidationError(f"length mismatch: {n} rows but {group.size} group values")
            object.__setattr__(self, "group", _readonly(group))
        if self.reference_scores is not None:
            ref = _as_float_vector(self.reference_scores, "reference_scores")
            if ref.size != n:
                raise ValidationError(
                    f"length mismatch: {n} rows but {ref.size} reference scores"
                )
            object.__setattr__(self, "reference_scores", _readonly(ref))
        ctx = {}
        for key, values in dict(self.context).items():
            col = _as_float_vector(values, f"context column {key!r}")
            if col.size != n:
                raise ValidationError(
                    f"length mismatch: {n} rows but {col.size} values in context column {key!r}"
                )
            ctx[key] = _readonly(col)
        object.__setattr__(self, "context", ctx)
        if self.coefficients is not None:
            cn = self.coefficients.n_samples
            if cn is not None and cn != n:
                raise ValidationError(
                    f"length mismatch: {n} rows but {cn} coefficient rows"
                )

    @property
    def n(self) -> int:
        return int(self.scores.size)

    @property
    def n_positive(self) -> int:
        return int(self.labels.sum())

    @property
    def n_negative(self) -> int:
        return self.n - self.n_positive

    def take(self, indices) -> "LabeledScores":
        """Row subset (used by split and resampling code); keeps all columns."""
        idx = np.asarray(indices, dtype=np.int64)
        return LabeledScores(
            scores=self.scores[idx],
            labels=self.labels[idx],
            group=None if self.group is None else self.group[idx],
            reference_scores=None
            if self.reference_scores is None
            else self.reference_scores[idx],
            context={k: v[idx] for k, v in self.context.items()},
            coefficients=None if self.coefficients is None else self.coefficients.take(idx),
        )


def validate(data: LabeledScores) -> LabeledScores:
    """Re-run all construction-time checks and hand the dataset back.

    Construction already validates, so this is primarily useful after external
    code has produced a ``LabeledScores`` through unpickling or similar paths.
    """
    if not isinstance(data, LabeledScores):
        raise ValidationError(f"expected LabeledScores, got {type(data).__name__}")
    LabeledScores.__post_init__(data)
    return data


@dataclass(frozen=True)
class DecisionRule:
    """Threshold rule: predict positive iff score >= threshold."""

    threshold: float

    def __post_init__(self) -> None:
        t = float(self.threshold)
        if not math.isfinite(t):
            raise ValidationError("threshold must be finite")
        object.__setattr__(self, "threshold", t)

    def apply(self, scores: np.ndarray) -> np.ndarray:
        """Boolean prediction vector under the inclusive >= convention."""
        return np.asarray(scores) >= self.threshold


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "fn", "tn"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValidationError(f"{name} must be a non-negative integer")
            object.__setattr__(self, name, int(value))

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def confusion_at(data: LabeledScores, rule: DecisionRule) -> ConfusionCounts:
    """Count the four outcomes of applying ``rule`` to ``data``."""
    predicted = rule.apply(data.scores)
    positive = data.labels == 1
    tp = int(np.count_nonzero(predicted & positive))
    fp = int(np.count_nonzero(predicted & ~positive))
    fn = int(np.count_nonzero(~predicted & positive))
    tn = int(np.count_nonzero(~predicted & ~positive))
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def _check_curve(name: str, points) -> list[tuple[float, float]]:
    cleaned = []
    prev_x = -math.inf
    for point in points:
        x, y = (float(point[0]), float(point[1]))
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValidationError(f"curve {name!r} contains non-finite point ({x}, {y})")
        if x < prev_x:
            raise ValidationError(f"curve {name!r} is not ordered by x at x={x}")
        prev_x = x
        cleaned.append((x, y))
    return cleaned


@dataclass(frozen=True)
class EvalReport:
    """Structured evaluation result: flat metrics, curves, and intervals.

    ``metrics`` maps metric name to value; ``curves`` maps curve name to an
    x-ordered list of (x, y) points; ``intervals`` maps a name such as
    ``"auc@95"`` to a (low, high, level) triple.  Serialization uses shortest
    round-trip float representation, so every value survives a JSON round trip
    bit-exactly (within the usual 17 significant digits of a double).
    """

    metrics: dict[str, float]
    curves: dict[str, list[tuple[float, float]]] = field(default_factory=dict)
    intervals: dict[str, tuple[float, float, float]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        metrics = {}
        for key, value in dict(self.metrics).items():
            value = float(value)
            if not math.isfinite(value):
                raise ValidationError(f"metric {key!r} is not finite")
            metrics[str(key)] = value
        object.__setattr__(self, "metrics", metrics)
        curves = {str(k): _check_curve(k, v) for k, v in dict(self.curves).items()}
        object.__setattr__(self, "curves", curves)
        intervals = {}
        for key, triple in dict(self.intervals).items():
            low, high, level = (float(triple[0]), float(triple[1]), float(triple[2]))
            if not (math.isfinite(low) and math.isfinite(high)):
                raise ValidationError(f"interval {key!r} is not finite")
            if low > high:
                raise ValidationError(f"interval {key!r} has low {low} > high {high}")
            if not 0.0 < level < 1.0:
                raise ValidationError(f"interval {key!r} has level {level} outside (0, 1)")
            intervals[str(key)] = (low, high, level)
        object.__setattr__(self, "intervals", intervals)

    def to_dict(self) -> dict:
        return {
            "metrics": dict(self.metrics),
            "curves": {k: [[x, y] for x, y in v] for k, v in self.curves.items()},
            "intervals": {
                k: {"low": lo, "high": hi, "level": level}
                for k, (lo, hi, level) in self.intervals.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)
