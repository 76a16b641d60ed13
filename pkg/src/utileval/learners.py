"""Built-in reference learners: ridge-stabilized logistic regression and kNN.

These exist so evaluation experiments can be run end to end without an
external modelling stack.  Both learners standardize features using training
statistics only, which makes the fitted scores invariant (up to rounding) to
affine rescaling of the inputs.  All randomness is injected through explicit
seeds; repeated calls with the same arguments return identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .core import DegenerateDataError, LabeledScores, ValidationError
from .metrics import auc_rank
from .utility import utility_at_thresholds, utility_curve

__all__ = [
    "ConvergenceError",
    "FeatureMatrix",
    "LogisticModel",
    "fit_logistic",
    "knn_scores",
    "CvResult",
    "kfold_cv",
    "TuneResult",
    "tune_and_compare",
]


class ConvergenceError(RuntimeError):
    """Iterative fitting failed; carries the final solver diagnostics."""

    def __init__(self, message: str, iterations: int, gradient_norm: float, max_step: float):
        super().__init__(message)
        self.iterations = iterations
        self.gradient_norm = gradient_norm
        self.max_step = max_step


@dataclass(frozen=True)
class FeatureMatrix:
    """A dense feature table: values, column names, optional scaling stats.

    ``means``/``stds`` are populated once :meth:`standardize` has been applied
    and record the training-data statistics used for the transform.
    """

    values: np.ndarray
    names: tuple[str, ...]
    means: np.ndarray | None = None
    stds: np.ndarray | None = None

    @classmethod
    def from_arrays(cls, values, names=None) -> "FeatureMatrix":
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValidationError(f"feature values must be 2-D, got shape {arr.shape}")
        if arr.shape[0] == 0:
            raise ValidationError("feature matrix must have at least one row")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("feature values contain non-finite entries")
        if names is None:
            names = tuple(f"x{j}" for j in range(arr.shape[1]))
        else:
            names = tuple(str(name) for name in names)
        if len(names) != arr.shape[1]:
            raise ValidationError(
                f"{len(names)} column names for {arr.shape[1]} columns"
            )
        if len(set(names)) != len(names):
            raise ValidationError("column names must be unique")
        return cls(values=arr, names=names)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def is_standardized(self) -> bool:
        return self.means is not None

    def standardize(self) -> "FeatureMatrix":
        """Center and scale columns; constant columns are dropped entirely."""
        stds = self.values.std(axis=0)
        keep = stds > 0.0
        means = self.values.mean(axis=0)[keep]
        stds = stds[keep]
        values = (self.values[:, keep] - means) / stds
        names = tuple(name for name, k in zip(self.names, keep) if k)
        return FeatureMatrix(values=values, names=names, means=means, stds=stds)

    def transform(self, other: "FeatureMatrix") -> "FeatureMatrix":
        """Standardize ``other`` with this (already standardized) matrix's stats."""
        if not self.is_standardized:
            raise ValidationError("transform requires a standardized feature matrix")
        values = _select_columns(other, self.names)
        return FeatureMatrix(
            values=(values - self.means) / self.stds,
            names=self.names,
            means=self.means,
            stds=self.stds,
        )


def _select_columns(matrix: FeatureMatrix, names: tuple[str, ...]) -> np.ndarray:
    missing = [name for name in names if name not in matrix.names]
    if missing:
        raise ValidationError(f"feature columns missing from input: {missing}")
    index = [matrix.names.index(name) for name in names]
    return matrix.values[:, index]


def _as_features(features, context: str) -> FeatureMatrix:
    if isinstance(features, FeatureMatrix):
        return features
    return FeatureMatrix.from_arrays(np.asarray(features, dtype=np.float64))


def _binary_labels(labels, n: int) -> np.ndarray:
    arr = np.asarray(labels)
    if arr.ndim != 1 or arr.size != n:
        raise ValidationError(f"labels must be one-dimensional with {n} entries")
    out = arr.astype(np.int64)
    if np.any(np.asarray(arr, dtype=np.float64) != out) or np.any((out != 0) & (out != 1)):
        raise ValidationError("labels values must be 0 or 1")
    return out


@dataclass(frozen=True)
class LogisticModel:
    """Fitted logistic scorer with its training standardization baked in."""

    weights: np.ndarray
    intercept: float
    feature_names: tuple[str, ...]
    means: np.ndarray
    stds: np.ndarray
    iterations: int
    gradient_norm: float

    def predict_scores(self, features) -> np.ndarray:
        matrix = _as_features(features, "features")
        values = _select_columns(matrix, self.feature_names)
        z = ((values - self.means) / self.stds) @ self.weights + self.intercept
        return expit(z)


def _penalized_nll(design: np.ndarray, labels: np.ndarray, beta: np.ndarray, ridge: float) -> float:
    z = design @ beta
    return float(np.sum(np.logaddexp(0.0, z)) - labels @ z + 0.5 * ridge * (beta @ beta))


def fit_logistic(
    features,
    labels,
    ridge: float = 1e-6,
    max_iter: int = 50,
    tol: float = 1e-8,
) -> LogisticModel:
    """Fit a ridge-stabilized logistic regression by damped Newton iteration.

    Requires both classes present and more rows than retained columns.  Each
    Newton step is halved until the penalized deviance does not increase,
    which keeps the iteration stable even on linearly separated data where
    undamped steps overshoot; convergence is declared when the largest weight
    change drops below ``tol``.  Failure to converge raises
    :class:`ConvergenceError` with the final diagnostics attached.
    """
    matrix = _as_features(features, "features").standardize()
    y = _binary_labels(labels, matrix.n).astype(np.float64)
    if y.sum() == 0 or y.sum() == y.size:
        raise DegenerateDataError("logistic fit requires both classes present")
    n, d = matrix.values.shape
    if n <= d:
        raise ValidationError(f"need more rows ({n}) than feature columns ({d})")
    design = np.hstack([np.ones((n, 1)), matrix.values])
    beta = np.zeros(d + 1)
    identity = np.eye(d + 1)
    objective = _penalized_nll(design, y, beta, ridge)
    gradient_norm = math.inf
    max_step = math.inf
    for iteration in range(1, max_iter + 1):
        mu = expit(design @ beta)
        weights = np.maximum(mu * (1.0 - mu), 1e-10)
        gradient = design.T @ (y - mu) - ridge * beta
        gradient_norm = float(np.max(np.abs(gradient)))
        hessian = (design.T * weights) @ design + ridge * identity
        step = np.linalg.solve(hessian, gradient)
        scale = 1.0
        best_tried = math.inf
        for _ in range(40):
            candidate = beta + scale * step
            candidate_objective = _penalized_nll(design, y, candidate, ridge)
            if candidate_objective <= objective:
                break
            best_tried = min(best_tried, candidate_objective)
            scale *= 0.5
        else:
            # the Newton direction always descends in exact arithmetic, so an
            # exhausted search with a flat objective means the deviance is at
            # its floating-point floor: converged, not stuck
            if best_tried <= objective + 1e-10 * (1.0 + abs(objective)):
                return LogisticModel(
                    weights=beta[1:].copy(),
                    intercept=float(beta[0]),
                    feature_names=matrix.names,
                    means=matrix.means,
                    stds=matrix.stds,
                    iterations=iteration,
                    gradient_norm=gradient_norm,
                )
            raise ConvergenceError(
                f"logistic fit stalled after {iteration} iterations "
                f"(gradient norm {gradient_norm:.3e})",
                iterations=iteration,
                gradient_norm=gradient_norm,
                max_step=float(np.max(np.abs(scale * step))),
            )
        beta = candidate
        objective = candidate_objective
        max_step = float(np.max(np.abs(scale * step)))
        if max_step < tol:
            return LogisticModel(
                weights=beta[1:].copy(),
                intercept=float(beta[0]),
                feature_names=matrix.names,
                means=matrix.means,
                stds=matrix.stds,
                iterations=iteration,
                gradient_norm=gradient_norm,
            )
    raise ConvergenceError(
        f"logistic fit did not converge in {max_iter} iterations "
        f"(last step {max_step:.3e}, gradient norm {gradient_norm:.3e})",
        iterations=max_iter,
        gradient_norm=gradient_norm,
        max_step=max_step,
    )


def _knn_score_grid(
    train: FeatureMatrix, train_labels: np.ndarray, test: FeatureMatrix, ks
) -> np.ndarray:
    """kNN positive-fraction scores on ``test`` for every k, one sort per call.

    Distances are squared Euclidean on standardized features; equal distances
    are broken toward the lowest training index via a stable sort.
    """
    standardized = train.standardize()
    train_values = standardized.values
    test_values = standardized.transform(test).values
    d2 = (
        (test_values**2).sum(axis=1)[:, None]
        + (train_values**2).sum(axis=1)[None, :]
        - 2.0 * (test_values @ train_values.T)
    )
    order = np.argsort(d2, axis=1, kind="stable")
    neighbor_labels = train_labels[order]
    cumulative = np.cumsum(neighbor_labels, axis=1)
    out = np.empty((test_values.shape[0], len(ks)))
    for column, k in enumerate(ks):
        out[:, column] = cumulative[:, k - 1] / k
    return out


def knn_scores(train_features, train_labels, test_features, k: int) -> np.ndarray:
    """Fraction of positives among the k nearest training points."""
    train = _as_features(train_features, "train_features")
    test = _as_features(test_features, "test_features")
    y = _binary_labels(train_labels, train.n)
    k = int(k)
    if not 1 <= k <= train.n:
        raise ValidationError(f"k must be in [1, {train.n}], got {k}")
    return _knn_score_grid(train, y, test, [k])[:, 0]


@dataclass(frozen=True)
class CvResult:
    """Per-fold and averaged cross-validation metrics over a k grid.

    ``fold_auc``/``fold_accuracy`` have shape (folds, len(k_grid)); AUC
    entries are NaN for test folds holding a single class, and those folds are
    listed in ``skipped_auc_folds``.  ``best_k_by_auc``/``best_k_by_accuracy``
    maximize the fold means, preferring the smaller k on ties.
    """

    k_grid: tuple[int, ...]
    n_folds: int
    seed: int
    fold_auc: np.ndarray
    fold_accuracy: np.ndarray
    mean_auc: np.ndarray
    mean_accuracy: np.ndarray
    best_k_by_auc: int
    best_k_by_accuracy: int
    skipped_auc_folds: tuple[int, ...]


def _validate_k_grid(k_grid, limit: int) -> tuple[int, ...]:
    grid = tuple(int(k) for k in k_grid)
    if len(grid) == 0:
        raise ValidationError("k grid must be non-empty")
    if any(k < 1 for k in grid):
        raise ValidationError("k grid values must be >= 1")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValidationError("k grid must be strictly increasing")
    if grid[-1] > limit:
        raise ValidationError(
            f"largest k ({grid[-1]}) exceeds the available training size ({limit})"
        )
    return grid


def kfold_cv(features, labels, n_folds: int, k_grid, seed: int) -> CvResult:
    """Seeded shuffled k-fold cross-validation of kNN over a k grid.

    Rows are permuted once with the seed and split into ``n_folds`` contiguous
    chunks of the permutation.  Each fold is scored with every k from one
    distance computation.
    """
    matrix = _as_features(features, "features")
    y = _binary_labels(labels, matrix.n)
    n = matrix.n
    n_folds = int(n_folds)
    if not 2 <= n_folds <= n:
        raise ValidationError(f"n_folds must be in [2, {n}], got {n_folds}")
    largest_fold = -(-n // n_folds)
    grid = _validate_k_grid(k_grid, n - largest_fold)
    rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
    permutation = rng.permutation(n)
    folds = np.array_split(permutation, n_folds)
    fold_auc = np.empty((n_folds, len(grid)))
    fold_accuracy = np.empty((n_folds, len(grid)))
    skipped = []
    for f, test_idx in enumerate(folds):
        train_idx = np.concatenate([folds[j] for j in range(n_folds) if j != f])
        train = FeatureMatrix.from_arrays(matrix.values[train_idx], matrix.names)
        test = FeatureMatrix.from_arrays(matrix.values[test_idx], matrix.names)
        scores = _knn_score_grid(train, y[train_idx], test, grid)
        test_labels = y[test_idx]
        single_class = test_labels.min() == test_labels.max()
        if single_class:
            skipped.append(f)
        for column in range(len(grid)):
            fold_accuracy[f, column] = np.mean(
                (scores[:, column] >= 0.5) == (test_labels == 1)
            )
            if single_class:
                fold_auc[f, column] = np.nan
            else:
                fold_auc[f, column] = auc_rank(
                    LabeledScores(scores=scores[:, column], labels=test_labels)
                )
    if len(skipped) == n_folds:
        raise DegenerateDataError("AUC undefined in every fold (single-class test folds)")
    mean_auc = np.nanmean(fold_auc, axis=0)
    mean_accuracy = fold_accuracy.mean(axis=0)
    return CvResult(
        k_grid=grid,
        n_folds=n_folds,
        seed=int(seed),
        fold_auc=fold_auc,
        fold_accuracy=fold_accuracy,
        mean_auc=mean_auc,
        mean_accuracy=mean_accuracy,
        best_k_by_auc=grid[int(np.argmax(mean_auc))],
        best_k_by_accuracy=grid[int(np.argmax(mean_accuracy))],
        skipped_auc_folds=tuple(skipped),
    )


@dataclass(frozen=True)
class TuneResult:
    """Outcome of repeated split / tune / retrain / utility-sweep experiments.

    Arrays indexed by repeat record the k selected by cross-validated AUC and
    by cross-validated accuracy and the test-set utility maxima of the
    resulting models; ``cv_auc``/``cv_accuracy`` hold the per-repeat CV means
    for every k in the grid, and ``utility_grid_*`` the test utilities on the
    fixed threshold grid.  SEM fields are None when only one repeat was run.
    """

    k_grid: tuple[int, ...]
    repeats: int
    seed: int
    thresholds: np.ndarray
    chosen_k_auc: np.ndarray
    chosen_k_accuracy: np.ndarray
    max_utility_auc: np.ndarray
    max_utility_accuracy: np.ndarray
    cv_auc: np.ndarray
    cv_accuracy: np.ndarray
    utility_grid_auc: np.ndarray
    utility_grid_accuracy: np.ndarray

    @property
    def mean_max_utility_auc(self) -> float:
        return float(self.max_utility_auc.mean())

    @property
    def mean_max_utility_accuracy(self) -> float:
        return float(self.max_utility_accuracy.mean())

    def _sem(self, values: np.ndarray):
        if self.repeats < 2:
            return None
        return np.std(values, axis=0, ddof=1) / math.sqrt(self.repeats)

    @property
    def sem_max_utility_auc(self) -> float | None:
        out = self._sem(self.max_utility_auc)
        return None if out is None else float(out)

    @property
    def sem_max_utility_accuracy(self) -> float | None:
        out = self._sem(self.max_utility_accuracy)
        return None if out is None else float(out)

    @property
    def utility_grid_sem_auc(self) -> np.ndarray | None:
        return self._sem(self.utility_grid_auc)

    @property
    def utility_grid_sem_accuracy(self) -> np.ndarray | None:
        return self._sem(self.utility_grid_accuracy)


def tune_and_compare(
    features,
    labels,
    k_grid,
    coefficients,
    repeats: int = 20,
    seed: int = 0,
    n_folds: int = 20,
    test_fraction: float = 0.3,
    grid_size: int = 201,
) -> TuneResult:
    """Compare AUC-selected against accuracy-selected kNN under a utility.

    Each repeat draws a fresh seeded train/test split, picks k by
    cross-validated AUC and by cross-validated accuracy on the training part,
    refits both choices, and records their utility on the held-out part (both
    the sweep maximum and the curve on a fixed threshold grid).  Per-sample
    coefficients are subset alongside the rows they describe.
    """
    matrix = _as_features(features, "features")
    y = _binary_labels(labels, matrix.n)
    n = matrix.n
    repeats = int(repeats)
    if repeats < 1:
        raise ValidationError(f"repeats must be >= 1, got {repeats}")
    if not 0.0 < test_fraction < 1.0:
        raise ValidationError(f"test_fraction must be in (0, 1), got {test_fraction}")
    n_test = max(1, int(round(n * test_fraction)))
    n_train = n - n_test
    if n_train < 2:
        raise ValidationError("training split is too small")
    own = coefficients.n_samples
    if own is not None and own != n:
        raise ValidationError(
            f"coefficient length {own} does not match feature rows {n}"
        )
    grid = _validate_k_grid(k_grid, n_train - (-(-n_train // n_folds)))
    thresholds = np.linspace(0.0, 1.0, grid_size)
    chosen_k = {"auc": np.empty(repeats, dtype=np.int64), "accuracy": np.empty(repeats, dtype=np.int64)}
    max_utility = {"auc": np.empty(repeats), "accuracy": np.empty(repeats)}
    utility_grid = {
        "auc": np.empty((repeats, grid_size)),
        "accuracy": np.empty((repeats, grid_size)),
    }
    cv_auc = np.empty((repeats, len(grid)))
    cv_accuracy = np.empty((repeats, len(grid)))
    for r in range(repeats):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), r]))
        permutation = rng.permutation(n)
        cv_seed = int(rng.integers(0, 2**31 - 1))
        train_idx = permutation[:n_train]
        test_idx = permutation[n_train:]
        train = FeatureMatrix.from_arrays(matrix.values[train_idx], matrix.names)
        test = FeatureMatrix.from_arrays(matrix.values[test_idx], matrix.names)
        cv = kfold_cv(train, y[train_idx], n_folds, grid, cv_seed)
        cv_auc[r] = cv.mean_auc
        cv_accuracy[r] = cv.mean_accuracy
        test_coefficients = coefficients.take(test_idx)
        for criterion, k in (
            ("auc", cv.best_k_by_auc),
            ("accuracy", cv.best_k_by_accuracy),
        ):
            scores = knn_scores(train, y[train_idx], test, k)
            data = LabeledScores(scores=scores, labels=y[test_idx])
            chosen_k[criterion][r] = k
            max_utility[criterion][r] = utility_curve(
                data, test_coefficients
            ).max_utility
            utility_grid[criterion][r] = utility_at_thresholds(
                data, test_coefficients, thresholds
            )
    return TuneResult(
        k_grid=grid,
        repeats=repeats,
        seed=int(seed),
        thresholds=thresholds,
        chosen_k_auc=chosen_k["auc"],
        chosen_k_accuracy=chosen_k["accuracy"],
        max_utility_auc=max_utility["auc"],
        max_utility_accuracy=max_utility["accuracy"],
        cv_auc=cv_auc,
        cv_accuracy=cv_accuracy,
        utility_grid_auc=utility_grid["auc"],
        utility_grid_accuracy=utility_grid["accuracy"],
    )
