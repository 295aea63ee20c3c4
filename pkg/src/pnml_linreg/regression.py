"""Ridge least squares: batch and recursive fits, leverage, confidence intervals.

Conventions
-----------
A :class:`Dataset` stores features row-wise, ``features[i]`` being the i-th
sample ``x_i`` (length ``M``).  The column-stacked design ``X_N`` used in the
formulas is therefore ``features.T`` and the Gram matrix is
``X_N X_N^T = features.T @ features``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np
import scipy.linalg as la

from .errors import NumericalDriftError, SingularGramError

__all__ = [
    "Dataset",
    "RidgeConfig",
    "FittedModel",
    "ConfidenceInterval",
    "RANK_EPS",
    "build_vandermonde",
    "gram_is_invertible",
    "fit_ridge",
    "predict",
    "rls_update",
    "leverage",
    "confidence_interval",
    "inverse_quadratic_form",
]

# eta_min > eta_max * M * RANK_EPS  <=>  numerically invertible
RANK_EPS = 2.0**-45


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """N training pairs ``(x_i, y_i)`` with ``x_i`` in ``R^M``.

    Parameters
    ----------
    features : (N, M) array_like
        One sample per row.  A 1-D input is read as ``N`` scalar features.
    labels : (N,) array_like
    n_features : int, optional
        Needed only to build an empty dataset (``N = 0``).
    """

    features: np.ndarray
    labels: np.ndarray

    def __init__(self, features, labels, n_features=None):
        F = np.asarray(features, dtype=np.float64)
        y = np.asarray(labels, dtype=np.float64).reshape(-1)
        if F.ndim == 1:
            F = F.reshape(-1, 1) if F.size else F.reshape(0, n_features or 1)
        if F.ndim != 2:
            raise ValueError(f"features must be 2-D (N, M), got shape {F.shape}")
        if F.shape[0] == 0 and n_features is not None:
            F = F.reshape(0, n_features)
        if F.shape[1] < 1:
            raise ValueError("feature dimension M must be >= 1")
        if n_features is not None and F.shape[1] != n_features:
            raise ValueError(f"expected M={n_features}, got {F.shape[1]}")
        if y.shape[0] != F.shape[0]:
            raise ValueError(
                f"{F.shape[0]} feature vectors but {y.shape[0]} labels"
            )
        if not (np.all(np.isfinite(F)) and np.all(np.isfinite(y))):
            raise ValueError("dataset entries must be finite")
        object.__setattr__(self, "features", _frozen(F))
        object.__setattr__(self, "labels", _frozen(y))

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def design(self) -> np.ndarray:
        """Column-stacked ``X_N`` of shape (M, N)."""
        return self.features.T

    def gram(self) -> np.ndarray:
        return self.features.T @ self.features

    def append(self, x, y) -> "Dataset":
        """Return a new dataset with ``(x, y)`` as its last sample."""
        x = _as_vector(x, self.n_features)
        return Dataset(
            np.vstack([self.features, x[None, :]]),
            np.append(self.labels, float(y)),
        )

    def __len__(self):
        return self.n_samples


@dataclass(frozen=True)
class RidgeConfig:
    """Regularizer ``lam`` (>= 0) and Gaussian noise variance ``sigma2`` (> 0)."""

    lam: float = 0.0
    sigma2: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise ValueError(f"lambda must be finite and >= 0, got {self.lam}")
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise ValueError(f"sigma2 must be finite and > 0, got {self.sigma2}")


@dataclass(frozen=True, eq=False)
class FittedModel:
    """Ridge solution ``theta`` together with ``P = (X X^T + lam I)^{-1}``."""

    theta: np.ndarray
    p_matrix: np.ndarray
    lam: float
    n_samples: int

    def __post_init__(self):
        object.__setattr__(self, "theta", _frozen(self.theta))
        object.__setattr__(self, "p_matrix", _frozen(self.p_matrix))

    @property
    def n_features(self) -> int:
        return self.theta.shape[0]


@dataclass(frozen=True)
class ConfidenceInterval:
    center: float
    halfwidth: float
    coverage: float

    @property
    def lower(self) -> float:
        return self.center - self.halfwidth

    @property
    def upper(self) -> float:
        return self.center + self.halfwidth


def _as_vector(x, dim=None) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if dim is not None and x.shape[0] != dim:
        raise ValueError(f"dimension mismatch: expected length {dim}, got {x.shape[0]}")
    return x


def build_vandermonde(points, degree: int) -> np.ndarray:
    """Monomial features ``[1, t, t^2, ..., t^D]`` for each point.

    Returns an (N, D+1) array, one row per point, i.e. the transpose of the
    column-stacked design matrix.
    """
    if int(degree) != degree or degree < 0:
        raise ValueError(f"degree must be a nonnegative integer, got {degree!r}")
    t = np.asarray(points, dtype=np.float64).reshape(-1)
    bad = np.flatnonzero(~np.isfinite(t))
    if bad.size:
        raise ValueError(f"non-finite point at index {bad[0]}: {t[bad[0]]}")
    return np.vander(t, int(degree) + 1, increasing=True)


def gram_is_invertible(eigenvalues, dim: int) -> bool:
    eig = np.asarray(eigenvalues)
    top = eig.max()
    return bool(top > 0 and eig.min() > top * dim * RANK_EPS)


def _check_invertible(gram):
    eig = np.linalg.eigvalsh(gram)
    if not gram_is_invertible(eig, gram.shape[0]):
        raise SingularGramError(eig.min(), eig.max(), gram.shape[0])


def _regularized_gram(features, lam):
    M = features.shape[1]
    return features.T @ features + lam * np.eye(M)


def _cho(gram):
    try:
        return la.cho_factor(gram, lower=True, check_finite=False)
    except la.LinAlgError:
        eig = np.linalg.eigvalsh(gram)
        raise SingularGramError(eig.min(), eig.max(), gram.shape[0]) from None


def fit_ridge(data: Dataset, cfg: RidgeConfig) -> FittedModel:
    """Solve ``theta = (X X^T + lam I)^{-1} X Y`` by Cholesky factorization.

    Raises
    ------
    SingularGramError
        If ``cfg.lam == 0`` and the Gram matrix fails the rank threshold.
    """
    M = data.n_features
    G = _regularized_gram(data.features, cfg.lam)
    if cfg.lam == 0:
        _check_invertible(G)
    c = _cho(G)
    P = la.cho_solve(c, np.eye(M), check_finite=False)
    P = 0.5 * (P + P.T)
    theta = P @ (data.features.T @ data.labels)
    return FittedModel(theta, P, float(cfg.lam), data.n_samples)


def predict(model: FittedModel, x) -> float:
    """ERM prediction ``x^T theta``."""
    return float(_as_vector(x, model.n_features) @ model.theta)


def rls_update(model: FittedModel, x, y) -> FittedModel:
    """Add one sample by the rank-one (Sherman-Morrison) update.

    ``P' = P - P x x^T P / (1 + x^T P x)`` and
    ``theta' = theta + P' x (y - x^T theta)``.
    """
    x = _as_vector(x, model.n_features)
    Px = model.p_matrix @ x
    denom = 1.0 + x @ Px
    if not denom > 0:
        raise NumericalDriftError(
            f"RLS denominator 1 + x'Px = {denom:.3e} <= 0; refit with fit_ridge"
        )
    P = model.p_matrix - np.outer(Px, Px) / denom
    P = 0.5 * (P + P.T)
    diag = np.diag(P)
    if np.any(diag <= 0):
        raise NumericalDriftError(
            f"RLS update produced a non-positive diagonal entry ({diag.min():.3e}) "
            "in P; refit with fit_ridge"
        )
    residual = float(y) - x @ model.theta
    theta = model.theta + (P @ x) * residual
    return FittedModel(theta, P, model.lam, model.n_samples + 1)


def inverse_quadratic_form(gram, x, lam) -> float:
    """``x^T G^{-1} x`` for a regularized Gram ``G``.

    With ``lam == 0`` and a rank-deficient ``G`` this is the ``lam -> 0+``
    limit, computed from the pseudo-inverse restricted to the numerically
    nonzero eigendirections.  The limit exists whenever ``x`` lies in the
    range of ``G``, which holds when ``x`` is one of the columns building it.
    """
    x = np.asarray(x, dtype=np.float64)
    if lam == 0:
        eig, vec = np.linalg.eigh(gram)
        if not gram_is_invertible(eig, gram.shape[0]):
            top = max(eig.max(), 0.0)
            keep = eig > top * gram.shape[0] * RANK_EPS
            proj = vec[:, keep].T @ x
            return float(np.sum(proj**2 / eig[keep]))
    c = _cho(gram)
    return float(x @ la.cho_solve(c, x, check_finite=False))


def leverage(data: Dataset, i: int, lam: float = 0.0) -> float:
    """Hat-matrix diagonal ``h_ii = x_i^T (X X^T + lam I)^{-1} x_i``."""
    n = data.n_samples
    if isinstance(i, bool) or not 0 <= i < n:
        raise IndexError(f"sample index {i} out of range for N={n}")
    G = _regularized_gram(data.features, lam)
    h = inverse_quadratic_form(G, data.features[i], lam)
    return min(max(h, 0.0), 1.0)


def confidence_interval(model: FittedModel, x, sigma2_hat: float, coverage: float = 0.95):
    """Two-sided normal-approximation interval around ``x^T theta``.

    The half-width is ``z * sqrt(sigma2_hat * x^T P x)`` with ``z`` the
    ``(1 + coverage) / 2`` standard-normal quantile.
    """
    if not 0 < coverage < 1:
        raise ValueError(f"coverage must lie in (0, 1), got {coverage}")
    if not sigma2_hat > 0:
        raise ValueError(f"sigma2_hat must be > 0, got {sigma2_hat}")
    x = _as_vector(x, model.n_features)
    z = NormalDist().inv_cdf(0.5 * (1.0 + coverage))
    var = sigma2_hat * max(float(x @ model.p_matrix @ x), 0.0)
    return ConfidenceInterval(float(x @ model.theta), z * math.sqrt(var), coverage)
