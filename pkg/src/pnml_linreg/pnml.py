"""Predictive normalized maximum likelihood for Gaussian linear regression.

For a test vector ``x`` the genie refits the ridge solution on the training
set augmented with ``(x, y)`` for every hypothetical label ``y``.  Its
residual at the test point is ``(1 - h)(y - y_hat)`` where

    h = x^T (X X^T + lam I)^{-1} x,    X = [X_N, x],

so the genie likelihoods integrate to ``K = 1 / (1 - h)`` and the pNML
predictive density is a Gaussian with the ERM mean ``y_hat`` and standard
deviation ``sigma / (1 - h)``.  The regret ``log K`` does not depend on
``sigma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDensityError
from .regression import (
    Dataset,
    RidgeConfig,
    _as_vector,
    _regularized_gram,
    fit_ridge,
    gram_is_invertible,
    inverse_quadratic_form,
)

__all__ = [
    "H_ONE_TOL",
    "PnmlPrediction",
    "GenieFit",
    "erm_prediction",
    "genie_fit",
    "pnml_predict",
    "density_at",
    "regret",
    "genie_density_at",
    "log_loss",
]

# h above 1 - H_ONE_TOL is treated as exactly 1 (non-learnable)
H_ONE_TOL = 1e-12

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class PnmlPrediction:
    """Closed-form pNML prediction at one test point.

    Attributes
    ----------
    y_hat : float
        ERM mean, identical to the ridge prediction from the training set.
    h : float
        ``x^T (X X^T + lam I)^{-1} x`` with the test vector included in ``X``.
    k_factor : float
        Normalizer ``1 / (1 - h)``; ``inf`` when ``h == 1``.
    regret : float
        ``log(k_factor)`` in nats; ``inf`` when ``h == 1``.
    sigma2 : float
    """

    y_hat: float
    h: float
    k_factor: float
    regret: float
    sigma2: float

    @property
    def learnable(self) -> bool:
        return self.h < 1.0

    @property
    def scale(self) -> float:
        """Standard deviation ``sigma / (1 - h)`` of the predictive density."""
        if not self.learnable:
            return math.inf
        return math.sqrt(self.sigma2) / (1.0 - self.h)

    def as_row(self) -> dict:
        return {
            "y_hat": self.y_hat,
            "h": self.h,
            "k_factor": self.k_factor,
            "regret": self.regret,
        }


@dataclass(frozen=True, eq=False)
class GenieFit:
    theta_hat: np.ndarray
    hypothetical_label: float


def erm_prediction(data: Dataset, x, lam: float) -> float:
    """``x^T theta*_N`` from the training set alone.

    At ``lam == 0`` with a rank-deficient training Gram the minimum-norm
    solution is used, which is the ``lam -> 0+`` limit of the ridge fit.
    """
    x = _as_vector(x, data.n_features)
    if data.n_samples == 0:
        return 0.0
    if lam == 0:
        eig = np.linalg.eigvalsh(data.gram())
        if not gram_is_invertible(eig, data.n_features):
            theta = np.linalg.lstsq(data.features, data.labels, rcond=None)[0]
            return float(x @ theta)
    return float(x @ fit_ridge(data, RidgeConfig(lam)).theta)


def genie_fit(data: Dataset, x, y: float, cfg: RidgeConfig) -> GenieFit:
    """Ridge fit on the training set augmented with the test pair ``(x, y)``."""
    model = fit_ridge(data.append(x, y), cfg)
    return GenieFit(model.theta, float(y))


def _test_point_h(data: Dataset, x, lam: float) -> float:
    G = _regularized_gram(data.features, lam) + np.outer(x, x)
    h = inverse_quadratic_form(G, x, lam)
    h = min(max(h, 0.0), 1.0)
    return 1.0 if h > 1.0 - H_ONE_TOL else h


def pnml_predict(data: Dataset, x, cfg: RidgeConfig = RidgeConfig()) -> PnmlPrediction:
    """Analytic pNML prediction for test vector ``x``.

    ``h == 1`` (test direction outside what the training set constrains) is a
    legal result: ``k_factor`` and ``regret`` are then ``inf``.
    """
    x = _as_vector(x, data.n_features)
    y_hat = erm_prediction(data, x, cfg.lam)
    h = _test_point_h(data, x, cfg.lam)
    if h >= 1.0:
        k = reg = math.inf
    else:
        k = 1.0 / (1.0 - h)
        reg = math.log(k)
    return PnmlPrediction(y_hat, h, k, reg, cfg.sigma2)


def regret(data: Dataset, x, lam: float = 0.0) -> float:
    """Learnability measure ``log 1/(1 - h)`` in nats (may be ``inf``)."""
    x = _as_vector(x, data.n_features)
    h = _test_point_h(data, x, lam)
    return math.inf if h >= 1.0 else math.log(1.0 / (1.0 - h))


def density_at(pred: PnmlPrediction, y) -> np.ndarray | float:
    """pNML predictive density ``q(y | x)``; vectorized over ``y``."""
    if not pred.learnable:
        raise DegenerateDensityError("degenerate pNML: uniform improper density")
    a = 1.0 - pred.h
    r = np.asarray(y, dtype=np.float64) - pred.y_hat
    out = a / math.sqrt(2.0 * math.pi * pred.sigma2) * np.exp(-(a * r) ** 2 / (2.0 * pred.sigma2))
    return float(out) if out.ndim == 0 else out


def genie_density_at(data: Dataset, x, y: float, cfg: RidgeConfig = RidgeConfig()) -> float:
    """Unnormalized pNML numerator: the genie's Gaussian likelihood of ``y``.

    Evaluated directly from the refit ``theta_hat``; no closed-form shortcut.
    """
    x = _as_vector(x, data.n_features)
    fit = genie_fit(data, x, y, cfg)
    r = float(y) - x @ fit.theta_hat
    return math.exp(-(r * r) / (2.0 * cfg.sigma2)) / math.sqrt(2.0 * math.pi * cfg.sigma2)


def log_loss(pred: PnmlPrediction, y_true: float) -> float:
    """``-log q(y_true | x)`` in nats."""
    if not pred.learnable:
        raise DegenerateDensityError("degenerate pNML: uniform improper density")
    a = 1.0 - pred.h
    r = float(y_true) - pred.y_hat
    return (
        -math.log(a)
        + _LOG_SQRT_2PI
        + 0.5 * math.log(pred.sigma2)
        + (a * r) ** 2 / (2.0 * pred.sigma2)
    )
