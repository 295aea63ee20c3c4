"""Brute-force check of the closed-form pNML normalizer.

Every hypothetical label on the quadrature grid gets its own genie refit and
the Gaussian likelihood is evaluated from that refit.  To stay independent of
the code under test, the refits solve the stacked least-squares system

    [ X^T        ]         [ Y ]
    [ sqrt(lam) I] theta ~ [ 0 ]

by SVD (``numpy.linalg.lstsq``) instead of the Cholesky normal equations, and
the grid center and width are found by probing the genie residual rather
than by reading ``h`` from :mod:`pnml_linreg.pnml`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OracleDivergenceError
from .regression import Dataset, RidgeConfig, _as_vector

__all__ = [
    "QuadratureSpec",
    "simpson_weights",
    "genie_residuals",
    "numeric_k",
    "numeric_density_check",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Simpson grid on ``center +/- half_width_sigmas * scale``.

    ``scale`` is the pNML standard deviation ``sigma / (1 - h)``; the grid
    has ``2 * half_width_sigmas * points_per_sigma + 1`` points.
    """

    half_width_sigmas: float = 12.0
    points_per_sigma: int = 64

    def __post_init__(self):
        if self.half_width_sigmas < 8:
            raise ValueError("half_width_sigmas must be >= 8")
        if int(self.points_per_sigma) != self.points_per_sigma or self.points_per_sigma < 16:
            raise ValueError("points_per_sigma must be an integer >= 16")

    @property
    def n_points(self) -> int:
        n = int(math.ceil(2 * self.half_width_sigmas * self.points_per_sigma)) + 1
        return n if n % 2 else n + 1

    def refined(self) -> "QuadratureSpec":
        return QuadratureSpec(self.half_width_sigmas, 2 * self.points_per_sigma)


def simpson_weights(n: int, step: float) -> np.ndarray:
    """Composite Simpson weights ``step/3 * [1, 4, 2, 4, ..., 2, 4, 1]``."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"Simpson's rule needs an odd number of points >= 3, got {n}")
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * (step / 3.0)


def _stacked_system(data: Dataset, x, lam):
    M = data.n_features
    rows = [data.features, x[None, :]]
    if lam > 0:
        rows.append(math.sqrt(lam) * np.eye(M))
    return np.vstack(rows)


def genie_residuals(data: Dataset, x, ys, lam: float) -> np.ndarray:
    """``y - x^T theta_hat(y)`` for each hypothetical label, one refit per label."""
    x = _as_vector(x, data.n_features)
    ys = np.atleast_1d(np.asarray(ys, dtype=np.float64))
    A = _stacked_system(data, x, lam)
    B = np.zeros((A.shape[0], ys.shape[0]))
    B[: data.n_samples] = data.labels[:, None]
    B[data.n_samples] = ys
    theta = np.linalg.lstsq(A, B, rcond=None)[0]
    return ys - x @ theta


def _probe(data, x, lam):
    """Center and slope of the affine genie residual ``slope * (y - center)``."""
    r0, r1 = genie_residuals(data, x, [0.0, 1.0], lam)
    slope = r1 - r0
    if not slope > 1e-6:
        raise OracleDivergenceError(
            f"oracle diverges: non-learnable query (1 - h ~ {slope:.3e})"
        )
    return -r0 / slope, slope


def _gauss(r, sigma2):
    return np.exp(-(r * r) / (2.0 * sigma2)) / math.sqrt(2.0 * math.pi * sigma2)


def numeric_k(
    data: Dataset,
    x,
    cfg: RidgeConfig = RidgeConfig(),
    quad: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Integrate the genie likelihood over hypothetical labels.

    Raises
    ------
    OracleDivergenceError
        If ``1 - h <= 1e-6``, where the integral is (close to) divergent.
    """
    x = _as_vector(x, data.n_features)
    center, slope = _probe(data, x, cfg.lam)
    scale = math.sqrt(cfg.sigma2) / slope
    n = quad.n_points
    ys, step = np.linspace(
        center - quad.half_width_sigmas * scale,
        center + quad.half_width_sigmas * scale,
        n,
        retstep=True,
    )
    dens = _gauss(genie_residuals(data, x, ys, cfg.lam), cfg.sigma2)
    # fixed-order accumulation keeps the reduction reproducible
    return math.fsum(simpson_weights(n, step) * dens)


def numeric_density_check(data: Dataset, x, cfg: RidgeConfig, ys) -> float:
    """Max relative gap between refit genie density and the closed form.

    The closed form is ``N(0, sigma2)`` evaluated at ``(1 - h)(y - y_hat)``
    with ``h`` and ``y_hat`` from :func:`pnml_linreg.pnml.pnml_predict`.
    """
    from .pnml import pnml_predict

    x = _as_vector(x, data.n_features)
    pred = pnml_predict(data, x, cfg)
    if not pred.h < 1.0 - 1e-6:
        raise OracleDivergenceError(
            f"oracle diverges: non-learnable query (h = {pred.h!r})"
        )
    ys = np.atleast_1d(np.asarray(ys, dtype=np.float64))
    refit = _gauss(genie_residuals(data, x, ys, cfg.lam), cfg.sigma2)
    closed = _gauss((1.0 - pred.h) * (ys - pred.y_hat), cfg.sigma2)
    return float(np.max(np.abs(refit - closed) / closed))
