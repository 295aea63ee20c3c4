"""Learnable-space decomposition of the unregularized pNML regret.

With ``R_N = (1/N) X_N X_N^T = U diag(eta) U^T`` the matrix inversion lemma
turns the regret into

    Gamma = log(1 + gamma / N),    gamma = sum_i (x^T u_i)^2 / eta_i,

so a test vector is cheap to predict when it lives in the span of the
high-eigenvalue directions, regardless of whether ``M > N``.  The
eigenvalues relate to the singular values ``s_i`` of ``X_N`` through
``eta_i = s_i^2 / N``.

Only ``lam = 0`` is covered here; regularized regret comes from
:func:`pnml_linreg.pnml.regret`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .regression import RANK_EPS, Dataset, _as_vector

__all__ = [
    "NULL_PROJECTION_TOL",
    "SpectralReport",
    "correlation_matrix",
    "analyze",
    "learnability_profile",
]

NULL_PROJECTION_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SpectralReport:
    """Per-eigendirection breakdown of ``gamma`` for one test vector.

    ``contributions[i]`` is ``inf`` when direction ``i`` is null (eigenvalue
    under the rank threshold) and ``x`` has a non-negligible component along
    it; negligible components on null directions contribute 0.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    projections: np.ndarray
    contributions: np.ndarray
    gamma: float
    regret_spectral: float
    n_samples: int
    null_mask: np.ndarray
    note: str = "unregularized (lambda = 0); use pnml.regret for lambda > 0"

    @property
    def learnable(self) -> bool:
        return math.isfinite(self.gamma)

    @property
    def top_contribution_index(self) -> int | None:
        c = self.contributions
        if c.size == 0 or not np.any(c > 0):
            return None
        return int(np.argmax(c))

    def rows(self) -> list[dict]:
        """One mapping per eigendirection followed by a summary mapping."""
        out = [
            {
                "kind": "direction",
                "index": i,
                "eigenvalue": float(self.eigenvalues[i]),
                "projection": float(self.projections[i]),
                "contribution": float(self.contributions[i]),
                "gamma": None,
                "regret": None,
            }
            for i in range(self.eigenvalues.shape[0])
        ]
        out.append(
            {
                "kind": "summary",
                "index": None,
                "eigenvalue": None,
                "projection": None,
                "contribution": None,
                "gamma": self.gamma,
                "regret": self.regret_spectral,
            }
        )
        return out


def correlation_matrix(data: Dataset) -> np.ndarray:
    """Empirical correlation ``R_N = (1/N) sum_i x_i x_i^T``."""
    if data.n_samples == 0:
        raise ValueError("correlation matrix needs at least one sample (N = 0)")
    R = data.gram() / data.n_samples
    return 0.5 * (R + R.T)


def _eigh_descending(R):
    eta, U = np.linalg.eigh(R)
    order = np.argsort(eta)[::-1]
    eta = np.clip(eta[order], 0.0, None)
    return eta, U[:, order]


def analyze(data: Dataset, x) -> SpectralReport:
    """Eigen-decompose ``R_N`` and split ``gamma`` over its eigendirections."""
    x = _as_vector(x, data.n_features)
    N, M = data.n_samples, data.n_features
    eta, U = _eigh_descending(correlation_matrix(data))
    proj = U.T @ x
    null = eta <= eta[0] * M * RANK_EPS
    contrib = np.zeros(M)
    live = ~null
    contrib[live] = proj[live] ** 2 / eta[live]
    xnorm = np.linalg.norm(x)
    blown = null & (np.abs(proj) > NULL_PROJECTION_TOL * xnorm)
    contrib[blown] = np.inf
    if np.any(blown):
        gamma = math.inf
        reg = math.inf
    else:
        gamma = math.fsum(contrib)
        reg = math.log1p(gamma / N)
    for a in (eta, U, proj, contrib, null):
        a.setflags(write=False)
    return SpectralReport(eta, U, proj, contrib, gamma, reg, N, null)


def learnability_profile(data: Dataset, xs) -> list[tuple[float, float, int | None]]:
    """``(gamma, regret, top_contribution_index)`` for each test vector in order."""
    xs = [np.asarray(x, dtype=np.float64).reshape(-1) for x in xs]
    for j, x in enumerate(xs):
        if x.shape[0] != data.n_features:
            raise ValueError(
                f"test vector {j} has length {x.shape[0]}, expected {data.n_features}"
            )
    out = []
    for x in xs:
        rep = analyze(data, x)
        out.append((rep.gamma, rep.regret_spectral, rep.top_contribution_index))
    return out
