"""Polynomial-fitting experiments: regularization sweep and degree sweep.

Training abscissae are drawn uniformly from the grid interval with
``numpy.random.default_rng(seed)`` (PCG64, whose stream is fixed across
platforms for a given seed), so a fixed seed yields byte-identical CSV
output.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import csvio
from .errors import DataFormatError
from .pnml import PnmlPrediction, pnml_predict
from .regression import Dataset, RidgeConfig, build_vandermonde
from .spectral import analyze

log = logging.getLogger(__name__)

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "SweepResult",
    "sample_training",
    "sweep",
    "run_reg_sweep",
    "run_degree_sweep",
    "run_score",
]

EXPERIMENTS = ("reg-sweep", "degree-sweep", "score")
DUPLICATE_TOL = 1e-12

_DEFAULTS = {
    "reg-sweep": dict(n_train=3, degrees=(2,), lambdas=(0.0, 0.1, 1.0)),
    "degree-sweep": dict(n_train=10, degrees=(2, 3, 10), lambdas=(1e-4,)),
    "score": dict(n_train=1, degrees=(), lambdas=(0.0,)),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings for one experiment run.

    ``coeffs`` are ascending polynomial coefficients for the default label
    generator (``y = t^2 - 0.5 t``); ``label_source='file'`` reads ``(t, y)``
    pairs from ``train_path`` instead of sampling.
    """

    experiment: str = "reg-sweep"
    n_train: int = 3
    degrees: tuple = (2,)
    lambdas: tuple = (0.0, 0.1, 1.0)
    sigma2: float = 1.0
    grid: tuple = (-1.0, 1.0, 201)
    seed: int = 0
    coeffs: tuple = (0.0, -0.5, 1.0)
    noise_std: float = 0.0
    label_source: str = "polynomial"
    train_path: str | None = None
    test_path: str | None = None
    out_dir: str = "."
    max_resample: int = 100

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}; pick one of {EXPERIMENTS}")
        lo, hi, count = self.grid
        if not lo < hi:
            raise ValueError(f"grid lo must be < hi, got {lo}:{hi}")
        if int(count) != count or count < 2:
            raise ValueError(f"grid count must be an integer >= 2, got {count}")
        if self.n_train < 1:
            raise ValueError("n_train must be >= 1")
        if self.experiment != "score" and not self.degrees:
            raise ValueError("degrees must be nonempty for sweeps")
        if any(int(d) != d or d < 0 for d in self.degrees):
            raise ValueError(f"degrees must be nonnegative integers, got {self.degrees}")
        if not self.lambdas or any(not (math.isfinite(l) and l >= 0) for l in self.lambdas):
            raise ValueError(f"lambdas must be nonempty and >= 0, got {self.lambdas}")
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise ValueError(f"sigma2 must be > 0, got {self.sigma2}")
        if self.noise_std < 0:
            raise ValueError("noise_std must be >= 0")
        if self.label_source not in ("polynomial", "file"):
            raise ValueError(f"label_source must be 'polynomial' or 'file', got {self.label_source!r}")
        if self.label_source == "file" and not self.train_path:
            raise ValueError("label_source='file' needs train_path")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    @classmethod
    def defaults(cls, experiment: str, **overrides) -> "ExperimentConfig":
        return cls(experiment=experiment, **{**_DEFAULTS[experiment], **overrides})

    def with_(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)

    @property
    def grid_points(self) -> np.ndarray:
        lo, hi, count = self.grid
        return np.linspace(lo, hi, int(count))


def run_label(kind: str, degree: int, lam: float) -> str:
    return f"{kind}_deg{int(degree)}_lam{lam:g}"


@dataclass
class SweepResult:
    """Prediction and regret curves keyed by ``(degree, lambda)``."""

    grid: np.ndarray
    t_train: np.ndarray
    y_train: np.ndarray
    runs: list = field(default_factory=list)
    predictions: dict = field(default_factory=dict)
    paths: dict = field(default_factory=dict)

    def y_hat(self, degree, lam) -> np.ndarray:
        return np.array([p.y_hat for p in self.predictions[degree, lam]])

    def regret(self, degree, lam) -> np.ndarray:
        return np.array([p.regret for p in self.predictions[degree, lam]])

    def prediction_rows(self):
        cols = [self.y_hat(d, l) for d, l in self.runs]
        return [[t, *(c[i] for c in cols)] for i, t in enumerate(self.grid)]

    def regret_rows(self):
        cols = [self.regret(d, l) for d, l in self.runs]
        return [[t, *(c[i] for c in cols)] for i, t in enumerate(self.grid)]

    def write(self, out_dir, stem) -> dict:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "prediction": out / f"{stem}_prediction.csv",
            "regret": out / f"{stem}_regret.csv",
            "train": out / f"{stem}_train.csv",
        }
        csvio.write_table(
            paths["prediction"],
            ["t"] + [run_label("yhat", d, l) for d, l in self.runs],
            self.prediction_rows(),
        )
        csvio.write_table(
            paths["regret"],
            ["t"] + [run_label("regret", d, l) for d, l in self.runs],
            self.regret_rows(),
        )
        csvio.write_table(paths["train"], ["t", "y"], zip(self.t_train, self.y_train))
        return paths


def _has_duplicates(t):
    s = np.sort(t)
    return s.size > 1 and np.min(np.diff(s)) <= DUPLICATE_TOL


def _read_ty(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["t", "y"]:
        raise DataFormatError(f"{path}:1: header must be 't,y'")
    t, y = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise DataFormatError(f"{path}:{lineno}: expected 2 columns, found {len(row)}")
        try:
            t.append(float(row[0]))
            y.append(float(row[1]))
        except ValueError:
            raise DataFormatError(f"{path}:{lineno}: non-numeric cell") from None
    return np.array(t), np.array(y)


def sample_training(cfg: ExperimentConfig):
    """Draw ``(t, y)`` training pairs, resampling if abscissae collide."""
    if cfg.label_source == "file":
        return _read_ty(cfg.train_path)
    rng = np.random.default_rng(cfg.seed)
    lo, hi, _ = cfg.grid
    for attempt in range(cfg.max_resample + 1):
        t = rng.uniform(lo, hi, cfg.n_train)
        if not _has_duplicates(t):
            break
        log.warning("duplicate training abscissae (attempt %d); resampling", attempt + 1)
    else:
        raise RuntimeError(
            f"could not draw {cfg.n_train} distinct points in {cfg.max_resample} retries"
        )
    y = np.polynomial.polynomial.polyval(t, np.asarray(cfg.coeffs, dtype=np.float64))
    if cfg.noise_std > 0:
        y = y + cfg.noise_std * rng.standard_normal(cfg.n_train)
    return t, y


def sweep(t_train, y_train, degrees, lambdas, grid, sigma2=1.0) -> SweepResult:
    """pNML predictions on ``grid`` for every ``(degree, lambda)`` pair."""
    res = SweepResult(np.asarray(grid, dtype=np.float64), np.asarray(t_train), np.asarray(y_train))
    for d in degrees:
        data = Dataset(build_vandermonde(t_train, d), y_train)
        Xg = build_vandermonde(res.grid, d)
        for lam in lambdas:
            cfg = RidgeConfig(float(lam), sigma2)
            res.runs.append((d, lam))
            res.predictions[d, lam] = [pnml_predict(data, x, cfg) for x in Xg]
    return res


def _run_sweep(cfg, stem):
    t, y = sample_training(cfg)
    res = sweep(t, y, cfg.degrees, cfg.lambdas, cfg.grid_points, cfg.sigma2)
    res.paths = res.write(cfg.out_dir, stem)
    return res


def run_reg_sweep(cfg: ExperimentConfig) -> SweepResult:
    """Fixed degree, several regularizers; writes ``fig1_*.csv`` to ``out_dir``."""
    return _run_sweep(cfg, "fig1")


def run_degree_sweep(cfg: ExperimentConfig) -> SweepResult:
    """Several polynomial degrees at one regularizer; writes ``fig2_*.csv``."""
    return _run_sweep(cfg, "fig2")


SCORE_COLUMNS = ["y_hat", "h", "regret", "gamma", "flag"]


def score_rows(train: Dataset, test_features, cfg: RidgeConfig):
    rows = []
    for x in test_features:
        p: PnmlPrediction = pnml_predict(train, x, cfg)
        gamma = analyze(train, x).gamma if train.n_samples else math.inf
        flag = "learnable" if p.learnable else "non-learnable"
        rows.append([p.y_hat, p.h, p.regret, gamma, flag])
    return rows


def run_score(cfg: ExperimentConfig, train_csv=None, test_csv=None) -> Path:
    """Score every test vector against a training CSV; returns the output path.

    ``gamma`` is the unregularized spectral quantity; ``regret`` uses
    ``cfg.lambdas[0]``.
    """
    train_csv = train_csv or cfg.train_path
    test_csv = test_csv or cfg.test_path
    if not train_csv or not test_csv:
        raise ValueError("score mode needs both a training and a test CSV")
    train = csvio.read_dataset(train_csv)
    F, _ = csvio.read_test_points(test_csv, train.n_features)
    rows = score_rows(train, F, RidgeConfig(float(cfg.lambdas[0]), cfg.sigma2))
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "fit_scores.csv"
    csvio.write_table(path, SCORE_COLUMNS, rows)
    return path
