import math

import numpy as np
import pytest

from pnml_linreg import (
    Dataset,
    OracleDivergenceError,
    QuadratureSpec,
    RidgeConfig,
    numeric_density_check,
    numeric_k,
    pnml_predict,
)
from pnml_linreg.oracle import genie_residuals, simpson_weights

from conftest import random_dataset, random_instances


class TestSimpson:
    @pytest.mark.parametrize("n", [3, 5, 101])
    def test_exact_on_cubics(self, n):
        x, h = np.linspace(-1.0, 2.0, n, retstep=True)
        f = 4 * x**3 - x**2 + 2 * x - 7
        exact = (2.0**4 - 1) - (8 + 1) / 3 + (4 - 1) - 7 * 3
        assert math.fsum(simpson_weights(n, h) * f) == pytest.approx(exact, rel=1e-13)

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_needs_odd(self, n):
        with pytest.raises(ValueError):
            simpson_weights(n, 0.1)

    def test_pattern(self):
        np.testing.assert_allclose(simpson_weights(5, 3.0), [1, 4, 2, 4, 1])


class TestQuadratureSpec:
    def test_defaults(self):
        q = QuadratureSpec()
        assert (q.half_width_sigmas, q.points_per_sigma) == (12.0, 64)
        assert q.n_points == 1537 and q.n_points % 2 == 1

    @pytest.mark.parametrize("kw", [dict(half_width_sigmas=7.9), dict(points_per_sigma=8), dict(points_per_sigma=20.5)])
    def test_invariants(self, kw):
        with pytest.raises(ValueError):
            QuadratureSpec(**kw)

    def test_odd_count_rounding(self):
        assert QuadratureSpec(8.25, 17).n_points % 2 == 1


class TestGenieResiduals:
    def test_affine_in_label(self):
        rng = np.random.default_rng(2)
        d = random_dataset(rng, 3, 6)
        x = rng.standard_normal(3)
        p = pnml_predict(d, x, RidgeConfig(0.3))
        ys = np.linspace(-4, 4, 9)
        r = genie_residuals(d, x, ys, 0.3)
        np.testing.assert_allclose(r, (1 - p.h) * (ys - p.y_hat), rtol=1e-10, atol=1e-12)


class TestNumericK:
    def test_zero_vector(self, rng):
        d = random_dataset(rng, 3, 5)
        assert numeric_k(d, np.zeros(3), RidgeConfig(0.0)) == pytest.approx(1.0, abs=1e-9)

    def test_half(self):
        assert numeric_k(Dataset([[1.0]], [0.4]), [1.0], RidgeConfig(0.0)) == pytest.approx(2.0, abs=1e-6)

    def test_random_instances(self):
        rng = np.random.default_rng(3)
        for data, x, lam in random_instances(40, 100):
            cfg = RidgeConfig(lam, float(rng.uniform(0.1, 5)))
            k_analytic = pnml_predict(data, x, cfg).k_factor
            assert numeric_k(data, x, cfg) / k_analytic - 1 == pytest.approx(0, abs=1e-6)

    def test_refinement_converged(self):
        for data, x, lam in random_instances(41, 10):
            cfg = RidgeConfig(lam)
            q = QuadratureSpec()
            k1, k2 = numeric_k(data, x, cfg, q), numeric_k(data, x, cfg, q.refined())
            assert abs(k2 / k1 - 1) < 1e-8

    def test_refinement_shrinks(self):
        # error ratio per doubling >= 10, or already at the round-off floor
        for data, x, lam in random_instances(42, 10):
            cfg = RidgeConfig(lam)
            ks = [numeric_k(data, x, cfg, QuadratureSpec(8, p)) for p in (16, 32, 64, 128)]
            diffs = [abs(b - a) for a, b in zip(ks, ks[1:])]
            floor = 1e-12 * ks[-1]
            for d1, d2 in zip(diffs, diffs[1:]):
                assert d2 <= max(d1 / 10, floor)

    def test_deterministic(self):
        data, x, lam = next(random_instances(43, 1, lambdas=(0.1,)))
        assert numeric_k(data, x, RidgeConfig(lam)) == numeric_k(data, x, RidgeConfig(lam))

    def test_refuses_non_learnable(self):
        d = Dataset([[1.0, 0.0]], [0.0])
        with pytest.raises(OracleDivergenceError, match="non-learnable"):
            numeric_k(d, [0.0, 1.0], RidgeConfig(0.0))
        with pytest.raises(OracleDivergenceError):
            numeric_k(d, [0.0, 1.0], RidgeConfig(1e-9))


class TestDensityCheck:
    def test_at_mode(self, rng):
        d = random_dataset(rng, 2, 4)
        x = rng.standard_normal(2)
        p = pnml_predict(d, x, RidgeConfig(0.0, 3.0))
        assert numeric_density_check(d, x, RidgeConfig(0.0, 3.0), [p.y_hat]) < 1e-12

    @pytest.mark.parametrize("lams", [(0.0,), (1e-4, 0.1, 1.0)])
    def test_random_grid(self, lams):
        checked = 0
        for data, x, lam in random_instances(44, 60, lambdas=lams):
            cfg = RidgeConfig(lam)
            p = pnml_predict(data, x, cfg)
            if p.h >= 0.95:
                continue
            ys = np.linspace(p.y_hat - 5 * p.scale, p.y_hat + 5 * p.scale, 101)
            assert numeric_density_check(data, x, cfg, ys) < 1e-8
            checked += 1
        assert checked >= 30

    def test_refuses(self):
        with pytest.raises(OracleDivergenceError):
            numeric_density_check(Dataset([[1.0, 0.0]], [0.0]), [0.0, 1.0], RidgeConfig(0.0), [0.0])
