import math

import numpy as np
import pytest

from pnml_linreg import Dataset, RidgeConfig, build_vandermonde, pnml_predict
from pnml_linreg.experiments import (
    ExperimentConfig,
    run_degree_sweep,
    run_label,
    run_reg_sweep,
    run_score,
    sample_training,
    sweep,
)


class TestConfig:
    def test_defaults(self):
        c = ExperimentConfig.defaults("reg-sweep")
        assert (c.n_train, c.degrees, c.lambdas, c.grid) == (3, (2,), (0.0, 0.1, 1.0), (-1.0, 1.0, 201))
        c = ExperimentConfig.defaults("degree-sweep")
        assert (c.n_train, c.degrees, c.lambdas) == (10, (2, 3, 10), (1e-4,))

    @pytest.mark.parametrize(
        "kw",
        [
            dict(grid=(1.0, -1.0, 10)),
            dict(grid=(-1.0, 1.0, 1)),
            dict(n_train=0),
            dict(degrees=()),
            dict(lambdas=(-0.1,)),
            dict(sigma2=0.0),
            dict(experiment="nope"),
            dict(label_source="file"),
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            ExperimentConfig.defaults("reg-sweep").with_(**kw)

    def test_label(self):
        assert run_label("yhat", 2, 0.1) == "yhat_deg2_lam0.1"
        assert run_label("regret", 10, 1e-4) == "regret_deg10_lam0.0001"
        assert run_label("regret", 2, 0.0) == "regret_deg2_lam0"


class TestSampling:
    def test_default_labels(self):
        c = ExperimentConfig.defaults("reg-sweep", seed=5)
        t, y = sample_training(c)
        assert t.shape == (3,) and np.all(np.abs(t) <= 1)
        np.testing.assert_allclose(y, t**2 - 0.5 * t, rtol=1e-15)

    def test_noise_and_seed(self):
        c = ExperimentConfig.defaults("reg-sweep", seed=5, noise_std=0.1)
        t1, y1 = sample_training(c)
        t2, y2 = sample_training(c)
        np.testing.assert_array_equal(y1, y2)
        assert not np.allclose(y1, t1**2 - 0.5 * t1)

    def test_resamples_duplicates(self, monkeypatch, caplog):
        import pnml_linreg.experiments as ex

        calls = iter([True, True, False])
        monkeypatch.setattr(ex, "_has_duplicates", lambda t: next(calls))
        t, _ = sample_training(ExperimentConfig.defaults("reg-sweep"))
        assert t.shape == (3,)
        assert caplog.text.count("resampling") == 2

    def test_resample_bounded(self, monkeypatch):
        import pnml_linreg.experiments as ex

        monkeypatch.setattr(ex, "_has_duplicates", lambda t: True)
        with pytest.raises(RuntimeError, match="distinct"):
            sample_training(ExperimentConfig.defaults("reg-sweep", max_resample=3))

    def test_from_file(self, tmp_path):
        p = tmp_path / "ty.csv"
        p.write_text("t,y\n0.1,1\n-0.5,2\n0.7,3\n")
        c = ExperimentConfig.defaults("reg-sweep", label_source="file", train_path=str(p))
        t, y = sample_training(c)
        assert t.tolist() == [0.1, -0.5, 0.7] and y.tolist() == [1, 2, 3]


class TestSweep:
    def test_matches_library(self):
        t = np.array([-0.6, 0.1, 0.8])
        y = np.array([0.3, -0.2, 1.0])
        grid = np.linspace(-1, 1, 11)
        res = sweep(t, y, [2], [0.0, 0.5], grid)
        data = Dataset(build_vandermonde(t, 2), y)
        for lam in (0.0, 0.5):
            for i, g in enumerate(grid):
                p = pnml_predict(data, build_vandermonde([g], 2)[0], RidgeConfig(lam))
                assert res.y_hat(2, lam)[i] == p.y_hat
                assert res.regret(2, lam)[i] == p.regret

    def test_files(self, tmp_path):
        res = run_reg_sweep(ExperimentConfig.defaults("reg-sweep", out_dir=str(tmp_path), grid=(-1.0, 1.0, 5)))
        pred = res.paths["prediction"].read_text().splitlines()
        assert pred[0] == "t,yhat_deg2_lam0,yhat_deg2_lam0.1,yhat_deg2_lam1"
        assert len(pred) == 6
        reg = res.paths["regret"].read_text().splitlines()
        assert reg[0] == "t,regret_deg2_lam0,regret_deg2_lam0.1,regret_deg2_lam1"
        assert res.paths["train"].read_text().startswith("t,y\n")

    def test_degree_sweep_over_parameterized(self, tmp_path):
        res = run_degree_sweep(ExperimentConfig.defaults("degree-sweep", out_dir=str(tmp_path)))
        assert res.runs == [(2, 1e-4), (3, 1e-4), (10, 1e-4)]
        assert np.all(np.isfinite(res.regret(10, 1e-4)))
        header = res.paths["regret"].read_text().splitlines()[0]
        assert header == "t,regret_deg2_lam0.0001,regret_deg3_lam0.0001,regret_deg10_lam0.0001"


class TestScore:
    def _train(self, tmp_path, text):
        p = tmp_path / "train.csv"
        p.write_text(text)
        return p

    def test_duplicate_row_finite(self, tmp_path):
        tr = self._train(tmp_path, "x0,x1,y\n1,0,1\n0,1,2\n1,1,2\n")
        te = tmp_path / "test.csv"
        te.write_text("x0,x1,y\n1,0,1\n")
        out = run_score(ExperimentConfig.defaults("score", out_dir=str(tmp_path)), tr, te)
        lines = out.read_text().splitlines()
        assert lines[0] == "y_hat,h,regret,gamma,flag"
        fields = lines[1].split(",")
        assert math.isfinite(float(fields[2])) and fields[4] == "learnable"

    def test_orthogonal_non_learnable(self, tmp_path):
        tr = self._train(tmp_path, "x0,x1,x2,y\n1,0,0,1\n0,1,0,2\n")
        te = tmp_path / "test.csv"
        te.write_text("x0,x1,x2\n0,0,1\n")
        out = run_score(ExperimentConfig.defaults("score", out_dir=str(tmp_path)), tr, te)
        fields = out.read_text().splitlines()[1].split(",")
        assert fields[2] == "inf" and fields[3] == "inf" and fields[4] == "non-learnable"

    def test_empty_test(self, tmp_path):
        tr = self._train(tmp_path, "x0,y\n1,1\n")
        te = tmp_path / "test.csv"
        te.write_text("x0,y\n")
        out = run_score(ExperimentConfig.defaults("score", out_dir=str(tmp_path)), tr, te)
        assert out.read_text() == "y_hat,h,regret,gamma,flag\n"
