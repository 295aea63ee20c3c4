"""
Learnable directions in the over-parameterized regime
=====================================================

With ten samples and a degree-10 polynomial (11 coefficients) the model has
more parameters than data.  The eigendecomposition of the empirical
correlation matrix tells which test vectors are still predictable: a vector
inside the span of the training features gets a finite regret, one with a
component along a null direction does not.
"""

import numpy as np

from pnml_linreg import Dataset, RidgeConfig, analyze, build_vandermonde, pnml_predict
from pnml_linreg.experiments import ExperimentConfig, sample_training

cfg = ExperimentConfig.defaults("degree-sweep", seed=0)
t, y = sample_training(cfg)
data = Dataset(build_vandermonde(t, 10), y)
print(f"M = {data.n_features}, N = {data.n_samples}")

# a training abscissa, a point between samples, and the interval edge
for t_test in (t[0], 0.5 * (t[0] + t[1]), 1.0):
    x = build_vandermonde([t_test], 10)[0]
    rep = analyze(data, x)
    ridge = pnml_predict(data, x, RidgeConfig(1e-4)).regret
    print(
        f"t={t_test:+.3f}  spectral regret={rep.regret_spectral:.3f}  "
        f"ridge(1e-4) regret={ridge:.3f}  top direction={rep.top_contribution_index}"
    )

# eigenvalue spectrum: one direction of R^11 is not seen by the data at all
rep = analyze(data, np.ones(data.n_features))
print("eigenvalues:", np.array2string(rep.eigenvalues, precision=2))
print("null directions:", np.flatnonzero(rep.null_mask))

# a test vector along that null direction cannot be learned without lambda
null_dir = rep.eigenvectors[:, rep.null_mask][:, 0]
print("regret along null direction (lambda=0):", pnml_predict(data, null_dir).regret)
print("... with lambda=1e-4:", pnml_predict(data, null_dir, RidgeConfig(1e-4)).regret)
