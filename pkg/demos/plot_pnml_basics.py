"""
The pNML predictive density for a single test point
===================================================

Fit a small ridge problem, ask for the pNML prediction at a few test
vectors and compare the closed-form normalizer with brute-force
integration over hypothetical labels.
"""

import numpy as np

from pnml_linreg import (
    Dataset,
    RidgeConfig,
    density_at,
    log_loss,
    numeric_k,
    pnml_predict,
)

rng = np.random.default_rng(0)

# 12 samples in R^3 from a noisy linear model
theta_true = np.array([1.0, -2.0, 0.5])
features = rng.standard_normal((12, 3))
labels = features @ theta_true + 0.3 * rng.standard_normal(12)
data = Dataset(features, labels)
cfg = RidgeConfig(lam=0.1, sigma2=0.09)

# a typical point, a far-away point and the origin
for name, x in [
    ("typical", features.mean(axis=0) + 0.5),
    ("far", 6.0 * np.ones(3)),
    ("origin", np.zeros(3)),
]:
    pred = pnml_predict(data, x, cfg)
    print(
        f"{name:8s} y_hat={pred.y_hat:+.3f}  h={pred.h:.4f}  "
        f"K={pred.k_factor:.4f}  regret={pred.regret:.4f} nats  "
        f"std={pred.scale:.3f}"
    )

# the normalizer K, recomputed by refitting the genie on a label grid
x = 6.0 * np.ones(3)
pred = pnml_predict(data, x, cfg)
print("closed-form K:", pred.k_factor)
print("quadrature  K:", numeric_k(data, x, cfg))

# log-loss of the realized label under the pNML density
y_true = x @ theta_true
print("pNML density at y_true:", density_at(pred, y_true))
print("log-loss at y_true:", log_loss(pred, y_true))
