"""
Polynomial fits: regret as a function of the regularizer
========================================================

Three random abscissae in [-1, 1], a quadratic model and lambda in
{0, 0.1, 1}.  Without regularization the fitted curve passes through every
training label; the regret is lowest near the data and shrinks everywhere as
lambda grows.
"""

import numpy as np

from pnml_linreg.experiments import ExperimentConfig, sample_training, sweep

cfg = ExperimentConfig.defaults("reg-sweep", seed=0)
t, y = sample_training(cfg)
res = sweep(t, y, cfg.degrees, cfg.lambdas, cfg.grid_points)

print("training t:", np.round(t, 3))
for lam in cfg.lambdas:
    r = res.regret(2, lam)
    print(f"lambda={lam:<4g} regret min={r.min():.3f} max={r.max():.3f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(6, 6))
    for lam in cfg.lambdas:
        top.plot(res.grid, res.y_hat(2, lam), label=f"lambda={lam:g}")
        bottom.plot(res.grid, res.regret(2, lam), label=f"lambda={lam:g}")
    top.plot(t, y, "ro")
    bottom.plot(t, np.zeros_like(t), "r|", markersize=12)
    top.set_ylabel("prediction")
    bottom.set_ylabel("regret [nats]")
    bottom.set_xlabel("t")
    top.legend()
    fig.savefig("regularization_sweep.png", dpi=120)
    print("saved regularization_sweep.png")
