# %% [markdown]
# Mesh refinement count versus precision parameter b
#
# With r_ini = eta = 2**(1-b) the mesh reaches 1e-8 after about
# log2(1e8)/(b-1) - 1 reductions; a constant eta = 0.1 always needs 7.

# %%
import numpy as np

from annealpde.harness import SweepConfig, run_trial, theoretical_updates

for eta_mode in ("b-dep", "const"):
    cfg = SweepConfig(eta_mode=eta_mode, eta=0.1)
    print(f"eta mode: {eta_mode}")
    for b in range(3, 7):
        recs = [run_trial("sym1d", 9, b, 1000, seed, cfg) for seed in range(10)]
        r0 = 2.0 ** (1 - b) if eta_mode == "b-dep" else 0.1
        print(f"  b={b}  updates {np.mean([r.n_precision_updates for r in recs]):5.2f}"
              f"  estimate {theoretical_updates(1e-8, r0, r0):5.2f}"
              f"  descent iters {np.mean([r.iters_descent for r in recs]):6.1f}"
              f"  success {np.mean([r.success for r in recs]):.1f}")
