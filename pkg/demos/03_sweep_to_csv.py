# %% [markdown]
# Reproducible experiment sweeps
#
# A sweep is the Cartesian product of problems, sizes, b and annealing
# steps, times a number of trials. Per-trial seeds derive from base_seed, so
# rerunning gives identical CSV rows (apart from wall time). The same grid
# can be run from the shell with
#
#     annealpde sweep --config demos/paper_fig2.json --out results/fig2.csv --workers 8

# %%
import csv
import tempfile
from pathlib import Path

from annealpde.harness import SweepConfig, run_sweep, summary_path

cfg = SweepConfig(problems=("sym1d", "asym1d", "poisson2d"), n_values=(3,),
                  b_values=(3, 4), n_step_values=(1000,), trials=5, base_seed=1)
out = Path(tempfile.mkdtemp()) / "trials.csv"
run_sweep(cfg, out=out)

# %%
with open(summary_path(out)) as fh:
    for row in csv.reader(fh):
        print(",".join(row))
