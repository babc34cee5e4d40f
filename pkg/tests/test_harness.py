import csv
import math

import numpy as np
import pytest

from annealpde.annealer import ExhaustiveSampler
from annealpde.errors import InvalidParameter, IterationLimit, LengthMismatch, OutputUnwritable
from annealpde.harness import (
    CSV_COLUMNS,
    SUMMARY_COLUMNS,
    SweepConfig,
    max_precision_updates,
    rmse,
    run_sweep,
    run_trial,
    summary_path,
    theoretical_updates,
    trial_seed,
)


def small_cfg(**kw):
    base = dict(problems=("sym1d",), n_values=(3,), b_values=(3,), n_step_values=(200,),
                trials=5, base_seed=11)
    base.update(kw)
    return SweepConfig(**base)


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def body(path):
    # everything but the wall_time_ms column
    return [row[:-1] for row in read_csv(path)]


class TestRmse:
    def test_equal(self):
        assert rmse([1.0, 2.0], [1.0, 2.0]) == 0

    def test_unit(self):
        assert rmse([1, 1], [0, 0]) == 1

    def test_value(self):
        assert rmse([3, 0], [0, 4]) == pytest.approx(math.sqrt(12.5))

    def test_mismatch(self):
        with pytest.raises(LengthMismatch):
            rmse([1, 2], [1])


class TestTheoreticalUpdates:
    def test_constant_eta(self):
        assert theoretical_updates(1e-8, 0.1, 0.1) == pytest.approx(7.0, abs=1e-12)

    def test_b3(self):
        assert theoretical_updates(1e-8, 0.25, 0.25) == pytest.approx(math.log2(1e8) / 2 - 1)
        assert theoretical_updates(1e-8, 0.25, 0.25) == pytest.approx(12.29, abs=0.01)

    def test_one_step(self):
        assert theoretical_updates(0.3 * 0.2, 0.3, 0.2) == pytest.approx(1.0)

    @pytest.mark.parametrize("b", range(2, 9))
    def test_simplified_form(self, b):
        eta = 2.0 ** (1 - b)
        assert theoretical_updates(1e-8, eta, eta) == pytest.approx(math.log2(1e8) / (b - 1) - 1)

    def test_ceiling(self):
        assert max_precision_updates(1e-8, 0.25, 0.25) == 13
        assert max_precision_updates(1e-8, 0.1, 0.1) == 7

    @pytest.mark.parametrize("args", [(1.0, 0.5, 0.5), (1e-8, 0.1, 1.0), (0.0, 0.1, 0.1)])
    def test_invalid(self, args):
        with pytest.raises(InvalidParameter):
            theoretical_updates(*args)


class TestRunTrial:
    def test_single_unknown(self):
        rec = run_trial("sym1d", 1, 8, 1000, 5, small_cfg())
        assert rec.success and rec.rmse < 1e-8

    def test_single_unknown_exhaustive(self):
        rec = run_trial("sym1d", 1, 8, 1000, 5, small_cfg(), sampler=ExhaustiveSampler())
        assert rec.success

    def test_deterministic(self):
        a = run_trial("asym1d", 5, 3, 300, 42, small_cfg())
        b = run_trial("asym1d", 5, 3, 300, 42, small_cfg())
        assert a.csv_row()[:-1] == b.csv_row()[:-1]

    def test_record_fields(self):
        rec = run_trial("poisson2d", 2, 3, 300, 1, small_cfg())
        assert rec.success == (rec.rmse < 1e-8)
        assert min(rec.iters_initial, rec.iters_descent, rec.n_precision_updates) >= 0
        assert rec.n_precision_updates <= max_precision_updates(1e-8, 0.25, 0.25) + 1

    def test_failure_recorded(self):
        rec = run_trial("sym1d", 3, 3, 50, 0, small_cfg(), sampler=BrokenSampler())
        assert not rec.success and rec.rmse == math.inf

    def test_updates_follow_theory(self):
        cfg = small_cfg()
        ups = [run_trial("sym1d", 9, 4, 1000, s, cfg).n_precision_updates for s in range(100)]
        assert abs(np.mean(ups) - theoretical_updates(1e-8, 2**-3, 2**-3)) <= 1.0


class BrokenSampler:
    def sample(self, Q, rng):
        raise IterationLimit("backend gave up")


class TestSweep:
    def test_cardinality_and_summary(self, tmp_path):
        out = tmp_path / "trials.csv"
        recs = run_sweep(small_cfg(), out=out)
        assert len(recs) == 5
        rows = read_csv(out)
        assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == 6
        summary = read_csv(summary_path(out))
        assert tuple(summary[0]) == SUMMARY_COLUMNS and len(summary) == 2
        rate = float(summary[1][SUMMARY_COLUMNS.index("success_rate")])
        assert rate == sum(r.success for r in recs) / 5
        mean = float(summary[1][SUMMARY_COLUMNS.index("mean_iters_descent")])
        assert mean == pytest.approx(np.mean([r.iters_descent for r in recs]), abs=1e-12)

    def test_grid_order(self):
        cfg = small_cfg(problems=("sym1d", "poisson2d"), n_values=(2, 3), trials=2)
        recs = run_sweep(cfg)
        keys = [(r.problem, r.n, r.trial_index) for r in recs]
        assert keys == [(p, n, i) for p in ("sym1d", "poisson2d") for n in (2, 3) for i in (0, 1)]
        assert len({r.seed for r in recs}) == len(recs)

    def test_reproducible_bytes(self, tmp_path):
        run_sweep(small_cfg(), out=tmp_path / "a.csv")
        run_sweep(small_cfg(), out=tmp_path / "b.csv", workers=2)
        assert body(tmp_path / "a.csv") == body(tmp_path / "b.csv")

    def test_formatting(self, tmp_path):
        out = tmp_path / "t.csv"
        run_sweep(small_cfg(trials=1), out=out)
        row = dict(zip(CSV_COLUMNS, read_csv(out)[1]))
        assert row["success"] in ("0", "1")
        assert float(row["lambda_final"]) == float(f"{float(row['lambda_final']):.17g}")

    def test_seed_stable(self):
        assert trial_seed(0, ("sym1d", 9, 4, 1000), 3) == trial_seed(0, ["sym1d", 9, 4, 1000], 3)
        assert trial_seed(1, ("sym1d", 9, 4, 1000), 3) != trial_seed(0, ("sym1d", 9, 4, 1000), 3)

    def test_unwritable(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        with pytest.raises(OutputUnwritable):
            run_sweep(small_cfg(trials=1), out=blocker / "x.csv")

    def test_config_validation(self):
        with pytest.raises(InvalidParameter):
            SweepConfig(problems=())
        with pytest.raises(InvalidParameter):
            SweepConfig(trials=0)
        with pytest.raises(InvalidParameter):
            SweepConfig.from_dict({"bogus": 1})

    def test_paper_scale_config_expressible(self):
        cfg = SweepConfig.from_dict({
            "problems": ["sym1d", "asym1d"], "n_values": [9, 19, 39], "b_values": [3, 4, 5, 6, 7, 8],
            "n_step_values": [1000, 10000], "trials": 1000, "eta_mode": "const", "eta": 0.1,
        })
        assert len(cfg.tuples()) == 72
        assert cfg.solver_config(8, 1000).initial_mesh == 0.1
