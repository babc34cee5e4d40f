import itertools
import math

import numpy as np
import pytest

from annealpde.annealer import (
    AnnealParams,
    ExhaustiveSampler,
    SimulatedAnnealingSampler,
    anneal,
    auto_beta_range,
    beta_schedule,
    exhaustive_ground_state,
)
from annealpde.errors import EmptyProblem, InvalidParameter, TooLarge
from annealpde.qubo import QuboProblem, build_initial_qubo, energy, make_encoding


def qubo(diag, coup=None):
    diag = np.asarray(diag, dtype=float)
    c = np.zeros((diag.size, diag.size)) if coup is None else np.asarray(coup, dtype=float)
    return QuboProblem(diag, c)


def random_qubo(rng, n):
    return QuboProblem(rng.standard_normal(n), np.triu(rng.standard_normal((n, n)), 1))


def brute_force_min(Q):
    return min(energy(Q, q) for q in itertools.product((0, 1), repeat=Q.num_bits))


PAIR = qubo([1, 1], [[0, -3], [0, 0]])


class TestBetaRange:
    def test_single(self):
        assert auto_beta_range(qubo([1.0])) == pytest.approx((math.log(2), math.log(100)))

    def test_scaling(self, rng):
        Q = random_qubo(rng, 6)
        lo, hi = auto_beta_range(Q)
        lo10, hi10 = auto_beta_range(Q.scaled(10))
        assert lo10 == pytest.approx(lo / 10) and hi10 == pytest.approx(hi / 10)

    def test_pair(self):
        assert auto_beta_range(PAIR) == pytest.approx((math.log(2) / 4, math.log(100)))

    def test_empty(self):
        with pytest.raises(EmptyProblem):
            auto_beta_range(qubo([0.0, 0.0]))

    def test_schedule_geometric(self):
        s = beta_schedule(0.1, 10.0, 5)
        np.testing.assert_allclose(s, [0.1, 0.1 * 10**0.5, 1, 10**0.5, 10])


class TestAnneal:
    def test_one_bit(self, rng):
        res = anneal(qubo([-1.0]), AnnealParams(n_steps=10), rng)
        assert res.q.tolist() == [1] and res.energy == -1

    def test_uncoupled_positive(self, rng):
        res = anneal(qubo([1.0, 1.0]), AnnealParams(n_steps=10), rng)
        assert res.q.tolist() == [0, 0] and res.energy == 0

    def test_energy_consistent(self, rng):
        Q = random_qubo(rng, 10)
        res = anneal(Q, AnnealParams(n_steps=50, num_reads=2), rng)
        assert res.energy == energy(Q, res.q) and res.reads_taken == 2

    def test_all_zero_problem(self, rng):
        res = anneal(qubo([0.0, 0.0, 0.0]), AnnealParams(n_steps=10), rng)
        assert res.energy == 0 and res.q.shape == (3,)

    def test_deterministic(self):
        Q = random_qubo(np.random.default_rng(3), 12)
        params = AnnealParams(n_steps=200, num_reads=3)
        a = anneal(Q, params, np.random.default_rng(99))
        b = anneal(Q, params, np.random.default_rng(99))
        assert a.q.tolist() == b.q.tolist() and a.energy == b.energy

    def test_matches_ground_state_8_bits(self):
        # random 8-bit QUBOs, long anneal with 4 reads: ground state in >= 99/100 runs
        hits = 0
        for rep in range(100):
            rng = np.random.default_rng(1000 + rep)
            Q = random_qubo(rng, 8)
            res = anneal(Q, AnnealParams(n_steps=10_000, num_reads=4), rng)
            hits += res.energy == pytest.approx(exhaustive_ground_state(Q).energy, abs=1e-12)
        assert hits >= 99

    def test_never_below_ground(self):
        for rep in range(30):
            rng = np.random.default_rng(rep)
            Q = random_qubo(rng, int(rng.integers(1, 17)))
            res = anneal(Q, AnnealParams(n_steps=30), rng)
            assert res.energy >= exhaustive_ground_state(Q).energy - 1e-12

    def test_best_of_reads_monotone(self):
        Q = random_qubo(np.random.default_rng(7), 16)
        for seed in range(10):
            energies = [anneal(Q, AnnealParams(n_steps=5, num_reads=k),
                               np.random.default_rng(seed)).energy for k in (1, 2, 4, 8)]
            assert all(b <= a for a, b in zip(energies, energies[1:]))

    def test_beta_override(self, rng):
        res = anneal(PAIR, AnnealParams(n_steps=100, beta_override=(0.1, 20.0)), rng)
        assert res.energy == -1

    @pytest.mark.parametrize("kwargs", [dict(n_steps=0), dict(num_reads=0),
                                        dict(beta_override=(2.0, 1.0))])
    def test_bad_params(self, kwargs):
        with pytest.raises(InvalidParameter):
            AnnealParams(**kwargs)


class TestExhaustive:
    def test_one_bit(self):
        assert exhaustive_ground_state(qubo([-1.0])).q.tolist() == [1]

    def test_pair(self):
        res = exhaustive_ground_state(PAIR)
        assert res.q.tolist() == [1, 1] and res.energy == -1

    def test_tie_break_lowest_value(self):
        res = exhaustive_ground_state(build_initial_qubo([[1.0]], make_encoding(1, 2)))
        assert res.q.tolist() == [0, 0] and res.energy == 0

    def test_tie_break_msb_first(self):
        # states 01 and 10 tie at -1; 01 has the lower binary value
        res = exhaustive_ground_state(qubo([-1, -1], [[0, 5], [0, 0]]))
        assert res.q.tolist() == [0, 1]

    def test_matches_brute_force(self, rng):
        for _ in range(20):
            Q = random_qubo(rng, int(rng.integers(1, 11)))
            assert exhaustive_ground_state(Q).energy == pytest.approx(brute_force_min(Q), abs=1e-12)

    def test_too_large(self):
        with pytest.raises(TooLarge):
            exhaustive_ground_state(qubo(np.ones(25)))

    def test_samplers(self, rng):
        assert ExhaustiveSampler().sample(PAIR).energy == -1
        assert SimulatedAnnealingSampler(AnnealParams(100)).sample(PAIR, rng).energy == -1
