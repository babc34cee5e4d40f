"""Simulated-annealing QUBO sampler and an exhaustive ground-state oracle.

The solver core only talks to a :class:`Sampler`: anything with a
``sample(Q, rng) -> SampleResult`` method. Hardware clients can be dropped in
behind the same contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Protocol, Tuple

import numba
import numpy as np

from .errors import EmptyProblem, InvalidParameter, TooLarge
from .qubo import QuboProblem, energy

__all__ = [
    "AnnealParams",
    "SampleResult",
    "Sampler",
    "SimulatedAnnealingSampler",
    "ExhaustiveSampler",
    "auto_beta_range",
    "beta_schedule",
    "anneal",
    "exhaustive_ground_state",
]

MAX_EXHAUSTIVE_BITS = 24


@dataclass(frozen=True)
class AnnealParams:
    """Annealing controls.

    ``n_steps`` is the number of temperature steps (the annealing time); each
    step performs ``sweeps_per_step`` full passes of single-bit flips.
    """

    n_steps: int = 1000
    sweeps_per_step: int = 1
    num_reads: int = 1
    beta_override: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.n_steps < 1 or self.sweeps_per_step < 1 or self.num_reads < 1:
            raise InvalidParameter(f"invalid anneal params {self}")
        if self.beta_override is not None:
            lo, hi = self.beta_override
            if not 0 < lo < hi:
                raise InvalidParameter(f"need 0 < beta_min < beta_max, got {self.beta_override}")


@dataclass(frozen=True, eq=False)
class SampleResult:
    q: np.ndarray
    energy: float
    reads_taken: int = 1


class Sampler(Protocol):
    def sample(self, Q: QuboProblem, rng: np.random.Generator) -> SampleResult: ...


def auto_beta_range(Q: QuboProblem) -> Tuple[float, float]:
    """Hot and cold inverse temperatures for a geometric schedule.

    ``beta_min = ln 2 / dE_max`` makes the largest single-flip uphill move
    accepted with probability 1/2; ``beta_max = ln 100 / dE_min`` makes the
    smallest one accepted with probability 1/100.
    """
    diag = np.abs(Q.diagonal)
    coup = np.abs(Q.symmetric_couplings())
    coefs = np.concatenate([diag, Q.couplings[np.triu_indices(Q.num_bits, 1)]])
    nonzero = np.abs(coefs[coefs != 0.0])
    if nonzero.size == 0:
        raise EmptyProblem("all QUBO coefficients are zero")
    de_max = float(np.max(diag + coup.sum(axis=1)))
    de_min = float(np.min(nonzero))
    beta_min = math.log(2.0) / de_max
    beta_max = math.log(100.0) / de_min
    if beta_max <= beta_min:
        beta_max = 100.0 * beta_min
    return beta_min, beta_max


def beta_schedule(beta_min: float, beta_max: float, n_steps: int) -> np.ndarray:
    if n_steps == 1:
        return np.array([beta_max])
    return np.geomspace(beta_min, beta_max, n_steps)


@numba.njit(cache=True)
def _anneal_chain(diag, W, betas, sweeps, seed):
    np.random.seed(seed)
    n = diag.size
    q = np.zeros(n)
    for i in range(n):
        if np.random.random() < 0.5:
            q[i] = 1.0
    field = W @ q
    e = 0.0
    for i in range(n):
        e += q[i] * (diag[i] + 0.5 * field[i])
    best_e = e
    best_q = q.copy()
    for beta in betas:
        for _ in range(sweeps):
            for i in range(n):
                s = 1.0 - 2.0 * q[i]
                de = s * (diag[i] + field[i])
                if de <= 0.0 or np.random.random() < math.exp(-beta * de):
                    q[i] += s
                    e += de
                    for j in range(n):
                        field[j] += s * W[j, i]
                    if e < best_e:
                        best_e = e
                        best_q[:] = q
    return best_q


def anneal(Q: QuboProblem, params: AnnealParams, rng: np.random.Generator) -> SampleResult:
    """Best state over ``params.num_reads`` Metropolis annealing chains.

    Each chain starts from uniformly random bits and sweeps the bits in order
    at each of ``n_steps`` geometrically spaced inverse temperatures. Chain
    ``k`` gets a sub-seed that depends only on the call seed and ``k``.
    """
    n = Q.num_bits
    if n < 1:
        raise InvalidParameter("QUBO has no variables")
    base_seed = int(rng.integers(0, 2**32))
    sub_seeds = [(base_seed + 0x9E3779B9 * k) % 2**32 for k in range(params.num_reads)]
    try:
        beta_min, beta_max = params.beta_override or auto_beta_range(Q)
    except EmptyProblem:
        # every state is a ground state; return the chain's random start
        betas = np.empty(0)
    else:
        betas = beta_schedule(beta_min, beta_max, params.n_steps)

    W = np.ascontiguousarray(Q.symmetric_couplings())
    best_q, best_e = None, math.inf
    for seed in sub_seeds:
        q = _anneal_chain(Q.diagonal, W, betas, params.sweeps_per_step, seed)
        e = energy(Q, q)
        if e < best_e:
            best_q, best_e = q, e
    return SampleResult(best_q.astype(np.int8), best_e, params.num_reads)


@numba.njit(cache=True)
def _enumerate(diag, couplings, tol):
    n = diag.size
    best_e = np.inf
    best_k = 0
    for k in range(1 << n):
        e = 0.0
        for i in range(n):
            if (k >> (n - 1 - i)) & 1:
                e += diag[i]
                for j in range(i + 1, n):
                    if (k >> (n - 1 - j)) & 1:
                        e += couplings[i, j]
        if e < best_e - tol:
            best_e = e
            best_k = k
    return best_k


def exhaustive_ground_state(Q: QuboProblem) -> SampleResult:
    """Exact minimum by enumeration.

    States are visited in increasing binary value with ``q[0]`` as the most
    significant bit, so energy ties resolve to the lowest value.
    """
    n = Q.num_bits
    if n > MAX_EXHAUSTIVE_BITS:
        raise TooLarge(f"{n} bits exceeds the exhaustive limit of {MAX_EXHAUSTIVE_BITS}")
    scale = float(np.abs(Q.diagonal).sum() + np.abs(Q.couplings).sum())
    k = _enumerate(Q.diagonal, np.ascontiguousarray(Q.couplings), 1e-13 * scale)
    q = np.array([(k >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.int8)
    return SampleResult(q, energy(Q, q), 1)


@dataclass(frozen=True)
class SimulatedAnnealingSampler:
    params: AnnealParams = AnnealParams()

    def sample(self, Q: QuboProblem, rng: np.random.Generator) -> SampleResult:
        return anneal(Q, self.params, rng)


class ExhaustiveSampler:
    """Deterministic sampler for small problems; ignores ``rng``."""

    def sample(self, Q: QuboProblem, rng=None) -> SampleResult:
        return exhaustive_ground_state(Q)
