"""Smallest generalized eigenpair of ``A v = lam B v`` by QUBO annealing.

Two stages:

* initial guess: alternate between annealing ``min_v v^T (A - lam B) v`` over
  the ``b``-bit decode grid and resetting ``lam`` to the Rayleigh quotient of
  the result, until ``lam`` stops decreasing;
* iterative descent: anneal for a correction ``d`` on a mesh of size ``r``,
  keep the part orthogonal to ``v``, take a clamped line-search step and
  accept it if the Rayleigh quotient drops. On rejection shrink the mesh,
  ``r <- eta * r``, until ``r`` reaches the tolerance ``epsilon0``.

The bit count stays ``n * b`` throughout; precision comes from shrinking ``r``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .annealer import AnnealParams, Sampler, SimulatedAnnealingSampler
from .errors import AllZeroSample, DimensionMismatch, InvalidParameter, IterationLimit
from .linalg import cholesky_factor, normalize, rayleigh_quotient, sym_matrix
from .qubo import build_descent_qubo, build_initial_qubo, decode, make_encoding

__all__ = [
    "GepProblem",
    "SolverConfig",
    "SolverTrace",
    "GepSolution",
    "Outcome",
    "DescentOutcome",
    "initial_lambda",
    "initial_guess_stage",
    "step_length",
    "orthogonalize",
    "descent_iteration",
    "iterative_descent_stage",
    "solve_gep",
]

MAX_ZERO_RETRIES = 3
# relative slack when deciding that the mesh has reached its floor, so that
# e.g. 0.1**8 computed by repeated products still counts as reaching 1e-8
_MESH_FLOOR_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class GepProblem:
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A, B = sym_matrix(self.A), sym_matrix(self.B)
        if A.shape != B.shape:
            raise DimensionMismatch(f"A {A.shape} and B {B.shape} differ in order")
        cholesky_factor(B)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def shifted(self, lam: float) -> np.ndarray:
        """``C = A - lam * B``."""
        return self.A - lam * self.B


@dataclass(frozen=True)
class SolverConfig:
    """Solver settings.

    ``eta_mode="b-dep"`` shrinks the mesh by ``2**(1-b)`` per update, matching
    the decode grid resolution; ``"const"`` uses ``eta``. When ``r_ini`` is
    left as None it defaults to ``2**(1-b)`` or to ``eta`` respectively.
    ``mesh_floor="scaled"`` stops at ``epsilon0 / 2**(b-1)`` instead of
    ``epsilon0``. With ``zero_sample_fallback`` off, the initial stage raises
    :class:`AllZeroSample` instead of falling back to the random start vector.
    """

    b: int = 4
    epsilon0: float = 1e-8
    r_ini: Optional[float] = None
    eta_mode: str = "b-dep"
    eta: float = 0.1
    n_rpt: int = 0
    lambda_tol: float = 1e-12
    max_initial_iters: int = 100
    max_descent_iters: int = 100_000
    mesh_floor: str = "epsilon0"
    early_exit: bool = False
    zero_sample_fallback: bool = True
    anneal: AnnealParams = AnnealParams()

    def __post_init__(self):
        if self.b < 2:
            raise InvalidParameter(f"b must be >= 2, got {self.b}")
        if self.eta_mode not in ("b-dep", "const"):
            raise InvalidParameter(f"unknown eta_mode {self.eta_mode!r}")
        if self.mesh_floor not in ("epsilon0", "scaled"):
            raise InvalidParameter(f"unknown mesh_floor {self.mesh_floor!r}")
        if not 0 < self.eta_value < 1:
            raise InvalidParameter(f"need 0 < eta < 1, got {self.eta_value}")
        if not 0 < self.epsilon0 < self.initial_mesh <= 1:
            raise InvalidParameter(
                f"need 0 < epsilon0 < r_ini <= 1, got {self.epsilon0}, {self.initial_mesh}"
            )
        if self.n_rpt < 0 or self.max_initial_iters < 1 or self.max_descent_iters < 1:
            raise InvalidParameter("iteration limits must be positive")

    @property
    def eta_value(self) -> float:
        return 2.0 ** (1 - self.b) if self.eta_mode == "b-dep" else self.eta

    @property
    def initial_mesh(self) -> float:
        if self.r_ini is not None:
            return self.r_ini
        return 2.0 ** (1 - self.b) if self.eta_mode == "b-dep" else self.eta

    @property
    def final_mesh(self) -> float:
        if self.mesh_floor == "scaled":
            return self.epsilon0 / 2.0 ** (self.b - 1)
        return self.epsilon0


@dataclass
class SolverTrace:
    iters_initial: int = 0
    iters_descent: int = 0
    n_precision_updates: int = 0
    lambda_history: List[float] = field(default_factory=list)
    final_r: float = math.nan


@dataclass
class GepSolution:
    lambda_min: float
    v_min: np.ndarray
    trace: SolverTrace


class Outcome(enum.Enum):
    ACCEPTED = "accepted"
    REJECTED_KEEP_VECTOR = "rejected_keep_vector"
    REDUCE_MESH = "reduce_mesh"


@dataclass
class DescentOutcome:
    kind: Outcome
    lam: float
    v: np.ndarray


def _default_sampler(cfg: SolverConfig) -> Sampler:
    return SimulatedAnnealingSampler(cfg.anneal)


def _random_unit(n: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.standard_normal(n)
    return x / np.linalg.norm(x)


def initial_lambda(A, rng: np.random.Generator) -> float:
    """``x^T A x`` for ``x`` uniform on the unit sphere."""
    A = np.asarray(A, dtype=float)
    x = _random_unit(A.shape[0], rng)
    return float(x @ A @ x)


def initial_guess_stage(P: GepProblem, cfg: SolverConfig, sampler: Optional[Sampler],
                        rng: np.random.Generator):
    """Coarse eigenpair on the ``b``-bit grid.

    Returns ``(lam, v, iters)`` with ``v`` a unit vector and
    ``lam = rayleigh_quotient(A, B, v)``. The loop stops as soon as an
    iteration fails to lower ``lam`` by more than ``lambda_tol`` (relative);
    the best pair seen is returned.

    An all-zero sample means no grid vector scores below zero, i.e. nothing
    beats the current ``lam``. It is resampled up to ``MAX_ZERO_RETRIES``
    times; if it persists it ends the stage. Before any tentative vector
    exists it instead means the start value ``x^T A x`` lies below every
    grid quotient; the stage then restarts from the random vector ``x``
    itself, with ``lam = rayleigh_quotient(A, B, x)``.
    """
    sampler = sampler or _default_sampler(cfg)
    enc = make_encoding(P.n, cfg.b)
    x = _random_unit(P.n, rng)
    lam = float(x @ P.A @ x)
    best_v = None
    for it in range(1, cfg.max_initial_iters + 1):
        Q = build_initial_qubo(P.shifted(lam), enc)
        for _ in range(MAX_ZERO_RETRIES):
            res = sampler.sample(Q, rng)
            if np.any(res.q):
                break
        else:
            if best_v is not None:
                return lam, best_v, it
            if not cfg.zero_sample_fallback:
                raise AllZeroSample(f"sampler returned zeros {MAX_ZERO_RETRIES} times")
            lam, best_v = rayleigh_quotient(P.A, P.B, x), x
            continue
        v = normalize(decode(res.q, enc))
        lam_new = rayleigh_quotient(P.A, P.B, v)
        if best_v is None:
            lam, best_v = lam_new, v
            continue
        if lam_new >= lam - cfg.lambda_tol * max(1.0, abs(lam)):
            if lam_new < lam:
                lam, best_v = lam_new, v
            return lam, best_v, it
        lam, best_v = lam_new, v
    raise IterationLimit(f"initial stage did not converge in {cfg.max_initial_iters} iterations")


def step_length(a: float, bb: float) -> float:
    """Line-search step along ``d``, clamped so that ``|t| >= 1``.

    ``a = d^T C d`` and ``bb = -v^T C d``; the unconstrained minimiser of
    ``g(v + t d)`` is ``bb / a`` when ``a > 0``.
    """
    if a > 0:
        return math.copysign(max(abs(bb) / a, 1.0), bb) if bb != 0 else 1.0
    return 1.0


def orthogonalize(d_star, v) -> np.ndarray:
    """Remove the component of ``d_star`` along the unit vector ``v``."""
    d_star = np.asarray(d_star, dtype=float)
    v = np.asarray(v, dtype=float)
    return d_star - (v @ d_star) * v


def descent_iteration(P: GepProblem, lam: float, v, r: float, cfg: SolverConfig,
                      sampler: Optional[Sampler], rng: np.random.Generator,
                      rejections: int = 0) -> DescentOutcome:
    """One refinement step at mesh ``r``.

    ``rejections`` is the number of consecutive rejections so far; a
    rejection keeps the tentative vector while it is below ``cfg.n_rpt`` and
    asks for a mesh reduction otherwise.
    """
    sampler = sampler or _default_sampler(cfg)
    enc = make_encoding(P.n, cfg.b)
    C = P.shifted(lam)
    res = sampler.sample(build_descent_qubo(C, v, r, enc), rng)
    d = orthogonalize(decode(res.q, enc, r), v)

    lam_star, v_star = math.inf, v
    if np.any(d != 0.0):
        t = step_length(float(d @ C @ d), float(-(v @ C @ d)))
        v_star = normalize(v + t * d)
        lam_star = rayleigh_quotient(P.A, P.B, v_star)
    if lam_star < lam:
        return DescentOutcome(Outcome.ACCEPTED, lam_star, v_star)
    if rejections < cfg.n_rpt:
        return DescentOutcome(Outcome.REJECTED_KEEP_VECTOR, lam, v_star)
    return DescentOutcome(Outcome.REDUCE_MESH, lam, v)


def iterative_descent_stage(P: GepProblem, lam0: float, v0, cfg: SolverConfig,
                            sampler: Optional[Sampler], rng: np.random.Generator,
                            trace: Optional[SolverTrace] = None) -> GepSolution:
    sampler = sampler or _default_sampler(cfg)
    trace = trace if trace is not None else SolverTrace()
    eta = cfg.eta_value
    floor = cfg.final_mesh * (1.0 + _MESH_FLOOR_SLACK)
    lam, v = lam0, np.asarray(v0, dtype=float)
    best_lam, best_v = lam, v
    trace.lambda_history.append(lam)
    level_lams = [lam]
    r = cfg.initial_mesh
    rejections = 0
    while r > floor:
        if trace.iters_descent >= cfg.max_descent_iters:
            raise IterationLimit(f"descent did not reach r={cfg.final_mesh} "
                                 f"in {cfg.max_descent_iters} iterations")
        trace.iters_descent += 1
        out = descent_iteration(P, lam, v, r, cfg, sampler, rng, rejections)
        if out.kind is Outcome.ACCEPTED:
            lam, v = out.lam, out.v
            best_lam, best_v = lam, v
            trace.lambda_history.append(lam)
            rejections = 0
        elif out.kind is Outcome.REJECTED_KEEP_VECTOR:
            v = out.v
            rejections += 1
        else:
            r *= eta
            trace.n_precision_updates += 1
            rejections = 0
            level_lams.append(best_lam)
            if (cfg.early_exit and len(level_lams) >= 3
                    and level_lams[-3] - level_lams[-1] <= 1e-15 * max(1.0, abs(best_lam))):
                break
    trace.final_r = r
    return GepSolution(best_lam, best_v, trace)


def solve_gep(P: GepProblem, cfg: SolverConfig, sampler: Optional[Sampler] = None,
              rng: Optional[np.random.Generator] = None) -> GepSolution:
    """Smallest generalized eigenvalue and its unit eigenvector."""
    rng = rng if rng is not None else np.random.default_rng()
    sampler = sampler or _default_sampler(cfg)
    lam, v, iters = initial_guess_stage(P, cfg, sampler, rng)
    trace = SolverTrace(iters_initial=iters)
    sol = iterative_descent_stage(P, lam, v, cfg, sampler, rng, trace)
    # report a quotient consistent with the returned vector to the last ulp
    sol.lambda_min = rayleigh_quotient(P.A, P.B, sol.v_min)
    return sol
