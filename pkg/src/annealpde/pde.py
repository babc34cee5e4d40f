"""Benchmark Poisson problems, their finite-difference systems and the
linear-system to eigenproblem transform.

All three problems solve ``-laplace(u) = f`` on the unit interval/square with
zero Dirichlet data. Interior nodes sit at ``i*h``, ``h = 1/(n+1)``; 2-D
nodes are ordered row-major, index ``i*n + j`` for node ``(x_i, y_j)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import DegenerateEigenvector, InvalidParameter, NonNegativeLambda, ZeroRhs
from .geneig import GepProblem, GepSolution, SolverConfig, solve_gep
from .linalg import as_vector, cholesky_factor, sym_matrix

__all__ = [
    "KINDS",
    "PoissonProblem",
    "SleProblem",
    "GepFromSle",
    "source_term",
    "discretize",
    "sle_to_gep",
    "recover_solution",
    "exact_solution",
    "solve_pde",
]

KINDS = ("sym1d", "asym1d", "poisson2d")


def _f_sym(x):
    return -12 * x**2 + 12 * x - 2


def _f_asym(x):
    return -12 * x**2 + 18 * x - 5.5


def _f_2d(x, y):
    return -2 * x * (x - 1) - 2 * y * (y - 1)


def _u_sym(x):
    return x**2 * (x - 1) ** 2


def _u_asym(x):
    return x * (x - 1) * (2 * x - 1) * (2 * x - 3) / 4


def _u_2d(x, y):
    return x * y * (x - 1) * (y - 1)


@dataclass(frozen=True)
class PoissonProblem:
    kind: str
    n_per_dim: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameter(f"unknown problem kind {self.kind!r}; expected one of {KINDS}")
        if int(self.n_per_dim) != self.n_per_dim or self.n_per_dim < 1:
            raise InvalidParameter(f"n_per_dim must be a positive integer, got {self.n_per_dim}")

    @property
    def h(self) -> float:
        return 1.0 / (self.n_per_dim + 1)

    @property
    def size(self) -> int:
        return self.n_per_dim ** 2 if self.kind == "poisson2d" else self.n_per_dim

    def nodes(self):
        """Interior coordinates: ``x`` for 1-D, ``(x, y)`` flattened row-major for 2-D."""
        x = self.h * np.arange(1, self.n_per_dim + 1)
        if self.kind == "poisson2d":
            X, Y = np.meshgrid(x, x, indexing="ij")
            return X.ravel(), Y.ravel()
        return x


@dataclass(frozen=True, eq=False)
class SleProblem:
    K: np.ndarray
    f: np.ndarray
    norm_f: float


@dataclass(frozen=True, eq=False)
class GepFromSle:
    gep: GepProblem
    f_tilde: np.ndarray


def source_term(prob: PoissonProblem) -> np.ndarray:
    if prob.kind == "poisson2d":
        return _f_2d(*prob.nodes())
    return (_f_sym if prob.kind == "sym1d" else _f_asym)(prob.nodes())


def _laplacian_1d(n: int, h: float) -> np.ndarray:
    return (2 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)) / h**2


def discretize(prob: PoissonProblem) -> SleProblem:
    """Central-difference system ``K u = f`` on the interior nodes."""
    n, h = prob.n_per_dim, prob.h
    if prob.kind == "poisson2d":
        T = 2 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
        K = (np.kron(T, np.eye(n)) + np.kron(np.eye(n), T)) / h**2
    else:
        K = _laplacian_1d(n, h)
    f = source_term(prob)
    return SleProblem(K, f, float(np.linalg.norm(f)))


def sle_to_gep(sle: SleProblem) -> GepFromSle:
    """Pencil ``(-f~ f~^T, K/|f|)`` whose only nonzero eigenvalue encodes ``u``."""
    f = as_vector(sle.f)
    norm = float(np.linalg.norm(f))
    if norm < 1e-14:
        raise ZeroRhs("right-hand side is (near) zero")
    f_tilde = f / norm
    A = -np.outer(f_tilde, f_tilde)
    return GepFromSle(GepProblem(A, sym_matrix(sle.K) / norm), f_tilde)


def recover_solution(lambda_min: float, v_min, f_tilde) -> np.ndarray:
    """``u = -lambda_min * v_min / (f~ . v_min)``, a solution of the original ``K u = f``."""
    v = as_vector(v_min)
    proj = float(np.asarray(f_tilde, dtype=float) @ v)
    if abs(proj) <= 1e-12:
        raise DegenerateEigenvector(f"f~ . v = {proj:.3e}")
    if lambda_min >= 0:
        raise NonNegativeLambda(f"lambda_min = {lambda_min} is not negative")
    return -lambda_min * v / proj


def exact_solution(prob: PoissonProblem) -> np.ndarray:
    """Continuous solution sampled at the interior nodes."""
    if prob.kind == "poisson2d":
        return _u_2d(*prob.nodes())
    return (_u_sym if prob.kind == "sym1d" else _u_asym)(prob.nodes())


def solve_pde(prob: PoissonProblem, cfg: SolverConfig, sampler=None,
              rng: Optional[np.random.Generator] = None) -> Tuple[np.ndarray, GepSolution]:
    sle = discretize(prob)
    cholesky_factor(sle.K)
    gfs = sle_to_gep(sle)
    sol = solve_gep(gfs.gep, cfg, sampler, rng)
    return recover_solution(sol.lambda_min, sol.v_min, gfs.f_tilde), sol
