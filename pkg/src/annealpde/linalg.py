"""Dense symmetric linear algebra used by the solver and as its classical oracle."""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from .errors import (
    DegenerateDenominator,
    DimensionMismatch,
    NonFiniteValue,
    NotPositiveDefinite,
    NotSymmetric,
    ZeroVector,
)

__all__ = [
    "as_vector",
    "sym_matrix",
    "cholesky_factor",
    "cholesky_solve",
    "rayleigh_quotient",
    "normalize",
]


def as_vector(values) -> np.ndarray:
    """Return ``values`` as a finite 1-D float array."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteValue("vector has NaN or infinite entries")
    return v


def sym_matrix(entries) -> np.ndarray:
    """Return ``entries`` as a square float array, checking exact symmetry."""
    m = np.asarray(entries, dtype=float)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteValue("matrix has NaN or infinite entries")
    if not np.array_equal(m, m.T):
        raise NotSymmetric("matrix is not exactly symmetric")
    return m


def cholesky_factor(K) -> np.ndarray:
    """Lower-triangular ``L`` with ``K = L L^T``.

    Raises
    ------
    NotPositiveDefinite
        If a pivot falls below ``1e-14`` times the largest diagonal entry.
    """
    K = sym_matrix(K)
    n = K.shape[0]
    floor = 1e-14 * max(float(np.max(np.diag(K))), 0.0)
    L = np.zeros_like(K)
    for j in range(n):
        pivot = K[j, j] - L[j, :j] @ L[j, :j]
        if pivot <= floor or pivot <= 0.0:
            raise NotPositiveDefinite(f"pivot {pivot:.3e} at row {j}")
        L[j, j] = np.sqrt(pivot)
        L[j + 1:, j] = (K[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L


def cholesky_solve(K, f) -> np.ndarray:
    """Solve ``K u = f`` for symmetric positive-definite ``K``."""
    f = as_vector(f)
    L = cholesky_factor(K)
    if f.shape[0] != L.shape[0]:
        raise DimensionMismatch(f"rhs length {f.shape[0]} != order {L.shape[0]}")
    y = solve_triangular(L, f, lower=True)
    return solve_triangular(L.T, y, lower=False)


def rayleigh_quotient(A, B, v) -> float:
    """Generalized Rayleigh quotient ``v^T A v / v^T B v``."""
    v = np.asarray(v, dtype=float)
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape or A.shape[0] != v.shape[0]:
        raise DimensionMismatch(f"shapes {A.shape}, {B.shape}, {v.shape}")
    den = float(v @ B @ v)
    if den <= 1e-14 * float(v @ v):
        raise DegenerateDenominator(f"v^T B v = {den:.3e}")
    return float(v @ A @ v) / den


def normalize(v) -> np.ndarray:
    v = as_vector(v)
    norm = float(np.linalg.norm(v))
    if norm < 1e-12:
        raise ZeroVector("cannot normalize a (near) zero vector")
    return v / norm
