"""Binary fixed-point encoding of real vectors and the two QUBO objectives.

Bits are laid out component-major: bits ``[i*b, (i+1)*b)`` encode component
``i`` through the coefficient row ``p = (-1, 1/2, 1/4, ..., 2**(1-b))``, so a
component takes one of ``2**b`` values in ``[-1, 1 - 2**(1-b)]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, InvalidParameter, LengthMismatch
from .linalg import as_vector, sym_matrix

__all__ = [
    "BinaryEncoding",
    "QuboProblem",
    "make_encoding",
    "decode",
    "build_initial_qubo",
    "build_descent_qubo",
    "energy",
]


@dataclass(frozen=True)
class BinaryEncoding:
    n: int
    b: int

    @cached_property
    def p(self) -> np.ndarray:
        p = 2.0 ** -np.arange(self.b)
        p[0] = -1.0
        return p

    @property
    def num_bits(self) -> int:
        return self.n * self.b

    @cached_property
    def matrix(self) -> np.ndarray:
        """The ``n x nb`` block-diagonal map ``I_n (x) p``."""
        return np.kron(np.eye(self.n), self.p)

    @property
    def component_values(self) -> np.ndarray:
        """Sorted set of values one component can decode to."""
        return -1.0 + 2.0 ** (1 - self.b) * np.arange(2 ** self.b)


@dataclass(frozen=True, eq=False)
class QuboProblem:
    """Quadratic form over bits, ``sum_i diag[i] q_i + sum_{i<j} coup[i,j] q_i q_j``.

    ``couplings`` is strictly upper triangular and already holds the combined
    ``Q_ij + Q_ji`` coefficient.
    """

    diagonal: np.ndarray
    couplings: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diagonal, dtype=float)
        c = np.asarray(self.couplings, dtype=float)
        if d.ndim != 1 or c.shape != (d.size, d.size):
            raise DimensionMismatch(f"diagonal {d.shape} vs couplings {c.shape}")
        if np.any(np.tril(c) != 0.0):
            raise InvalidParameter("couplings must be strictly upper triangular")
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "couplings", c)

    @classmethod
    def from_matrix(cls, M) -> "QuboProblem":
        """QUBO whose energy is ``q^T M q`` for binary ``q`` (uses ``q_i**2 = q_i``)."""
        M = np.asarray(M, dtype=float)
        return cls(np.diag(M).copy(), np.triu(M + M.T, 1))

    @property
    def num_bits(self) -> int:
        return self.diagonal.size

    def symmetric_couplings(self) -> np.ndarray:
        """Full symmetric coupling matrix with zero diagonal."""
        return self.couplings + self.couplings.T

    def scaled(self, factor: float) -> "QuboProblem":
        return QuboProblem(self.diagonal * factor, self.couplings * factor)


def make_encoding(n: int, b: int) -> BinaryEncoding:
    if int(n) != n or int(b) != b or n < 1 or b < 1:
        raise InvalidParameter(f"need integers n >= 1 and b >= 1, got n={n}, b={b}")
    return BinaryEncoding(int(n), int(b))


def decode(q, enc: BinaryEncoding, scale: float = 1.0) -> np.ndarray:
    """Real vector ``scale * (I_n (x) p) q``."""
    q = np.asarray(q, dtype=float)
    if q.shape != (enc.num_bits,):
        raise LengthMismatch(f"expected {enc.num_bits} bits, got shape {q.shape}")
    return scale * (q.reshape(enc.n, enc.b) @ enc.p)


def _check_order(C, enc):
    C = sym_matrix(C)
    if C.shape[0] != enc.n:
        raise DimensionMismatch(f"matrix order {C.shape[0]} != encoding n {enc.n}")
    return C


def build_initial_qubo(C, enc: BinaryEncoding) -> QuboProblem:
    """QUBO for ``min_q decode(q)^T C decode(q)``."""
    C = _check_order(C, enc)
    P = enc.matrix
    return QuboProblem.from_matrix(P.T @ C @ P)


def build_descent_qubo(C, v, r: float, enc: BinaryEncoding) -> QuboProblem:
    """QUBO for ``min_q 2r v^T C d + r^2 d^T C d`` with ``d = decode(q)``."""
    C = _check_order(C, enc)
    v = as_vector(v)
    if v.shape[0] != enc.n:
        raise DimensionMismatch(f"vector length {v.shape[0]} != encoding n {enc.n}")
    if not r > 0:
        raise InvalidParameter(f"mesh r must be positive, got {r}")
    P = enc.matrix
    M = r * r * (P.T @ C @ P)
    M[np.diag_indices_from(M)] += 2.0 * r * (v @ C @ P)
    return QuboProblem.from_matrix(M)


def energy(Q: QuboProblem, q) -> float:
    q = np.asarray(q, dtype=float)
    if q.shape != (Q.num_bits,):
        raise LengthMismatch(f"expected {Q.num_bits} bits, got shape {q.shape}")
    return float(Q.diagonal @ q + q @ Q.couplings @ q)
