"""Exact dense linear algebra over a prime field F_p.

Matrices are numpy int64 arrays whose entries are canonical residues in
[0, p), so equality of matrices is bitwise equality of arrays.  Zero-row
and zero-column matrices are legal everywhere.  Every routine is a pure
function and keeps all arithmetic exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DimensionMismatch(ValueError):
    """Shapes of the operands do not line up."""


def is_prime(n: int) -> bool:
    """Primality by trial division; n is small enough for this to be cheap."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field, given by its characteristic."""

    characteristic: int

    def __post_init__(self) -> None:
        p = self.characteristic
        if not (2 <= p < 2**31):
            raise ValueError(f"characteristic must satisfy 2 <= p < 2^31, got {p}")
        if not is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p}")

    @property
    def p(self) -> int:
        return self.characteristic


def normalize(a, p: int) -> np.ndarray:
    """Coerce to an int64 matrix of canonical residues mod p."""
    m = np.asarray(a, dtype=np.int64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D array, got ndim={m.ndim}")
    return m % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact product mod p; falls back to bignum arithmetic if int64 could overflow."""
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    inner = a.shape[1]
    if inner == 0:
        return zeros(a.shape[0], b.shape[1])
    if (p - 1) * (p - 1) <= (2**63 - 1) // inner:
        return (a @ b) % p
    prod = a.astype(object) @ b.astype(object)
    return (prod % p).astype(np.int64)


def madd(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a + b) % p


def msub(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a - b) % p


def mscale(c: int, a: np.ndarray, p: int) -> np.ndarray:
    return (c * a) % p


def rref(m, p: int) -> tuple[np.ndarray, list[int], int]:
    """Reduced row echelon form.

    Returns (R, pivot_columns, rank) with pivot columns in increasing
    order.  Deterministic: the topmost nonzero entry is always chosen as
    pivot.
    """
    r = normalize(m, p).copy()
    rows, cols = r.shape
    pivots: list[int] = []
    lead = 0
    for col in range(cols):
        if lead >= rows:
            break
        piv = None
        for i in range(lead, rows):
            if r[i, col]:
                piv = i
                break
        if piv is None:
            continue
        if piv != lead:
            r[[lead, piv]] = r[[piv, lead]]
        inv = pow(int(r[lead, col]), -1, p)
        r[lead] = (r[lead] * inv) % p
        other = r[:, col].copy()
        other[lead] = 0
        r = (r - np.outer(other, r[lead])) % p
        pivots.append(col)
        lead += 1
    return r, pivots, len(pivots)


def rank(m, p: int) -> int:
    return rref(m, p)[2]


def kernel_basis(m, p: int) -> np.ndarray:
    """Basis of the right null space, one basis vector per column.

    The column count is cols(m) - rank(m); each free variable is set to 1
    in turn with the remaining free variables 0.
    """
    m = normalize(m, p)
    _, cols = m.shape
    r, pivots, _ = rref(m, p)
    pivot_set = set(pivots)
    free = [j for j in range(cols) if j not in pivot_set]
    basis = zeros(cols, len(free))
    for k, j in enumerate(free):
        basis[j, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-int(r[i, j])) % p
    return basis


def solve(a, b, p: int) -> np.ndarray | None:
    """Solve a @ x = b exactly, or return None when no solution exists.

    b may have several columns.  When the system is underdetermined the
    solution with all free variables equal to 0 is returned, so the result
    is deterministic.
    """
    a = normalize(a, p)
    b = normalize(b, p)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"a has {a.shape[0]} rows but b has {b.shape[0]}")
    n = a.shape[1]
    aug = np.hstack([a, b])
    r, pivots, _ = rref(aug, p)
    for pc in pivots:
        if pc >= n:
            return None
    x = zeros(n, b.shape[1])
    for i, pc in enumerate(pivots):
        x[pc] = r[i, n:]
    return x


def inverse(m, p: int) -> np.ndarray | None:
    """Two-sided inverse of a square matrix, or None if singular."""
    m = normalize(m, p)
    if m.shape[0] != m.shape[1]:
        return None
    x = solve(m, identity(m.shape[0]), p)
    if x is None:
        return None
    if not np.array_equal(matmul(x, m, p), identity(m.shape[0])):
        return None
    return x


def is_invertible(m, p: int) -> bool:
    m = normalize(m, p)
    return m.shape[0] == m.shape[1] and rank(m, p) == m.shape[0]


def column_space_basis(m, p: int) -> np.ndarray:
    """Canonical basis of the column space, one basis vector per column."""
    m = normalize(m, p)
    r, _, rk = rref(m.T, p)
    return r[:rk].T.copy()


def quotient_projection(span, p: int) -> np.ndarray:
    """Projection F^n -> F^n / <columns of span>, as a full-rank matrix.

    The result P has n - rank(span) rows, kills every column of span, and
    restricts to the identity on the coordinates not occupied by pivots of
    the span, so it is surjective.
    """
    span = normalize(span, p)
    n = span.shape[0]
    r, pivots, rk = rref(span.T, p)
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    proj = zeros(len(free), n)
    for k, j in enumerate(free):
        proj[k, j] = 1
    for i, pc in enumerate(pivots):
        for k, j in enumerate(free):
            proj[k, pc] = (-int(r[i, j])) % p
    return proj


def in_span(span, v, p: int) -> bool:
    """Is the column vector (or each column of) v in the column span?"""
    return solve(span, v, p) is not None


def hstack(parts: list[np.ndarray], rows: int) -> np.ndarray:
    if not parts:
        return zeros(rows, 0)
    return np.hstack(parts)


def vstack(parts: list[np.ndarray], cols: int) -> np.ndarray:
    if not parts:
        return zeros(0, cols)
    return np.vstack(parts)


def block_diag(parts: list[np.ndarray]) -> np.ndarray:
    rows = sum(q.shape[0] for q in parts)
    cols = sum(q.shape[1] for q in parts)
    out = zeros(rows, cols)
    i = j = 0
    for q in parts:
        out[i : i + q.shape[0], j : j + q.shape[1]] = q
        i += q.shape[0]
        j += q.shape[1]
    return out


def key_bytes(m: np.ndarray) -> bytes:
    """Stable content key for hashing/memoization."""
    return m.shape[0].to_bytes(4, "little") + m.shape[1].to_bytes(4, "little") + np.ascontiguousarray(m).tobytes()
