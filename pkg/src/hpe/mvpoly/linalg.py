"""Exact linear algebra over F_q, vectorized through the scalar tables.

Matrices and vectors are numpy uint8 arrays of scalar indices 0..q-1.  Row
operations are whole-row table gathers (add/sub/mul tables of the base
field), so one code path serves every supported field order, prime or not.
Pivoting is deterministic: columns in order, first nonzero row, free
variables set to zero in particular solutions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from ..errors import SingularMatrix


def as_matrix(rows) -> np.ndarray:
    return np.array(rows, dtype=np.uint8)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def matmul(base, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product over the base field."""
    if base.r == 1:
        return ((a.astype(np.int64) @ b.astype(np.int64)) % base.p).astype(np.uint8)
    add_t, mul_t = base.add_table, base.mul_table
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    for j in range(a.shape[1]):
        out = add_t[out, mul_t[a[:, j][:, None], b[j][None, :]]]
    return out


def matvec(base, a: np.ndarray, v: np.ndarray) -> np.ndarray:
    return matmul(base, a, np.asarray(v, dtype=np.uint8).reshape(-1, 1))[:, 0]


def rref(base, m: np.ndarray) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Reduced row echelon form and the (row, column) pivot list."""
    m = np.array(m, dtype=np.uint8, copy=True)
    if m.ndim != 2:
        raise ValueError("matrix must be two-dimensional")
    rows, cols = m.shape
    add_t, sub_t = base.add_table, base.sub_table
    mul_t, inv_t = base.mul_table, base.inv_table
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        pv = int(m[r, c])
        if pv != 1:
            m[r] = mul_t[inv_t[pv], m[r]]
        col = m[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            m[nzr] = sub_t[m[nzr], mul_t[col[nzr][:, None], m[r][None, :]]]
        pivots.append((r, c))
        r += 1
    return m, pivots


def rank(base, m: np.ndarray) -> int:
    return len(rref(base, m)[1])


def inverse(base, m: np.ndarray) -> np.ndarray:
    """Matrix inverse; raises SingularMatrix when rank is deficient."""
    m = as_matrix(m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise SingularMatrix("only square matrices are invertible")
    aug = np.concatenate([m, identity(n)], axis=1)
    red, pivots = rref(base, aug)
    if len(pivots) < n or any(c >= n for _, c in pivots):
        raise SingularMatrix("matrix has rank %d < %d" % (len(pivots), n))
    return red[:, n:].copy()


def nullspace(base, m: np.ndarray) -> list[np.ndarray]:
    """Basis of the right kernel of m, one vector per free column."""
    m = as_matrix(m)
    red, pivots = rref(base, m)
    cols = m.shape[1]
    pivot_cols = {c for _, c in pivots}
    neg_t = base.neg_table
    basis = []
    for fc in range(cols):
        if fc in pivot_cols:
            continue
        vec = np.zeros(cols, dtype=np.uint8)
        vec[fc] = 1
        for r, c in pivots:
            vec[c] = neg_t[red[r, fc]]
        basis.append(vec)
    return basis


@dataclass
class Solution:
    """Particular solution plus a basis of the homogeneous solution space."""

    particular: np.ndarray
    nullspace: list[np.ndarray] = field(default_factory=list)

    def sample(self, base, rng: random.Random) -> np.ndarray:
        """Uniform sample from the full affine solution set."""
        out = self.particular.copy()
        add_t, mul_t = base.add_table, base.mul_table
        for vec in self.nullspace:
            out = add_t[out, mul_t[rng.randrange(base.q), vec]]
        return out

    def count(self, base) -> int:
        return base.q ** len(self.nullspace)

    def enumerate(self, base):
        """Yield every vector of the affine solution set."""
        add_t, mul_t = base.add_table, base.mul_table
        stack = [self.particular]
        for vec in self.nullspace:
            scaled = [mul_t[c, vec] for c in range(base.q)]
            stack = [add_t[s, sc] for s in stack for sc in scaled]
        yield from stack


@dataclass
class LinearSystem:
    """The system matrix @ x = rhs over the given base field."""

    base: object
    matrix: np.ndarray
    rhs: np.ndarray


def solve(base, a: np.ndarray, b: np.ndarray) -> Solution | None:
    """Solve a x = b; None when inconsistent (a value, not an error)."""
    a = as_matrix(a)
    b = np.asarray(b, dtype=np.uint8).reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise ValueError("matrix and right-hand side disagree on row count")
    cols = a.shape[1]
    aug = np.concatenate([a, b], axis=1)
    red, pivots = rref(base, aug)
    if any(c == cols for _, c in pivots):
        return None
    particular = np.zeros(cols, dtype=np.uint8)
    for r, c in pivots:
        particular[c] = red[r, cols]
    sub = red[:, :cols]
    pivot_cols = {c for _, c in pivots}
    neg_t = base.neg_table
    basis = []
    for fc in range(cols):
        if fc in pivot_cols:
            continue
        vec = np.zeros(cols, dtype=np.uint8)
        vec[fc] = 1
        for r, c in pivots:
            vec[c] = neg_t[sub[r, fc]]
        basis.append(vec)
    return Solution(particular, basis)


def solve_linear(system: LinearSystem, rng: random.Random | None = None) -> Solution | None:
    """Solve a LinearSystem; rng is accepted for signature parity with samplers."""
    del rng  # the particular solution is deterministic; use Solution.sample
    return solve(system.base, system.matrix, system.rhs)


def random_matrix(base, shape: tuple[int, int], rng: random.Random) -> np.ndarray:
    return np.array(
        [[rng.randrange(base.q) for _ in range(shape[1])] for _ in range(shape[0])],
        dtype=np.uint8,
    )


def random_invertible(base, n: int, rng: random.Random) -> np.ndarray:
    """Rejection-sample an invertible n x n matrix over the base field."""
    while True:
        m = random_matrix(base, (n, n), rng)
        if rank(base, m) == n:
            return m
