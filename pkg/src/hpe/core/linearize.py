"""Coordinate expansion of products over K into equations over F_q.

A private relation is a sum of terms a * u^(q^t1) * .. * u^(q^td) * v^(q^s).
With u = A x + c and v = B y + d, each q-power factor is an element of K
whose coordinate vector is affine in the symbolic variables: its n x N
factor matrix holds, per coordinate, the coefficients over the homogenized
variable vector w = (x_1..x_n, y_1..y_n, 1).  Multiplying factors through
the multiplication tensor turns the coordinates of the running product into
dense degree-d coefficient tensors over w, and the n coordinates of the full
sum are the public equations.

The contraction runs per output coordinate as a flat matrix product, in
float64 so BLAS does the work; every intermediate is an integer below 2^53,
so the arithmetic is exact before the reduction mod q.  Non-prime base
fields take a table-driven fallback over the same structure.
"""

from __future__ import annotations

import numpy as np

from ..mvpoly import linalg

# ---------------------------------------------------------------------------
# factor matrices


def affine_block_matrix(field, mat, shift, nvars: int, offset: int) -> np.ndarray:
    """Factor matrix of m @ vars + shift over a homogenized variable vector.

    nvars counts the symbolic variables; the constant slot is index nvars.
    offset places the block (0 for the x block, n for the y block).
    """
    n = field.n
    out = np.zeros((n, nvars + 1), dtype=np.uint8)
    out[:, offset : offset + n] = np.asarray(mat, dtype=np.uint8)
    out[:, nvars] = np.asarray(shift, dtype=np.uint8).reshape(-1)
    return out


def frobenius_factor(field, theta: int, factor: np.ndarray) -> np.ndarray:
    """Factor matrix of the q^theta power of the element behind factor."""
    p_theta = field.frobenius_matrices[theta % field.n]
    return linalg.matmul(field.base, p_theta.T, factor)


# ---------------------------------------------------------------------------
# product expansion


def expand_product(field, coeff: int, factors: list[np.ndarray]) -> np.ndarray:
    """Coordinate tensors of coeff * product(factors), flat shape (n, N^d).

    Each factor is an n x N matrix of affine coordinates; the result row k
    is the dense coefficient tensor of coordinate k over d copies of the
    homogenized variable vector.
    """
    n = field.n
    coords = np.array(field.coords(coeff), dtype=np.uint8)
    if field.r == 1:
        return _expand_prime(field, coords, factors)
    return _expand_generic(field, coords, factors)


def _expand_prime(field, coords: np.ndarray, factors: list[np.ndarray]) -> np.ndarray:
    p, n = field.p, field.n
    tensor = field.tensor.astype(np.int64)
    g = coords.reshape(n, 1).astype(np.float64)
    for fmat in factors:
        big = fmat.shape[1]
        d = np.einsum("ijk,jb->ikb", tensor, fmat.astype(np.int64)) % p
        d = d.astype(np.float64)
        r = g.shape[1]
        out = np.empty((n, r * big), dtype=np.float64)
        gt = np.ascontiguousarray(g.T)
        for k in range(n):
            out[k] = np.mod(gt @ d[:, k, :], p).reshape(-1)
        g = out
    return g.astype(np.uint8)


def _expand_generic(field, coords: np.ndarray, factors: list[np.ndarray]) -> np.ndarray:
    base, n = field.base, field.n
    add_t, mul_t = base.add_table, base.mul_table
    nz = np.nonzero(field.tensor)
    entries = list(zip(nz[0].tolist(), nz[1].tolist(), nz[2].tolist()))
    g = coords.reshape(n, 1)
    for fmat in factors:
        big = fmat.shape[1]
        r = g.shape[1]
        out = np.zeros((n, r * big), dtype=np.uint8)
        for i, j, k in entries:
            t = int(field.tensor[i, j, k])
            row = mul_t[t, fmat[j]] if t != 1 else fmat[j]
            contrib = mul_t[g[i][:, None], row[None, :]]
            out[k] = add_t[out[k], contrib.reshape(-1)]
        g = out
    return g


# ---------------------------------------------------------------------------
# tensor -> sparse terms

# Monomial records are (coordinate k, y index or -1, x part, coefficient).
# For q = 2 the x part is a bitmask and batches stay in numpy; otherwise it
# is a tuple of per-variable exponents, already reduced by x^q = x.


def records_q2(flat: np.ndarray, n: int, nvars: int) -> tuple[np.ndarray, ...]:
    """Nonzero monomials of a flat q=2 tensor as (k, y_idx, xmask) arrays."""
    d = 0
    size = flat.shape[1]
    big = nvars + 1
    while big**d < size:
        d += 1
    k_arr, pos = np.nonzero(flat)
    if d == 0:
        return (
            k_arr.astype(np.int64),
            np.full(len(k_arr), -1, dtype=np.int64),
            np.zeros(len(k_arr), dtype=np.uint64),
        )
    slots = np.stack(np.unravel_index(pos, (big,) * d))
    is_y = (slots >= n) & (slots < 2 * n)
    y_count = is_y.sum(axis=0)
    if y_count.size and int(y_count.max(initial=0)) > 1:
        raise AssertionError("a monomial acquired two y factors")
    y_idx = np.where(y_count > 0, (slots * is_y).sum(axis=0) - n, -1)
    clipped = np.where(slots < n, slots, 0).astype(np.uint64)
    xbits = np.where(slots < n, np.uint64(1) << clipped, np.uint64(0))
    xmask = np.bitwise_or.reduce(xbits, axis=0)
    return k_arr.astype(np.int64), y_idx.astype(np.int64), xmask


def merge_q2(parts: list[tuple[np.ndarray, ...]], n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Combine per-term q=2 records into per-equation (y_idx, xmask) arrays.

    Coefficients are parities of the record multiplicities.  Returns one
    (y_idx, xmask) pair per coordinate equation, sorted canonically.
    """
    k_all = np.concatenate([p[0] for p in parts])
    y_all = np.concatenate([p[1] for p in parts])
    m_all = np.concatenate([p[2] for p in parts])
    empty = (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.uint64))
    if n <= 48:
        # Pack (k, y+1, mask) into one uint64 so a single unique pass
        # dedups everything; the group label needs at most 12 bits here.
        group = (k_all * (n + 2) + y_all + 1).astype(np.uint64)
        combined = (group << np.uint64(n)) | m_all
        uniq, counts = np.unique(combined, return_counts=True)
        keep = uniq[(counts & 1) == 1]
        kk = (keep >> np.uint64(n)).astype(np.int64)
        eq_k, eq_y = kk // (n + 2), kk % (n + 2) - 1
        eq_m = keep & np.uint64((1 << n) - 1)
        bounds = np.searchsorted(eq_k, np.arange(n + 1))
        return [
            (eq_y[bounds[k]:bounds[k + 1]], eq_m[bounds[k]:bounds[k + 1]])
            for k in range(n)
        ]
    out = []
    for k in range(n):
        sel = k_all == k
        ys, ms = y_all[sel], m_all[sel]
        eq_y, eq_m = [], []
        for g in range(-1, n):
            gsel = ys == g
            if not gsel.any():
                continue
            uniq, counts = np.unique(ms[gsel], return_counts=True)
            keep = uniq[(counts & 1) == 1]
            eq_y.append(np.full(len(keep), g, dtype=np.int64))
            eq_m.append(keep)
        out.append(
            (np.concatenate(eq_y), np.concatenate(eq_m)) if eq_y else empty
        )
    return out


def records_general(field, flat: np.ndarray, n: int, nvars: int) -> list[dict]:
    """Nonzero monomials of a flat tensor as per-equation dicts, any q."""
    q = field.q
    big = nvars + 1
    d = 0
    while big**d < flat.shape[1]:
        d += 1
    out: list[dict] = [dict() for _ in range(n)]
    add = field.base.add
    k_arr, pos = np.nonzero(flat)
    slots_all = np.unravel_index(pos, (big,) * d) if d else ()
    for idx in range(len(k_arr)):
        k = int(k_arr[idx])
        y_idx = -1
        exps = [0] * n
        for s in range(d):
            slot = int(slots_all[s][idx])
            if slot < n:
                exps[slot] += 1
            elif slot < 2 * n:
                if y_idx != -1:
                    raise AssertionError("a monomial acquired two y factors")
                y_idx = slot - n
        key = (
            y_idx,
            tuple(0 if e == 0 else (e - 1) % (q - 1) + 1 for e in exps),
        )
        val = add(out[k].get(key, 0), int(flat[k, pos[idx]]))
        if val:
            out[k][key] = val
        else:
            out[k].pop(key, None)
    return out


def merge_general(parts: list[list[dict]], field, n: int) -> list[dict]:
    out: list[dict] = [dict() for _ in range(n)]
    add = field.base.add
    for part in parts:
        for k in range(n):
            for key, coeff in part[k].items():
                val = add(out[k].get(key, 0), coeff)
                if val:
                    out[k][key] = val
                else:
                    out[k].pop(key, None)
    return out
