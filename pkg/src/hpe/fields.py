"""The two-level field tower F_p <= F_q <= K used by every scheme here.

Scalars of F_q (q = p^r <= 256) are integers 0..q-1; for r > 1 the base-p
digits of the integer are the coordinates in F_p[w]/(w-modulus).  All scalar
arithmetic is table-driven so linear algebra can gather rows directly.

Elements of K = F_q[z]/(modulus), deg n, are integers 0..q^n-1 whose base-q
digits are the coordinates in the polynomial basis 1, z, .., z^(n-1).  The
field carries the Frobenius matrices P(k) with row i holding the coordinates
of (z^i)^(q^k), and the multiplication tensor T with T[i, j] holding the
coordinates of z^i * z^j, so coordinate-level expansion of products and
q-power maps reduces to contractions against these tables.

Moduli default to the lexicographically least monic irreducible of the right
degree, least meaning smallest integer encoding sum(c_i * q^i) + q^deg; the
scan uses the definitive distinct-degree test, not a probabilistic one.
"""

from __future__ import annotations

import functools
import random

import numpy as np

from .errors import InvalidDegree, InvalidOrder, NotIrreducible
from .mvpoly import linalg, upoly

MAX_Q = 256


def prime_power_split(q: int) -> tuple[int, int]:
    """Write q as p^r with p prime; raises InvalidOrder otherwise."""
    if q < 2:
        raise InvalidOrder("field order must be at least 2, got %r" % (q,))
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return q, 1
    r, m = 0, q
    while m % p == 0:
        m //= p
        r += 1
    if m != 1:
        raise InvalidOrder("%d is not a prime power" % q)
    return p, r


def _fp_poly_mul(p: int, f: tuple, g: tuple) -> tuple:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return tuple(out)


def _fp_poly_mod(p: int, f: tuple, m: tuple) -> tuple:
    rem = list(f)
    dm = len(m) - 1
    lead_inv = pow(m[-1], p - 2, p)
    for i in range(len(rem) - dm - 1, -1, -1):
        c = rem[i + dm] * lead_inv % p
        if c:
            for j in range(dm + 1):
                rem[i + j] = (rem[i + j] - c * m[j]) % p
    return tuple(rem[:dm])


def _fp_least_irreducible(p: int, r: int) -> tuple:
    """Least monic irreducible of degree r over F_p, by exhaustive trial division."""
    divisors = []
    for d in range(1, r // 2 + 1):
        for enc in range(p**d):
            coeffs = tuple((enc // p**i) % p for i in range(d)) + (1,)
            divisors.append(coeffs)
    for enc in range(p**r):
        cand = tuple((enc // p**i) % p for i in range(r)) + (1,)
        if cand[0] == 0:
            continue
        for div in divisors:
            if not any(_fp_poly_mod(p, cand, div)):
                break
        else:
            return cand
    raise NotIrreducible("no irreducible of degree %d over F_%d" % (r, p))


class BaseField:
    """F_q for q = p^r <= 256, with dense scalar operation tables."""

    def __init__(self, q: int):
        p, r = prime_power_split(q)
        if q > MAX_Q:
            raise InvalidOrder("base field order %d exceeds the supported %d" % (q, MAX_Q))
        self.p = p
        self.r = r
        self.q = q
        self.order = q
        self.modulus_p = _fp_least_irreducible(p, r) if r > 1 else None
        self._build_tables()

    def _unpack_p(self, a: int) -> tuple:
        return tuple((a // self.p**i) % self.p for i in range(self.r))

    def _pack_p(self, coeffs) -> int:
        return sum(int(c) % self.p * self.p**i for i, c in enumerate(coeffs[: self.r]))

    def _build_tables(self) -> None:
        p, r, q = self.p, self.r, self.q
        add = np.zeros((q, q), dtype=np.uint8)
        mul = np.zeros((q, q), dtype=np.uint8)
        for a in range(q):
            ta = self._unpack_p(a)
            for b in range(q):
                tb = self._unpack_p(b)
                add[a, b] = self._pack_p([(x + y) % p for x, y in zip(ta, tb)])
                if r == 1:
                    mul[a, b] = a * b % p
                else:
                    prod = _fp_poly_mul(p, ta, tb)
                    mul[a, b] = self._pack_p(_fp_poly_mod(p, prod, self.modulus_p))
        neg = np.zeros(q, dtype=np.uint8)
        for a in range(q):
            neg[a] = self._pack_p([(-x) % p for x in self._unpack_p(a)])
        sub = add[:, neg]
        inv = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        for t in (add, sub, mul, neg, inv):
            t.flags.writeable = False
        self.add_table, self.sub_table = add, sub
        self.mul_table, self.neg_table, self.inv_table = mul, neg, inv

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.sub_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_%d" % self.q)
        return int(self.inv_table[a])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out, base = 1, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def power_table(self) -> np.ndarray:
        """q x q table of a^e for 0 <= e < q, built on first use."""
        cached = getattr(self, "_power_table", None)
        if cached is None:
            pt = np.zeros((self.q, self.q), dtype=np.uint8)
            pt[:, 0] = 1
            for e in range(1, self.q):
                pt[:, e] = self.mul_table[pt[:, e - 1], np.arange(self.q)]
            pt.setflags(write=False)
            self._power_table = cached = pt
        return cached

    def elements(self) -> range:
        return range(self.q)

    def __repr__(self) -> str:
        return "BaseField(q=%d)" % self.q


@functools.lru_cache(maxsize=32)
def base_field(q: int) -> BaseField:
    return BaseField(q)


def _is_irreducible(base: BaseField, m: list) -> bool:
    """Distinct-degree test: no factor of degree <= deg(m)/2 means irreducible."""
    n = upoly.degree(m)
    h = upoly.mod(base, upoly.X, m)
    for _ in range(n // 2):
        h = upoly.powmod(base, h, base.q, m)
        if upoly.degree(upoly.gcd(base, upoly.sub(base, h, upoly.X), m)) != 0:
            return False
    return True


def _least_irreducible(base: BaseField, n: int) -> tuple:
    """Least monic irreducible of degree n over F_q, ascending integer scan."""
    q = base.q
    for enc in range(q**n):
        cand = [(enc // q**i) % q for i in range(n)] + [1]
        if cand[0] == 0:
            continue
        if any(upoly.eval_poly(base, cand, a) == 0 for a in range(q)):
            continue
        if _is_irreducible(base, cand):
            return tuple(cand)
    raise NotIrreducible("no irreducible of degree %d over F_%d" % (n, q))


class ExtensionField:
    """K = F_q[z]/(modulus) of degree n, elements packed as base-q integers."""

    def __init__(self, base: BaseField, n: int, modulus: tuple):
        self.base = base
        self.p, self.r, self.q = base.p, base.r, base.q
        self.n = n
        self.modulus = tuple(int(c) for c in modulus)
        self.order = self.q**n
        self._qpows = tuple(self.q**i for i in range(n + 1))
        self._fast2 = self.p == 2 and self.r == 1
        if self._fast2:
            self._mod_int = sum(c << i for i, c in enumerate(self.modulus))
        self._build_tables()

    # -- construction ------------------------------------------------------

    def _build_tables(self) -> None:
        base, n = self.base, self.n
        zpows = []
        cur = [1]
        for _ in range(2 * n - 1):
            zpows.append(cur)
            cur = upoly.mod(base, upoly.mul(base, cur, upoly.X), self.modulus)
        tensor = np.zeros((n, n, n), dtype=np.uint8)
        for i in range(n):
            for j in range(n):
                row = zpows[i + j]
                tensor[i, j, : len(row)] = row
        zq = upoly.powmod(base, upoly.X, self.q, self.modulus)
        p1 = np.zeros((n, n), dtype=np.uint8)
        cur = [1]
        for i in range(n):
            p1[i, : len(cur)] = cur
            cur = upoly.mod(base, upoly.mul(base, cur, zq), self.modulus)
        frob = [linalg.identity(n), p1]
        for _ in range(n - 2):
            frob.append(linalg.matmul(base, frob[-1], p1))
        frob = frob[:n]
        for mat in frob:
            mat.flags.writeable = False
        tensor.flags.writeable = False
        self.tensor = tensor
        self.frobenius_matrices = tuple(frob)
        if self._fast2:
            # column masks: bit i of colmask[k][j] is P(k)[i, j]
            self._colmasks = tuple(
                tuple(int(sum(1 << i for i in range(self.n) if mat[i, j])) for j in range(self.n))
                for mat in frob
            )

    def descriptor(self) -> str:
        """Canonical one-line field descriptor."""
        return "F %d %d %d %s" % (
            self.p,
            self.r,
            self.n,
            " ".join(str(c) for c in self.modulus),
        )

    # -- coordinate packing ------------------------------------------------

    def coords(self, a: int) -> tuple:
        """Base-q digit vector of a, low position first."""
        return tuple((a // self._qpows[i]) % self.q for i in range(self.n))

    def from_coords(self, vec) -> int:
        return sum(int(c) % self.q * self._qpows[i] for i, c in enumerate(vec))

    def coords_array(self, elems) -> np.ndarray:
        """Coordinate matrix, one row per packed element."""
        arr = np.asarray(elems, dtype=np.uint64)
        if self._fast2 and self.n <= 64:
            shifts = np.arange(self.n, dtype=np.uint64)
            return ((arr[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8)
        return np.array([self.coords(int(a)) for a in arr], dtype=np.uint8)

    def pack_array(self, coord_rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(coord_rows, dtype=np.uint64)
        if self._fast2 and self.n <= 64:
            shifts = np.arange(self.n, dtype=np.uint64)
            return (rows << shifts[None, :]).sum(axis=1, dtype=np.uint64)
        return np.array([self.from_coords(r) for r in rows], dtype=np.uint64)

    # -- element arithmetic ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        bt = self.base.add_table
        return self.from_coords(
            [int(bt[x, y]) for x, y in zip(self.coords(a), self.coords(b))]
        )

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        nt = self.base.neg_table
        return self.from_coords([int(nt[x]) for x in self.coords(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._fast2:
            res = 0
            n, mod_int = self.n, self._mod_int
            while b:
                if b & 1:
                    res ^= a
                b >>= 1
                a <<= 1
                if (a >> n) & 1:
                    a ^= mod_int
            return res
        va = np.array(self.coords(a), dtype=np.int64)
        vb = np.array(self.coords(b), dtype=np.int64)
        if self.r == 1:
            ck = np.einsum("i,j,ijk->k", va, vb, self.tensor.astype(np.int64)) % self.p
            return self.from_coords(ck)
        out = [0] * self.n
        bt = self.base
        for i in range(self.n):
            if va[i] == 0:
                continue
            for j in range(self.n):
                if vb[j] == 0:
                    continue
                c = bt.mul(int(va[i]), int(vb[j]))
                for k in range(self.n):
                    t = self.tensor[i, j, k]
                    if t:
                        out[k] = bt.add(out[k], bt.mul(c, int(t)))
        return self.from_coords(out)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out, base = 1, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.order - 2)

    def frob(self, a: int, k: int) -> int:
        """a^(q^k) via the k-th Frobenius matrix."""
        k %= self.n
        if self._fast2:
            masks = self._colmasks[k]
            return sum(((a & masks[j]).bit_count() & 1) << j for j in range(self.n))
        vec = linalg.matvec(
            self.base, self.frobenius_matrices[k].T, np.array(self.coords(a), dtype=np.uint8)
        )
        return self.from_coords(vec)

    # -- batch helpers -----------------------------------------------------

    def mul_many(self, a_arr: np.ndarray, b_arr: np.ndarray) -> np.ndarray:
        """Pairwise products of two packed-element arrays."""
        a_arr = np.asarray(a_arr, dtype=np.uint64)
        b_arr = np.asarray(b_arr, dtype=np.uint64)
        if self.r == 1:
            ca = self.coords_array(a_arr).astype(np.float64)
            cb = self.coords_array(b_arr).astype(np.float64)
            t = self.tensor.reshape(self.n * self.n, self.n).astype(np.float64)
            outer = np.einsum("ai,aj->aij", ca, cb).reshape(len(ca), -1)
            ck = (np.rint(outer @ t).astype(np.int64) % self.p).astype(np.uint8)
            return self.pack_array(ck)
        return np.array(
            [self.mul(int(a), int(b)) for a, b in zip(a_arr, b_arr)], dtype=np.uint64
        )

    def random(self, rng: random.Random) -> int:
        return rng.randrange(self.order)

    def random_nonzero(self, rng: random.Random) -> int:
        return rng.randrange(1, self.order)

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self) -> str:
        return "ExtensionField(q=%d, n=%d)" % (self.q, self.n)


@functools.lru_cache(maxsize=64)
def _cached_extension(q: int, n: int, modulus: tuple | None) -> ExtensionField:
    base = base_field(q)
    if modulus is None:
        modulus = _least_irreducible(base, n)
    return ExtensionField(base, n, modulus)


def build_extension(q: int, n: int, modulus=None) -> ExtensionField:
    """Construct (and cache) the tower F_q <= K with K of degree n.

    The modulus, when supplied, is a low-to-high coefficient sequence of a
    monic degree-n polynomial over F_q; it is checked for irreducibility.
    Without one, the lexicographically least monic irreducible is used.
    """
    prime_power_split(q)  # raises InvalidOrder for non prime powers
    if q > MAX_Q:
        raise InvalidOrder("base field order %d exceeds the supported %d" % (q, MAX_Q))
    if n < 2:
        raise InvalidDegree("extension degree must be >= 2, got %d" % n)
    if modulus is not None:
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise NotIrreducible("modulus must be monic of degree %d" % n)
        if any(not 0 <= c < q for c in modulus):
            raise NotIrreducible("modulus coefficients must lie in 0..%d" % (q - 1))
        base = base_field(q)
        if any(upoly.eval_poly(base, list(modulus), a) == 0 for a in range(q)) or (
            not _is_irreducible(base, list(modulus))
        ):
            raise NotIrreducible("supplied modulus is reducible over F_%d" % q)
    return _cached_extension(q, n, modulus)


def parse_descriptor(line: str) -> ExtensionField:
    """Rebuild a field from its canonical descriptor line."""
    parts = line.split()
    if len(parts) < 5 or parts[0] != "F":
        raise ValueError("malformed field descriptor: %r" % line)
    p, r, n = int(parts[1]), int(parts[2]), int(parts[3])
    coeffs = tuple(int(c) for c in parts[4:])
    if len(coeffs) != n + 1:
        raise ValueError("field descriptor modulus has wrong length")
    return build_extension(p**r, n, coeffs)
