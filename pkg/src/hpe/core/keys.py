"""Key material: private polynomial, affine masks, public equation tables."""

from dataclasses import dataclass

import numpy as np

from ..errors import FormatError, VariableMismatch
from ..mvpoly.linalg import LinearSystem, inverse, matvec, random_invertible
from ..mvpoly.multipoly import MultiPoly


@dataclass(frozen=True)
class KeyGenParams:
    """Knobs for key generation.

    q is the scalar field order, n the extension degree (and message
    length in scalars), t_max the largest allowed monomial weight,
    degX_max the largest allowed power of X inside the hidden equation,
    and n_monomials the number of mixed X/Y monomials to sample.
    """

    q: int = 2
    n: int = 16
    t_max: int = 3
    degX_max: int = 9
    n_monomials: int = 3
    seed: int | None = None

    def check(self) -> None:
        if self.n < 2:
            raise VariableMismatch("extension degree must be at least 2")
        if self.t_max < 2:
            raise VariableMismatch("t_max must be at least 2")
        if not 2 <= self.degX_max <= 64:
            raise VariableMismatch("degX_max must lie in [2, 64]")
        if self.n_monomials < 1:
            raise VariableMismatch("need at least one mixed monomial")


@dataclass(frozen=True)
class PrivatePolynomial:
    """The hidden bivariate relation f(X, Y) over the big field.

    mixed holds (coeff, x_thetas, y_theta) triples standing for
    a * X^(sum q^theta) * Y^(q^y_theta); pure holds (coeff, x_thetas)
    pairs with no Y factor; const is the constant coefficient.
    Exponents of X are carried as sorted tuples of Frobenius levels.
    """

    mixed: tuple = ()
    pure: tuple = ()
    const: int = 0

    def t(self) -> int:
        """Largest total weight (number of q-power factors) of any term."""
        best = 0
        for _, xth, _ in self.mixed:
            best = max(best, len(xth) + 1)
        for _, xth in self.pure:
            best = max(best, len(xth))
        return best

    def x_exponent(self, q: int, thetas: tuple) -> int:
        return sum(q**t for t in thetas)

    def deg_x(self, q: int) -> int:
        degs = [self.x_exponent(q, xth) for _, xth, _ in self.mixed]
        degs += [self.x_exponent(q, xth) for _, xth in self.pure]
        return max(degs, default=0)

    def univariate_in_x(self, field, v: int) -> list:
        """Coefficients of g(X) = f(X, v), low to high, over the big field."""
        q = field.base.q
        bucket: dict[int, int] = {}

        def put(e: int, c: int) -> None:
            s = field.add(bucket.get(e, 0), c)
            if s:
                bucket[e] = s
            else:
                bucket.pop(e, None)

        for a, xth, yth in self.mixed:
            put(self.x_exponent(q, xth), field.mul(a, field.frob(v, yth)))
        for b, xth in self.pure:
            put(self.x_exponent(q, xth), b)
        if self.const:
            put(0, self.const)
        if not bucket:
            return []
        out = [0] * (max(bucket) + 1)
        for e, c in bucket.items():
            out[e] = c
        return out

    def eval(self, field, u: int, v: int) -> int:
        q = field.base.q
        acc = self.const
        for a, xth, yth in self.mixed:
            term = field.mul(a, field.pow(u, self.x_exponent(q, xth)))
            acc = field.add(acc, field.mul(term, field.frob(v, yth)))
        for b, xth in self.pure:
            acc = field.add(acc, field.mul(b, field.pow(u, self.x_exponent(q, xth))))
        return acc

    def to_lines(self) -> list[str]:
        out = []
        for a, xth, yth in self.mixed:
            out.append("MIX %d %s : %d" % (a, " ".join(map(str, xth)), yth))
        for b, xth in self.pure:
            out.append("PUREX %d %s" % (b, " ".join(map(str, xth))))
        out.append("CONST %d" % self.const)
        return out

    @classmethod
    def from_lines(cls, lines: list[str]) -> "PrivatePolynomial":
        mixed, pure, const = [], [], 0
        for line in lines:
            parts = line.split()
            if not parts:
                continue
            try:
                if parts[0] == "MIX":
                    sep = parts.index(":")
                    coeff = int(parts[1])
                    xth = tuple(int(s) for s in parts[2:sep])
                    mixed.append((coeff, xth, int(parts[sep + 1])))
                elif parts[0] == "PUREX":
                    pure.append((int(parts[1]), tuple(int(s) for s in parts[2:])))
                elif parts[0] == "CONST":
                    const = int(parts[1])
                else:
                    raise FormatError("unknown private term line: %r" % line)
            except (ValueError, IndexError) as exc:
                raise FormatError("bad private term line: %r" % line) from exc
        return cls(tuple(mixed), tuple(pure), const)


class AffinePair:
    """The two invertible affine masks u = A x + c and v = B y + d.

    Matrices and shifts live coordinatewise over the scalar field;
    inverses are computed once up front so decryption stays cheap.
    """

    def __init__(self, base, a_mat, c_vec, b_mat, d_vec):
        self.base = base
        self.a_mat = np.ascontiguousarray(a_mat, dtype=np.uint8)
        self.c_vec = np.ascontiguousarray(c_vec, dtype=np.uint8)
        self.b_mat = np.ascontiguousarray(b_mat, dtype=np.uint8)
        self.d_vec = np.ascontiguousarray(d_vec, dtype=np.uint8)
        self.a_inv = inverse(base, self.a_mat)
        self.b_inv = inverse(base, self.b_mat)

    @classmethod
    def sample(cls, base, n: int, rng) -> "AffinePair":
        a_mat = random_invertible(base, n, rng)
        b_mat = random_invertible(base, n, rng)
        c_vec = np.array([rng.randrange(base.q) for _ in range(n)], dtype=np.uint8)
        d_vec = np.array([rng.randrange(base.q) for _ in range(n)], dtype=np.uint8)
        return cls(base, a_mat, c_vec, b_mat, d_vec)

    def map_x(self, x_vec: np.ndarray) -> np.ndarray:
        u = matvec(self.base, self.a_mat, x_vec)
        return self.base.add_table[u, self.c_vec]

    def unmap_u(self, u_vec: np.ndarray) -> np.ndarray:
        shifted = self.base.sub_table[np.asarray(u_vec, dtype=np.uint8), self.c_vec]
        return matvec(self.base, self.a_inv, shifted)

    def map_y(self, y_vec: np.ndarray) -> np.ndarray:
        v = matvec(self.base, self.b_mat, y_vec)
        return self.base.add_table[v, self.d_vec]

    def unmap_v(self, v_vec: np.ndarray) -> np.ndarray:
        shifted = self.base.sub_table[np.asarray(v_vec, dtype=np.uint8), self.d_vec]
        return matvec(self.base, self.b_inv, shifted)


class TermTable:
    """Sparse monomial table for one public equation in (x, y).

    Every monomial is linear in y by construction, so a term is a y index
    (-1 for none), an x part, and a coefficient.  For q = 2 the x part is
    a bitmask over the n x-variables and all coefficients are 1; otherwise
    it is a row of per-variable exponents already reduced by x^q = x.
    """

    def __init__(self, base, n: int, y_idx, xpart, coeffs=None):
        self.base = base
        self.n = n
        self.q2 = base.q == 2
        self.y_idx = np.ascontiguousarray(y_idx, dtype=np.int64)
        if self.q2:
            self.xmask = np.ascontiguousarray(xpart, dtype=np.uint64)
            self.coeffs = np.ones(len(self.y_idx), dtype=np.uint8)
        else:
            self.xexp = np.ascontiguousarray(xpart, dtype=np.uint8)
            if self.xexp.shape != (len(self.y_idx), n):
                raise VariableMismatch("exponent rows do not match term count")
            self.coeffs = np.ascontiguousarray(coeffs, dtype=np.uint8)

    def __len__(self) -> int:
        return len(self.y_idx)

    @classmethod
    def from_records(cls, base, n: int, records) -> "TermTable":
        """Build from merged expansion output for one equation."""
        if base.q == 2:
            y_idx, xmask = records
            return cls(base, n, y_idx, xmask)
        items = sorted(records.items())
        y_idx = np.array([k[0] for k, _ in items], dtype=np.int64)
        xexp = np.array([k[1] for k, _ in items], dtype=np.uint8).reshape(-1, n)
        coeffs = np.array([c for _, c in items], dtype=np.uint8)
        return cls(base, n, y_idx, xexp, coeffs)

    def iter_terms(self):
        """Yield (coeff, exps) with exps over the 2n variables x then y."""
        for i in range(len(self.y_idx)):
            exps = [0] * (2 * self.n)
            if self.q2:
                mask = int(self.xmask[i])
                for b in range(self.n):
                    if mask >> b & 1:
                        exps[b] = 1
            else:
                for b in range(self.n):
                    exps[b] = int(self.xexp[i, b])
            y = int(self.y_idx[i])
            if y >= 0:
                exps[self.n + y] = 1
            yield int(self.coeffs[i]), tuple(exps)

    def to_multipoly(self) -> MultiPoly:
        return MultiPoly(self.base, 2 * self.n, dict(
            (exps, c) for c, exps in self.iter_terms()
        ))

    @classmethod
    def from_multipoly(cls, mp: MultiPoly, n: int) -> "TermTable":
        """Strict conversion: exponents must already be in canonical
        reduced form (every exponent below q, at most one linear y)."""
        base = mp.base
        records: dict = {}
        add = base.add
        for exps, c in mp.terms.items():
            if len(exps) != 2 * n:
                raise FormatError("equation arity does not match key size")
            if any(e >= base.q for e in exps[:n]):
                raise FormatError("x exponent not reduced by x^q = x")
            ys = [j for j in range(n) if exps[n + j]]
            if len(ys) > 1 or any(exps[n + j] > 1 for j in ys):
                raise FormatError("public equation is not linear in y")
            y = ys[0] if ys else -1
            key = (y, tuple(int(e) for e in exps[:n]))
            val = add(records.get(key, 0), c)
            if val:
                records[key] = val
            else:
                records.pop(key, None)
        if base.q == 2:
            recs = sorted(
                (y, sum(1 << b for b in range(n) if exps[b]))
                for y, exps in records
            )
            y_idx = np.array([y for y, _ in recs], dtype=np.int64)
            xmask = np.array([m for _, m in recs], dtype=np.uint64)
            return cls(base, n, y_idx, xmask)
        return cls.from_records(base, n, records)

    def _x_values(self, x_vec: np.ndarray) -> np.ndarray:
        """Per-term value of coeff * x-monomial as an int64 array."""
        if self.q2:
            packed = np.uint64(0)
            for b in range(self.n):
                if x_vec[b]:
                    packed |= np.uint64(1) << np.uint64(b)
            return ((self.xmask & packed) == self.xmask).astype(np.int64)
        pt = self.base.power_table()
        acc = self.coeffs.astype(np.int64)
        p = self.base.p
        if self.base.r == 1:
            for i in range(self.n):
                acc = acc * pt[x_vec[i], self.xexp[:, i]] % p
        else:
            mt = self.base.mul_table
            for i in range(self.n):
                acc = mt[acc, pt[x_vec[i], self.xexp[:, i]]].astype(np.int64)
        return acc

    def linear_row(self, x_vec: np.ndarray) -> np.ndarray:
        """Collapse x to get the equation as a row over (1, y_0..y_{n-1}).

        Entry 0 is the constant part, entry j+1 the coefficient of y_j.
        """
        vals = self._x_values(x_vec)
        if self.base.r == 1:
            sums = np.bincount(
                self.y_idx + 1, weights=vals, minlength=self.n + 1
            )
            return (sums.astype(np.int64) % self.base.p).astype(np.uint8)
        row = np.zeros(self.n + 1, dtype=np.uint8)
        add = self.base.add
        for i in range(len(vals)):
            j = int(self.y_idx[i]) + 1
            row[j] = add(int(row[j]), int(vals[i]))
        return row

    def eval_at(self, x_vec: np.ndarray, y_vec: np.ndarray) -> int:
        row = self.linear_row(x_vec)
        if self.base.r == 1:
            total = int(row[0]) + int(
                row[1:].astype(np.int64) @ np.asarray(y_vec, dtype=np.int64)
            )
            return total % self.base.p
        acc = int(row[0])
        for j in range(self.n):
            acc = self.base.add(acc, self.base.mul(int(row[j + 1]), int(y_vec[j])))
        return acc

    def has_y(self) -> bool:
        return bool((self.y_idx >= 0).any())

    def x_degree(self) -> int:
        if len(self.y_idx) == 0:
            return 0
        if self.q2:
            if hasattr(np, "bitwise_count"):
                return int(np.bitwise_count(self.xmask).max(initial=0))
            return max((int(m).bit_count() for m in self.xmask), default=0)
        return int(self.xexp.sum(axis=1).max(initial=0))


class PublicKey:
    """Public encryption key: n equation tables plus the message alphabet."""

    def __init__(self, base, n: int, t: int, tables: list, alphabet):
        self.base = base
        self.q = base.q
        self.n = n
        self.t = t
        self.tables = tables
        self.alphabet = alphabet
        self._equations = None
        if len(tables) != n:
            raise VariableMismatch("expected %d equations, got %d" % (n, len(tables)))

    def equations(self) -> list:
        if self._equations is None:
            self._equations = [tb.to_multipoly() for tb in self.tables]
        return self._equations

    def linear_system(self, x_vec: np.ndarray) -> LinearSystem:
        """The system the ciphertext x imposes on the randomness y."""
        mat = np.zeros((self.n, self.n), dtype=np.uint8)
        rhs = np.zeros(self.n, dtype=np.uint8)
        neg = self.base.neg_table
        for k, tb in enumerate(self.tables):
            row = tb.linear_row(x_vec)
            mat[k] = row[1:]
            rhs[k] = neg[row[0]]
        return LinearSystem(self.base, mat, rhs)

    def eval_at(self, x_vec: np.ndarray, y_vec: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.uint8)
        for k, tb in enumerate(self.tables):
            out[k] = tb.eval_at(x_vec, y_vec)
        return out

    def term_count(self) -> int:
        return sum(len(tb) for tb in self.tables)

    def shape_violations(self) -> list:
        """Structural defects, empty for a well-formed key."""
        out = []
        for k, tb in enumerate(self.tables):
            if not tb.has_y():
                out.append("equation %d has no y variable" % k)
            deg = tb.x_degree()
            if deg < 2:
                out.append("equation %d is linear in x" % k)
            if deg > self.t:
                out.append("equation %d exceeds x-degree %d" % (k, self.t))
        return out


class PrivateKey:
    """Private key: the field tower, hidden relation, and affine masks.

    Keeps the matching public key alongside so a holder can re-derive
    and cross-check the published equations.
    """

    def __init__(self, field, priv: PrivatePolynomial, affine: AffinePair,
                 public: PublicKey):
        self.field = field
        self.priv = priv
        self.affine = affine
        self.public = public

    @property
    def base(self):
        return self.field.base

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def alphabet(self):
        return self.public.alphabet
