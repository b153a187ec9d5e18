"""Sparse multivariate polynomials over F_q with explicit variable count.

Terms live in a dict mapping exponent tuples (one slot per variable) to
nonzero scalars.  Exponents are symbolic: x^q is not identified with x
unless normalize_exponents is called, which applies the reduction that is
valid for the function each polynomial computes on F_q points.
"""

from __future__ import annotations

import numpy as np

from ..errors import SingularMatrix, VariableMismatch
from . import linalg


class MultiPoly:
    """A polynomial in nvars variables with coefficients in the base field."""

    __slots__ = ("base", "nvars", "terms")

    def __init__(self, base, nvars: int, terms=None):
        self.base = base
        self.nvars = nvars
        clean: dict[tuple, int] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise VariableMismatch(
                    "term has %d exponents, expected %d" % (len(exps), nvars)
                )
            coeff = int(coeff) % base.q
            if coeff:
                clean[exps] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, base, nvars: int) -> "MultiPoly":
        return cls(base, nvars, {})

    @classmethod
    def constant(cls, base, nvars: int, c: int) -> "MultiPoly":
        return cls(base, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, base, nvars: int, index: int) -> "MultiPoly":
        exps = [0] * nvars
        exps[index] = 1
        return cls(base, nvars, {tuple(exps): 1})

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise VariableMismatch(
                "operands have %d and %d variables" % (self.nvars, other.nvars)
            )

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        add = self.base.add
        for exps, coeff in other.terms.items():
            s = add(out.get(exps, 0), coeff)
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return MultiPoly(self.base, self.nvars, out)

    def __neg__(self) -> "MultiPoly":
        neg = self.base.neg
        return MultiPoly(
            self.base, self.nvars, {e: neg(c) for e, c in self.terms.items()}
        )

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        out: dict[tuple, int] = {}
        add, mul = self.base.add, self.base.mul
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                s = add(out.get(key, 0), mul(c1, c2))
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return MultiPoly(self.base, self.nvars, out)

    __rmul__ = __mul__

    def scale(self, s: int) -> "MultiPoly":
        mul = self.base.mul
        return MultiPoly(
            self.base, self.nvars, {e: mul(c, s % self.base.q) for e, c in self.terms.items()}
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- queries -----------------------------------------------------------

    def degree(self) -> int:
        """Total degree, -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, indices) -> int:
        """Largest combined exponent over the given variable indices."""
        if not self.terms:
            return -1
        idx = list(indices)
        return max(sum(e[i] for i in idx) for e in self.terms)

    def sorted_terms(self) -> list[tuple[tuple, int]]:
        return sorted(self.terms.items())

    def eval(self, point) -> int:
        """Evaluate at a point given as a scalar sequence."""
        if len(point) != self.nvars:
            raise VariableMismatch("point has wrong length")
        base = self.base
        acc = 0
        for exps, coeff in self.terms.items():
            val = coeff
            for x, e in zip(point, exps):
                if e:
                    val = base.mul(val, base.pow(int(x), e))
            acc = base.add(acc, val)
        return acc

    # -- structural transforms --------------------------------------------

    def normalize_exponents(self) -> "MultiPoly":
        """Reduce exponents by x^q = x, preserving the function on F_q points."""
        q = self.base.q
        add = self.base.add
        out: dict[tuple, int] = {}
        for exps, coeff in self.terms.items():
            key = tuple(0 if e == 0 else (e - 1) % (q - 1) + 1 for e in exps)
            s = add(out.get(key, 0), coeff)
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return MultiPoly(self.base, self.nvars, out)

    def substitute_affine(self, m, c, block: tuple[int, int]) -> "MultiPoly":
        """Replace the variable block v with m @ v + c, m invertible.

        block is (start, size); variables outside the block pass through.
        """
        start, size = block
        if not (0 <= start and start + size <= self.nvars):
            raise VariableMismatch("block out of range")
        m = np.asarray(m, dtype=np.uint8)
        c = np.asarray(c, dtype=np.uint8).reshape(-1)
        if m.shape != (size, size) or c.shape != (size,):
            raise VariableMismatch("affine map has wrong shape for the block")
        if linalg.rank(self.base, m) != size:
            raise SingularMatrix("affine substitution requires an invertible matrix")
        forms = []
        for i in range(size):
            t: dict[tuple, int] = {}
            for j in range(size):
                if m[i, j]:
                    e = [0] * self.nvars
                    e[start + j] = 1
                    t[tuple(e)] = int(m[i, j])
            if c[i]:
                t[(0,) * self.nvars] = self.base.add(
                    t.get((0,) * self.nvars, 0), int(c[i])
                )
            forms.append(MultiPoly(self.base, self.nvars, t))
        pow_cache: dict[tuple[int, int], MultiPoly] = {}

        def form_power(i: int, e: int) -> MultiPoly:
            key = (i, e)
            if key not in pow_cache:
                if e == 1:
                    pow_cache[key] = forms[i]
                else:
                    pow_cache[key] = form_power(i, e - 1) * forms[i]
            return pow_cache[key]

        total = MultiPoly.zero(self.base, self.nvars)
        for exps, coeff in self.terms.items():
            piece_exps = list(exps)
            prod = None
            for i in range(size):
                e = exps[start + i]
                if e:
                    piece_exps[start + i] = 0
                    f = form_power(i, e)
                    prod = f if prod is None else prod * f
            mono = MultiPoly(self.base, self.nvars, {tuple(piece_exps): coeff})
            total = total + (mono if prod is None else mono * prod)
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return "MultiPoly(0)"
        bits = [
            "%d:%s" % (c, ",".join(str(e) for e in exps))
            for exps, c in self.sorted_terms()
        ]
        return "MultiPoly(%s)" % " + ".join(bits)
