"""Text formats for keys, ciphertexts, and signatures.

Everything is line-oriented ASCII.  Digit vectors are compact strings
for q <= 10 and comma-separated otherwise.  A private key file stores
the field tower, the hidden relation, and the masks; the public
equations are re-expanded on load rather than stored twice.
"""

import numpy as np

from ..errors import FormatError
from ..fields import base_field, parse_descriptor
from ..mvpoly.multipoly import MultiPoly
from .alphabet import Alphabet, _digits_str, _parse_digits
from .keygen import expand_keypair
from .keys import AffinePair, PrivateKey, PrivatePolynomial, PublicKey, TermTable

MAGIC = "HPE1"


def dump_vector(vec, q: int) -> str:
    return _digits_str([int(d) for d in vec], q)


def parse_vector(text: str, q: int, n: int) -> np.ndarray:
    try:
        return np.array(_parse_digits(text.strip(), q, n), dtype=np.uint8)
    except (ValueError, IndexError) as exc:
        raise FormatError("bad digit vector: %r" % text.strip()) from exc


def dump_public(pk: PublicKey) -> str:
    out = ["%s %d %d %d" % (MAGIC, pk.q, pk.n, pk.t)]
    out.extend(pk.alphabet.to_lines())
    for k, tb in enumerate(pk.tables):
        out.append("EQ %d %d" % (k, len(tb)))
        for coeff, exps in tb.iter_terms():
            out.append("%d : %s" % (coeff, " ".join(map(str, exps))))
    return "\n".join(out) + "\n"


def _parse_header(line: str):
    parts = line.split()
    if len(parts) != 4 or parts[0] != MAGIC:
        raise FormatError("expected '%s q n t' header, got %r" % (MAGIC, line))
    try:
        q, n, t = int(parts[1]), int(parts[2]), int(parts[3])
    except ValueError as exc:
        raise FormatError("non-numeric key header: %r" % line) from exc
    return q, n, t


def _split_alphabet(lines: list, pos: int):
    if pos >= len(lines) or not lines[pos].startswith("ALPHABET"):
        raise FormatError("missing alphabet block")
    head = lines[pos].split()
    try:
        count = int(head[3])
    except (ValueError, IndexError) as exc:
        raise FormatError("bad alphabet header: %r" % lines[pos]) from exc
    end = pos + 1 + count
    if end > len(lines):
        raise FormatError("alphabet block is truncated")
    try:
        return Alphabet.from_lines(lines[pos:end]), end
    except (ValueError, IndexError) as exc:
        raise FormatError("bad alphabet block") from exc


def load_public(text: str) -> PublicKey:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty public key")
    q, n, t = _parse_header(lines[0])
    if len(lines) > 1 and lines[1].startswith("F "):
        raise FormatError("this is a private key file, not a public one")
    alphabet, pos = _split_alphabet(lines, 1)
    base = base_field(q)
    tables = []
    while pos < len(lines):
        parts = lines[pos].split()
        if parts[0] != "EQ" or len(parts) != 3:
            raise FormatError("expected equation header, got %r" % lines[pos])
        try:
            k, nterms = int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise FormatError("bad equation header: %r" % lines[pos]) from exc
        if k != len(tables):
            raise FormatError("equations out of order at %r" % lines[pos])
        pos += 1
        terms = {}
        for _ in range(nterms):
            if pos >= len(lines):
                raise FormatError("equation %d is truncated" % k)
            line = lines[pos]
            pos += 1
            try:
                coeff_s, exps_s = line.split(":")
                coeff = int(coeff_s)
                exps = tuple(int(e) for e in exps_s.split())
            except ValueError as exc:
                raise FormatError("bad term line: %r" % line) from exc
            if len(exps) != 2 * n or not 0 < coeff < q:
                raise FormatError("malformed term: %r" % line)
            terms[exps] = base.add(terms.get(exps, 0), coeff)
        mp = MultiPoly(base, 2 * n, terms)
        tables.append(TermTable.from_multipoly(mp, n))
    if len(tables) != n:
        raise FormatError("expected %d equations, found %d" % (n, len(tables)))
    return PublicKey(base, n, t, tables, alphabet)


def _matrix_lines(name: str, mat: np.ndarray, q: int) -> list:
    out = [name]
    for row in mat:
        out.append(_digits_str([int(d) for d in row], q))
    return out


def _parse_matrix(lines: list, pos: int, name: str, q: int, n: int):
    if pos >= len(lines) or lines[pos].split() != [name]:
        raise FormatError("expected matrix %r" % name)
    rows = []
    for i in range(n):
        rows.append(_parse_digits(lines[pos + 1 + i], q, n))
    return np.array(rows, dtype=np.uint8), pos + 1 + n


def _parse_shift(lines: list, pos: int, name: str, q: int, n: int):
    parts = lines[pos].split()
    if len(parts) != 2 or parts[0] != name:
        raise FormatError("expected shift %r" % name)
    return np.array(_parse_digits(parts[1], q, n), dtype=np.uint8), pos + 1


def dump_private(sk: PrivateKey) -> str:
    q = sk.base.q
    out = ["%s %d %d %d" % (MAGIC, q, sk.n, sk.priv.t())]
    out.append(sk.field.descriptor())
    out.extend(sk.alphabet.to_lines())
    out.extend(sk.priv.to_lines())
    out.extend(_matrix_lines("A", sk.affine.a_mat, q))
    out.append("c %s" % _digits_str([int(d) for d in sk.affine.c_vec], q))
    out.extend(_matrix_lines("B", sk.affine.b_mat, q))
    out.append("d %s" % _digits_str([int(d) for d in sk.affine.d_vec], q))
    return "\n".join(out) + "\n"


def load_private(text: str) -> PrivateKey:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty private key")
    q, n, t = _parse_header(lines[0])
    if len(lines) > 1 and not lines[1].startswith("F "):
        raise FormatError("this is a public key file, not a private one")
    try:
        field = parse_descriptor(lines[1])
    except (ValueError, IndexError) as exc:
        raise FormatError("bad field descriptor: %r" % lines[1]) from exc
    if field.q != q or field.n != n:
        raise FormatError("field descriptor does not match key header")
    alphabet, pos = _split_alphabet(lines, 2)
    term_lines = []
    while pos < len(lines) and lines[pos].split()[0] in ("MIX", "PUREX", "CONST"):
        term_lines.append(lines[pos])
        pos += 1
    priv = PrivatePolynomial.from_lines(term_lines)
    if not priv.mixed:
        raise FormatError("private relation has no mixed term")
    try:
        a_mat, pos = _parse_matrix(lines, pos, "A", q, n)
        c_vec, pos = _parse_shift(lines, pos, "c", q, n)
        b_mat, pos = _parse_matrix(lines, pos, "B", q, n)
        d_vec, pos = _parse_shift(lines, pos, "d", q, n)
    except (ValueError, IndexError) as exc:
        raise FormatError("bad affine mask block") from exc
    if priv.t() != t:
        raise FormatError("stated weight %d does not match terms" % t)
    affine = AffinePair(field.base, a_mat, c_vec, b_mat, d_vec)
    public = expand_keypair(field, priv, affine, alphabet)
    return PrivateKey(field, priv, affine, public)


def dump_signature(salt: int, x_vec, q: int) -> str:
    return "SIG1 %d %s\n" % (salt, dump_vector(x_vec, q))


def parse_signature(text: str, q: int, n: int):
    parts = text.split()
    if len(parts) != 3 or parts[0] != "SIG1":
        raise FormatError("expected 'SIG1 salt digits'")
    try:
        salt = int(parts[1])
    except ValueError as exc:
        raise FormatError("bad salt: %r" % parts[1]) from exc
    if salt < 0:
        raise FormatError("negative salt")
    return salt, parse_vector(parts[2], q, n)
