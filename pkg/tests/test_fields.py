import random

import numpy as np
import pytest

from hpe.errors import InvalidDegree, InvalidOrder
from hpe.fields import (MAX_Q, base_field, build_extension, parse_descriptor,
                        prime_power_split)
from hpe.mvpoly import upoly


def test_prime_power_split():
    assert prime_power_split(2) == (2, 1)
    assert prime_power_split(4) == (2, 2)
    assert prime_power_split(8) == (2, 3)
    assert prime_power_split(9) == (3, 2)
    assert prime_power_split(27) == (3, 3)
    assert prime_power_split(256) == (2, 8)
    for bad in (0, 1, 6, 12, 100):
        with pytest.raises(InvalidOrder):
            prime_power_split(bad)


def test_base_field_rejects_bad_orders():
    with pytest.raises(InvalidOrder):
        base_field(6)
    with pytest.raises(InvalidOrder):
        base_field(2 * MAX_Q)


def test_gf4_known_products():
    # GF(4) with modulus x^2 + x + 1: elements are bit pairs c0 + 2*c1.
    f = base_field(4)
    assert f.mul(2, 2) == 3
    assert f.mul(2, 3) == 1
    assert f.mul(3, 3) == 2
    assert f.add(2, 3) == 1
    assert f.inv(2) == 3 and f.inv(3) == 2


def test_gf8_and_gf9_known_products():
    # GF(8) uses x^3 + x + 1, the least irreducible cubic over F_2.
    f8 = base_field(8)
    assert f8.mul(4, 2) == 3
    # GF(9) uses x^2 + 1 over F_3; alpha^2 = -1 = 2.
    f9 = base_field(9)
    assert f9.mul(3, 3) == 2


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
def test_base_field_axioms(q):
    f = base_field(q)
    els = list(range(q))
    for a in els:
        assert f.add(a, 0) == a
        assert f.mul(a, 1) == a
        assert f.mul(a, 0) == 0
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
        for b in els:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            assert f.sub(a, b) == f.add(a, f.neg(b))
            for c in els:
                assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


def test_characteristic_two_addition_is_xor():
    f = base_field(8)
    for a in range(8):
        for b in range(8):
            assert f.add(a, b) == a ^ b


def test_characteristic_sums_to_zero():
    for q in (3, 9, 5, 25):
        f = base_field(q)
        for a in range(q):
            acc = 0
            for _ in range(f.p):
                acc = f.add(acc, a)
            assert acc == 0


def test_base_field_tables_match_scalar_ops():
    for q in (4, 5, 9):
        f = base_field(q)
        add, mul = f.add_table, f.mul_table
        for a in range(q):
            for b in range(q):
                assert add[a, b] == f.add(a, b)
                assert mul[a, b] == f.mul(a, b)
        for a in range(1, q):
            assert f.mul(a, int(f.inv_table[a])) == 1
        for a in range(q):
            assert f.add(a, int(f.neg_table[a])) == 0


def test_power_table_matches_pow():
    for q in (2, 5, 8):
        f = base_field(q)
        pt = f.power_table()
        assert pt.shape == (q, q)
        for a in range(q):
            for e in range(q):
                assert pt[a, e] == f.pow(a, e)
        assert pt[0, 0] == 1


def _naive_irreducible(q, coeffs):
    # Trial division by every lower-degree monic polynomial.
    f = base_field(q)
    n = len(coeffs) - 1
    for d in range(1, n):
        for packed in range(q ** d):
            div = [(packed // q ** i) % q for i in range(d)] + [1]
            _, r = upoly.divmod_poly(f, list(coeffs), div)
            if upoly.is_zero(r):
                return False
    return True


@pytest.mark.parametrize("q,n", [(2, 4), (3, 2), (4, 2), (2, 6)])
def test_modulus_is_least_irreducible(q, n):
    field = build_extension(q, n)
    coeffs = field.modulus
    assert len(coeffs) == n + 1 and coeffs[-1] == 1
    assert _naive_irreducible(q, coeffs)
    # Everything lexicographically below it (same degree, monic) must factor.
    packed = sum(int(c) * q ** i for i, c in enumerate(coeffs[:-1]))
    for lower in range(packed):
        cand = [(lower // q ** i) % q for i in range(n)] + [1]
        assert not _naive_irreducible(q, cand)


def test_extension_axioms_sampled():
    rng = random.Random(7)
    for q, n in ((2, 12), (3, 4), (4, 3)):
        field = build_extension(q, n)
        for _ in range(60):
            a, b, c = (rng.randrange(field.order) for _ in range(3))
            assert field.add(a, b) == field.add(b, a)
            assert field.mul(a, b) == field.mul(b, a)
            assert field.mul(a, field.add(b, c)) == field.add(
                field.mul(a, b), field.mul(a, c))
            assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
            if a:
                assert field.mul(a, field.inv(a)) == 1
            assert field.add(a, field.neg(a)) == 0


def test_extension_multiplicative_order_small():
    field = build_extension(2, 6)
    for a in range(1, field.order):
        assert field.pow(a, field.order - 1) == 1


def test_coords_pack_round_trip():
    field = build_extension(3, 4)
    for a in range(field.order):
        assert field.from_coords(field.coords(a)) == a
    arr = np.arange(field.order, dtype=np.int64)
    coords = field.coords_array(arr)
    assert coords.shape == (field.order, 4)
    assert np.array_equal(field.pack_array(coords), arr)


def test_frobenius_is_q_power_map():
    rng = random.Random(11)
    for q, n in ((2, 12), (3, 5), (4, 4)):
        field = build_extension(q, n)
        for _ in range(40):
            a = rng.randrange(field.order)
            for k in range(n):
                assert field.frob(a, k) == field.pow(a, q ** k)


def test_frobenius_matrices_act_on_coords():
    field = build_extension(2, 10)
    mats = field.frobenius_matrices
    rng = random.Random(13)
    for _ in range(40):
        a = rng.randrange(field.order)
        va = np.array(field.coords(a), dtype=np.uint8)
        for k in range(field.n):
            # Row j of the matrix holds the image coordinates of basis_j.
            want = np.array(field.coords(field.frob(a, k)), dtype=np.uint8)
            got = (va.astype(np.int64) @ mats[k].astype(np.int64)) % field.p
            assert np.array_equal(got.astype(np.uint8), want)


def test_frobenius_additive():
    field = build_extension(3, 4)
    rng = random.Random(17)
    for _ in range(50):
        a, b = rng.randrange(field.order), rng.randrange(field.order)
        assert field.frob(field.add(a, b), 1) == field.add(
            field.frob(a, 1), field.frob(b, 1))


def test_mult_tensor_matches_mul():
    # Prime base: plain integer contraction mod p reproduces multiplication.
    for q, n in ((2, 8), (3, 3)):
        field = build_extension(q, n)
        tensor = field.tensor
        rng = random.Random(19)
        for _ in range(30):
            a, b = rng.randrange(field.order), rng.randrange(field.order)
            va = np.array(field.coords(a), dtype=np.int64)
            vb = np.array(field.coords(b), dtype=np.int64)
            # Layout is (in1, in2, out): T[j, k, i] a_j b_k = (ab)_i.
            prod = np.einsum("jki,j,k->i", tensor.astype(np.int64), va, vb) % field.p
            want = np.array(field.coords(field.mul(a, b)), dtype=np.int64)
            assert np.array_equal(prod, want)


def test_mult_tensor_matches_mul_composite_base():
    # GF(4) coordinates multiply through the base tables, not integers mod p.
    field = build_extension(4, 3)
    base, tensor = field.base, field.tensor
    rng = random.Random(19)
    for _ in range(30):
        a, b = rng.randrange(field.order), rng.randrange(field.order)
        va, vb = field.coords(a), field.coords(b)
        got = []
        for i in range(3):
            acc = 0
            for j in range(3):
                for k in range(3):
                    term = base.mul(int(tensor[j, k, i]), base.mul(va[j], vb[k]))
                    acc = base.add(acc, term)
            got.append(acc)
        assert tuple(got) == field.coords(field.mul(a, b))


def test_mul_many_pairwise():
    field = build_extension(2, 9)
    rng = random.Random(23)
    a = np.array([rng.randrange(field.order) for _ in range(40)])
    b = np.array([rng.randrange(field.order) for _ in range(40)])
    got = field.mul_many(a, b)
    for i in range(40):
        assert int(got[i]) == field.mul(int(a[i]), int(b[i]))


def test_base_embedding_is_homomorphic():
    field = build_extension(4, 3)
    base = field.base
    for a in range(4):
        for b in range(4):
            ea = field.from_coords((a, 0, 0))
            eb = field.from_coords((b, 0, 0))
            assert field.mul(ea, eb) == field.from_coords((base.mul(a, b), 0, 0))
            assert field.add(ea, eb) == field.from_coords((base.add(a, b), 0, 0))


def test_modulus_irreducibility_at_working_sizes():
    # x^(q^n) = x must hold in the quotient while no proper power fixes x.
    for q, n in ((2, 16), (2, 24), (3, 5)):
        field = build_extension(q, n)
        x = field.from_coords((0, 1) + (0,) * (n - 2))
        acc = x
        for _ in range(n):
            acc = field.frob(acc, 1)
        assert acc == x
        for d in range(1, n):
            if n % d:
                continue
            acc = x
            for _ in range(d):
                acc = field.frob(acc, 1)
            assert acc != x


def test_descriptor_round_trip():
    field = build_extension(2, 16)
    again = parse_descriptor(field.descriptor())
    assert again.q == field.q and again.n == field.n
    assert again.modulus == field.modulus
    with pytest.raises(ValueError):
        parse_descriptor("G 2 1 4 1 1 0 0 1")
    with pytest.raises(ValueError):
        parse_descriptor("F 2 1 4 1 1 0 1")


def test_random_sampling():
    field = build_extension(2, 8)
    rng = random.Random(29)
    seen = set()
    for _ in range(200):
        a = field.random_nonzero(rng)
        assert 0 < a < field.order
        seen.add(field.random(rng))
    assert len(seen) > 100


def test_elements_iterator_small():
    field = build_extension(2, 4)
    els = list(field.elements())
    assert els == list(range(16))


def test_build_extension_rejects_bad_degree():
    with pytest.raises(InvalidDegree):
        build_extension(2, 0)
