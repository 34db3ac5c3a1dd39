import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclodesign import field as F
from cyclodesign.errors import EvenCharacteristic, FieldTooLarge, NotPrime, NotPrimitivePolynomial
from cyclodesign.field import build_field

GF9 = build_field(3, 2)
GF81 = build_field(3, 4)
GF25 = build_field(5, 2)

elems81 = st.integers(0, 80)


def test_sizes():
    assert (GF9.q, GF9.n) == (9, 8)
    assert (GF81.q, GF81.n) == (81, 80)


def test_non_primitive_modulus_rejected():
    # x^2 + 1 over F_3: root has order 4, not 8
    with pytest.raises(NotPrimitivePolynomial):
        build_field(3, 2, modulus=(1, 0, 1))


def test_bad_characteristic():
    with pytest.raises(NotPrime):
        build_field(4, 2)
    with pytest.raises(EvenCharacteristic):
        build_field(2, 3)
    with pytest.raises(FieldTooLarge):
        build_field(3, 30)


def test_default_modulus_is_primitive():
    for p, m in [(3, 2), (3, 4), (5, 3), (7, 2), (3, 9)]:
        ctx = build_field(p, m)
        assert F.is_primitive_polynomial(ctx.modulus, p)
        assert len(set(ctx.exp_table.tolist())) == ctx.n


def test_alpha_order():
    assert F.pow_(GF81, GF81.alpha, GF81.n) == 1
    assert all(F.pow_(GF81, GF81.alpha, k) != 1 for k in (16, 40))


@given(elems81)
def test_mul_identity_and_zero(e):
    assert F.mul(GF81, 1, e) == e
    assert F.mul(GF81, e, 0) == 0


@given(elems81, elems81, elems81)
def test_field_axioms(a, b, c):
    ctx = GF81
    assert F.mul(ctx, a, F.add(ctx, b, c)) == F.add(ctx, F.mul(ctx, a, b), F.mul(ctx, a, c))
    assert F.add(ctx, a, F.neg(ctx, a)) == 0
    assert F.sub(ctx, F.add(ctx, a, b), b) == a
    if a:
        assert F.mul(ctx, a, F.inv(ctx, a)) == 1


def test_frobenius():
    xs = range(GF81.q)
    assert all(F.frobenius(GF81, x, 0) == x for x in xs)
    assert F.frobenius(GF81, 0, 2) == 0
    assert all(F.frobenius(GF81, F.frobenius(GF81, x, 2), 2) == x for x in xs)
    # Frobenius is x -> x^(p^l)
    assert all(F.frobenius(GF81, x, 1) == F.pow_(GF81, x, 3) for x in xs)


def test_trace_linear_and_balanced():
    ctx = GF9
    for x in range(9):
        for y in range(9):
            assert F.trace(ctx, F.add(ctx, x, y)) == (F.trace(ctx, x) + F.trace(ctx, y)) % 3
    assert F.trace(GF81, 0) == 0
    counts = np.bincount(F.trace_vec(GF81, np.arange(81)), minlength=3)
    assert counts.tolist() == [27, 27, 27]


def test_quadratic_character():
    ctx = GF81
    assert F.quadratic_character(ctx, 0) == 0
    assert all(F.quadratic_character(ctx, F.mul(ctx, e, e)) == 1 for e in range(1, 81))
    vals = F.quadratic_character_vec(ctx, np.arange(81))
    assert np.count_nonzero(vals == 1) == 40
    assert np.count_nonzero(vals == -1) == 40


def test_vector_ops_match_scalar():
    ctx = GF25
    xs = np.arange(ctx.q)
    for a in (0, 1, 7, 24):
        assert F.mul_vec(ctx, a, xs).tolist() == [F.mul(ctx, a, int(x)) for x in xs]
        assert F.add_vec(ctx, a, xs).tolist() == [F.add(ctx, a, int(x)) for x in xs]
    assert F.pow_vec(ctx, xs, 6).tolist() == [F.pow_(ctx, int(x), 6) for x in xs]
    assert F.trace_vec(ctx, xs).tolist() == [F.trace(ctx, int(x)) for x in xs]


def test_prime_subfield_and_subfields():
    ctx = GF81
    prime = F.prime_subfield(ctx)
    assert sorted(int(c) for c in prime) == [1, 2]
    # every element of the prime subfield is fixed by Frobenius
    assert all(F.frobenius(ctx, int(c), 1) == int(c) for c in prime)
    sub = F.subfield_elements(ctx, 2)
    assert len(sub) == 9
    assert all(F.frobenius(ctx, int(c), 2) == int(c) for c in sub)


@settings(max_examples=30)
@given(st.sampled_from([(3, 2), (3, 3), (5, 2), (7, 2)]), st.data())
def test_encode_decode_roundtrip(pm, data):
    ctx = build_field(*pm)
    x = data.draw(st.integers(0, ctx.q - 1))
    assert ctx.encode(ctx.decode(x)) == x
