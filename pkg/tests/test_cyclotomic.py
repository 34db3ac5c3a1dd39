import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyclodesign.char_sums import gauss_sum, p_star, quadratic_gauss_sum_power
from cyclodesign.cyclotomic import CycInt, cyc_add, cyc_mul, cyc_scale
from cyclodesign.errors import MixedModulus


def cyc(p):
    return st.lists(st.integers(-50, 50), min_size=p - 1, max_size=p - 1).map(lambda c: CycInt(p, c))


def test_basic_relations():
    z = CycInt.zeta(3)
    one = CycInt.integer(3, 1)
    assert cyc_mul(one, z) == z
    assert one + z + z * z == CycInt.integer(3, 0)
    assert cyc_mul(z, z**2) == one
    assert CycInt.zeta(5, 5) == CycInt.integer(5, 1)


def test_gauss_sum_values():
    assert gauss_sum(3).coeffs == (1, 2)
    assert gauss_sum(3) * gauss_sum(3) == CycInt.integer(3, -3)
    assert gauss_sum(5) * gauss_sum(5) == CycInt.integer(5, 5)
    for p in (3, 5, 7, 11, 13):
        assert gauss_sum(p) ** 2 == CycInt.integer(p, p_star(p))


def test_gauss_power():
    for p in (3, 5, 7):
        for m in range(1, 6):
            assert quadratic_gauss_sum_power(p, m) == gauss_sum(p) ** m


def test_mixed_modulus():
    with pytest.raises(MixedModulus):
        CycInt.integer(3, 1) + CycInt.integer(5, 1)


@given(cyc(5), cyc(5), cyc(5))
def test_ring_laws(x, y, z):
    assert cyc_add(x, y) == y + x
    assert cyc_mul(x, y) == y * x
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x - x == CycInt.integer(5, 0)
    assert cyc_scale(x, 3) == x + x + x


@given(cyc(7), st.integers(1, 6))
def test_galois_is_ring_map(x, c):
    y = CycInt.zeta(7, 2) + 3
    assert (x * y).galois(c) == x.galois(c) * y.galois(c)


@given(cyc(3))
def test_norm_and_complex(x):
    assert abs(x.to_complex()) ** 2 == pytest.approx(x.norm_squared(), rel=1e-9, abs=1e-6)
    assert (x * x.conj()).is_rational()


def test_histogram_roundtrip():
    assert CycInt.from_histogram(3, [5, 2, 2]).to_int() == 3
    assert CycInt.from_exponents(5, {0: 2, 5: 1}).to_int() == 3
