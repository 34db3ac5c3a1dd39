import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyclodesign.code import CodewordId, code_spec, codeword_vector
from cyclodesign.errors import BadModulus, SampleBudgetZero
from cyclodesign.invariance import (
    DefiningSet,
    MembershipOracle,
    affine_permutation,
    build_defining_set,
    check_affine_invariant,
    cyclotomic_coset,
    downset,
    p_adic_leq,
    verify_affine_action,
    weight_argument_holds,
)


def test_cosets():
    assert cyclotomic_coset(80, 3, 0) == {0}
    assert cyclotomic_coset(80, 3, 1) == {1, 3, 9, 27}
    assert cyclotomic_coset(80, 3, 10) == {10, 30}
    with pytest.raises(BadModulus):
        cyclotomic_coset(81, 3, 1)
    with pytest.raises(BadModulus):
        cyclotomic_coset(80, 3, 80)


def test_p_adic_examples():
    assert all(p_adic_leq(0, s, 3, 4) for s in range(81))
    assert p_adic_leq(9, 10, 3, 4)
    assert not p_adic_leq(1, 3, 3, 4)


def test_p_adic_partial_order_exhaustive():
    r = range(27)
    for a in r:
        assert p_adic_leq(a, a, 3, 3)
        for b in r:
            if p_adic_leq(a, b, 3, 3) and p_adic_leq(b, a, 3, 3):
                assert a == b
    for a, b, c in itertools.product(range(0, 27, 2), repeat=3):
        if p_adic_leq(a, b, 3, 3) and p_adic_leq(b, c, 3, 3):
            assert p_adic_leq(a, c, 3, 3)


def test_defining_sets():
    ds = build_defining_set(code_spec(3, 2, 4))
    assert set(ds.residues) == {0, 1, 3, 9, 27, 10, 30}
    assert ds.includes_zero
    ds6 = build_defining_set(code_spec(3, 3, 6))
    assert set(ds6.residues) == {0} | cyclotomic_coset(728, 3, 1) | cyclotomic_coset(728, 3, 28)


@pytest.mark.parametrize("pml", [(3, 2, 4), (3, 3, 6), (3, 2, 6), (3, 1, 4), (3, 2, 8), (5, 2, 4)])
def test_defining_set_invariance(pml):
    spec = code_spec(*pml)
    ds = build_defining_set(spec)
    assert check_affine_invariant(ds, spec.p, spec.m)
    assert weight_argument_holds(ds, spec.p, spec.m)


def test_counterexample():
    ds = DefiningSet(n=80, residues=(2,), includes_zero=False)
    assert not check_affine_invariant(ds, 3, 4)


@given(st.sets(st.integers(0, 79), max_size=6))
def test_downset_closure_passes(seeds):
    closed = set()
    for s in seeds:
        closed |= set(downset(s, 3, 4))
    ds = DefiningSet(n=80, residues=tuple(sorted(closed)), includes_zero=True)
    assert check_affine_invariant(ds, 3, 4)


def test_identity_permutation_and_oracle():
    spec = code_spec(3, 2, 4)
    perm = affine_permutation(spec, 1, 0)
    assert np.array_equal(perm, np.arange(81))
    oracle = MembershipOracle(spec)
    cid = CodewordId(int(spec.a_domain[3]), 17, 2)
    word = codeword_vector(spec, cid)
    assert oracle.solve(word) == cid
    bad = word.copy()
    bad[5] = (bad[5] + 1) % 3
    assert not oracle.contains(bad)[0]
    assert oracle.solve(bad) is None


def test_action_sampled():
    report = verify_affine_action(code_spec(3, 2, 4), sample_count=100, seed=7)
    assert report.trials == 10_000 and report.ok
    report = verify_affine_action(code_spec(3, 2, 6), sample_count=10, seed=1, codewords=20)
    assert report.ok and report.trials == 200


def test_action_errors():
    with pytest.raises(SampleBudgetZero):
        verify_affine_action(code_spec(3, 2, 4), sample_count=0)
