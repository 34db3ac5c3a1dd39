import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyclodesign.code import code_spec
from cyclodesign.designs import (
    BlockSet,
    DesignParams,
    check_support_multiplicity,
    coverage_on_demand,
    extract_all_blocks,
    extract_blocks,
    lambda_from_counts,
    reduce_design_level,
    sampled_pairs,
    theorem2_bound,
    theorem5_parameters,
    closed_form_lambdas,
    verify_2design,
)
from cyclodesign.errors import (
    BadLevel,
    MultiplicityViolation,
    NonIntegralLambda,
    NotADesign,
    UnsupportedRegime,
    WeightAbsent,
)


@pytest.fixture(scope="module")
def ex1_blocks():
    return extract_all_blocks(code_spec(3, 2, 4))


def test_theorem2_bound():
    assert theorem2_bound(51, 81, 3) == 101
    assert theorem2_bound(1, 10, 3) == 1
    assert theorem2_bound(477, 729, 3) >= 729


@given(st.integers(1, 500), st.sampled_from([3, 5, 7]))
def test_theorem2_bound_is_maximal(d, p):
    def ok(w):
        return w - (w + p - 2) // (p - 1) < d

    w = theorem2_bound(d, 10**6, p)
    assert ok(w) and not ok(w + 1)


def test_lambda_from_counts():
    assert lambda_from_counts(81, 51, 648) == 255
    assert lambda_from_counts(81, 54, 120) == 53
    assert lambda_from_counts(9, 2, math.comb(9, 2)) == 1
    with pytest.raises(NonIntegralLambda):
        lambda_from_counts(81, 51, 7)


def test_reduce_design_level():
    assert reduce_design_level(2, 81, 51, 255, 2) == 255
    assert reduce_design_level(2, 81, 51, 255, 1) == 408
    assert reduce_design_level(2, 81, 51, 255, 0) == 648
    with pytest.raises(BadLevel):
        reduce_design_level(2, 81, 51, 255, 3)


def test_example_one_designs(ex1_blocks):
    expected = {51: (648, 255), 54: (120, 53), 60: (324, 177)}
    assert set(ex1_blocks) == set(expected)
    for w, (b, lam) in expected.items():
        bs = ex1_blocks[w]
        assert bs.b == b and bs.k == w and bs.multiplicity_checked
        cert = verify_2design(bs, mode="full")
        assert cert.params == DesignParams(2, 81, w, lam, b)
        assert cert.params.double_counting_holds()
        assert verify_2design(bs, mode="sampled", sample_count=500, seed=3).params.lam == lam


def test_incidence_matches_reduction(ex1_blocks):
    bs = ex1_blocks[51]
    assert set(bs.replication().tolist()) == {408}
    assert bs.b == 648


def test_full_point_block():
    bs = extract_blocks(code_spec(3, 2, 4), 81)
    assert bs.b == 1 and bs.incidence().all()


def test_weight_absent():
    with pytest.raises(WeightAbsent):
        extract_blocks(code_spec(3, 2, 4), 40)


def test_single_block_not_design():
    bs = BlockSet.from_point_lists(6, [[0, 1, 2]])
    with pytest.raises(NotADesign) as err:
        verify_2design(bs, mode="full")
    assert err.value.witnesses


def test_known_design_fano():
    fano = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]]
    cert = verify_2design(BlockSet.from_point_lists(7, fano))
    assert cert.params == DesignParams(2, 7, 3, 1, 7)
    assert cert.replication == 3


@given(st.integers(4, 9), st.integers(2, 4))
def test_complete_design(v, k):
    k = min(k, v - 1)
    blocks = list(combinations(range(v), k))
    cert = verify_2design(BlockSet.from_point_lists(v, blocks), mode="full")
    assert cert.params.lam == math.comb(v - 2, k - 2)


def test_pair_counts_against_python(ex1_blocks):
    bs = ex1_blocks[54]
    lists = [set(b) for b in bs.point_lists()]
    for i, j in sampled_pairs(81, 20, seed=5):
        assert sum(1 for b in lists if i in b and j in b) == 53


def test_multiplicity_violation():
    supports = np.packbits(np.array([[1, 1, 0], [1, 1, 0], [0, 1, 1]], dtype=bool), axis=1)
    normalized = np.zeros((3, 1), dtype=np.uint64)
    with pytest.raises(MultiplicityViolation):
        check_support_multiplicity(supports, normalized, 3)
    # right count but not scalar multiples
    supports = np.packbits(np.array([[1, 1, 0], [1, 1, 0]], dtype=bool), axis=1)
    normalized = np.array([[4], [7]], dtype=np.uint64)
    with pytest.raises(MultiplicityViolation):
        check_support_multiplicity(supports, normalized, 3)


def test_block_file_roundtrip(tmp_path, ex1_blocks):
    bs = ex1_blocks[60]
    path = tmp_path / "b.txt"
    bs.write(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "81 60 324"
    rows = [list(map(int, ln.split())) for ln in lines[1:]]
    assert rows == sorted(rows) and all(r == sorted(r) and len(r) == 60 for r in rows)
    back = BlockSet.read(path)
    assert back.point_lists() == bs.point_lists()


def test_closed_form_parameter_examples():
    assert theorem5_parameters(code_spec(3, 2, 4)) == [(54, 53, 120), (51, 255, 648), (60, 177, 324)]
    lam = {w: l for w, l, b in theorem5_parameters(code_spec(3, 2, 6))}
    assert lam[495] == 122265
    ex2 = {w: (l, b) for w, l, b in theorem5_parameters(code_spec(3, 3, 6))}
    assert ex2[477] == (lambda_from_counts(729, 477, 18954), 18954)
    with pytest.raises(UnsupportedRegime):
        theorem5_parameters(code_spec(3, 1, 4))


@pytest.mark.parametrize("pml", [(3, 2, 4), (3, 3, 6), (3, 2, 6), (3, 3, 9), (3, 2, 8), (5, 2, 4),
                                 (3, 4, 8), (5, 2, 6), (3, 2, 12)])
def test_printed_formulas_agree(pml):
    spec = code_spec(*pml)
    printed = closed_form_lambdas(spec)
    derived = theorem5_parameters(spec)
    assert [w for w, _ in printed] == [w for w, _, _ in derived]
    assert all(Fraction(l1) == l2 for (_, l2), (_, l1, _) in zip(printed, derived))


def test_extracted_designs_match_closed_forms():
    spec = code_spec(3, 3, 6)
    closed = {w: (l, b) for w, l, b in theorem5_parameters(spec)}
    for w, bs in extract_all_blocks(spec).items():
        cert = verify_2design(bs, mode="sampled", sample_count=2000, seed=0)
        assert (cert.params.lam, cert.params.b) == closed[w]


def test_coverage_on_demand_matches_blocks(ex1_blocks):
    cov = coverage_on_demand(code_spec(3, 2, 4), points=20, seed=4)
    for w, c in cov.items():
        inc = ex1_blocks[w].incidence()[:, c.points].astype(int)
        assert np.array_equal(inc.T @ inc, c.coverage)


def test_coverage_on_demand_ex3():
    spec = code_spec(3, 2, 6)
    closed = {w: l for w, l, b in theorem5_parameters(spec)}
    for w, c in coverage_on_demand(spec, points=60, seed=2).items():
        assert set(c.pair_values.tolist()) == {closed[w]}
