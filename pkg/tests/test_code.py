import numpy as np
import pytest

from cyclodesign import field as F
from cyclodesign.code import (
    CodewordId,
    Regime,
    analytic_distribution_table,
    code_spec,
    codeword_vector,
    generator_matrix,
    iter_ids,
    sample_ids,
    weight_analytic,
    weight_bruteforce,
    weight_distribution,
    weights_analytic_batch,
    weights_bruteforce_batch,
)
from cyclodesign.errors import BadExponent, BudgetExceeded, DomainViolation, UnsupportedRegime
from cyclodesign.linalg import rank_mod_p
from cyclodesign.util import rng_for

EX1 = {0: 1, 51: 1296, 54: 240, 60: 648, 81: 2}
EX2 = {0: 1, 477: 37908, 486: 2184, 504: 18954, 729: 2}
EX3 = {0: 1, 468: 265356, 477: 530712, 486: 2184, 495: 530712, 504: 265356, 729: 2}


def test_regimes():
    assert code_spec(3, 2, 4).regime is Regime.HALF
    assert len(code_spec(3, 2, 4).a_domain) == 9
    assert code_spec(3, 2, 6).regime is Regime.EVEN_ODD
    assert code_spec(3, 2, 8).regime is Regime.EVEN_QUOTIENT
    assert code_spec(3, 1, 3).regime is Regime.UNIT_GCD
    assert code_spec(3, 3, 9).regime is Regime.ODD_ODD
    assert len(code_spec(3, 2, 6).a_domain) == 729
    with pytest.raises(BadExponent):
        code_spec(3, 4, 4)
    with pytest.raises(BadExponent):
        code_spec(3, 0, 4)


def test_codeword_vector_basics():
    spec = code_spec(3, 2, 4)
    assert not codeword_vector(spec, CodewordId(0, 0, 0)).any()
    assert (codeword_vector(spec, CodewordId(0, 0, 2)) == 2).all()
    v = codeword_vector(spec, CodewordId(0, 5, 0))
    assert np.bincount(v, minlength=3).tolist() == [27, 27, 27]
    with pytest.raises(DomainViolation):
        codeword_vector(spec, CodewordId(spec.ctx.alpha, 0, 0))  # alpha is not in GF(9)


def test_codeword_vector_definition():
    spec = code_spec(3, 2, 6)
    ctx = spec.ctx
    cid = CodewordId(17, 300, 1)
    v = codeword_vector(spec, cid)
    for pos in (0, 1, 2, 100, 728):
        x = int(spec.points[pos])
        u = F.pow_(ctx, x, 10)
        expect = (F.trace(ctx, F.mul(ctx, 17, u)) + F.trace(ctx, F.mul(ctx, 300, x)) + 1) % 3
        assert v[pos] == expect
    assert spec.points[0] == 0 and spec.points[1] == 1 and spec.points[2] == ctx.alpha


def test_weight_examples():
    spec = code_spec(3, 2, 4)
    assert weight_bruteforce(spec, CodewordId(0, 0, 1)) == 81
    assert weight_bruteforce(spec, CodewordId(0, 7, 2)) == 54
    ws = [weight_bruteforce(spec, c) for c in iter_ids(spec)]
    assert min(w for w in ws if w) == 51


def test_analytic_matches_brute_exhaustive_small():
    spec = code_spec(3, 2, 4)
    for cid in iter_ids(spec):
        assert weight_analytic(spec, cid) == weight_bruteforce(spec, cid)


@pytest.mark.parametrize("pml", [(3, 2, 6), (3, 3, 6), (5, 2, 4), (3, 2, 8)])
def test_analytic_matches_brute_sampled(pml):
    spec = code_spec(*pml)
    ids = sample_ids(spec, 3000, rng_for(11, "test"))
    assert np.array_equal(weights_analytic_batch(spec, ids), weights_bruteforce_batch(spec, ids))


def test_batch_matches_single():
    spec = code_spec(3, 2, 6)
    ids = sample_ids(spec, 40, rng_for(2, "single"))
    brute = weights_bruteforce_batch(spec, ids)
    assert brute.tolist() == [weight_bruteforce(spec, CodewordId(*map(int, r))) for r in ids]


def test_case_two_zero_b_branch():
    # (a, 0, 0) with a != 0 in (3,2,6): here h = 0 = Tr(a x0^(p^l+1)) with x0 = 0
    spec = code_spec(3, 2, 6)
    p, m = 3, 6
    sigma = (-1) ** ((p - 1) * m // 4)
    for a in (1, 2, 5, 100):
        eta = F.quadratic_character(spec.ctx, a)
        zeros = p ** (m - 1) - sigma * eta * p ** (m // 2 - 1) * (p - 1)
        assert weight_bruteforce(spec, CodewordId(a, 0, 0)) == p**m - zeros


@pytest.mark.parametrize("pml,expected,dim", [((3, 2, 4), EX1, 7), ((3, 3, 6), EX2, 10), ((3, 2, 6), EX3, 13)])
def test_examples(pml, expected, dim):
    spec = code_spec(*pml)
    brute = weight_distribution(spec, "brute")
    assert brute.entries == expected and brute.dimension == dim
    assert weight_distribution(spec, "analytic") == brute
    assert analytic_distribution_table(spec) == brute


@pytest.mark.parametrize("pml", [(3, 2, 4), (3, 3, 6), (3, 2, 6), (3, 2, 8), (3, 3, 9), (5, 2, 4), (5, 2, 6),
                                 (3, 4, 8), (7, 2, 4), (3, 2, 10), (3, 2, 12)])
def test_table_consistency(pml):
    spec = code_spec(*pml)
    t = analytic_distribution_table(spec)
    p, q = spec.p, spec.q
    assert t.total == p**t.dimension
    assert t.entries[0] == 1 and t.entries[q] == p - 1
    # balanced code: each coordinate is nonzero in p^(dim-1)(p-1) codewords
    assert t.first_moment == p ** (t.dimension - 1) * (p - 1) * q
    assert all(c % (p - 1) == 0 for w, c in t.entries.items() if w)


def test_thread_count_independent():
    spec = code_spec(3, 2, 6)
    assert weight_distribution(spec, "analytic", threads=1) == weight_distribution(spec, "analytic", threads=3)


def test_unit_gcd_and_budget():
    spec = code_spec(3, 1, 4)
    with pytest.raises(UnsupportedRegime):
        weight_distribution(spec, "analytic")
    d = weight_distribution(spec, "brute")
    assert d.total == 3**9
    with pytest.raises(BudgetExceeded):
        weight_distribution(code_spec(3, 2, 6), "brute", budget=1000)


def test_budget_env(monkeypatch):
    monkeypatch.setenv("CYCLODESIGN_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        weight_distribution(code_spec(3, 2, 4), "brute")


@pytest.mark.parametrize("pml", [(3, 2, 4), (3, 2, 6), (3, 1, 4), (5, 2, 4)])
def test_generator_rank_is_dimension(pml):
    spec = code_spec(*pml)
    assert rank_mod_p(generator_matrix(spec), spec.p) == spec.dimension


def test_injective_on_ids():
    spec = code_spec(3, 2, 4)
    seen = {codeword_vector(spec, c).tobytes() for c in iter_ids(spec)}
    assert len(seen) == 3**7
