from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from borwein_ap.borwein import BorweinParams, borwein_poly, laurent_borwein, shift_data
from borwein_ap.progsum import (
    corollary_holds_at,
    corollary_threshold,
    expected_sign,
    gp_bound,
    gp_check,
    li_bound,
    li_check,
    main_term,
    progression_sum,
    progression_sums,
    progression_sums_dense,
    refinement_holds,
    theorem_main_check,
    theorem_main_records,
    v_of,
    within_sqrt_bound,
    zaharescu_bound,
)

from conftest import SMALL_PARAMS
from oracles import naive_borwein, naive_residue_sums

P = BorweinParams
params_strategy = st.builds(
    BorweinParams, st.sampled_from([3, 5, 7]), st.integers(1, 3), st.integers(1, 4)
)


def test_v_of():
    assert v_of(0, 3) == 2
    assert v_of(1, 3) == -1
    assert v_of(-6, 3) == 2
    assert v_of(10, 5) == 4


def test_progression_sum_examples():
    params = P(3, 1, 1)
    assert [progression_sum(params, 6, b) for b in range(6)] == [1, -1, -1, 1, 0, 0]
    assert progression_sum(params, 6, -5) == -1
    assert sum(progression_sums(P(3, 1, 2), 12)) == 0


@pytest.mark.parametrize("params", SMALL_PARAMS, ids=str)
def test_modulus_one_gives_zero(params):
    assert progression_sum(params, 1, 0) == 0


def test_progression_sum_rejects_bad_modulus():
    with pytest.raises(ValueError):
        progression_sum(P(3, 1, 1), 0, 0)


@settings(max_examples=60, deadline=None)
@given(params_strategy, st.integers(1, 80))
def test_fold_matches_dense_and_naive(params, d):
    fast = progression_sums(params, d)
    assert fast == progression_sums_dense(params, d)
    assert list(fast) == naive_residue_sums(naive_borwein(params.p, params.s, params.n), d)
    assert sum(fast) == 0


@pytest.mark.parametrize("params", SMALL_PARAMS, ids=str)
def test_laurent_route_matches_fold(params):
    e, sign = shift_data(params)
    lp = laurent_borwein(params)
    d = params.modulus
    nd = [0] * d
    for exp, c in lp.items():
        nd[exp % d] += c
    assert [sign * nd[(b - e) % d] for b in range(d)] == list(progression_sums(params, d))


def test_theorem_main_examples():
    params = P(3, 1, 1)
    r0 = theorem_main_check(params, 0)
    assert (r0.sum, r0.main_term, r0.deviation, r0.within_bound) == (1, 1, 0, True)
    r1 = theorem_main_check(params, 1)
    assert (r1.sum, r1.main_term, r1.deviation, r1.within_bound) == (-1, Fraction(-1, 2), Fraction(1, 2), True)
    r4 = theorem_main_check(params, 4)
    assert (r4.sum, r4.main_term, r4.within_bound) == (0, Fraction(-1, 2), True)
    assert theorem_main_check(params, 10) == r4


@pytest.mark.parametrize("params", SMALL_PARAMS, ids=str)
def test_theorem_main_holds_on_small_grid(params):
    records = theorem_main_records(params)
    assert len(records) == params.modulus
    assert all(r.within_bound for r in records)
    assert sum(r.main_term for r in records) == 0


def test_squared_comparison_is_exact_at_the_boundary():
    # sn = 2, p = 3: bound is exactly 3; deviation 3 passes, anything above fails
    params = P(3, 2, 1)
    d = 6
    main = main_term(params, d, 0)  # 2*9/6 = 3
    assert main == 3
    assert within_sqrt_bound(params, d, 0, 6)
    assert within_sqrt_bound(params, d, 0, 0)
    assert not within_sqrt_bound(params, d, 0, 7)


def test_gp_examples():
    params = P(3, 1, 1)
    got = [(r.sum, r.main_term, r.deviation, r.within_bound) for r in (gp_check(params, b) for b in range(3))]
    assert got == [(2, 2, 0, True), (-1, -1, 0, True), (-1, -1, 0, True)]


def test_li_check_and_bound():
    assert li_bound(5) == 32
    for n in range(1, 9):
        assert all(li_check(n, b).within_bound for b in range(3 * n))


def test_gp_bound_examples():
    assert gp_bound(P(3, 1, 2)) == 3
    assert gp_bound(P(3, 2, 1)) == 3
    assert abs(gp_bound(P(5, 1, 1)) - mpmath.sqrt(5)) < mpmath.mpf(10) ** -30


def test_zaharescu_examples():
    assert zaharescu_bound(3, 2, 1, 4) == 3
    with mpmath.workprec(128):
        assert abs(zaharescu_bound(3, 3, 1, 3) - mpmath.mpf(4) / 3) < mpmath.mpf(2) ** -120
        for q, n in [(2, 6), (3, 9), (5, 10)]:
            expected = mpmath.mpf(2 * (q - 1) * 3 ** (n // q - 1)) / q
            assert abs(zaharescu_bound(3, q, 1, n) - expected) < mpmath.mpf(2) ** -100


def test_zaharescu_fractional_part():
    # n=5, q=2: [n/q]=2, {n/q}=1/2, so 2^(1*2*2*1/2) = 4
    assert zaharescu_bound(3, 2, 1, 5) == mpmath.mpf(2 * 1 * 3 * 4) / 2


@pytest.mark.parametrize("q,n", [(4, 5), (1, 3), (5, 3)])
def test_zaharescu_rejects_bad_q(q, n):
    with pytest.raises(ValueError):
        zaharescu_bound(3, q, 1, n)


def test_corollary_thresholds():
    assert corollary_threshold(3, 1, True) == 5
    assert corollary_threshold(3, 2, True) == 2
    assert not corollary_holds_at(3, 2, 1, True)
    assert corollary_holds_at(3, 2, 2, True)
    with pytest.raises(ValueError):
        corollary_threshold(4, 1, True)


@pytest.mark.parametrize("p,s", [(3, 1), (3, 2), (5, 1)])
def test_corollary_signs_after_threshold(p, s):
    start = corollary_threshold(p, s, False)
    assert start >= corollary_threshold(p, s, True)
    for n in range(start, start + 3):
        params = P(p, s, n)
        sums = progression_sums(params, params.modulus)
        assert all((S > 0) == (expected_sign(b, p) > 0) and S != 0 for b, S in enumerate(sums))


@pytest.mark.parametrize("params", SMALL_PARAMS, ids=str)
def test_refinement(params):
    assert refinement_holds(params)


def test_dense_accepts_precomputed_poly():
    params = P(5, 2, 2)
    poly = borwein_poly(params)
    assert progression_sums_dense(params, 20, poly) == progression_sums(params, 20)
