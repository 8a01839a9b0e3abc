import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import bernoulli as sympy_bernoulli

from oracles import equispaced_cos_fractions, legendre_exact
from sphericoh.identities import (RESIDUAL_LOWER, abel_partial_sum, bernoulli, direct_legendre_sum,
                                  endpoint_constant, even_degree_sums, l2_norm_estimate,
                                  legendre_sum_closed_form, monotone_sum_check,
                                  odd_even_split_check, residual_bound_check, residual_threshold,
                                  series_coefficient, series_coefficient_float, threej_monotonicity_check,
                                  weighted_threej_sum, zeta_even)


@pytest.mark.parametrize("j", range(0, 31))
def test_bernoulli_matches_sympy(j):
    want = Fraction(str(sympy_bernoulli(j)))
    if j == 1:
        want = Fraction(1, 2)  # plus convention
    assert bernoulli(j) == want


def test_zeta_values():
    assert zeta_even(2) == pytest.approx(math.pi ** 2 / 6, rel=1e-15)
    assert zeta_even(4) == pytest.approx(math.pi ** 4 / 90, rel=1e-15)
    assert zeta_even(40) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError):
        zeta_even(3)


@pytest.mark.parametrize("l,k", [(4, 2), (10, 4), (20, 8), (40, 12)])
def test_series_coefficient_exact_vs_float(l, k):
    assert float(series_coefficient(l, k)) == pytest.approx(series_coefficient_float(l, k), rel=1e-12)


@given(st.integers(0, 16), st.integers(2, 30))
def test_closed_form_equals_exact_sum(half_l, m):
    l = 2 * half_l
    exact = sum(legendre_exact(l, x) for x in equispaced_cos_fractions(m))
    assert legendre_sum_closed_form(l, m).total == exact


def test_closed_form_example_degree_four():
    for m in (3, 7, 21):
        dec = legendre_sum_closed_form(4, m)
        want = 1 + Fraction(10, 3 * (m - 1)) - Fraction(7, 3 * (m - 1) ** 3)
        assert dec.total == want
        assert dec.leading == 1 + Fraction(20, 6 * (m - 1))


@given(st.integers(0, 20), st.integers(2, 60))
def test_odd_degree_sums_vanish(half_l, m):
    assert abs(direct_legendre_sum(2 * half_l + 1, m)) <= 1e-10


def test_closed_form_rejects_odd_degree():
    with pytest.raises(ValueError):
        legendre_sum_closed_form(3, 10)


@pytest.mark.parametrize("l", range(4, 61, 2))
def test_residual_in_band_at_threshold(l):
    m = residual_threshold(l)
    r = legendre_sum_closed_form(l, m).residual
    assert RESIDUAL_LOWER < r < 0
    assert residual_bound_check(l, m) is True
    assert residual_bound_check(l, m - 1) is None


def test_even_sums_monotone():
    sums = even_degree_sums(20, 50)
    assert set(sums) == set(range(0, 20, 2))
    assert monotone_sum_check(20, 50)


@given(st.integers(0, 12).flatmap(lambda l2: st.tuples(st.integers(0, max(l2 - 1, 0)), st.just(l2))))
def test_threej_monotonicity(pair):
    l1, l2 = pair
    if l1 >= l2:
        return
    for l3 in range(l2 - l1, l1 + l2 + 1, 2):
        assert threej_monotonicity_check(l1, l2, l3)


def test_parity_split_distinct_orders_vanish():
    even, odd = odd_even_split_check(3, 5, 1, 2)
    assert even == pytest.approx(0, abs=1e-13) and odd == pytest.approx(0, abs=1e-13)


def test_parity_split_equal_orders_halves():
    even, odd = odd_even_split_check(3, 5, 2, 2)
    assert (even, odd) == pytest.approx((0.5, 0.5), abs=1e-13)


def test_parity_split_opposite_orders():
    # sign symmetry of the 3j symbol gives (+-1/2, -+1/2), not (0, 0)
    assert odd_even_split_check(3, 5, 2, -2) == pytest.approx((0.5, -0.5), abs=1e-13)
    assert odd_even_split_check(2, 5, 1, -1) == pytest.approx((-0.5, 0.5), abs=1e-13)


@pytest.mark.parametrize("l1", range(0, 22))
def test_weighted_threej_sum_exact(l1):
    assert weighted_threej_sum(l1) == 2 + 2 * (l1 + 2) * (l1 + 1)


def test_endpoint_constants():
    assert endpoint_constant(4, 0, 0) == pytest.approx(1.0)
    assert endpoint_constant(4, 2, 2) == pytest.approx(0.5)
    assert endpoint_constant(4, 2, -2) == pytest.approx(0.5)
    assert endpoint_constant(4, 2, 1) == pytest.approx(0.0)


@pytest.mark.parametrize("l,k,n", [(0, 0, 0), (3, 1, 0), (5, 2, 2), (6, -3, 3), (8, 0, 0)])
def test_norm_estimate_error_decays(l, k, n):
    errs = [l2_norm_estimate(l, k, n, m)[2] for m in (50, 100, 200, 400)]
    for a, b in zip(errs, errs[1:]):
        assert b <= 0.6 * a or b <= 1e-12


@given(st.lists(st.floats(-5, 5), min_size=2, max_size=20), st.integers(0, 10 ** 6))
def test_abel_summation(a, seed):
    b = np.random.default_rng(seed).normal(size=len(a))
    assert abel_partial_sum(a, b) == pytest.approx(float(np.dot(a, b)), abs=1e-9)
