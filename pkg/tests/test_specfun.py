import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.polynomial.legendre import leggauss
from scipy import special

from oracles import legendre_binomial, wigner_d_sum
from sphericoh.specfun import (DomainError, OrderError, PoleError, WignerDParams, assoc_legendre,
                               jacobi, legendre, legendre_table, sh_norm, spherical_harmonic, wigner_d,
                               wigner_d_cos, wigner_d_dtheta_cos, wigner_D, wigner_norm)

xs = st.floats(-1.0, 1.0, allow_nan=False)


@st.composite
def lkn(draw, lmax=12):
    l = draw(st.integers(0, lmax))
    k = draw(st.integers(-l, l))
    n = draw(st.integers(-l, l))
    return l, k, n


# -- oracles ------------------------------------------------------------------

@given(st.integers(0, 25), xs)
def test_legendre_matches_binomial_expansion(l, x):
    assert legendre(l, x) == pytest.approx(legendre_binomial(l, x), abs=1e-9)


def test_legendre_known_values():
    assert legendre(2, 0.5) == pytest.approx(-0.125)
    assert legendre(3, 0.5) == pytest.approx(-0.4375)
    assert legendre(0, 0.3) == 1.0


def test_legendre_table_rows_match_single_degree():
    x = np.linspace(-1, 1, 11)
    table = legendre_table(15, x)
    for l in range(16):
        np.testing.assert_allclose(table[l], legendre(l, x), atol=1e-14)


@given(lkn(), st.floats(0.0, math.pi))
def test_wigner_d_matches_factorial_sum(args, beta):
    l, k, n = args
    assert wigner_d(l, k, n, beta) == pytest.approx(wigner_d_sum(l, k, n, beta), abs=1e-10)


def test_wigner_d_example_value():
    # d_1^{1,1}(theta) = (1 + cos theta) / 2
    assert wigner_d(1, 1, 1, 0.0) == pytest.approx(1.0)
    assert wigner_d(1, 1, 1, math.pi / 2) == pytest.approx(0.5)
    assert wigner_d(1, 0, 0, 0.3) == pytest.approx(math.cos(0.3))


@given(st.integers(0, 20), st.integers(0, 6), st.integers(0, 6), xs)
def test_jacobi_matches_scipy(alpha, a, b, x):
    assert jacobi(alpha, a, b, x) == pytest.approx(special.eval_jacobi(alpha, a, b, x), rel=1e-9, abs=1e-9)


@given(st.integers(0, 15).flatmap(lambda l: st.tuples(st.just(l), st.integers(-l, l))), xs)
def test_assoc_legendre_matches_scipy(lk, x):
    l, k = lk
    # scipy's lpmv carries the Condon-Shortley phase as well
    want = special.lpmv(k, l, x)
    assert assoc_legendre(l, k, x) == pytest.approx(want, rel=1e-9, abs=1e-9 * max(1.0, abs(want)))


@given(st.integers(0, 12).flatmap(lambda l: st.tuples(st.just(l), st.integers(-l, l))),
       st.floats(0, math.pi), st.floats(0, 2 * math.pi))
def test_spherical_harmonic_matches_scipy(lk, theta, phi):
    l, k = lk
    want = special.sph_harm_y(l, k, theta, phi)
    assert spherical_harmonic(l, k, theta, phi) == pytest.approx(want, abs=1e-10)


# -- structural identities ------------------------------------------------------

def test_wigner_d_orthogonality_by_quadrature():
    nodes, weights = leggauss(40)
    for k, n in [(0, 0), (1, -1), (2, 1), (-3, 2)]:
        lo = max(abs(k), abs(n))
        for l1 in range(lo, lo + 5):
            for l2 in range(lo, lo + 5):
                val = np.sum(weights * wigner_d_cos(l1, k, n, nodes) * wigner_d_cos(l2, k, n, nodes))
                want = 2.0 / (2 * l1 + 1) if l1 == l2 else 0.0
                assert val == pytest.approx(want, abs=1e-12)


@given(lkn(), st.floats(0, math.pi))
def test_wigner_d_symmetries(args, beta):
    l, k, n = args
    d = wigner_d(l, k, n, beta)
    sign = -1 if (k - n) % 2 else 1
    assert wigner_d(l, n, k, beta) == pytest.approx(sign * d, abs=1e-12)
    assert wigner_d(l, -k, -n, beta) == pytest.approx(sign * d, abs=1e-12)


@given(st.integers(0, 10).flatmap(lambda l: st.tuples(st.just(l), st.integers(-l, l))),
       st.floats(1e-3, math.pi - 1e-3), st.floats(0, 2 * math.pi))
def test_spherical_harmonic_is_order_zero_column(lk, theta, phi):
    # away from the poles: P_l^k(cos theta) loses sin(theta) to rounding in 1 - cos^2
    l, k = lk
    via_p = sh_norm(l, k) * assoc_legendre(l, k, math.cos(theta)) * np.exp(1j * k * phi)
    assert spherical_harmonic(l, k, theta, phi) == pytest.approx(via_p, abs=1e-10)
    # D_l^{-k,0}(theta, phi, 0) = (-1)^k sqrt(1/(2 pi)) Y_l^k
    sign = -1 if k % 2 else 1
    lhs = wigner_D(l, -k, 0, theta, phi, 0.0)
    assert lhs == pytest.approx(sign * math.sqrt(1 / (2 * math.pi)) * spherical_harmonic(l, k, theta, phi),
                                abs=1e-12)


def test_wigner_D_phases():
    th, ph, ch = 0.4, 1.1, 2.3
    want = wigner_norm(3) * wigner_d(3, 2, -1, th) * np.exp(-1j * (2 * ph - ch))
    assert wigner_D(3, 2, -1, th, ph, ch) == pytest.approx(want)


@given(lkn(10), st.floats(0.05, math.pi - 0.05))
def test_elevation_derivative_matches_finite_difference(args, theta):
    l, k, n = args
    h = 1e-6
    fd = (wigner_d(l, k, n, theta + h) - wigner_d(l, k, n, theta - h)) / (2 * h)
    got = wigner_d_dtheta_cos(l, k, n, math.cos(theta))
    assert got == pytest.approx(fd, abs=1e-6 * max(1.0, l * l))


def test_derived_parameters():
    par = WignerDParams(5, 2, -1)
    assert (par.xi, par.lam, par.alpha) == (3, 1, 3)
    assert par.gamma > 0


def test_vectorized_shapes_and_scalars():
    x = np.linspace(-1, 1, 7)
    assert np.shape(wigner_d_cos(3, 1, 0, x)) == (7,)
    assert np.ndim(wigner_d_cos(3, 1, 0, 0.2)) == 0


def test_errors():
    with pytest.raises(OrderError):
        wigner_d(2, 3, 0, 0.1)
    with pytest.raises(OrderError):
        legendre(-1, 0.2)
    with pytest.raises(DomainError):
        legendre(2, 1.5)
    with pytest.raises(PoleError):
        wigner_d_dtheta_cos(2, 1, 0, 1.0)
    # slightly outside [-1, 1] is clipped, not rejected
    assert legendre(3, 1.0 + 1e-14) == pytest.approx(1.0)
