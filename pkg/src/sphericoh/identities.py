"""Closed forms and checks for sums of equispaced Legendre samples, 3j
inequalities, column-norm estimates and the Bernoulli/zeta machinery.

Every identity stated as an equality is computed in exact
rational arithmetic where possible; the Legendre-sum series is an
Euler-Maclaurin expansion, exact for polynomials, so its total is a
rational number for every ``m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .grids import equispaced_cos
from .specfun import legendre, wigner_d_cos
from .wigner3j import threej, threej_squared_exact

RESIDUAL_LOWER = -0.463


@lru_cache(maxsize=None)
def _bernoulli_table(j_max: int) -> tuple:
    # Akiyama-Tanigawa; yields B_1 = +1/2
    a = [Fraction(0)] * (j_max + 1)
    out = []
    for m in range(j_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return tuple(out)


def bernoulli(j: int) -> Fraction:
    """Bernoulli number ``B_j`` with the ``B_1 = +1/2`` convention."""
    if j < 0:
        raise ValueError("Bernoulli index must be nonnegative")
    size = max(16, 1 << (j.bit_length()))
    return _bernoulli_table(size)[j]


def zeta_even(j: int) -> float:
    """``zeta(j)`` for even ``j >= 2`` from ``B_j = (-1)^(j/2+1) 2 j! zeta(j) / (2 pi)^j``."""
    if j < 2 or j % 2:
        raise ValueError(f"zeta_even needs an even argument >= 2, got {j}")
    b = abs(bernoulli(j))
    log_z = math.log(b.numerator) - math.log(b.denominator) + j * math.log(2 * math.pi) \
        - math.log(2) - math.lgamma(j + 1)
    return math.exp(log_z)


def series_coefficient(l: int, k: int) -> Fraction:
    """``S_l^k = 4 zeta(k) (l+k-1)! / ((k-1)! (l-k+1)! (2 pi)^k)`` as an exact rational.

    ``zeta(k) / (2 pi)^k = |B_k| / (2 k!)`` removes every transcendental factor.
    """
    f = math.factorial
    return 2 * abs(bernoulli(k)) * Fraction(f(l + k - 1), f(k) * f(k - 1) * f(l - k + 1))


def series_coefficient_float(l: int, k: int) -> float:
    """Same coefficient assembled from :func:`zeta_even` and log-gamma."""
    log_ratio = math.lgamma(l + k) - math.lgamma(k) - math.lgamma(l - k + 2)
    return 4 * zeta_even(k) * math.exp(log_ratio - k * math.log(2 * math.pi))


@dataclass(frozen=True)
class LegendreSumDecomposition:
    """``sum_p P_l(cos theta_p) = leading + residual`` on the equispaced grid."""

    l: int
    m: int
    leading: Fraction
    residual: Fraction
    terms: dict = field(default_factory=dict)

    @property
    def total(self) -> Fraction:
        return self.leading + self.residual


def legendre_sum_closed_form(l: int, m: int) -> LegendreSumDecomposition:
    """Closed form ``1 + l(l+1)/(6(m-1)) + R_l(m)`` for even ``l``.

    ``l = 0`` gives ``leading = m`` with no residual.
    """
    if l % 2:
        raise ValueError("closed form applies to even degrees; odd sums vanish")
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    if l == 0:
        return LegendreSumDecomposition(0, m, Fraction(m), Fraction(0))
    terms = {k: series_coefficient(l, k) for k in range(2, l + 1, 2)}
    leading = 1 + Fraction(l * (l + 1), 6 * (m - 1))
    residual = Fraction(0)
    for k in range(4, l + 1, 2):
        sign = 1 if (k // 2 + 1) % 2 == 0 else -1
        residual += sign * terms[k] / Fraction(m - 1) ** (k - 1)
    return LegendreSumDecomposition(l, m, leading, residual, terms)


def direct_legendre_sum(l: int, m: int) -> float:
    """Brute-force ``sum_p P_l((2p - m - 1)/(m - 1))``."""
    return math.fsum(np.atleast_1d(legendre(l, equispaced_cos(m))))


def residual_threshold(l: int) -> int:
    """Smallest integer ``m >= (l + 1)^2 / 10 + 1``."""
    return -(-((l + 1) ** 2 + 10) // 10)


def residual_bound_check(l: int, m: int) -> bool | None:
    """Whether ``-0.463 < R_l(m) < 0``; ``None`` when ``m`` is below threshold."""
    if l < 4 or l % 2:
        raise ValueError("residual bound concerns even l >= 4")
    if m < residual_threshold(l):
        return None
    r = legendre_sum_closed_form(l, m).residual
    return RESIDUAL_LOWER < r < 0


def even_degree_sums(B: int, m: int) -> dict:
    """Exact equispaced sums of ``P_l`` for even ``0 <= l <= B - 1``."""
    return {l: legendre_sum_closed_form(l, m).total for l in range(0, B, 2)}


def monotone_sum_check(B: int, m: int) -> bool:
    """Even-degree sums are nonnegative and strictly increase from ``l = 2``."""
    sums = even_degree_sums(B, m)
    if any(v < 0 for v in sums.values()):
        return False
    chain = [sums[l] for l in sorted(sums) if l >= 2]
    return all(a < b for a, b in zip(chain, chain[1:]))


def threej_monotonicity_check(l1: int, l2: int, l3: int) -> bool:
    """Zero-order squared 3j symbols shrink when ``(l1, l2)`` moves up by ``(1, 1)`` or ``(2, 0)``."""
    if not l1 < l2:
        raise ValueError("need l1 < l2")
    base = threej_squared_exact(l1, l2, l3, 0, 0, 0)
    return (base >= threej_squared_exact(l1 + 1, l2 + 1, l3, 0, 0, 0)
            and base >= threej_squared_exact(l1 + 2, l2, l3, 0, 0, 0))


def odd_even_split_check(l1: int, l2: int, k: int, n: int):
    """Even-``l_hat`` and odd-``l_hat`` parts of
    ``sum (2 l_hat + 1) 3j(l1 l2 l_hat; -k k 0) 3j(l1 l2 l_hat; -n n 0)``."""
    even, odd = [], []
    for l_hat in range(abs(l1 - l2), l1 + l2 + 1):
        term = (2 * l_hat + 1) * threej(l1, l2, l_hat, -k, k, 0) * threej(l1, l2, l_hat, -n, n, 0)
        (odd if l_hat % 2 else even).append(term)
    return math.fsum(even), math.fsum(odd)


def weighted_threej_sum(l1: int) -> Fraction:
    """``sum_{l_hat even} (2 l_hat + 1) 3j(l1, l1+2, l_hat; 0 0 0)^2 l_hat (l_hat + 1)``, exactly."""
    total = Fraction(0)
    for l_hat in range(2, 2 * l1 + 3, 2):
        total += (2 * l_hat + 1) * threej_squared_exact(l1, l1 + 2, l_hat, 0, 0, 0) * (l_hat * l_hat + l_hat)
    return total


def endpoint_constant(l: int, k: int, n: int) -> float:
    """``(|d_l^{k,n}(1)|^2 + |d_l^{k,n}(-1)|^2) / 2``.

    Equals 1 for ``k = n = 0``, 1/2 for ``k = n != 0`` and for ``k = -n != 0``,
    and 0 otherwise.
    """
    ends = np.asarray(wigner_d_cos(l, k, n, np.array([1.0, -1.0])))
    return float(0.5 * np.sum(ends ** 2))


def l2_norm_estimate(l: int, k: int, n: int, m: int):
    """``(estimate, actual, |actual - estimate|)`` for the squared column norm
    ``sum_p d_l^{k,n}(cos theta_p)^2`` against ``(m-1)/(2l+1) + D1``."""
    estimate = (m - 1) / (2 * l + 1) + endpoint_constant(l, k, n)
    actual = math.fsum(np.asarray(wigner_d_cos(l, k, n, equispaced_cos(m))) ** 2)
    return estimate, actual, abs(actual - estimate)


def abel_partial_sum(a, b) -> float:
    """Right-hand side ``A_n b_n + sum_{p<n} A_p (b_p - b_{p+1})`` of Abel's identity."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    partial = np.cumsum(a)
    return float(partial[-1] * b[-1] + np.sum(partial[:-1] * (b[:-1] - b[1:])))
