"""Legendre, Jacobi, Wigner d/D and spherical harmonic evaluation.

Every polynomial is evaluated by its three-term recurrence. Factorial
ratios in normalizations go through ``math.lgamma`` so nothing overflows
for degrees into the hundreds.

Conventions
-----------
* Associated Legendre functions carry the Condon-Shortley phase.
* ``Y_l^k(theta, phi) = N_l^k P_l^k(cos theta) exp(i k phi)``.
* ``D_l^{k,n}(theta, phi, chi) = N_l exp(-i k phi) d_l^{k,n}(cos theta) exp(-i n chi)``
  with ``N_l = sqrt((2l+1) / (8 pi^2))``.
* ``d_l^{k,n}`` is the weighted Jacobi polynomial
  ``omega sqrt(gamma) sin^xi(theta/2) cos^lam(theta/2) P_alpha^{(xi,lam)}(cos theta)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DOMAIN_TOL = 1e-12


class DomainError(ValueError):
    """Argument outside [-1, 1] (beyond ``DOMAIN_TOL``)."""


class OrderError(ValueError):
    """Order exceeds degree, or a negative degree was given."""


class PoleError(ValueError):
    """Elevation derivative requested at theta = 0 or pi."""


def _as_cos(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + DOMAIN_TOL):
        raise DomainError(f"argument outside [-1, 1]: max |x| = {np.max(np.abs(x))!r}")
    return np.clip(x, -1.0, 1.0)


def _out(arr):
    # 0-d arrays come back as numpy scalars
    return arr[()] if isinstance(arr, np.ndarray) and arr.ndim == 0 else arr


def _check_orders(l, *orders):
    if l < 0:
        raise OrderError(f"degree must be nonnegative, got {l}")
    for k in orders:
        if abs(k) > l:
            raise OrderError(f"order {k} out of range for degree {l}")


def _log_factorial(n):
    return math.lgamma(n + 1)


@dataclass(frozen=True)
class WignerDParams:
    """Derived Jacobi parameters of ``d_l^{k,n}``."""

    l: int
    k: int
    n: int

    def __post_init__(self):
        _check_orders(self.l, self.k, self.n)

    @property
    def xi(self) -> int:
        return abs(self.k - self.n)

    @property
    def lam(self) -> int:
        return abs(self.k + self.n)

    @property
    def alpha(self) -> int:
        return self.l - (self.xi + self.lam) // 2

    @property
    def omega(self) -> int:
        if self.n >= self.k:
            return 1
        return -1 if (self.n - self.k) % 2 else 1

    @property
    def gamma(self) -> Fraction:
        a, xi, lam = self.alpha, self.xi, self.lam
        f = math.factorial
        return Fraction(f(a) * f(a + xi + lam), f(a + xi) * f(a + lam))

    @property
    def log_gamma(self) -> float:
        a, xi, lam = self.alpha, self.xi, self.lam
        return (_log_factorial(a) + _log_factorial(a + xi + lam)
                - _log_factorial(a + xi) - _log_factorial(a + lam))


def wigner_norm(l: int) -> float:
    """``N_l``, the unit-norm factor of ``D_l^{k,n}`` on SO(3)."""
    return math.sqrt((2 * l + 1) / (8 * math.pi ** 2))


def sh_norm(l: int, k: int) -> float:
    """``N_l^k``, the unit-norm factor of ``Y_l^k`` on the sphere."""
    _check_orders(l, k)
    log_ratio = _log_factorial(l - k) - _log_factorial(l + k)
    return math.sqrt((2 * l + 1) / (4 * math.pi) * math.exp(log_ratio))


def assoc_norm(l: int, k: int) -> float:
    """``C_l^k = sqrt((l-k)! / (l+k)!)`` linking ``d_l^{k,0}`` and ``P_l^k``."""
    _check_orders(l, k)
    return math.exp(0.5 * (_log_factorial(l - k) - _log_factorial(l + k)))


def legendre(l: int, x):
    """Legendre polynomial ``P_l(x)`` by Bonnet's recurrence."""
    if l < 0:
        raise OrderError(f"degree must be nonnegative, got {l}")
    x = _as_cos(x)
    p_prev = np.ones_like(x)
    if l == 0:
        return _out(p_prev)
    p = x.copy()
    for j in range(2, l + 1):
        p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
    return _out(p)


def legendre_table(lmax: int, x) -> np.ndarray:
    """Rows ``P_0(x) .. P_lmax(x)``; shape ``(lmax + 1,) + x.shape``."""
    x = _as_cos(x)
    out = np.empty((lmax + 1,) + x.shape)
    out[0] = 1.0
    if lmax >= 1:
        out[1] = x
    for j in range(2, lmax + 1):
        out[j] = ((2 * j - 1) * x * out[j - 1] - (j - 1) * out[j - 2]) / j
    return out


def assoc_legendre(l: int, k: int, x):
    """Associated Legendre function ``P_l^k(x)`` with Condon-Shortley phase.

    Negative orders go through
    ``P_l^{-k} = (-1)^k (l-k)!/(l+k)! P_l^k``.
    """
    _check_orders(l, k)
    x = _as_cos(x)
    if k < 0:
        kk = -k
        sign = -1.0 if kk % 2 else 1.0
        scale = math.exp(_log_factorial(l - kk) - _log_factorial(l + kk))
        return _out(sign * scale * np.asarray(assoc_legendre(l, kk, x)))

    # P_k^k = (-1)^k (2k-1)!! (1-x^2)^{k/2}
    s = np.sqrt(np.maximum(1.0 - x * x, 0.0))
    p_kk = np.ones_like(x)
    for j in range(1, k + 1):
        p_kk = -(2 * j - 1) * s * p_kk
    if l == k:
        return _out(p_kk)
    p_prev, p = p_kk, (2 * k + 1) * x * p_kk
    for j in range(k + 2, l + 1):
        p_prev, p = p, ((2 * j - 1) * x * p - (j + k - 1) * p_prev) / (j - k)
    return _out(p)


def jacobi(alpha: int, xi: int, lam: int, x):
    """Jacobi polynomial ``P_alpha^{(xi, lam)}(x)`` by the standard recurrence."""
    if alpha < 0 or xi < 0 or lam < 0:
        raise OrderError("Jacobi degree and parameters must be nonnegative")
    x = _as_cos(x)
    return _out(_jacobi(alpha, xi, lam, x))


def _jacobi(alpha, a, b, x):
    p_prev = np.ones_like(x)
    if alpha == 0:
        return p_prev
    p = 0.5 * (2 * (a + 1) + (a + b + 2) * (x - 1))
    for j in range(2, alpha + 1):
        c = 2 * j + a + b
        a1 = 2 * j * (j + a + b) * (c - 2)
        a2 = (c - 1) * (c * (c - 2) * x + a * a - b * b)
        a3 = 2 * (j + a - 1) * (j + b - 1) * c
        p_prev, p = p, (a2 * p - a3 * p_prev) / a1
    return p


def wigner_d_cos(l: int, k: int, n: int, x):
    """``d_l^{k,n}`` as a function of ``x = cos(theta)``.

    Half-angle factors are formed from ``x`` directly so grids that cache
    ``cos(theta)`` exactly never pay an arccos/cos round trip.
    """
    x = _as_cos(x)
    return _out(_wigner_d(WignerDParams(l, k, n), x, np.sqrt(0.5 * (1.0 - x)), np.sqrt(0.5 * (1.0 + x))))


def _wigner_d(par, x, sin_half, cos_half):
    weight = par.omega * math.exp(0.5 * par.log_gamma)
    return weight * sin_half ** par.xi * cos_half ** par.lam * _jacobi(par.alpha, par.xi, par.lam, x)


def wigner_d(l: int, k: int, n: int, theta):
    """Wigner small-d function ``d_l^{k,n}(cos theta)``.

    Half-angle factors come from ``theta`` itself, which keeps full relative
    accuracy near the poles where ``1 - cos(theta)`` underflows.
    """
    par = WignerDParams(l, k, n)
    theta = np.asarray(theta, dtype=float)
    half = 0.5 * theta
    return _out(_wigner_d(par, np.cos(theta), np.abs(np.sin(half)), np.abs(np.cos(half))))


def wigner_d_dtheta_cos(l: int, k: int, n: int, x):
    """``d/dtheta`` of ``d_l^{k,n}`` at ``x = cos(theta)``, interior points only.

    Uses the half-angle weight derivative plus the Jacobi derivative
    ``d/dx P_a^{(xi,lam)} = (a + xi + lam + 1)/2 P_{a-1}^{(xi+1,lam+1)}``.
    """
    par = WignerDParams(l, k, n)
    x = _as_cos(x)
    if np.any(np.abs(x) >= 1.0):
        raise PoleError("elevation derivative is singular at theta = 0 or pi")
    xi, lam, a = par.xi, par.lam, par.alpha
    sin_t = np.sqrt(1.0 - x * x)
    sin_half = np.sqrt(0.5 * (1.0 - x))
    cos_half = np.sqrt(0.5 * (1.0 + x))
    weight = par.omega * math.exp(0.5 * par.log_gamma)
    envelope = weight * sin_half ** xi * cos_half ** lam
    jac = _jacobi(a, xi, lam, x)
    log_slope = xi * sin_t / (2 * (1 - x)) - lam * sin_t / (2 * (1 + x))
    out = log_slope * envelope * jac
    if a > 0:
        djac = 0.5 * (a + xi + lam + 1) * _jacobi(a - 1, xi + 1, lam + 1, x)
        out = out - sin_t * envelope * djac
    return _out(out)


def spherical_harmonic(l: int, k: int, theta, phi):
    """Complex spherical harmonic ``Y_l^k(theta, phi)``.

    Evaluated as ``sqrt((2l+1)/(4 pi)) d_l^{k,0}(theta) exp(i k phi)``, which
    equals ``N_l^k P_l^k(cos theta) exp(i k phi)`` but keeps accuracy at the poles.
    """
    _check_orders(l, k)
    d = np.asarray(wigner_d(l, k, 0, theta))
    phase = np.exp(1j * k * np.asarray(phi, dtype=float))
    return _out(math.sqrt((2 * l + 1) / (4 * math.pi)) * d * phase)


def wigner_D(l: int, k: int, n: int, theta, phi, chi):
    """Wigner D-function ``D_l^{k,n}(theta, phi, chi)``."""
    d = np.asarray(wigner_d(l, k, n, theta))
    phase = np.exp(-1j * (k * np.asarray(phi, dtype=float) + n * np.asarray(chi, dtype=float)))
    return _out(wigner_norm(l) * d * phase)
