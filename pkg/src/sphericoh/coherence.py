"""Sensing matrices, mutual coherence and the equal-order coherence bound."""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .grids import Grid, ModeIndex, canonical_kind, enumerate_modes, equispaced_cos, mode_count
from .specfun import legendre_table, wigner_d_cos, wigner_norm
from .wigner3j import threej

# Relative slack under which two |inner products| count as tied.
TIE_RTOL = 1e-12
# Columns per Gram block; bounds the dense block at BLOCK x N.
BLOCK = 2048
REPORT_FIELDS = ("B", "m", "N", "kind", "mu", "lower_bound", "welch",
                 "arg_l1", "arg_k1", "arg_n1", "arg_l2", "arg_k2", "arg_n2")


class DegenerateMatrixError(ValueError):
    """A sensing-matrix column has zero norm."""


def default_threads() -> int:
    env = os.environ.get("SPHERICOH_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class ColumnParts:
    """Separable form ``A[p, q] = amp[p, q] * exp(i (phi_p a_q + chi_p b_q))``.

    ``amp`` holds the real elevation factor times the column's normalization,
    ``a``/``b`` the azimuth and polarization frequencies.
    """

    amp: np.ndarray
    a: np.ndarray
    b: np.ndarray


def column_parts(cos_theta, modes, kind: str) -> ColumnParts:
    """Elevation factors and phase frequencies for ``modes``.

    Wigner columns: ``N_l d_l^{k,n}``, frequencies ``(-k, -n)``.
    Spherical columns: ``N_l^k P_l^k = sqrt((2l+1)/(4 pi)) d_l^{k,0}``,
    frequencies ``(k, 0)``.
    """
    kind = canonical_kind(kind)
    x = np.asarray(cos_theta, dtype=float)
    amp = np.empty((x.shape[0], len(modes)))
    a = np.empty(len(modes))
    b = np.empty(len(modes))
    for q, (l, k, n) in enumerate(modes):
        if kind == "wigner":
            amp[:, q] = wigner_norm(l) * wigner_d_cos(l, k, n, x)
            a[q], b[q] = -k, -n
        else:
            amp[:, q] = math.sqrt((2 * l + 1) / (4 * math.pi)) * wigner_d_cos(l, k, 0, x)
            a[q], b[q] = k, 0
    return ColumnParts(amp, a, b)


def assemble(parts: ColumnParts, phi, chi) -> np.ndarray:
    phase = np.outer(phi, parts.a) + np.outer(chi, parts.b)
    return parts.amp * np.exp(1j * phase)


@dataclass(frozen=True)
class SensingMatrix:
    entries: np.ndarray
    modes: list
    column_norms: np.ndarray
    kind: str = "wigner"

    @property
    def shape(self):
        return self.entries.shape


def build_sensing_matrix(grid: Grid, B: int) -> SensingMatrix:
    """``A[p, q] = D_{l(q)}^{k(q), n(q)}(theta_p, phi_p, chi_p)`` (or ``Y_l^k``)."""
    modes = enumerate_modes(B, grid.kind)
    parts = column_parts(grid.cos_theta, modes, grid.kind)
    entries = assemble(parts, grid.phi, grid.chi)
    norms = np.linalg.norm(entries, axis=0)
    return SensingMatrix(entries, modes, norms, grid.kind)


def _normalized_columns(entries, norms):
    if np.any(norms <= 0):
        q = int(np.argmin(norms))
        raise DegenerateMatrixError(f"column {q} has zero norm")
    return entries / norms


def gram(entries) -> np.ndarray:
    """``G[q, r] = <col_q, col_r>``, conjugating the first argument."""
    return entries.conj().T @ entries


def _block_max(cols, start, stop):
    g = np.abs(cols[:, start:stop].conj().T @ cols)
    rows = np.arange(start, stop)[:, None]
    g[np.arange(g.shape[1])[None, :] <= rows] = -1.0
    best = g.max()
    r, q = np.argwhere(g >= best * (1 - TIE_RTOL))[0]
    return best, (start + int(r), int(q))


def max_normalized_inner(entries, norms, threads: int | None = None):
    """Largest normalized ``|<col_r, col_q>|`` over ``r < q`` and its first argmax.

    Blocks of rows are reduced independently; ties within ``TIE_RTOL`` go to
    the lexicographically smallest ``(r, q)``.
    """
    cols = _normalized_columns(entries, norms)
    n_cols = cols.shape[1]
    if n_cols < 2:
        raise ValueError("coherence needs at least two columns")
    starts = range(0, n_cols - 1, BLOCK)
    work = [(s, min(s + BLOCK, n_cols - 1)) for s in starts]
    threads = threads or default_threads()
    if threads > 1 and len(work) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda w: _block_max(cols, *w), work))
    else:
        results = [_block_max(cols, *w) for w in work]
    mu = max(v for v, _ in results)
    pair = min(p for v, p in results if v >= mu * (1 - TIE_RTOL))
    return float(mu), pair


@dataclass(frozen=True)
class CoherenceReport:
    B: int
    m: int
    N: int
    kind: str
    mu: float
    argmax_pair: tuple
    lower_bound: float | None
    welch: float

    def as_dict(self) -> dict:
        (l1, k1, n1), (l2, k2, n2) = self.argmax_pair
        return {"B": self.B, "m": self.m, "N": self.N, "kind": self.kind, "mu": self.mu,
                "lower_bound": self.lower_bound, "welch": self.welch,
                "arg_l1": l1, "arg_k1": k1, "arg_n1": n1,
                "arg_l2": l2, "arg_k2": k2, "arg_n2": n2}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_csv(self) -> str:
        d = self.as_dict()
        vals = []
        for key in REPORT_FIELDS:
            v = d[key]
            vals.append("" if v is None else (f"{v:.17g}" if isinstance(v, float) else str(v)))
        return ",".join(REPORT_FIELDS) + "\n" + ",".join(vals) + "\n"


def mutual_coherence(A: SensingMatrix, threads: int | None = None):
    """``(mu, (mode_r, mode_q))`` for the sensing matrix ``A``."""
    mu, (r, q) = max_normalized_inner(A.entries, A.column_norms, threads)
    return mu, (A.modes[r], A.modes[q])


def coherence_report(grid: Grid, B: int, threads: int | None = None) -> CoherenceReport:
    """Coherence of the sensing matrix on ``grid`` with both lower bounds.

    ``lower_bound`` is the normalized ``P_{B-1}``/``P_{B-3}`` pair evaluated on
    the grid's own elevations (``None`` for ``B < 3``); on the equispaced grid
    it coincides with :func:`theorem_lower_bound`.
    """
    A = build_sensing_matrix(grid, B)
    mu, pair = mutual_coherence(A, threads)
    bound = legendre_pair_bound(grid.cos_theta, B, normalized=True) if B >= 3 else None
    N = mode_count(B, grid.kind)
    return CoherenceReport(B, grid.m, N, grid.kind, mu, pair, bound, welch_bound(grid.m, N))


def legendre_pair_bound(cos_theta, B: int, normalized: bool = False) -> float:
    x = np.asarray(cos_theta, dtype=float)
    table = legendre_table(B - 1, x)
    hi, lo = table[B - 1], table[B - 3]
    value = abs(math.fsum(hi * lo))
    if normalized:
        value /= math.sqrt(math.fsum(hi * hi) * math.fsum(lo * lo))
    return value


def theorem_lower_bound(B: int, m: int, normalized: bool = False) -> float:
    """``|sum_p P_{B-1} P_{B-3}|`` on the equispaced grid, optionally normalized."""
    if B < 3:
        raise ValueError(f"bound needs B >= 3, got {B}")
    return legendre_pair_bound(equispaced_cos(m), B, normalized)


def welch_bound(m: int, N: int) -> float:
    if m > N:
        return 0.0
    if N == 1:
        return 0.0
    return math.sqrt((N - m) / (m * (N - 1)))


def max_equal_order_product(grid: Grid, B: int, normalized: bool = False,
                            n_zero_only: bool = False):
    """Largest ``|sum_p d_{l1}^{k,n} d_{l2}^{k,n}|`` over ``0 <= l1 < l2 < B``.

    Orders range over ``|k|, |n| <= l1``; with ``n_zero_only`` only ``n = 0``
    (the associated-Legendre columns). Returns ``(value, (l1, l2, k, n))``,
    ties within ``TIE_RTOL`` resolved to the smallest tuple.
    """
    if B < 3:
        raise ValueError(f"need B >= 3 for a valid degree pair, got {B}")
    x = grid.cos_theta
    candidates = []
    for k in range(-(B - 2), B - 1):
        n_range = [0] if n_zero_only else range(-(B - 2), B - 1)
        for n in n_range:
            l0 = max(abs(k), abs(n))
            degrees = np.arange(l0, B)
            rows = np.array([wigner_d_cos(int(l), k, n, x) for l in degrees])
            g = rows @ rows.T
            if normalized:
                d = np.sqrt(np.diag(g))
                g = g / np.outer(d, d)
            g = np.abs(np.triu(g, 1))
            best = g.max()
            for i, j in np.argwhere(g >= best * (1 - TIE_RTOL)):
                candidates.append((best, (int(degrees[i]), int(degrees[j]), k, n)))
    top = max(v for v, _ in candidates)
    arg = min(a for v, a in candidates if v >= top * (1 - TIE_RTOL))
    return float(top), arg


def product_expansion(l1, k1, n1, l2, k2, n2, grid: Grid) -> complex:
    """``sum_p conj(D_{l1}^{k1,n1}) D_{l2}^{k2,n2}`` via the 3j coupling series."""
    k_hat, n_hat = k2 - k1, n2 - n1
    phase = -1 if (k2 + n2) % 2 else 1
    x = grid.cos_theta
    total = 0j
    for l_hat in range(abs(l2 - l1), l1 + l2 + 1):
        if abs(k_hat) > l_hat or abs(n_hat) > l_hat:
            continue
        c = threej(l1, l2, l_hat, -n1, n2, -n_hat) * threej(l1, l2, l_hat, -k1, k2, -k_hat)
        if c == 0.0:
            continue
        weight = math.sqrt((2 * l1 + 1) * (2 * l2 + 1) * (2 * l_hat + 1) / (8 * math.pi ** 2))
        col = (wigner_norm(l_hat) * wigner_d_cos(l_hat, k_hat, n_hat, x)
               * np.exp(-1j * (k_hat * grid.phi + n_hat * grid.chi)))
        total += weight * c * col.sum()
    return phase * total


def direct_inner_product(l1, k1, n1, l2, k2, n2, grid: Grid) -> complex:
    parts = column_parts(grid.cos_theta, [ModeIndex(l1, k1, n1), ModeIndex(l2, k2, n2)], "wigner")
    cols = assemble(parts, grid.phi, grid.chi)
    return complex(np.vdot(cols[:, 0], cols[:, 1]))
