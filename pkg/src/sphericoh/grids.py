"""Sampling grids on SO(3) / the sphere and column mode enumeration."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

TWO_PI = 2.0 * np.pi
KINDS = ("wigner", "spherical")
_KIND_ALIASES = {"wigner": "wigner", "spherical": "spherical", "sh": "spherical"}


def canonical_kind(kind: str) -> str:
    try:
        return _KIND_ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown basis kind {kind!r}; expected one of {KINDS}") from None


class ModeIndex(NamedTuple):
    """Degree and orders of one sensing-matrix column."""

    l: int
    k: int
    n: int = 0


def equispaced_cos(m: int) -> np.ndarray:
    """``cos(theta_p) = (2p - m - 1) / (m - 1)`` for ``p = 1..m``."""
    if m < 2:
        raise ValueError(f"equispaced elevation needs m >= 2, got {m}")
    p = np.arange(1, m + 1)
    return (2 * p - m - 1) / (m - 1)


def equispaced_elevation(m: int) -> np.ndarray:
    """Elevation angles of the equispaced-in-cosine grid (radians)."""
    return np.arccos(equispaced_cos(m))


@dataclass(frozen=True)
class Grid:
    """``m`` sample triples ``(theta, phi, chi)``.

    ``cos_theta`` is kept next to ``theta``; for the equispaced constructor it
    holds the exact rational nodes rather than ``cos(arccos(.))``.
    ``chi`` is carried but ignored for the spherical kind.
    """

    theta: np.ndarray
    phi: np.ndarray
    chi: np.ndarray
    kind: str = "wigner"
    cos_theta: np.ndarray = field(default=None)

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        if theta.ndim != 1 or theta.shape[0] < 1:
            raise ValueError("grid needs a nonempty 1-d theta vector")
        m = theta.shape[0]
        phi = np.mod(np.broadcast_to(np.asarray(self.phi, dtype=float), (m,)), TWO_PI)
        chi = np.mod(np.broadcast_to(np.asarray(self.chi, dtype=float), (m,)), TWO_PI)
        if np.any(theta < 0) or np.any(theta > np.pi):
            raise ValueError("theta must lie in [0, pi]")
        cos_theta = np.cos(theta) if self.cos_theta is None else np.asarray(self.cos_theta, dtype=float)
        for name, arr in (("theta", theta), ("phi", phi), ("chi", chi), ("cos_theta", cos_theta)):
            arr = np.array(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "kind", canonical_kind(self.kind))

    @classmethod
    def equispaced(cls, m: int, phi=0.0, chi=0.0, kind: str = "wigner") -> "Grid":
        x = equispaced_cos(m)
        return cls(np.arccos(x), phi, chi, kind=kind, cos_theta=x)

    @property
    def m(self) -> int:
        return self.theta.shape[0]

    def with_angles(self, phi=None, chi=None, theta=None) -> "Grid":
        """Copy with some angle vectors replaced (phi/chi wrapped into [0, 2pi))."""
        if theta is None:
            theta, cos_theta = self.theta, self.cos_theta
        else:
            cos_theta = None
        return Grid(theta,
                    self.phi if phi is None else phi,
                    self.chi if chi is None else chi,
                    kind=self.kind, cos_theta=cos_theta)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("p,theta,phi,chi\n")
        for p in range(self.m):
            buf.write(f"{p + 1},{self.theta[p]:.17g},{self.phi[p]:.17g},{self.chi[p]:.17g}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, kind: str = "wigner") -> "Grid":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise ValueError("grid CSV has no samples")
        rows.sort(key=lambda r: int(r["p"]))
        col = {name: np.array([float(r[name]) for r in rows]) for name in ("theta", "phi", "chi")}
        return cls(col["theta"], col["phi"], col["chi"], kind=kind)


def mode_count(B: int, kind: str = "wigner") -> int:
    kind = canonical_kind(kind)
    if kind == "wigner":
        return B * (2 * B - 1) * (2 * B + 1) // 3
    return B * B


def enumerate_modes(B: int, kind: str = "wigner") -> list[ModeIndex]:
    """Columns in lexicographic ``(l, k, n)`` order."""
    if B < 1:
        raise ValueError(f"bandwidth must be >= 1, got {B}")
    kind = canonical_kind(kind)
    modes = []
    for l in range(B):
        for k in range(-l, l + 1):
            if kind == "spherical":
                modes.append(ModeIndex(l, k, 0))
                continue
            for n in range(-l, l + 1):
                modes.append(ModeIndex(l, k, n))
    return modes


def min_samples(B: int) -> int:
    """Smallest integer ``m >= (B + 2)^2 / 10 + 1``."""
    return -(-((B + 2) ** 2 + 10) // 10)
