"""Sampling-pattern design by gradient descent on an l_p relaxation of coherence.

The max over column pairs is replaced by ``(sum_{r<q} |f_qr|^p)^(1/p)`` with
``f_qr`` the normalized inner product of columns ``q`` and ``r``. Elevations
stay on the equispaced grid unless ``optimize_theta`` is set, in which case
the two pole samples are held fixed.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .coherence import ColumnParts, column_parts, theorem_lower_bound
from .grids import TWO_PI, Grid, enumerate_modes
from .specfun import PoleError, wigner_d_dtheta_cos, wigner_norm

METHODS = ("sgd", "adam", "adagrad", "adadelta")
# |f| below this contributes no gradient
F_GUARD = 1e-14


@dataclass(frozen=True)
class OptimizerConfig:
    p: int = 8
    eta: float = 0.5
    epsilon: float = 1e-4
    i_max: int = 1000
    method: str = "adam"
    seed: int = 0
    optimize_theta: bool = False
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    adagrad_eps: float = 1e-8
    rho: float = 0.95
    adadelta_eps: float = 1e-6

    def __post_init__(self):
        if self.p < 2 or self.p % 2:
            raise ValueError(f"p must be an even integer >= 2, got {self.p}")
        if self.eta <= 0 or self.epsilon <= 0:
            raise ValueError("eta and epsilon must be positive")
        if self.i_max < 1:
            raise ValueError("i_max must be >= 1")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")


# -- objective and gradients ------------------------------------------------

def _column_derivs(cos_theta, modes, kind):
    """``d amp / d theta`` matching :func:`coherence.column_parts`."""
    x = np.asarray(cos_theta, dtype=float)
    out = np.empty((x.shape[0], len(modes)))
    for q, (l, k, n) in enumerate(modes):
        if kind == "wigner":
            out[:, q] = wigner_norm(l) * wigner_d_dtheta_cos(l, k, n, x)
        else:
            out[:, q] = math.sqrt((2 * l + 1) / (4 * math.pi)) * wigner_d_dtheta_cos(l, k, 0, x)
    return out


@dataclass
class Evaluation:
    objective: float
    mu: float
    grad_phi: np.ndarray | None = None
    grad_chi: np.ndarray | None = None
    grad_theta: np.ndarray | None = None


class PNormProblem:
    """Objective and analytic gradients for a fixed bandwidth/basis.

    ``theta`` may be swapped with :meth:`set_theta`; ``phi``/``chi`` are passed
    per evaluation since column norms do not depend on them.
    """

    def __init__(self, B: int, kind: str, theta, p: int = 8, cos_theta=None):
        self.B = B
        self.kind = kind
        self.p = p
        self.modes = enumerate_modes(B, kind)
        self.set_theta(theta, cos_theta)

    def set_theta(self, theta, cos_theta=None):
        self.theta = np.asarray(theta, dtype=float)
        self.cos_theta = np.cos(self.theta) if cos_theta is None else np.asarray(cos_theta, dtype=float)
        self.parts: ColumnParts = column_parts(self.cos_theta, self.modes, self.kind)
        self.norms = np.linalg.norm(self.parts.amp, axis=0)
        if np.any(self.norms <= 0):
            raise ValueError("degenerate sensing matrix: zero-norm column")

    def _columns(self, phi, chi):
        phase = np.outer(phi, self.parts.a) + np.outer(chi, self.parts.b)
        return np.exp(1j * phase) / self.norms

    def evaluate(self, phi, chi, grads=(), hold_poles=False) -> Evaluation:
        phase_part = self._columns(phi, chi)
        u = self.parts.amp * phase_part
        f = u.conj().T @ u
        np.fill_diagonal(f, 0.0)
        mag = np.abs(f)
        s = mag.max()
        if s == 0.0:
            ev = Evaluation(0.0, 0.0)
            for name in grads:
                setattr(ev, f"grad_{name}", np.zeros(len(phi)))
            return ev
        scaled = mag / s
        # each unordered pair appears twice in the full matrix
        total = 0.5 * np.sum(scaled ** self.p)
        objective = s * total ** (1.0 / self.p)
        ev = Evaluation(float(objective), float(s))
        if not grads:
            return ev

        # d objective / d f_qr-bar weights, halved for double counting
        weight = np.where(mag >= F_GUARD, scaled ** (self.p - 2), 0.0) * f.conj()
        weight *= 0.5 / (s * total ** ((self.p - 1.0) / self.p))
        uw = u @ weight.T
        uc = u.conj()
        if "phi" in grads:
            ev.grad_phi = self._phase_grad(u, uc, uw, weight, self.parts.a)
        if "chi" in grads:
            ev.grad_chi = self._phase_grad(u, uc, uw, weight, self.parts.b)
        if "theta" in grads:
            ev.grad_theta = self._theta_grad(u, uc, uw, weight, f, phase_part, hold_poles)
        return ev

    @staticmethod
    def _phase_grad(u, uc, uw, weight, freq):
        # d f_qr / d angle_p = i (freq_r - freq_q) conj(u_pq) u_pr
        t1 = np.sum(uc * ((u * freq) @ weight.T), axis=1)
        t2 = np.sum((uc * freq) * uw, axis=1)
        return -np.imag(t1 - t2)

    def _theta_grad(self, u, uc, uw, weight, f, phase_part, hold_poles):
        x = self.cos_theta
        interior = np.abs(x) < 1.0
        if not np.all(interior) and not hold_poles:
            raise PoleError("theta gradient requested at a pole sample")
        damp = np.zeros_like(self.parts.amp)
        damp[interior] = _column_derivs(x[interior], self.modes, self.kind)
        du = damp * phase_part
        rho = self.parts.amp * damp / self.norms ** 2
        wf = np.real(weight * f)
        t1 = np.sum(du.conj() * uw, axis=1)
        t2 = np.sum(uc * (du @ weight.T), axis=1)
        t3 = rho @ wf.sum(axis=1) + rho @ wf.sum(axis=0)
        grad = np.real(t1 + t2) - t3
        grad[~interior] = 0.0
        return grad


def _problem_for(grid: Grid, B: int, p: int) -> PNormProblem:
    return PNormProblem(B, grid.kind, grid.theta, p, cos_theta=grid.cos_theta)


def pairwise_pnorm(magnitudes, p: int) -> float:
    """``(sum |f|^p)^(1/p)`` scaled by the largest magnitude against underflow."""
    mags = np.abs(np.asarray(magnitudes, dtype=float)).ravel()
    if mags.size == 0:
        return 0.0
    s = mags.max()
    if s == 0.0:
        return 0.0
    return float(s * np.sum((mags / s) ** p) ** (1.0 / p))


def pnorm_objective(grid: Grid, B: int, p: int = 8) -> float:
    """l_p relaxation of the mutual coherence of the sensing matrix on ``grid``."""
    if p < 2 or p % 2:
        raise ValueError(f"p must be an even integer >= 2, got {p}")
    return _problem_for(grid, B, p).evaluate(grid.phi, grid.chi).objective


def gradient(grid: Grid, B: int, p: int = 8, wrt: str = "phi", hold_poles: bool = False) -> np.ndarray:
    """Analytic gradient of :func:`pnorm_objective` with respect to one angle vector."""
    if wrt not in ("phi", "chi", "theta"):
        raise ValueError(f"wrt must be phi, chi or theta, got {wrt!r}")
    ev = _problem_for(grid, B, p).evaluate(grid.phi, grid.chi, grads=(wrt,), hold_poles=hold_poles)
    return getattr(ev, f"grad_{wrt}")


# -- first-order update rules -------------------------------------------------

@dataclass
class OptimizerState:
    method: str
    t: int = 0
    m1: np.ndarray | None = None
    m2: np.ndarray | None = None

    @classmethod
    def zeros(cls, method: str, size: int) -> "OptimizerState":
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}")
        return cls(method, 0, np.zeros(size), np.zeros(size))


def step(state: OptimizerState, params, grads, eta: float, config: OptimizerConfig | None = None,
         wrap: bool = True):
    """One update of ``params``; returns ``(state, params)``.

    ``wrap`` maps the result into ``[0, 2 pi)``. The state is updated in place
    and also returned.
    """
    cfg = config or OptimizerConfig(method=state.method)
    g = np.asarray(grads, dtype=float)
    params = np.asarray(params, dtype=float)
    state.t += 1
    if state.method == "sgd":
        delta = -eta * g
    elif state.method == "adam":
        state.m1 = cfg.beta1 * state.m1 + (1 - cfg.beta1) * g
        state.m2 = cfg.beta2 * state.m2 + (1 - cfg.beta2) * g * g
        m_hat = state.m1 / (1 - cfg.beta1 ** state.t)
        v_hat = state.m2 / (1 - cfg.beta2 ** state.t)
        delta = -eta * m_hat / (np.sqrt(v_hat) + cfg.adam_eps)
    elif state.method == "adagrad":
        state.m2 = state.m2 + g * g
        delta = -eta * g / (np.sqrt(state.m2) + cfg.adagrad_eps)
    else:
        # m2: running E[g^2], m1: running E[dx^2]
        state.m2 = cfg.rho * state.m2 + (1 - cfg.rho) * g * g
        dx = -np.sqrt(state.m1 + cfg.adadelta_eps) / np.sqrt(state.m2 + cfg.adadelta_eps) * g
        state.m1 = cfg.rho * state.m1 + (1 - cfg.rho) * dx * dx
        delta = eta * dx
    new = params + delta
    if wrap:
        new = np.mod(new, TWO_PI)
    return state, new


# -- driver -----------------------------------------------------------------------

@dataclass
class OptimizerRun:
    config: OptimizerConfig
    B: int
    m: int
    kind: str
    lower_bound: float | None
    trace: list = field(default_factory=list)
    best_grid: Grid | None = None
    final_mu: float = math.inf
    converged: bool = False

    def header(self) -> str:
        meta = {"B": self.B, "m": self.m, "kind": self.kind, "lower_bound": self.lower_bound,
                **asdict(self.config)}
        return "# " + json.dumps(meta, sort_keys=True)

    def trace_csv(self) -> str:
        lines = [self.header(), "iter,objective,mu"]
        lines += [f"{i},{obj:.17g},{mu:.17g}" for i, obj, mu in self.trace]
        return "\n".join(lines) + "\n"


def run(config: OptimizerConfig, B: int, m: int, kind: str = "wigner") -> OptimizerRun:
    """Optimize azimuth (and polarization) angles from a seeded random start.

    Iteration ``i`` records objective and coherence of the current iterate,
    stops once ``|mu_LB - mu| <= epsilon``, and otherwise takes one step.
    The best iterate seen is returned.
    """
    start = Grid.equispaced(m, kind=kind)
    kind = start.kind
    rng = np.random.default_rng(config.seed)
    phi = rng.uniform(0.0, TWO_PI, m)
    chi = rng.uniform(0.0, TWO_PI, m)
    theta = start.theta.copy()
    problem = PNormProblem(B, kind, theta, config.p, cos_theta=start.cos_theta)
    bound = theorem_lower_bound(B, m, normalized=True) if B >= 3 else None

    names = ["phi"] + (["chi"] if kind == "wigner" else []) + (["theta"] if config.optimize_theta else [])
    states = {name: OptimizerState.zeros(config.method, m) for name in names}
    result = OptimizerRun(config, B, m, kind, bound)
    cos_override = start.cos_theta

    for i in range(config.i_max):
        ev = problem.evaluate(phi, chi, grads=tuple(names), hold_poles=True)
        result.trace.append((i, ev.objective, ev.mu))
        if ev.mu < result.final_mu:
            result.final_mu = ev.mu
            result.best_grid = Grid(theta.copy(), phi.copy(), chi.copy(), kind=kind, cos_theta=cos_override)
        if bound is not None and abs(bound - ev.mu) <= config.epsilon:
            result.converged = True
            break
        if i == config.i_max - 1:
            break
        _, phi = step(states["phi"], phi, ev.grad_phi, config.eta, config)
        if "chi" in states:
            _, chi = step(states["chi"], chi, ev.grad_chi, config.eta, config)
        if "theta" in states:
            _, new_theta = step(states["theta"], theta, ev.grad_theta, config.eta, config, wrap=False)
            new_theta[0], new_theta[-1] = theta[0], theta[-1]
            # reflect back into [0, pi]
            theta = np.arccos(np.cos(new_theta))
            theta[0], theta[-1] = start.theta[0], start.theta[-1]
            cos_override = np.cos(theta)
            cos_override[0], cos_override[-1] = start.cos_theta[0], start.cos_theta[-1]
            problem.set_theta(theta, cos_override)
    return result
