"""Semidiscrete lattice dynamics.

The string ``[0, 1]`` is cut into ``n`` bonds of length ``h1 = 1/n``. Interior
sites ``u_1 .. u_{n-1}`` move, the ends are pinned at ``u_0 = 0`` and
``u_n = P``. In first-order form

    du_k/dt = v_k
    dv_k/dt = (sigma(D_{k+1}) - sigma(D_k)) / h1 + eps (v_{k+1} - 2 v_k + v_{k-1}) / h1**2

with bond strains ``D_k = (u_k - u_{k-1}) / h1`` and ghost velocities
``v_0 = v_n = 0``. The energy ``V = sum(v_k**2 / 2) + sum(w(D_k))`` obeys
``dV/dt = -(eps / h1**2) sum_k (v_{k+1} - v_k)**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NonFiniteError
from .stress import DEFAULT_STRESS, StressModel


@dataclass(frozen=True)
class LatticeConfig:
    n: int
    P: float
    eps: float = 0.0
    stress: StressModel = DEFAULT_STRESS

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"need an integer n >= 2 bonds, got {self.n!r}")
        if not math.isfinite(self.P) or not math.isfinite(self.eps):
            raise ValueError("P and eps must be finite")
        self.stress.require_valid()

    @property
    def h1(self) -> float:
        return 1.0 / self.n

    @property
    def size(self) -> int:
        return self.n - 1

    def with_(self, **changes) -> "LatticeConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class LatticeState:
    t: float
    u: np.ndarray
    v: np.ndarray

    @classmethod
    def at_rest(cls, u, t: float = 0.0) -> "LatticeState":
        u = np.asarray(u, dtype=float)
        return cls(t, u, np.zeros_like(u))


def _check(cfg: LatticeConfig, u: np.ndarray) -> None:
    if u.shape != (cfg.n - 1,):
        raise ValueError(f"expected {cfg.n - 1} interior values, got shape {u.shape}")


def _u_of(state) -> np.ndarray:
    return np.asarray(getattr(state, "u", state), dtype=float)


def strains_of(cfg: LatticeConfig, u: np.ndarray) -> np.ndarray:
    full = np.concatenate(([0.0], u, [cfg.P]))
    return np.diff(full) * cfg.n


def bond_strains(cfg: LatticeConfig, state) -> np.ndarray:
    """All ``n`` bond strains, boundary bonds included."""
    u = _u_of(state)
    _check(cfg, u)
    return strains_of(cfg, u)


def _accel(cfg: LatticeConfig, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    s = cfg.stress.sigma(strains_of(cfg, u))
    a = cfg.n * (s[1:] - s[:-1])
    if cfg.eps != 0.0:
        vp = np.concatenate(([0.0], v, [0.0]))
        a = a + cfg.eps * cfg.n**2 * (vp[2:] - 2.0 * vp[1:-1] + vp[:-2])
    return a


def rhs(cfg: LatticeConfig, state: LatticeState) -> tuple[np.ndarray, np.ndarray]:
    u = np.asarray(state.u, dtype=float)
    v = np.asarray(state.v, dtype=float)
    _check(cfg, u)
    _check(cfg, v)
    return v.copy(), _accel(cfg, u, v)


def total_energy(cfg: LatticeConfig, state: LatticeState) -> float:
    u = np.asarray(state.u, dtype=float)
    v = np.asarray(state.v, dtype=float)
    _check(cfg, u)
    return float(0.5 * np.dot(v, v) + np.sum(cfg.stress.potential(strains_of(cfg, u))))


def dissipation_rate(cfg: LatticeConfig, state: LatticeState) -> float:
    v = np.asarray(state.v, dtype=float)
    _check(cfg, v)
    if cfg.eps == 0.0:
        return 0.0
    dv = np.diff(np.concatenate(([0.0], v, [0.0])))
    return float(-cfg.eps * cfg.n**2 * np.dot(dv, dv))


def default_dt(cfg: LatticeConfig, state: LatticeState | None = None) -> float:
    """CFL-style step ``0.1 h1 / sqrt(max |sigma'|)`` over the sampled strains.

    The bound is tightened for strong damping so the explicit scheme stays
    inside its real-axis stability interval.
    """
    xi = [cfg.P]
    if state is not None:
        xi.extend(bond_strains(cfg, state))
    tau = float(np.max(np.abs(cfg.stress.dsigma(np.asarray(xi))))) or 1.0
    dt = 0.1 * cfg.h1 / math.sqrt(tau)
    if cfg.eps != 0.0:
        dt = min(dt, 0.5 / (4.0 * abs(cfg.eps) * cfg.n**2))
    return dt


def _rk4(cfg: LatticeConfig, u: np.ndarray, v: np.ndarray, dt: float):
    k1u, k1v = v, _accel(cfg, u, v)
    u2, v2 = u + 0.5 * dt * k1u, v + 0.5 * dt * k1v
    k2u, k2v = v2, _accel(cfg, u2, v2)
    u3, v3 = u + 0.5 * dt * k2u, v + 0.5 * dt * k2v
    k3u, k3v = v3, _accel(cfg, u3, v3)
    u4, v4 = u + dt * k3u, v + dt * k3v
    k4u, k4v = v4, _accel(cfg, u4, v4)
    u_new = u + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    v_new = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return u_new, v_new


def step(cfg: LatticeConfig, state: LatticeState, dt: float) -> LatticeState:
    """One classical Runge-Kutta step of size ``dt``.

    Raises ``NonFiniteError`` when the update overflows.
    """
    if dt < 0:
        raise ValueError("dt must be non-negative")
    u = np.asarray(state.u, dtype=float)
    v = np.asarray(state.v, dtype=float)
    _check(cfg, u)
    if dt == 0:
        return LatticeState(state.t, u.copy(), v.copy())
    with np.errstate(over="ignore", invalid="ignore"):
        u_new, v_new = _rk4(cfg, u, v, dt)
    if not (np.all(np.isfinite(u_new)) and np.all(np.isfinite(v_new))):
        raise NonFiniteError(f"state overflowed at t={state.t + dt!r}")
    return LatticeState(state.t + dt, u_new, v_new)


@dataclass
class Trajectory:
    """Samples taken every step; ``t[i] = t[0] + i dt``."""

    cfg: LatticeConfig
    dt: float
    t: np.ndarray
    u: np.ndarray
    v: np.ndarray
    truncated: bool = False
    reason: str = ""
    _energy: np.ndarray | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, i: int) -> LatticeState:
        return LatticeState(float(self.t[i]), self.u[i].copy(), self.v[i].copy())

    @property
    def samples(self) -> list[LatticeState]:
        return [self[i] for i in range(len(self))]

    @property
    def final(self) -> LatticeState:
        return self[len(self) - 1]

    def energy(self) -> np.ndarray:
        if self._energy is None:
            strains = np.diff(np.concatenate(
                [np.zeros((len(self), 1)), self.u, np.full((len(self), 1), self.cfg.P)], axis=1), axis=1)
            strains *= self.cfg.n
            pot = np.sum(self.cfg.stress.potential(strains), axis=1)
            self._energy = 0.5 * np.sum(self.v**2, axis=1) + pot
        return self._energy

    def dissipation(self) -> np.ndarray:
        if self.cfg.eps == 0.0:
            return np.zeros(len(self))
        vp = np.pad(self.v, ((0, 0), (1, 1)))
        dv = np.diff(vp, axis=1)
        return -self.cfg.eps * self.cfg.n**2 * np.sum(dv**2, axis=1)


def integrate(
    cfg: LatticeConfig,
    state0: LatticeState,
    dt: float,
    t_end: float,
    max_deviation: float | None = None,
) -> Trajectory:
    """Fixed-step integration from ``state0.t`` to ``t_end``.

    The run stops early, with ``truncated`` set, when the state overflows or
    when ``max_deviation`` is given and ``max|u - u0|`` exceeds it.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < state0.t:
        raise ValueError("t_end precedes the initial time")
    span = (t_end - state0.t) / dt
    nsteps = int(round(span)) if abs(span - round(span)) < 1e-9 * max(1.0, span) else int(math.ceil(span))
    u0 = np.asarray(state0.u, dtype=float)
    v0 = np.asarray(state0.v, dtype=float)
    _check(cfg, u0)
    _check(cfg, v0)
    us = np.empty((nsteps + 1, cfg.n - 1))
    vs = np.empty_like(us)
    us[0], vs[0] = u0, v0
    u, v = u0, v0
    truncated, reason, last = False, "", nsteps
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(1, nsteps + 1):
            u, v = _rk4(cfg, u, v, dt)
            if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
                truncated, reason, last = True, "non-finite", i - 1
                break
            us[i], vs[i] = u, v
            if max_deviation is not None and np.max(np.abs(u - u0)) > max_deviation:
                truncated, reason, last = True, "deviation threshold", i
                break
    t = state0.t + dt * np.arange(last + 1)
    return Trajectory(cfg, dt, t, us[: last + 1], vs[: last + 1], truncated, reason)


def sine_mode(n: int, k: int) -> np.ndarray:
    """Real Dirichlet eigenvector ``sin(k pi j / n)``, ``j = 1 .. n-1``."""
    j = np.arange(1, n)
    return np.sin(k * np.pi * j / n)
