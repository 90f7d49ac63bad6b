"""Space-time discrete scheme and the stability of its uniphase state.

With spatial step ``h1 = 1/n`` and time step ``h2`` the scheme advances two
time levels,

    (u^{p+1} - 2 u^p + u^{p-1}) / h2**2 - (sigma(D^p_{k+1}) - sigma(D^p_k))
        = eps / (h1**2 h2) * delta2(u^{p+1} - u^p),

where ``delta2`` is the Dirichlet second difference. The damping term makes
the update implicit; each step is one tridiagonal solve. Around the uniphase
state a sine mode ``k`` evolves as ``lam**p`` with

    lam**2 (h1**2 - eps h2 mu_k) - lam (2 h1**2 + h2**2 h1 tau mu_k - eps h2 mu_k) + h1**2 = 0,

which for ``eps = 0`` reduces to ``lam**2 - (2 + h2**2 tau mu_k / h1) lam + 1 = 0``.
The flux difference enters without a ``1/h1`` prefactor; that is the scaling
under which the quadratic above is the exact linearisation of the step.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import solve_banded

from .errors import NonFiniteError, NotSaddleError, SingularLeadingError, SingularSystemError
from .lattice import strains_of as _strains
from .numerics import solve_quadratic
from .spectral import ConditionCheck, dense_eigenvalues, laplacian, mode_mu
from .steady import uniphase
from .stress import DEFAULT_STRESS, StressModel

MARGINAL_TOL = 1e-12


@dataclass(frozen=True)
class SchemeGrid:
    n: int
    h2: float
    P: float
    eps: float = 0.0
    stress: StressModel = DEFAULT_STRESS
    m: int | None = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"need an integer n >= 2, got {self.n!r}")
        if not 0.0 < self.h2 < 1.0:
            raise ValueError(f"time step h2 must lie in (0, 1), got {self.h2!r}")
        self.stress.require_valid()

    @classmethod
    def from_steps(cls, n: int, m: int, P: float, eps: float = 0.0, stress: StressModel = DEFAULT_STRESS):
        return cls(n, 1.0 / m, P, eps, stress, m)

    @property
    def h1(self) -> float:
        return 1.0 / self.n

    @property
    def lattice(self):
        from .lattice import LatticeConfig
        return LatticeConfig(self.n, self.P, self.eps, self.stress)

    @property
    def coupling(self) -> float:
        """``eps h2 / h1**2``, the off-diagonal weight of the implicit solve."""
        return self.eps * self.h2 / self.h1**2

    def singular_modes(self, rtol: float = 1e-12) -> list[int]:
        """Modes ``k`` with ``eps = h1**2 / (h2 mu_k)`` (vanishing leading coefficient)."""
        out = []
        for k in range(1, self.n):
            if abs(1.0 - self.coupling * mode_mu(k, self.n)) <= rtol * max(1.0, abs(self.coupling) * 4):
                out.append(k)
        return out

    def with_(self, **changes) -> "SchemeGrid":
        return replace(self, **changes)


@dataclass(frozen=True)
class DiscreteState:
    u_prev: np.ndarray
    u_curr: np.ndarray
    p: int = 1


def _flux(grid: SchemeGrid, u: np.ndarray) -> np.ndarray:
    full = np.concatenate(([0.0], u, [grid.P]))
    s = grid.stress.sigma(np.diff(full) * grid.n)
    return s[1:] - s[:-1]


def _banded(grid: SchemeGrid) -> np.ndarray:
    size = grid.n - 1
    c = grid.coupling
    ab = np.zeros((3, size))
    ab[0, 1:] = -c
    ab[1, :] = 1.0 + 2.0 * c
    ab[2, :-1] = -c
    return ab


def discrete_step(grid: SchemeGrid, st: DiscreteState) -> DiscreteState:
    """Advance one time level with a banded solve for ``u^{p+1}``."""
    if grid.singular_modes():
        raise SingularSystemError(
            f"eps={grid.eps!r} makes the implicit system singular (modes {grid.singular_modes()})")
    u0 = np.asarray(st.u_prev, dtype=float)
    u1 = np.asarray(st.u_curr, dtype=float)
    if u0.shape != (grid.n - 1,) or u1.shape != (grid.n - 1,):
        raise ValueError(f"expected {grid.n - 1} interior values")
    rhs = (u1 - u0) + grid.h2**2 * _flux(grid, u1)
    if grid.eps == 0.0:
        d = rhs
    else:
        try:
            d = solve_banded((1, 1), _banded(grid), rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError(str(exc)) from exc
    return DiscreteState(u1, u1 + d, st.p + 1)


# -- amplification quadratics ------------------------------------------------

class DiscreteClass(str, enum.Enum):
    ASYMPTOTICALLY_STABLE = "AsymptoticallyStable"
    UNSTABLE = "Unstable"
    MARGINAL = "Marginal"


class DiscreteTag(str, enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    SADDLE = "Saddle"
    MARGINAL = "Marginal"


@dataclass(frozen=True)
class DiscreteMode:
    k: int
    mu: float
    quad: tuple[float, float, float]
    roots: tuple[complex, complex]

    @property
    def modulus(self) -> tuple[float, float]:
        return abs(self.roots[0]), abs(self.roots[1])

    @property
    def tag(self) -> DiscreteTag:
        m1, m2 = sorted(self.modulus)
        lo = m1 < 1.0 - MARGINAL_TOL
        hi = m2 > 1.0 + MARGINAL_TOL
        if lo and hi:
            return DiscreteTag.SADDLE
        if hi:
            return DiscreteTag.UNSTABLE
        if m2 < 1.0 - MARGINAL_TOL:
            return DiscreteTag.STABLE
        return DiscreteTag.MARGINAL

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "mu": self.mu,
            "quad": [[c, 0.0] for c in self.quad],
            "roots": [[r.real, r.imag] for r in self.roots],
            "modulus": list(self.modulus),
            "tag": self.tag.value,
        }


def characteristic_coefficients(h1: float, h2: float, eps: float, tau: float, mu: float):
    a = h1 * h1 - eps * h2 * mu
    b = -(2.0 * h1 * h1 + h2 * h2 * h1 * tau * mu - eps * h2 * mu)
    c = h1 * h1
    return a, b, c


def discrete_characteristic(grid: SchemeGrid, tau: float, k: int) -> DiscreteMode:
    """Amplification quadratic of mode ``k`` about a state with ``sigma' = tau``."""
    mu = mode_mu(k, grid.n)
    a, b, c = characteristic_coefficients(grid.h1, grid.h2, grid.eps, tau, mu)
    if abs(a) <= 1e-15 * grid.h1**2:
        raise SingularLeadingError(f"leading coefficient vanishes for mode {k}")
    return DiscreteMode(k, mu, (a, b, c), solve_quadratic(a, b, c))


def amplification_matrix(grid: SchemeGrid, u_steady=None) -> np.ndarray:
    """Linearised one-step map ``(w^p, w^{p-1}) -> (w^{p+1}, w^p)``.

    Built from the Jacobian of the flux at the steady profile (uniphase by
    default) and the implicit damping matrix, without any modal ansatz.
    """
    size = grid.n - 1
    if u_steady is None:
        u_steady = uniphase(grid.lattice).u
    full = np.concatenate(([0.0], np.asarray(u_steady, dtype=float), [grid.P]))
    s = grid.stress.dsigma(np.diff(full) * grid.n)
    F = np.diag(-(s[:-1] + s[1:]))
    idx = np.arange(size - 1)
    F[idx, idx + 1] = s[1:-1]
    F[idx + 1, idx] = s[1:-1]
    F *= grid.n  # d flux / d u, since each strain carries 1/h1
    A = np.eye(size) - grid.coupling * laplacian(size)
    Ainv = np.linalg.inv(A)
    G = np.zeros((2 * size, 2 * size))
    I = np.eye(size)
    G[:size, :size] = I + Ainv @ (I + grid.h2**2 * F)
    G[:size, size:] = -Ainv
    G[size:, :size] = I
    return G


@dataclass
class DiscreteReport:
    grid: SchemeGrid
    tau: float
    modes: list[DiscreteMode]
    classification: DiscreteClass
    max_modulus: float
    paper_conditions: list[ConditionCheck] = field(default_factory=list)
    degenerate: bool = False

    def agreement(self) -> tuple[int, int]:
        flags = [c.agrees_with_roots for c in self.paper_conditions if c.agrees_with_roots is not None]
        return sum(flags), len(flags)

    def to_dict(self) -> dict:
        sol = uniphase(self.grid.lattice)
        return {
            "solution": sol.to_dict(),
            "grid": {"n": self.grid.n, "h1": self.grid.h1, "h2": self.grid.h2,
                     "eps": self.grid.eps, "P": self.grid.P, "tau": self.tau},
            "modes": [m.to_dict() for m in self.modes],
            "classification": self.classification.value,
            "max_modulus": self.max_modulus,
            "degenerate": self.degenerate,
            "paper_conditions": [c.to_dict() for c in self.paper_conditions],
        }


def _classify_modulus(mx: float) -> DiscreteClass:
    if mx < 1.0 - MARGINAL_TOL:
        return DiscreteClass.ASYMPTOTICALLY_STABLE
    if mx > 1.0 + MARGINAL_TOL:
        return DiscreteClass.UNSTABLE
    return DiscreteClass.MARGINAL


def _discrete_conditions(grid: SchemeGrid, tau: float, modes: list[DiscreteMode], cls: DiscreteClass):
    h1, h2, eps, n = grid.h1, grid.h2, grid.eps, grid.n
    s1 = math.sin(math.pi / (2 * n)) ** 2
    stable = cls is DiscreteClass.ASYMPTOTICALLY_STABLE
    unstable = cls is DiscreteClass.UNSTABLE
    out = [
        ConditionCheck("uniphase_stability_window", "iff",
                       tau > h1 / (h2**2 * s1) and eps > -h1**2 / (2 * h2 * s1) + h1 * h2 * tau / 2, stable),
        ConditionCheck("instability_case_a", "sufficient",
                       tau < -h1 / (h1**2 * s1) and eps < -h1**2 / (4 * h2 * s1) + h1 * h2 * tau / 2, unstable),
        ConditionCheck("instability_case_b", "sufficient",
                       eps < -h1**2 / (2 * h2 * s1) - h1 * h2 * tau, unstable),
        ConditionCheck("instability_case_c", "sufficient",
                       tau > h1 / (h1**2 * s1)
                       and -h1**2 / (4 * h2 * s1) < eps < -h1**2 / (4 * h2 * s1) + h1 * h2 * tau, unstable),
        ConditionCheck("undamped_instability_threshold", "sufficient",
                       (tau < h1 / (h2**2 * s1)) if eps == 0 else None, unstable),
    ]
    for m in modes:
        mu = m.mu
        lead = h1**2 - eps * h2 * mu
        mode_stable = max(m.modulus) < 1.0 - MARGINAL_TOL
        mode_unstable = max(m.modulus) > 1.0 + MARGINAL_TOL
        out.append(ConditionCheck(
            f"mode_stability_window[{m.k}]", "iff",
            tau > -4 * h1 / (h2**2 * mu) and eps > 2 * h1**2 / (mu * h2) + h1 * h2 * tau / 2, mode_stable))
        mid = abs(2 * h1**2 + h1**3 * tau * mu - eps * h2 * mu) / h1**2
        out.append(ConditionCheck(
            f"mode_modulus_inequality[{m.k}]", "iff",
            (h1**2 / lead - 1 < 0) and (-1 - lead / h2**2 < mid < 1 + lead / h1**2), mode_stable))
        out.append(ConditionCheck(
            f"mode_instability_window[{m.k}]", "sufficient",
            tau < -4 * h1 / (h2**2 * mu) and eps < 2 * h1**2 / (h2 * mu) + h1 * h2 * tau / 2, mode_unstable))
        mid2 = abs(2 * h1**2 + h2**2 * h1 * tau * mu - eps * h2 * mu) / h1**2
        out.append(ConditionCheck(
            f"mode_instability_inequality[{m.k}]", "sufficient",
            (lead / h1**2 - 1 < 0) and (-1 - lead / h1**2 < mid2 < lead / h1**2 + 1), mode_unstable))
    return out


def classify_discrete_uniphase(grid: SchemeGrid, tau_scale: float = 1.0) -> DiscreteReport:
    """Root-modulus classification of the uniphase state of the scheme.

    Stable iff every amplification factor has modulus below one; the
    published closed-form windows are evaluated alongside for comparison.
    """
    tau = float(grid.stress.dsigma(grid.P)) * tau_scale
    modes = [discrete_characteristic(grid, tau, k) for k in range(1, grid.n)]
    mx = max(max(m.modulus) for m in modes)
    cls = _classify_modulus(mx)
    report = DiscreteReport(grid, tau, modes, cls, mx, degenerate=tau == 0.0)
    report.paper_conditions = _discrete_conditions(grid, tau, modes, cls)
    return report


def discrete_steady_check(grid: SchemeGrid, u) -> float:
    """Largest mismatch ``|sigma(D_{k+1}) - sigma(D_k)|`` of a time-independent profile."""
    u = np.asarray(u, dtype=float)
    if u.shape != (grid.n - 1,):
        raise ValueError(f"expected {grid.n - 1} interior values")
    return float(np.max(np.abs(_flux(grid, u))))


# -- manifolds and runs -------------------------------------------------------

@dataclass(frozen=True)
class DiscreteManifolds:
    p: np.ndarray
    stable: np.ndarray
    unstable: np.ndarray
    lam_plus: np.ndarray
    lam_minus: np.ndarray
    base: np.ndarray


def discrete_manifolds(grid: SchemeGrid, eta, p_range, ks=None) -> DiscreteManifolds:
    """Real parts of ``k h1 P + lam^p sum_l eta_l exp(i a_k l)`` on both branches.

    ``lam_plus`` is the root of modulus above one, ``lam_minus`` the one
    below; every selected mode must be a saddle.
    """
    tau = float(grid.stress.dsigma(grid.P))
    ks = list(range(1, grid.n)) if ks is None else [int(k) for k in ks]
    lp, lm = [], []
    for k in ks:
        mode = discrete_characteristic(grid, tau, k)
        if mode.tag is not DiscreteTag.SADDLE:
            raise NotSaddleError(f"mode {k} is {mode.tag.value}, not a saddle")
        r1, r2 = mode.roots
        big, small = (r1, r2) if abs(r1) > abs(r2) else (r2, r1)
        lp.append(big)
        lm.append(small)
    lp, lm = np.array(lp, dtype=complex), np.array(lm, dtype=complex)
    eta = np.asarray(eta, dtype=float)
    l = np.arange(1, len(eta) + 1)
    sums = np.array([np.sum(eta * np.exp(1j * k * math.pi / grid.n * l)) for k in ks])
    p = np.asarray(p_range, dtype=float)[:, None]
    base = np.array(ks) * grid.P / grid.n
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        stable = base + np.real(lm**p * sums)
        unstable = base + np.real(lp**p * sums)
    return DiscreteManifolds(p[:, 0], stable, unstable, lp, lm, base.astype(float))


@dataclass
class DiscreteTrajectory:
    grid: SchemeGrid
    p: np.ndarray
    u: np.ndarray
    deviation_max: np.ndarray
    truncated: bool = False
    reason: str = ""

    def growth_ratio(self, skip: int = 0, window: int = 20) -> float:
        """Per-step growth of the deviation envelope after ``skip`` steps."""
        dev = self.deviation_max[skip:]
        if len(dev) < 2 * window + 2:
            window = max(1, len(dev) // 4)
        head = np.max(dev[:window])
        tail = np.max(dev[-window:])
        i0 = int(np.argmax(dev[:window]))
        i1 = len(dev) - window + int(np.argmax(dev[-window:]))
        if head <= 0 or i1 <= i0:
            return math.nan
        return float(np.exp(np.log(tail / head) / (i1 - i0)))


def run_discrete(grid: SchemeGrid, initial: DiscreteState, steps: int) -> DiscreteTrajectory:
    """Iterate the scheme ``steps`` times, tracking ``max|u - ubar|`` per level."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    ubar = np.arange(1, grid.n) * grid.P / grid.n
    us = np.empty((steps + 2, grid.n - 1))
    us[0] = initial.u_prev
    us[1] = initial.u_curr
    st = initial
    truncated, reason, last = False, "", steps
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(steps):
            st = discrete_step(grid, st)
            if not np.all(np.isfinite(st.u_curr)):
                truncated, reason, last = True, "non-finite", i
                break
            us[i + 2] = st.u_curr
    us = us[: last + 2]
    p = initial.p - 1 + np.arange(len(us))
    dev = np.max(np.abs(us - ubar), axis=1)
    return DiscreteTrajectory(grid, p, us, dev, truncated, reason)


def seeded_state(grid: SchemeGrid, k: int, amplitude: float) -> DiscreteState:
    """Uniphase profile plus ``amplitude * P * sin(k pi j / n)`` on both levels."""
    j = np.arange(1, grid.n)
    u = j * grid.P / grid.n + amplitude * grid.P * np.sin(k * math.pi * j / grid.n)
    return DiscreteState(u.copy(), u.copy(), 1)


def oracle_roots(grid: SchemeGrid) -> np.ndarray:
    return dense_eigenvalues(amplification_matrix(grid))


__all__ = [
    "SchemeGrid", "DiscreteState", "discrete_step", "discrete_characteristic",
    "classify_discrete_uniphase", "discrete_steady_check", "discrete_manifolds", "run_discrete",
    "NonFiniteError",
]
