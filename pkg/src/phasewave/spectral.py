"""Linear stability of steady lattice states in continuous time.

Around a steady state the perturbation ``w`` obeys

    w'' = S w + eps n**2 L w'

with ``L = tridiag(1, -2, 1)`` and ``S`` the second difference weighted by
``sigma'`` of the bond strains. For the uniphase state ``S = tau n**2 L`` and
each sine mode ``k`` decouples into

    lam**2 - eps mu_k n**2 lam - mu_k n**2 tau = 0,   mu_k = -4 sin(k pi / 2n)**2,

so the closed-form mode roots can be checked against the eigenvalues of the
dense first-order Jacobian. For 2-phase states the mode equations are a
plane-wave reduction per index set; the dense Jacobian stays the reference.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import NoConvergenceError, NotCenterError, NotHyperbolicError
from .lattice import LatticeConfig, strains_of
from .numerics import solve_quadratic
from .steady import Kind, SteadySolution, uniphase


class Tag(str, enum.Enum):
    STABLE_FOCUS = "StableFocus"
    STABLE_NODE = "StableNode"
    UNSTABLE_FOCUS = "UnstableFocus"
    UNSTABLE_NODE = "UnstableNode"
    SADDLE = "Saddle"
    CENTER = "Center"
    DEGENERATE = "Degenerate"


class Classification(str, enum.Enum):
    ASYMPTOTICALLY_STABLE = "AsymptoticallyStable"
    UNSTABLE = "Unstable"
    HYPERBOLIC = "Hyperbolic"
    CENTER = "Center"
    MIXED = "Mixed"


_STABLE = {Tag.STABLE_FOCUS, Tag.STABLE_NODE}
_UNSTABLE = {Tag.UNSTABLE_FOCUS, Tag.UNSTABLE_NODE}


@dataclass(frozen=True)
class ModeRoot:
    k: int
    mu: float
    quad: tuple[complex, complex, complex]
    roots: tuple[complex, complex]
    tag: Tag
    group: str = ""

    def to_dict(self) -> dict:
        d = {
            "k": self.k,
            "mu": self.mu,
            "quad": [[complex(c).real, complex(c).imag] for c in self.quad],
            "roots": [[r.real, r.imag] for r in self.roots],
            "tag": self.tag.value,
        }
        if self.group:
            d["group"] = self.group
        return d


@dataclass(frozen=True)
class ConditionCheck:
    """A published closed-form condition evaluated next to the root-based truth.

    ``kind`` is ``"iff"`` when the condition claims equivalence with
    ``truth``, ``"sufficient"`` when it only claims to imply it. ``holds`` is
    ``None`` when the condition refers to an empty index set.
    """

    name: str
    kind: str
    holds: bool | None
    truth: bool

    @property
    def agrees_with_roots(self) -> bool | None:
        if self.holds is None:
            return None
        if self.kind == "iff":
            return self.holds == self.truth
        return (not self.holds) or self.truth

    def to_dict(self) -> dict:
        return {"name": self.name, "kind": self.kind, "holds": self.holds,
                "truth": self.truth, "agrees_with_roots": self.agrees_with_roots}


@dataclass
class SpectrumReport:
    solution: SteadySolution
    modes: list[ModeRoot]
    classification: Classification
    oracle: np.ndarray
    max_discrepancy: float
    mode_classification: Classification | None = None
    paper_conditions: list[ConditionCheck] = field(default_factory=list)
    degenerate: bool = False

    @property
    def max_real(self) -> float:
        """Largest real part, from the mode roots when they cover the spectrum."""
        roots = _mode_roots_flat(self.modes) if self.modes else np.empty(0)
        src = roots if len(roots) == len(self.oracle) else self.oracle
        return float(np.max(src.real)) + 0.0

    def agreement(self) -> tuple[int, int]:
        flags = [c.agrees_with_roots for c in self.paper_conditions if c.agrees_with_roots is not None]
        return sum(flags), len(flags)

    def to_dict(self) -> dict:
        return {
            "solution": self.solution.to_dict(),
            "modes": [m.to_dict() for m in self.modes],
            "classification": self.classification.value,
            "mode_classification": None if self.mode_classification is None else self.mode_classification.value,
            "oracle": [[z.real, z.imag] for z in self.oracle],
            "max_discrepancy": self.max_discrepancy,
            "degenerate": self.degenerate,
            "paper_conditions": [c.to_dict() for c in self.paper_conditions],
        }


# -- modes ------------------------------------------------------------------

def mode_mu(k: int, n: int) -> float:
    """Eigenvalue ``-4 sin(k pi / 2n)**2`` of ``tridiag(1, -2, 1)``."""
    if not 1 <= k <= n - 1:
        raise IndexError(f"mode {k} outside 1..{n - 1}")
    return -4.0 * math.sin(k * math.pi / (2 * n)) ** 2


def _mu_ext(k: int, n: int) -> float:
    # same formula without the range restriction (k = n closes the polycycle)
    return -4.0 * math.sin(k * math.pi / (2 * n)) ** 2


def _sign(x: float, tol: float) -> int:
    return 0 if abs(x) <= tol else (1 if x > 0 else -1)


def root_tag(roots, tol: float = 1e-12) -> Tag:
    r1, r2 = (complex(r) for r in roots)
    scale = max(1.0, abs(r1), abs(r2))
    s1, s2 = _sign(r1.real, tol * scale), _sign(r2.real, tol * scale)
    oscill = abs(r1.imag) > tol * scale or abs(r2.imag) > tol * scale
    if s1 == 0 or s2 == 0:
        return Tag.CENTER if (s1 == s2 == 0 and oscill) else Tag.DEGENERATE
    if s1 != s2:
        return Tag.SADDLE
    if s1 < 0:
        return Tag.STABLE_FOCUS if oscill else Tag.STABLE_NODE
    return Tag.UNSTABLE_FOCUS if oscill else Tag.UNSTABLE_NODE


def _mode(k: int, mu: float, a, b, c, group: str = "") -> ModeRoot:
    roots = solve_quadratic(a, b, c)
    return ModeRoot(k, mu, (complex(a), complex(b), complex(c)), roots, root_tag(roots), group)


def uniphase_modes(n: int, eps: float, tau: float) -> list[ModeRoot]:
    """Per-mode quadratics of the uniphase state with ``tau = sigma'(P)``."""
    modes = []
    for k in range(1, n):
        mu = mode_mu(k, n)
        m = mu * n * n
        modes.append(_mode(k, mu, 1.0, -eps * m, -m * tau))
    return modes


def classify_modes(modes: list[ModeRoot]) -> Classification:
    tags = [m.tag for m in modes]
    if all(t in _STABLE for t in tags):
        return Classification.ASYMPTOTICALLY_STABLE
    if any(t is Tag.SADDLE for t in tags):
        return Classification.HYPERBOLIC
    if all(t is Tag.CENTER for t in tags):
        return Classification.CENTER
    if any(t in _UNSTABLE for t in tags):
        return Classification.UNSTABLE
    return Classification.MIXED


def classify_eigenvalues(eigs: np.ndarray, tol: float = 1e-9) -> Classification:
    eigs = np.asarray(eigs, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(eigs))))
    re = eigs.real
    neg = re < -tol * scale
    pos = re > tol * scale
    zero = ~(neg | pos)
    if neg.all():
        return Classification.ASYMPTOTICALLY_STABLE
    if zero.all():
        return Classification.CENTER
    if pos.any():
        return Classification.HYPERBOLIC if (neg.any() and not zero.any()) else Classification.UNSTABLE
    return Classification.MIXED


# -- Jacobian and eigenvalue oracle -----------------------------------------

def _u_of(sol) -> np.ndarray:
    return np.asarray(getattr(sol, "u", sol), dtype=float)


def stiffness(cfg: LatticeConfig, sol) -> np.ndarray:
    """Weighted second difference ``S`` at the steady profile ``sol``."""
    n = cfg.n
    s = cfg.stress.dsigma(strains_of(cfg, _u_of(sol)))
    S = np.diag(-(s[:-1] + s[1:]))
    idx = np.arange(n - 2)
    S[idx, idx + 1] = s[1:-1]
    S[idx + 1, idx] = s[1:-1]
    return n * n * S


def laplacian(size: int) -> np.ndarray:
    return np.diag(np.full(size, -2.0)) + np.diag(np.ones(size - 1), 1) + np.diag(np.ones(size - 1), -1)


def jacobian(cfg: LatticeConfig, sol) -> np.ndarray:
    """First-order Jacobian ``[[0, I], [S, eps n**2 L]]`` in ``(u, v)`` order."""
    m = cfg.n - 1
    J = np.zeros((2 * m, 2 * m))
    J[:m, m:] = np.eye(m)
    J[m:, :m] = stiffness(cfg, sol)
    J[m:, m:] = cfg.eps * cfg.n**2 * laplacian(m)
    return J


def dense_eigenvalues(M: np.ndarray, rtol: float = 1e-9) -> np.ndarray:
    """All eigenvalues of a real square matrix, sorted by (real, imag).

    Each pair is checked by its residual ``|M x - lam x| <= rtol |M|``.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    try:
        lam, X = np.linalg.eig(M)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(str(exc)) from exc
    norm = max(np.linalg.norm(M, 2), np.finfo(float).tiny)
    X = X / np.linalg.norm(X, axis=0)
    res = np.linalg.norm(M @ X - X * lam, axis=0)
    if np.any(res > rtol * norm):
        raise NoConvergenceError(f"eigenpair residual {res.max():.3g} exceeds {rtol * norm:.3g}")
    lam = lam.astype(complex)
    order = np.lexsort((lam.imag, lam.real))
    return lam[order]


def multiset_distance(a, b) -> float:
    """Largest distance under the best one-to-one matching of ``a`` into ``b``."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def _mode_roots_flat(modes: list[ModeRoot]) -> np.ndarray:
    return np.array([r for m in modes for r in m.roots], dtype=complex)


# -- uniphase ---------------------------------------------------------------

def _outer_band(cfg: LatticeConfig, P: float) -> bool:
    c = cfg.stress.critical
    return c.alpha_under < P < c.alpha_bar or c.beta_under < P < c.beta_bar


def _uniphase_conditions(cfg: LatticeConfig, cls: Classification) -> list[ConditionCheck]:
    c = cfg.stress.critical
    P, eps = cfg.P, cfg.eps
    outer = _outer_band(cfg, P)
    return [
        ConditionCheck("ascending_branch_positive_damping_stable", "sufficient",
                       outer and eps > 0, cls is Classification.ASYMPTOTICALLY_STABLE),
        ConditionCheck("ascending_branch_negative_damping_unstable", "sufficient",
                       outer and eps < 0, cls in (Classification.UNSTABLE, Classification.HYPERBOLIC)),
        ConditionCheck("ascending_branch_undamped_center", "sufficient",
                       outer and eps == 0, cls is Classification.CENTER),
        ConditionCheck("spinodal_hyperbolic", "sufficient",
                       c.alpha_bar < P < c.beta_under, cls is Classification.HYPERBOLIC),
    ]


def uniphase_spectrum(cfg: LatticeConfig, tau_scale: float = 1.0) -> SpectrumReport:
    """Mode roots, dense-Jacobian oracle and classification of the uniphase state.

    ``tau_scale`` multiplies ``sigma'(P)`` in both the mode equations and the
    Jacobian, for stiffness sweeps at a fixed profile.
    """
    sol = uniphase(cfg)
    tau = float(cfg.stress.dsigma(cfg.P)) * tau_scale
    modes = uniphase_modes(cfg.n, cfg.eps, tau)
    M = jacobian(cfg, sol)
    if tau_scale != 1.0:
        m = cfg.n - 1
        M[m:, :m] *= tau_scale
    oracle = dense_eigenvalues(M)
    cls = classify_modes(modes)
    report = SpectrumReport(
        solution=sol,
        modes=modes,
        classification=cls,
        oracle=oracle,
        max_discrepancy=multiset_distance(_mode_roots_flat(modes), oracle),
        mode_classification=cls,
        degenerate=tau == 0.0,
    )
    report.paper_conditions = _uniphase_conditions(cfg, cls)
    return report


def classify_uniphase(report: SpectrumReport) -> Classification:
    return classify_modes(report.modes)


def uniphase_periods(cfg: LatticeConfig) -> np.ndarray:
    """Oscillation periods ``pi / (n sqrt(tau)) / sin(k pi / 2n)`` of the undamped modes."""
    tau = float(cfg.stress.dsigma(cfg.P))
    if cfg.eps != 0.0 or tau <= 0.0:
        raise NotCenterError("periods need eps = 0 and sigma'(P) > 0")
    n = cfg.n
    k = np.arange(1, n)
    return math.pi / (n * math.sqrt(tau)) / np.sin(k * math.pi / (2 * n))


# -- 2-phase ----------------------------------------------------------------

@dataclass(frozen=True)
class IndexSets:
    J_alpha: tuple[int, ...]
    J_beta: tuple[int, ...]
    K_ab: tuple[int, ...]


def index_sets(sol: SteadySolution) -> IndexSets:
    """Interior sites between two A bonds, two B bonds, and an A-then-B pair."""
    w = sol.arrangement
    ja = tuple(i for i in range(1, len(w)) if w[i - 1] == "A" and w[i] == "A")
    jb = tuple(i for i in range(1, len(w)) if w[i - 1] == "B" and w[i] == "B")
    k = tuple(i for i in range(1, len(w)) if w[i - 1] == "A" and w[i] == "B")
    return IndexSets(ja, jb, k)


def _tau_rho(cfg: LatticeConfig, sol: SteadySolution) -> tuple[float, float]:
    return float(cfg.stress.dsigma(sol.alpha)), float(cfg.stress.dsigma(sol.beta))


def two_phase_mode_roots(cfg: LatticeConfig, sol: SteadySolution) -> list[ModeRoot]:
    """Plane-wave mode equations on ``J_alpha``, ``J_beta`` and ``K_ab``."""
    if sol.kind is not Kind.TWO_PHASE:
        raise ValueError("need a 2-phase solution")
    n, eps = cfg.n, cfg.eps
    tau, rho = _tau_rho(cfg, sol)
    sets = index_sets(sol)
    modes = []
    for group, ps, stiff in (("J_alpha", sets.J_alpha, tau), ("J_beta", sets.J_beta, rho)):
        for p in ps:
            s2 = math.sin(p * math.pi / (2 * n)) ** 2
            modes.append(_mode(p, -4.0 * s2, 1.0, 4.0 * eps * n * n * s2, 4.0 * n * n * s2 * stiff, group))
    for p in sets.K_ab:
        a = p * math.pi / n
        s2 = math.sin(a / 2) ** 2
        c = complex(2.0 * n * n * (rho + tau) * s2, -n * n * (rho - tau) * math.sin(a))
        modes.append(_mode(p, -4.0 * s2, 1.0, 4.0 * eps * n * n * s2, c, "K_ab"))
    return modes


def _all_roots(modes, pred, tol=1e-12) -> bool:
    for m in modes:
        for r in m.roots:
            scale = max(1.0, abs(r))
            if not pred(r, tol * scale):
                return False
    return True


def _complex_negative(r, tol):
    return r.real < -tol and abs(r.imag) > tol


def _real_negative(r, tol):
    return r.real < -tol and abs(r.imag) <= tol


def _two_phase_conditions(n, eps, tau, rho, sets, modes, cls) -> list[ConditionCheck]:
    by = {g: [m for m in modes if m.group == g] for g in ("J_alpha", "J_beta", "K_ab")}
    half = lambda p: math.sin(p * math.pi / (2 * n))
    delta = lambda p: (rho + tau) ** 2 - (rho - tau) ** 2 * math.cos(p * math.pi / (2 * n)) ** 2
    k_lo = lambda p: math.sqrt(max(rho + tau - math.sqrt(delta(p)), 0.0)) / (n * half(p))
    k_hi = lambda p: math.sqrt(rho + tau + math.sqrt(delta(p))) / (n * half(p))
    stable = cls is Classification.ASYMPTOTICALLY_STABLE
    out = []

    for name, ps, st in (("J_alpha", sets.J_alpha, tau), ("J_beta", sets.J_beta, rho)):
        ms = by[name]
        if ps:
            c_holds = eps > 0 and eps < math.sqrt(st) / (n * half(max(ps)))
            r_holds = eps > 0 and eps > math.sqrt(st) / (n * half(min(ps)))
        else:
            c_holds = r_holds = None
        out.append(ConditionCheck(f"{name}_complex_window", "iff", c_holds, _all_roots(ms, _complex_negative)))
        out.append(ConditionCheck(f"{name}_real_window", "iff", r_holds, _all_roots(ms, _real_negative)))

    K = sets.K_ab
    k_truth = _all_roots(by["K_ab"], _complex_negative)
    k_stable = _all_roots(by["K_ab"], lambda r, tol: r.real < -tol)
    if K:
        q, r = min(K), max(K)
        win = eps > 0 and k_lo(q) < eps < k_hi(r)
        printed = True
        for p in K:
            s, s2 = half(p), math.sin(p * math.pi / n)
            lhs = 2 * n**2 * (rho + tau) * s**2
            with np.errstate(divide="ignore"):
                tail = math.inf if eps == 0 else 2 * n**4 * (rho - tau) ** 2 * s2**2 / (16 * eps**2 * n**4 * s**4)
            rhs = 16 * eps * n**4 * s**4 / 8 + tail
            printed = printed and lhs > rhs and 4 * eps * n**2 * s**2 > 0 and lhs > 0
    else:
        win = printed = None
    out.append(ConditionCheck("K_ab_complex_window", "iff", win, k_truth))
    out.append(ConditionCheck("K_ab_printed_inequality", "iff", printed, k_stable))

    ja, jb = sets.J_alpha, sets.J_beta
    a_holds = (k_lo(min(K)) < eps < math.sqrt(tau) / n) if K else None
    b_holds = (k_lo(1) < eps < k_hi(max(K))) if K else None
    if K and jb and ja:
        c_holds = (max(rho / (n * half(min(jb))), k_lo(min(K)))
                   < eps < min(math.sqrt(tau) / (n * half(max(ja))), k_hi(max(K))))
        d_holds = (max(math.sqrt(tau) / (n * half(min(ja))), k_lo(min(K)))
                   < eps < min(rho / (n * half(max(jb))), k_hi(max(K))))
    else:
        c_holds = d_holds = None
    for tag, h in zip("abcd", (a_holds, b_holds, c_holds, d_holds)):
        out.append(ConditionCheck(f"stability_case_{tag}", "sufficient", h, stable))
    out.append(ConditionCheck("negative_damping_unstable", "sufficient", eps < 0,
                              cls in (Classification.UNSTABLE, Classification.HYPERBOLIC)))
    return out


def classify_two_phase(cfg: LatticeConfig, sol: SteadySolution) -> SpectrumReport:
    """Classification of a 2-phase state from the dense Jacobian.

    The plane-wave mode equations are solved and classified separately
    (``mode_classification``); ``max_discrepancy`` measures how far their
    roots sit from the Jacobian spectrum.
    """
    modes = two_phase_mode_roots(cfg, sol)
    oracle = dense_eigenvalues(jacobian(cfg, sol))
    cls = classify_eigenvalues(oracle)
    tau, rho = _tau_rho(cfg, sol)
    report = SpectrumReport(
        solution=sol,
        modes=modes,
        classification=cls,
        oracle=oracle,
        max_discrepancy=multiset_distance(_mode_roots_flat(modes), oracle),
        mode_classification=classify_modes(modes) if modes else None,
        degenerate=sol.degenerate,
    )
    report.paper_conditions = _two_phase_conditions(cfg.n, cfg.eps, tau, rho, index_sets(sol), modes, cls)
    return report


def analyze(cfg: LatticeConfig, sol: SteadySolution) -> SpectrumReport:
    if sol.kind is Kind.UNIPHASE:
        return uniphase_spectrum(cfg)
    return classify_two_phase(cfg, sol)


def two_phase_periods(cfg: LatticeConfig, sol: SteadySolution) -> list[tuple[str, int, float]]:
    """``(set, p, period)`` for every undamped mode on ``J_alpha`` and ``J_beta``."""
    if cfg.eps != 0.0:
        raise NotCenterError("periods need eps = 0")
    n = cfg.n
    tau, rho = _tau_rho(cfg, sol)
    sets = index_sets(sol)
    out = []
    for name, ps, st in (("J_alpha", sets.J_alpha, tau), ("J_beta", sets.J_beta, rho)):
        for p in ps:
            out.append((name, p, math.pi / (n * math.sqrt(st)) / math.sin(p * math.pi / (2 * n))))
    return out


# -- linear manifolds of the hyperbolic uniphase state ----------------------

@dataclass(frozen=True)
class ManifoldCurves:
    times: np.ndarray
    unstable: np.ndarray
    stable: np.ndarray
    lam_plus: np.ndarray
    lam_minus: np.ndarray
    base: np.ndarray


def _saddle_exponents(cfg: LatticeConfig, ks) -> tuple[np.ndarray, np.ndarray]:
    rho = -float(cfg.stress.dsigma(cfg.P))
    if not rho > 0:
        raise NotHyperbolicError("uniphase state is not in the spinodal interval")
    n, eps = cfg.n, cfg.eps
    plus, minus = [], []
    for k in ks:
        m = _mu_ext(k, n) * n * n
        r1, r2 = solve_quadratic(1.0, -eps * m, m * rho)
        plus.append(max(r1.real, r2.real))
        minus.append(min(r1.real, r2.real))
    return np.array(plus), np.array(minus)


def _mode_sums(n: int, eta, ks) -> np.ndarray:
    eta = np.asarray(eta, dtype=float)
    j = np.arange(1, len(eta) + 1)
    return np.array([np.sum(eta * np.exp(1j * k * math.pi / n * j)) for k in ks])


def linear_manifolds(cfg: LatticeConfig, sol: SteadySolution | None, eta, times, ks=None) -> ManifoldCurves:
    """Real parts of ``k h1 P + exp(t lam_k^{+/-}) sum_j eta_j exp(i a_k j)``.

    ``lam_k^+`` is the positive (unstable) root of mode ``k`` and ``lam_k^-``
    the negative one. ``ks`` defaults to the components ``1 .. n-1``.
    """
    if sol is not None and sol.kind is not Kind.UNIPHASE:
        raise NotHyperbolicError("linear manifolds are built for the uniphase state")
    n = cfg.n
    ks = np.arange(1, n) if ks is None else np.asarray(ks)
    lp, lm = _saddle_exponents(cfg, ks)
    sums = _mode_sums(n, eta, ks)
    t = np.asarray(times, dtype=float)[:, None]
    base = ks * cfg.P / n
    with np.errstate(over="ignore", invalid="ignore"):
        unstable = base + np.real(np.exp(t * lp) * sums)
        stable = base + np.real(np.exp(t * lm) * sums)
    return ManifoldCurves(t[:, 0], unstable, stable, lp, lm, base.astype(float))


@dataclass(frozen=True)
class PolycycleSamples:
    times: np.ndarray
    values: np.ndarray
    skipped: np.ndarray
    base: np.ndarray
    limit_plus: np.ndarray
    limit_minus: np.ndarray

    def limits_hold(self, tol: float = 1e-6) -> tuple[np.ndarray, np.ndarray]:
        n = len(self.base)
        target_plus = self.base
        target_minus = np.roll(self.base, -1)
        ok_plus = np.abs(self.limit_plus - target_plus) <= tol
        ok_minus = np.abs(self.limit_minus - target_minus) <= tol
        return ok_plus[:n], ok_minus[:n]


def polycycle(cfg: LatticeConfig, sol: SteadySolution | None, eta, times, zero_tol: float = 1e-300) -> PolycycleSamples:
    """Curves ``u^h_{k,k+1}`` for ``k = 1 .. n`` with ``u_{n+1} = u_1``.

    ``u^h_{k,k+1} = (u^s_k / u^s_{k+1}) ubar_{k+1} + (u^u_{k+1} / u^u_k) ubar_k``
    built from the real manifold curves. Samples whose denominators vanish
    are skipped and flagged. ``limit_plus``/``limit_minus`` hold the values at
    the largest and smallest sampled finite times.
    """
    n = cfg.n
    ks = np.arange(1, n + 1)
    mc = linear_manifolds(cfg, sol, eta, times, ks)
    us, uu, ub = mc.stable, mc.unstable, mc.base
    us1, uu1, ub1 = np.roll(us, -1, axis=1), np.roll(uu, -1, axis=1), np.roll(ub, -1)
    bad = (np.abs(us1) <= zero_tol) | (np.abs(uu) <= zero_tol) | ~np.isfinite(us) | ~np.isfinite(uu)
    bad |= ~np.isfinite(us1) | ~np.isfinite(uu1)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        vals = us / us1 * ub1 + uu1 / uu * ub
    vals = np.where(bad, np.nan, vals)
    order = np.argsort(mc.times)
    lim_plus = np.array([_last_finite(vals[order[::-1], i]) for i in range(n)])
    lim_minus = np.array([_last_finite(vals[order, i]) for i in range(n)])
    return PolycycleSamples(mc.times, vals, bad, ub, lim_plus, lim_minus)


def _last_finite(col: np.ndarray) -> float:
    for x in col:
        if np.isfinite(x):
            return float(x)
    return math.nan
