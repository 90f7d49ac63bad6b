"""Steady solutions of the lattice: the uniphase profile and 2-phase families.

Every steady state carries a common bond stress ``C``. A 2-phase state puts
``k_alpha`` bonds at strain ``alpha`` and the rest at ``beta``, with
``alpha``/``beta`` the outer-branch preimages of ``C`` and
``k_alpha alpha + (n - k_alpha) beta = n P``. Because both preimages grow with
``C`` that mass constraint is monotone in ``C`` and has at most one root per
``k_alpha``.
"""

from __future__ import annotations

import enum
import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .lattice import LatticeConfig, strains_of
from .numerics import bracketed_root

log = logging.getLogger(__name__)

DEFAULT_CAP = 64
EDGE_TOL = 1e-12


class Kind(str, enum.Enum):
    UNIPHASE = "Uniphase"
    TWO_PHASE = "TwoPhase"


class Membership(str, enum.Enum):
    E_PLUS = "EPlus"
    E_MINUS = "EMinus"


@dataclass(frozen=True)
class SteadySolution:
    kind: Kind
    alpha: float
    beta: float
    C: float
    k_alpha: int
    arrangement: str
    u: np.ndarray
    membership: Membership
    degenerate: bool = False

    @property
    def n(self) -> int:
        return len(self.arrangement)

    def strains(self, P: float) -> np.ndarray:
        full = np.concatenate(([0.0], self.u, [P]))
        return np.diff(full) * self.n

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "alpha": self.alpha,
            "beta": self.beta,
            "C": self.C,
            "k_alpha": self.k_alpha,
            "arrangement": self.arrangement,
            "u": [float(x) for x in self.u],
            "membership": self.membership.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SteadySolution":
        return cls(Kind(d["kind"]), d["alpha"], d["beta"], d["C"], d["k_alpha"],
                   d["arrangement"], np.asarray(d["u"], dtype=float), Membership(d["membership"]))


@dataclass(frozen=True)
class TwoPhaseFamily:
    """All arrangements sharing one ``(alpha, beta, C)`` triple."""

    k_alpha: int
    alpha: float
    beta: float
    C: float
    total: int
    words: tuple[str, ...]
    degenerate: bool = False

    @property
    def truncated(self) -> bool:
        return len(self.words) < self.total


def _membership(ds: np.ndarray) -> tuple[Membership, bool]:
    if np.all(ds > 0):
        return Membership.E_PLUS, False
    return Membership.E_MINUS, bool(np.any(ds == 0))


def uniphase(cfg: LatticeConfig) -> SteadySolution:
    """Linear profile ``u_k = k h1 P``.

    A vanishing ``sigma'(P)`` is classified ``EMinus`` and flagged
    ``degenerate``.
    """
    if not cfg.P > 0:
        raise ValueError("uniphase profile needs P > 0")
    n = cfg.n
    u = np.arange(1, n) * cfg.P / n
    tau = float(cfg.stress.dsigma(cfg.P))
    membership, degenerate = _membership(np.array([tau]))
    return SteadySolution(Kind.UNIPHASE, cfg.P, cfg.P, float(cfg.stress.sigma(cfg.P)), n,
                          "A" * n, u, membership, degenerate)


def _words(n: int, k: int, cap: int) -> tuple[tuple[str, ...], int]:
    total = math.comb(n, k)
    words = []
    for pos in itertools.combinations(range(n), k):
        if len(words) >= cap:
            break
        w = ["B"] * n
        for i in pos:
            w[i] = "A"
        words.append("".join(w))
    # combinations come out in lexicographic order of A positions, which is
    # lexicographic order of the words themselves
    return tuple(sorted(words)), total


def solve_stress_level(cfg: LatticeConfig, k_alpha: int) -> float | None:
    """Stress ``C`` in the closed band solving the mass constraint, if any.

    A root exactly on a band edge (one phase sitting at a critical strain) is
    returned as that edge value.
    """
    stress = cfg.stress
    crit = stress.critical
    n, P = cfg.n, cfg.P

    def g(C):
        a, b, _ = stress.conjugate_pair(C)
        return k_alpha * a + (n - k_alpha) * b - n * P

    g_lo = k_alpha * crit.alpha_under + (n - k_alpha) * crit.beta_under - n * P
    g_hi = k_alpha * crit.alpha_bar + (n - k_alpha) * crit.beta_bar - n * P
    tol = EDGE_TOL * n * max(1.0, abs(P))
    if abs(g_lo) <= tol:
        return crit.sigma_under
    if abs(g_hi) <= tol:
        return crit.sigma_bar
    if not (g_lo < 0.0 < g_hi):
        return None
    return bracketed_root(g, crit.sigma_under, crit.sigma_bar, xtol=1e-16)


def two_phase_families(cfg: LatticeConfig, max_arrangements: int = DEFAULT_CAP) -> list[TwoPhaseFamily]:
    families = []
    for k in range(1, cfg.n):
        C = solve_stress_level(cfg, k)
        if C is None:
            continue
        alpha, beta, edge = cfg.stress.conjugate_pair(C)
        words, total = _words(cfg.n, k, max_arrangements)
        fam = TwoPhaseFamily(k, alpha, beta, C, total, words, edge)
        if fam.truncated:
            log.warning("k_alpha=%d: kept %d of %d arrangements", k, len(words), total)
        families.append(fam)
    return families


def _profile(cfg: LatticeConfig, word: str, alpha: float, beta: float) -> np.ndarray:
    ds = np.where(np.frombuffer(word.encode(), dtype=np.uint8) == ord("A"), alpha, beta)
    return np.cumsum(ds[:-1]) * cfg.h1


def enumerate_two_phase(cfg: LatticeConfig, max_arrangements: int = DEFAULT_CAP) -> list[SteadySolution]:
    """Every 2-phase steady state, in ``k_alpha`` then word order.

    At most ``max_arrangements`` phase words are kept per ``k_alpha``; the
    truncation is visible through ``two_phase_families``.
    """
    out = []
    for fam in two_phase_families(cfg, max_arrangements):
        for word in fam.words:
            u = _profile(cfg, word, fam.alpha, fam.beta)
            ds = cfg.stress.dsigma(np.array([fam.alpha, fam.beta]))
            membership, degenerate = _membership(ds)
            if fam.degenerate:
                membership, degenerate = Membership.E_MINUS, True
            out.append(SteadySolution(Kind.TWO_PHASE, fam.alpha, fam.beta, fam.C, fam.k_alpha,
                                      word, u, membership, degenerate))
    return out


def all_solutions(cfg: LatticeConfig, max_arrangements: int = DEFAULT_CAP) -> list[SteadySolution]:
    """Uniphase state first, then the 2-phase states."""
    return [uniphase(cfg)] + enumerate_two_phase(cfg, max_arrangements)


def residual(cfg: LatticeConfig, u) -> float:
    """``max_k |sigma(D_{k+1}) - sigma(D_k)|`` over the interior sites."""
    u = np.asarray(u, dtype=float)
    if u.shape != (cfg.n - 1,):
        raise ValueError(f"expected {cfg.n - 1} interior values, got shape {u.shape}")
    s = cfg.stress.sigma(strains_of(cfg, u))
    return float(np.max(np.abs(np.diff(s))))


def count_all(cfg: LatticeConfig, cap: int = DEFAULT_CAP) -> int:
    return 1 + sum(len(f.words) for f in two_phase_families(cfg, cap))
