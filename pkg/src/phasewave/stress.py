"""Non-monotone stress laws and their threshold strains.

A stress law ``sigma`` rises on ``(-inf, alpha_bar)``, falls on the spinodal
interval ``(alpha_bar, beta_under)`` and rises again afterwards. The local
extrema define the Maxwell band ``(sigma_under, sigma_bar)``; every stress in
that band has exactly one preimage on each ascending branch.

>>> s = CubicStress()
>>> float(s.sigma(1.0)), float(s.dsigma(1.0))
(0.5, -0.5)
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InvalidStressError, NoSpinodalError, OutOfBandError
from .numerics import bracketed_root

_EDGE_RTOL = 1e-15


@dataclass(frozen=True)
class CriticalData:
    """Threshold strains and stresses of a stress law.

    ``alpha_under < alpha_bar < beta_under < beta_bar`` with
    ``sigma(alpha_under) = sigma(beta_under) = sigma_under`` and
    ``sigma(alpha_bar) = sigma(beta_bar) = sigma_bar``.
    """

    alpha_bar: float
    beta_under: float
    sigma_bar: float
    sigma_under: float
    alpha_under: float
    beta_bar: float


class ConjugatePair(NamedTuple):
    alpha: float
    beta: float
    degenerate: bool = False


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def __str__(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}" + (f" ({c.detail})" if c.detail else "")
                 for c in self.checks]
        return "\n".join(lines)


def _sign_grid() -> np.ndarray:
    return np.geomspace(1e-6, 1e3, 400)


class StressModel(ABC):
    """Interface shared by every stress family.

    Subclasses provide ``sigma``, ``dsigma``, ``potential`` and
    ``_critical_abscissae``; the threshold strains on the outer branches are
    then found by bracketing unless a subclass knows them in closed form.
    """

    kind: str = "abstract"

    @abstractmethod
    def sigma(self, xi):
        ...

    @abstractmethod
    def dsigma(self, xi):
        ...

    @abstractmethod
    def potential(self, xi):
        """Stored energy ``w`` with ``w' = sigma`` and ``w(0) = 0``."""

    @abstractmethod
    def _critical_abscissae(self) -> tuple[float, float] | None:
        """Local max and local min of ``sigma``, or ``None`` without a spinodal."""

    def _compute_critical(self) -> CriticalData | None:
        crit = self._critical_abscissae()
        if crit is None:
            return None
        a_bar, b_under = crit
        s_bar = float(self.sigma(a_bar))
        s_under = float(self.sigma(b_under))
        a_under, b_bar = self._outer_thresholds(a_bar, b_under, s_bar, s_under)
        return CriticalData(a_bar, b_under, s_bar, s_under, a_under, b_bar)

    def _outer_thresholds(self, a_bar, b_under, s_bar, s_under) -> tuple[float, float]:
        f_lo = lambda x: float(self.sigma(x)) - s_under
        f_hi = lambda x: float(self.sigma(x)) - s_bar
        fp = lambda x: float(self.dsigma(x))
        lo = 0.0
        a_under = bracketed_root(f_lo, lo, a_bar, fp)
        hi = b_under + 1.0
        while float(self.sigma(hi)) < s_bar:
            hi = b_under + 2.0 * (hi - b_under)
        b_bar = bracketed_root(f_hi, b_under, hi, fp)
        return a_under, b_bar

    @property
    def critical(self) -> CriticalData:
        crit = self._critical
        if crit is None:
            raise NoSpinodalError(f"{self!r}: sigma' has no sign change")
        return crit

    def critical_points(self) -> CriticalData:
        return self.critical

    def in_band(self, C: float) -> bool:
        crit = self.critical
        return crit.sigma_under < C < crit.sigma_bar

    def conjugate_pair(self, C: float) -> ConjugatePair:
        """Preimages of ``C`` on the left and right ascending branches.

        Stresses at the band edges are accepted and returned with
        ``degenerate=True``; anything outside raises ``OutOfBandError``.
        """
        crit = self.critical
        tol = _EDGE_RTOL * max(1.0, abs(crit.sigma_bar))
        if C < crit.sigma_under - tol or C > crit.sigma_bar + tol:
            raise OutOfBandError(
                f"stress {C!r} outside the band ({crit.sigma_under!r}, {crit.sigma_bar!r})")
        if abs(C - crit.sigma_bar) <= tol:
            return ConjugatePair(crit.alpha_bar, crit.beta_bar, True)
        if abs(C - crit.sigma_under) <= tol:
            return ConjugatePair(crit.alpha_under, crit.beta_under, True)
        f = lambda x: float(self.sigma(x)) - C
        fp = lambda x: float(self.dsigma(x))
        alpha = bracketed_root(f, crit.alpha_under, crit.alpha_bar, fp)
        beta = bracketed_root(f, crit.beta_under, crit.beta_bar, fp)
        return ConjugatePair(alpha, beta, False)

    def validate(self) -> ValidationReport:
        checks = [AxiomCheck("sigma(0) = 0", float(self.sigma(0.0)) == 0.0)]
        xs = _sign_grid()
        pos = bool(np.all(self.sigma(xs) > 0))
        neg = bool(np.all(self.sigma(-xs) < 0))
        checks.append(AxiomCheck("sigma > 0 for xi > 0", pos and self._analytic_positive()))
        checks.append(AxiomCheck("sigma < 0 for xi < 0", neg and self._analytic_positive()))
        crit = self._critical
        if crit is None:
            checks.append(AxiomCheck("two critical points 0 < alpha_bar < beta_under", False,
                                     "sigma' does not change sign"))
        else:
            checks.append(AxiomCheck("two critical points 0 < alpha_bar < beta_under",
                                     0.0 < crit.alpha_bar < crit.beta_under))
            ordered = 0.0 < crit.alpha_under < crit.alpha_bar < crit.beta_under < crit.beta_bar
            checks.append(AxiomCheck("0 < alpha_under < alpha_bar < beta_under < beta_bar", ordered))
            checks.append(AxiomCheck("sigma_under < sigma_bar", crit.sigma_under < crit.sigma_bar))
        return ValidationReport(tuple(checks))

    def _analytic_positive(self) -> bool:
        return True

    def require_valid(self) -> None:
        report = self.validate()
        if not report.ok:
            names = ", ".join(c.name for c in report.failures)
            raise InvalidStressError(f"stress law fails axioms: {names}", report)


@dataclass(frozen=True)
class CubicStress(StressModel):
    """``sigma(xi) = xi**3 + c2 xi**2 + c1 xi``.

    The default coefficients give a law that is odd about ``xi = 1`` with
    band ``(0.36391, 0.63609)``.
    """

    c2: float = -3.0
    c1: float = 2.5
    _critical: CriticalData | None = field(init=False, repr=False, compare=False, default=None)

    kind = "cubic"

    def __post_init__(self):
        object.__setattr__(self, "_critical", self._compute_critical())

    def sigma(self, xi):
        return ((xi + self.c2) * xi + self.c1) * xi

    def dsigma(self, xi):
        return (3.0 * xi + 2.0 * self.c2) * xi + self.c1

    def potential(self, xi):
        return ((0.25 * xi + self.c2 / 3.0) * xi + 0.5 * self.c1) * xi * xi

    def _critical_abscissae(self):
        disc = self.c2 * self.c2 - 3.0 * self.c1
        if disc <= 0.0:
            return None
        r = math.sqrt(disc)
        # roots of 3 xi^2 + 2 c2 xi + c1, formed without cancellation
        q = -(self.c2 + math.copysign(r, self.c2))
        if q == 0.0:
            return None
        x1, x2 = q / 3.0, self.c1 / q
        return (min(x1, x2), max(x1, x2))

    def _outer_thresholds(self, a_bar, b_under, s_bar, s_under):
        # sigma - sigma_under has a double root at beta_under, so the third
        # root follows from the root sum -c2 (and likewise for sigma_bar)
        return -self.c2 - 2.0 * b_under, -self.c2 - 2.0 * a_bar

    def _analytic_positive(self) -> bool:
        # sigma = xi (xi^2 + c2 xi + c1): needs the quadratic factor to stay positive
        return self.c2 * self.c2 < 4.0 * self.c1


DEFAULT_STRESS = CubicStress()


def make_stress(kind: str = "cubic", **params) -> StressModel:
    if kind != "cubic":
        raise ValueError(f"unknown stress kind {kind!r}")
    return CubicStress(**params)
