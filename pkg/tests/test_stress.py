from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phasewave.errors import InvalidStressError, NoSpinodalError, OutOfBandError
from phasewave.lattice import LatticeConfig
from phasewave.stress import DEFAULT_STRESS, CubicStress, make_stress

S6 = 1.0 / math.sqrt(6.0)


@pytest.mark.parametrize("xi, sigma, dsigma, w", [
    (0.0, 0.0, 2.5, 0.0),
    (1.0, 0.5, -0.5, 0.5),
    (2.0, 1.0, 2.5, 1.0),
])
def test_pointwise_values(xi, sigma, dsigma, w):
    s = DEFAULT_STRESS
    assert s.sigma(xi) == pytest.approx(sigma, abs=1e-15)
    assert s.dsigma(xi) == pytest.approx(dsigma, abs=1e-15)
    assert s.potential(xi) == pytest.approx(w, abs=1e-15)


def test_sigma_zero_is_exact():
    assert DEFAULT_STRESS.sigma(0.0) == 0.0


def test_vectorised_evaluation():
    xs = np.linspace(-1, 3, 7)
    assert np.allclose(DEFAULT_STRESS.sigma(xs), [DEFAULT_STRESS.sigma(float(x)) for x in xs])


class TestCriticalData:
    def test_default_closed_form(self):
        c = DEFAULT_STRESS.critical_points()
        # odd symmetry about xi = 1: sigma(1 + x) = 0.5 - 0.5 x + x^3
        assert c.alpha_bar == pytest.approx(1 - S6, abs=1e-14)
        assert c.beta_under == pytest.approx(1 + S6, abs=1e-14)
        assert c.sigma_bar == pytest.approx(0.5 + S6 / 3, abs=1e-14)
        assert c.sigma_under == pytest.approx(0.5 - S6 / 3, abs=1e-14)
        assert c.alpha_under == pytest.approx(1 - 2 * S6, abs=1e-14)
        assert c.beta_bar == pytest.approx(1 + 2 * S6, abs=1e-14)

    def test_rounded_values(self):
        c = DEFAULT_STRESS.critical
        assert (round(c.alpha_bar, 5), round(c.beta_under, 5)) == (0.59175, 1.40825)
        assert (round(c.sigma_bar, 5), round(c.sigma_under, 5)) == (0.63608, 0.36392)
        assert (round(c.alpha_under, 5), round(c.beta_bar, 5)) == (0.1835, 1.8165)

    def test_against_polynomial_roots(self):
        # numpy companion-matrix roots as an independent route
        s = CubicStress(-3.2, 3.0)
        c = s.critical
        crit = np.sort(np.roots([3.0, 2 * s.c2, s.c1]).real)
        assert np.allclose(crit, [c.alpha_bar, c.beta_under], atol=1e-12)
        lo = np.sort(np.roots([1.0, s.c2, s.c1, -c.sigma_under]).real)
        hi = np.sort(np.roots([1.0, s.c2, s.c1, -c.sigma_bar]).real)
        assert lo[0] == pytest.approx(c.alpha_under, abs=1e-7)
        assert hi[-1] == pytest.approx(c.beta_bar, abs=1e-7)

    def test_idempotent_and_stationary(self):
        a, b = DEFAULT_STRESS.critical_points(), DEFAULT_STRESS.critical_points()
        assert a == b
        assert abs(DEFAULT_STRESS.dsigma(a.alpha_bar)) < 1e-12
        assert abs(DEFAULT_STRESS.dsigma(a.beta_under)) < 1e-12

    def test_monotone_law_has_no_spinodal(self):
        with pytest.raises(NoSpinodalError):
            CubicStress(0.0, 1.0).critical_points()


class TestConjugatePair:
    def test_half(self):
        a, b, deg = DEFAULT_STRESS.conjugate_pair(0.5)
        assert a == pytest.approx(1 - math.sqrt(0.5), abs=1e-12)
        assert b == pytest.approx(1 + math.sqrt(0.5), abs=1e-12)
        assert not deg

    def test_upper_edge_is_degenerate(self):
        c = DEFAULT_STRESS.critical
        pair = DEFAULT_STRESS.conjugate_pair(c.sigma_bar)
        assert pair.degenerate and pair.alpha == c.alpha_bar and pair.beta == c.beta_bar

    def test_lower_edge_is_degenerate(self):
        c = DEFAULT_STRESS.critical
        pair = DEFAULT_STRESS.conjugate_pair(c.sigma_under)
        assert pair.degenerate and pair.alpha == c.alpha_under and pair.beta == c.beta_under

    @pytest.mark.parametrize("C", [0.36, 0.64, -1.0])
    def test_out_of_band(self, C):
        with pytest.raises(OutOfBandError):
            DEFAULT_STRESS.conjugate_pair(C)

    def test_grid_inverts_sigma(self):
        c = DEFAULT_STRESS.critical
        for C in np.linspace(c.sigma_under, c.sigma_bar, 102)[1:-1]:
            a, b, _ = DEFAULT_STRESS.conjugate_pair(C)
            assert abs(DEFAULT_STRESS.sigma(a) - C) < 1e-10
            assert abs(DEFAULT_STRESS.sigma(b) - C) < 1e-10
            assert c.alpha_under < a < c.alpha_bar
            assert c.beta_under < b < c.beta_bar


class TestValidation:
    def test_default_passes(self):
        rep = DEFAULT_STRESS.validate()
        assert rep.ok and not rep.failures
        assert "PASS" in str(rep)

    def test_monotone_fails_critical_points(self):
        rep = CubicStress(0.0, 1.0).validate()
        assert not rep.ok
        assert any("critical points" in f.name for f in rep.failures)

    def test_sign_change_fails_positivity(self):
        s = CubicStress(-3.0, 1.0)
        assert s.sigma(1.0) == -1.0
        rep = s.validate()
        assert any("sigma > 0" in f.name for f in rep.failures)

    def test_invalid_law_blocks_lattice(self):
        with pytest.raises(InvalidStressError) as exc:
            LatticeConfig(2, 1.0, stress=CubicStress(0.0, 1.0))
        assert exc.value.report is not None

    def test_factory(self):
        assert make_stress("cubic", c2=-3.0, c1=2.5) == DEFAULT_STRESS
        with pytest.raises(ValueError):
            make_stress("spline")


def test_potential_derivative_matches_sigma():
    xs = np.linspace(-2, 4, 121)
    h = 1e-6
    fd = (DEFAULT_STRESS.potential(xs + h) - DEFAULT_STRESS.potential(xs - h)) / (2 * h)
    assert np.max(np.abs(fd - DEFAULT_STRESS.sigma(xs))) < 1e-6


# valid cubics: 3 c1 < c2^2 < 4 c1 with c2 < 0
valid_cubics = st.builds(
    lambda c1, s: CubicStress(-math.sqrt(s * c1), c1),
    st.floats(0.2, 20.0),
    st.floats(3.05, 3.95),
)


@settings(max_examples=60, deadline=None)
@given(valid_cubics)
def test_random_cubic_thresholds(s):
    assert s.validate().ok
    c = s.critical
    assert 0 < c.alpha_under < c.alpha_bar < c.beta_under < c.beta_bar
    assert c.sigma_under < c.sigma_bar
    scale = max(1.0, abs(c.sigma_bar))
    assert abs(s.sigma(c.alpha_under) - c.sigma_under) < 1e-12 * scale
    assert abs(s.sigma(c.beta_bar) - c.sigma_bar) < 1e-12 * scale


@settings(max_examples=60, deadline=None)
@given(valid_cubics, st.floats(0.01, 0.99))
def test_random_conjugate_pair(s, frac):
    c = s.critical
    C = c.sigma_under + frac * (c.sigma_bar - c.sigma_under)
    a, b, _ = s.conjugate_pair(C)
    scale = max(1.0, abs(C))
    assert abs(s.sigma(a) - C) < 1e-10 * scale
    assert abs(s.sigma(b) - C) < 1e-10 * scale
    assert s.dsigma(a) >= 0 and s.dsigma(b) >= 0
