from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phasewave.errors import NotCenterError, NotHyperbolicError
from phasewave.lattice import LatticeConfig
from phasewave.spectral import (Classification, Tag, analyze, classify_two_phase, dense_eigenvalues,
                                index_sets, jacobian, laplacian, linear_manifolds, mode_mu,
                                multiset_distance, polycycle, two_phase_mode_roots,
                                two_phase_periods, uniphase_modes, uniphase_periods,
                                uniphase_spectrum)
from phasewave.steady import Kind, SteadySolution, all_solutions, enumerate_two_phase, uniphase

from conftest import P_TAU_ONE, P_TAU_ONE_RIGHT

R2 = math.sqrt(2.0)


def _flat(modes):
    return np.array([r for m in modes for r in m.roots])


class TestModeMu:
    @pytest.mark.parametrize("k, n, mu", [(1, 2, -2.0), (2, 4, -2.0), (3, 4, -2.0 - R2)])
    def test_values(self, k, n, mu):
        assert mode_mu(k, n) == pytest.approx(mu, abs=1e-12)

    @pytest.mark.parametrize("k", [0, 4])
    def test_range(self, k):
        with pytest.raises(IndexError):
            mode_mu(k, 4)

    @pytest.mark.parametrize("n", range(2, 17))
    def test_strictly_decreasing(self, n):
        mus = [mode_mu(k, n) for k in range(1, n)]
        assert all(a > b for a, b in zip(mus, mus[1:]))

    @pytest.mark.parametrize("n", [2, 3, 5, 9])
    def test_laplacian_spectrum(self, n):
        ev = np.sort(np.linalg.eigvalsh(laplacian(n - 1)))
        assert np.allclose(ev, sorted(mode_mu(k, n) for k in range(1, n)), atol=1e-12)


class TestUniphaseSpectrum:
    def test_stable_focus(self):
        rep = uniphase_spectrum(LatticeConfig(2, P_TAU_ONE, 0.1))
        m = rep.modes[0]
        assert np.allclose(m.quad, (1.0, 0.8, 8.0), atol=1e-12)
        assert sorted(m.roots, key=lambda z: z.imag) == pytest.approx([-0.4 - 2.8j, -0.4 + 2.8j], abs=1e-12)
        assert m.tag is Tag.STABLE_FOCUS
        assert rep.classification is Classification.ASYMPTOTICALLY_STABLE

    def test_center(self):
        rep = uniphase_spectrum(LatticeConfig(2, P_TAU_ONE, 0.0))
        assert sorted(r.imag for r in rep.modes[0].roots) == pytest.approx([-2 * R2, 2 * R2], abs=1e-12)
        assert all(r.real == 0.0 for r in rep.modes[0].roots)
        assert rep.modes[0].tag is Tag.CENTER and rep.classification is Classification.CENTER

    def test_saddle(self):
        rep = uniphase_spectrum(LatticeConfig(2, 1.0, 0.5))
        m = rep.modes[0]
        assert np.allclose(m.quad, (1.0, 4.0, -4.0))
        assert sorted(r.real for r in m.roots) == pytest.approx([-2 - 2 * R2, -2 + 2 * R2], abs=1e-12)
        assert (m.roots[0] * m.roots[1]).real == pytest.approx(-4.0)
        assert m.tag is Tag.SADDLE and rep.classification is Classification.HYPERBOLIC

    def test_negative_damping_unstable(self):
        rep = uniphase_spectrum(LatticeConfig(4, 0.4, -0.1))
        assert rep.classification is Classification.UNSTABLE
        assert all(r.real > 0 for r in _flat(rep.modes))

    @pytest.mark.parametrize("eps", [-0.2, 0.0, 0.3])
    def test_spinodal_is_hyperbolic(self, eps):
        assert uniphase_spectrum(LatticeConfig(5, 1.2, eps)).classification is Classification.HYPERBOLIC

    def test_degenerate_flag(self):
        cfg = LatticeConfig(3, 0.4)
        rep = uniphase_spectrum(cfg, tau_scale=0.0)
        assert rep.degenerate

    def test_tau_scale_matches_oracle(self):
        rep = uniphase_spectrum(LatticeConfig(6, 0.4, 0.05), tau_scale=2.5)
        assert rep.max_discrepancy < 1e-10

    def test_report_schema(self):
        d = uniphase_spectrum(LatticeConfig(3, 1.0, 0.1)).to_dict()
        assert {"solution", "modes", "classification", "oracle", "max_discrepancy", "paper_conditions"} <= d.keys()
        assert {"k", "mu", "quad", "roots", "tag"} <= d["modes"][0].keys()
        assert {"name", "holds", "agrees_with_roots"} <= d["paper_conditions"][0].keys()


@pytest.mark.parametrize("n", [2, 3, 5, 8, 12, 16])
@pytest.mark.parametrize("eps", [-0.2, 0.0, 0.05, 0.5])
@pytest.mark.parametrize("P", [0.3, 1.0, 1.7])
def test_oracle_equivalence(n, eps, P):
    rep = uniphase_spectrum(LatticeConfig(n, P, eps))
    assert len(rep.oracle) == 2 * (n - 1)
    assert multiset_distance(_flat(rep.modes), rep.oracle) < 1e-8
    order = np.lexsort((rep.oracle.imag, rep.oracle.real))
    assert np.array_equal(order, np.arange(len(rep.oracle)))


@pytest.mark.parametrize("n", [2, 4, 7])
@pytest.mark.parametrize("eps", [-0.2, 0.0, 0.05, 0.5])
@pytest.mark.parametrize("P", [0.4, 1.0, 1.7])
def test_vieta_on_every_mode(n, eps, P):
    cfg = LatticeConfig(n, P, eps)
    for sol in all_solutions(cfg)[:4]:
        rep = analyze(cfg, sol)
        for m in rep.modes:
            a, b, c = (complex(x) for x in m.quad)
            r1, r2 = m.roots
            assert abs(r1 + r2 + b / a) <= 1e-12 * max(1.0, abs(b / a))
            assert abs(r1 * r2 - c / a) <= 1e-12 * max(1.0, abs(c / a))


@pytest.mark.parametrize("n", [2, 4, 8, 16])
@pytest.mark.parametrize("eps", [-0.2, 0.0, 0.05, 0.5])
def test_saddle_sign_law(n, eps):
    for P in (0.8, 1.0, 1.3):
        rho = -float(LatticeConfig(n, P).stress.dsigma(P))
        for m in uniphase_spectrum(LatticeConfig(n, P, eps)).modes:
            r1, r2 = m.roots
            assert r1.imag == 0 and r2.imag == 0
            assert (r1 * r2).real == pytest.approx(m.mu * n * n * rho, rel=1e-12)
            assert (r1 * r2).real < 0


@pytest.mark.parametrize("n", [3, 4, 8, 16])
@pytest.mark.parametrize("eps", [-0.2, 0.0, 0.05, 0.5])
def test_saddle_exponents_spread_with_mode_index(n, eps):
    # the positive root grows and the negative root falls as |mu_k| grows
    modes = uniphase_spectrum(LatticeConfig(n, 1.0, eps)).modes
    plus = [max(r.real for r in m.roots) for m in modes]
    minus = [min(r.real for r in m.roots) for m in modes]
    assert all(a < b for a, b in zip(plus, plus[1:]))
    assert all(a > b for a, b in zip(minus, minus[1:]))


class TestPeriods:
    def test_n2_unit_slope(self):
        assert uniphase_periods(LatticeConfig(2, P_TAU_ONE))[0] == pytest.approx(math.pi / 2 * R2, rel=1e-12)

    def test_sqrt_tau_scaling(self):
        P = 1 + math.sqrt(1.5)  # sigma' = 4
        assert uniphase_periods(LatticeConfig(2, P))[0] == pytest.approx(math.pi / 4 * R2, rel=1e-12)

    def test_n4_mode2(self):
        assert uniphase_periods(LatticeConfig(4, P_TAU_ONE_RIGHT))[1] == pytest.approx(math.pi / 4 * R2, rel=1e-12)

    def test_matches_imaginary_parts(self):
        cfg = LatticeConfig(5, 0.4)
        T = uniphase_periods(cfg)
        w = [abs(m.roots[0].imag) for m in uniphase_spectrum(cfg).modes]
        assert np.allclose(T, 2 * np.pi / np.array(w), rtol=1e-12)

    @pytest.mark.parametrize("P, eps", [(0.4, 0.1), (1.0, 0.0)])
    def test_not_center(self, P, eps):
        with pytest.raises(NotCenterError):
            uniphase_periods(LatticeConfig(3, P, eps))


def _two_phase(n, P, word, eps=0.0):
    cfg = LatticeConfig(n, P, eps)
    return cfg, next(s for s in enumerate_two_phase(cfg) if s.arrangement == word)


class TestIndexSets:
    @pytest.mark.parametrize("word, ja, jb, k", [
        ("AABB", [1], [3], [2]),
        ("AB", [], [], [1]),
        ("AAAB", [1, 2], [], [3]),
        ("BBAB", [], [1], [3]),
    ])
    def test_reading(self, word, ja, jb, k):
        sol = SteadySolution(Kind.TWO_PHASE, 0.3, 1.7, 0.5, word.count("A"), word,
                             np.zeros(len(word) - 1), "EPlus")
        s = index_sets(sol)
        assert (list(s.J_alpha), list(s.J_beta), list(s.K_ab)) == (ja, jb, k)


class TestTwoPhase:
    def test_unit_slopes_at_half_stress(self):
        cfg, sol = _two_phase(2, 1.0, "AB", 0.5)
        tau, rho = cfg.stress.dsigma(sol.alpha), cfg.stress.dsigma(sol.beta)
        assert tau == pytest.approx(1.0, abs=1e-12) and rho == pytest.approx(1.0, abs=1e-12)
        (m,) = two_phase_mode_roots(cfg, sol)
        assert m.group == "K_ab"
        assert complex(m.quad[2]).imag == pytest.approx(0.0, abs=1e-12)
        assert sorted(m.roots, key=lambda z: z.imag) == pytest.approx([-2 - 2j, -2 + 2j], abs=1e-10)

    def test_matches_dense_jacobian_for_n2(self):
        for eps in (-0.1, 0.0, 0.05, 0.5):
            cfg, sol = _two_phase(2, 1.0, "AB", eps)
            rep = classify_two_phase(cfg, sol)
            assert rep.max_discrepancy < 1e-10

    def test_negative_damping_unstable(self):
        cfg, sol = _two_phase(4, 1.0, "AABB", -0.05)
        assert classify_two_phase(cfg, sol).classification is Classification.UNSTABLE

    def test_undamped_marginal_modes(self):
        cfg, sol = _two_phase(4, 1.0, "AABB", 0.0)
        modes = two_phase_mode_roots(cfg, sol)
        assert {m.group for m in modes} == {"J_alpha", "J_beta", "K_ab"}
        for m in modes:
            if m.group != "K_ab":
                assert m.tag is Tag.CENTER
        assert classify_two_phase(cfg, sol).classification is Classification.CENTER

    def test_sign_pattern_follows_oracle(self):
        cfg, sol = _two_phase(2, 1.0, "AB", 0.05)
        rep = classify_two_phase(cfg, sol)
        assert np.all(rep.oracle.real < 0)
        assert rep.classification is Classification.ASYMPTOTICALLY_STABLE

    @pytest.mark.parametrize("word", ["AABB", "ABAB", "ABBA", "BAAB"])
    @pytest.mark.parametrize("eps", [0.01, 0.2, 1.0])
    def test_positive_damping_always_stable(self, word, eps):
        cfg, sol = _two_phase(4, 1.0, word, eps)
        assert classify_two_phase(cfg, sol).classification is Classification.ASYMPTOTICALLY_STABLE

    def test_conditions_are_reported(self):
        cfg, sol = _two_phase(4, 1.0, "AABB", 0.1)
        rep = classify_two_phase(cfg, sol)
        names = [c.name for c in rep.paper_conditions]
        assert len(names) == len(set(names)) >= 5
        agree, applicable = rep.agreement()
        assert 0 <= agree <= applicable

    def test_degenerate_edge_family(self):
        cfg = LatticeConfig(3, 1.0, 0.1)
        sol = enumerate_two_phase(cfg)[0]
        rep = analyze(cfg, sol)
        assert rep.degenerate


class TestTwoPhasePeriods:
    def test_J_alpha(self):
        cfg, sol = _two_phase(4, 1.0, "AABB")
        periods = dict(((g, p), T) for g, p, T in two_phase_periods(cfg, sol))
        assert periods[("J_alpha", 1)] == pytest.approx(math.pi / 4 / math.sin(math.pi / 8), rel=1e-10)
        assert periods[("J_beta", 3)] == pytest.approx(math.pi / 4 / math.sin(3 * math.pi / 8), rel=1e-10)

    def test_empty_for_AB(self):
        cfg, sol = _two_phase(2, 1.0, "AB")
        assert two_phase_periods(cfg, sol) == []

    def test_needs_zero_damping(self):
        cfg, sol = _two_phase(4, 1.0, "AABB", 0.1)
        with pytest.raises(NotCenterError):
            two_phase_periods(cfg, sol)


class TestJacobian:
    def test_n2_block(self):
        cfg = LatticeConfig(2, P_TAU_ONE, 0.1)
        J = jacobian(cfg, uniphase(cfg))
        assert np.allclose(J, [[0, 1], [-8, -0.8]], atol=1e-12)

    def test_n4_stiffness_is_scaled_laplacian(self):
        cfg = LatticeConfig(4, 0.4)
        J = jacobian(cfg, uniphase(cfg))
        S = J[3:, :3]
        tau = cfg.stress.dsigma(0.4)
        assert np.allclose(S, tau * 16 * laplacian(3), atol=1e-12)
        assert np.allclose(np.sort(np.linalg.eigvalsh(laplacian(3))), [-2 - R2, -2, -2 + R2])


class TestDenseEigenvalues:
    def test_identity(self):
        assert np.allclose(dense_eigenvalues(np.eye(4)), 1.0)

    def test_tridiagonal(self):
        ev = dense_eigenvalues(laplacian(3))
        assert np.allclose(ev, [-2 - R2, -2, -2 + R2], atol=1e-12)

    def test_uniphase_jacobian(self):
        cfg = LatticeConfig(2, P_TAU_ONE, 0.1)
        ev = dense_eigenvalues(jacobian(cfg, uniphase(cfg)))
        assert ev == pytest.approx([-0.4 - 2.8j, -0.4 + 2.8j], abs=1e-12)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            dense_eigenvalues(np.ones((2, 3)))


def test_multiset_distance_is_order_free():
    a = np.array([1 + 1j, -2, 3j])
    assert multiset_distance(a, a[::-1]) == 0.0
    assert multiset_distance(a, a + 1e-3) == pytest.approx(1e-3)


class TestManifolds:
    def test_limits(self, cfg_n2_p1):
        eta = [0.3]
        lp_abs = 2 * R2 - 2
        curves_s = linear_manifolds(cfg_n2_p1, None, eta, [40 / (2 + 2 * R2)])
        curves_u = linear_manifolds(cfg_n2_p1, None, eta, [-40 / lp_abs])
        assert abs(curves_s.stable[0, 0] - 0.5) < 1e-8
        assert abs(curves_u.unstable[0, 0] - 0.5) < 1e-8
        assert curves_s.lam_plus[0] == pytest.approx(lp_abs)
        assert curves_s.lam_minus[0] == pytest.approx(-2 - 2 * R2)

    def test_zero_time(self, cfg_n2_p1):
        c = linear_manifolds(LatticeConfig(4, 1.0, 0.2), None, [0.1, 0.2, -0.1], [0.0])
        k = np.arange(1, 4)
        expect = k * 0.25 + np.real([np.sum(np.array([0.1, 0.2, -0.1]) * np.exp(1j * kk * np.pi / 4 * np.arange(1, 4)))
                                     for kk in k])
        assert np.allclose(c.stable[0], expect) and np.allclose(c.unstable[0], expect)

    def test_zero_eta_is_constant(self, cfg_n2_p1):
        c = linear_manifolds(cfg_n2_p1, None, [0.0], np.linspace(-5, 5, 11))
        assert np.all(c.stable == 0.5) and np.all(c.unstable == 0.5)

    def test_needs_spinodal(self):
        with pytest.raises(NotHyperbolicError):
            linear_manifolds(LatticeConfig(3, 0.4, 0.1), None, [1.0, 0.5], [0.0])

    def test_polycycle_zero_eta(self):
        cfg = LatticeConfig(4, 1.0, 0.1)
        pc = polycycle(cfg, None, np.zeros(4), np.linspace(-3, 3, 7))
        base = np.arange(1, 5) * 0.25
        assert np.allclose(pc.values, base + np.roll(base, -1))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), st.floats(-0.5, 0.5), st.sampled_from([0.2, 0.5, 0.9, 1.1, 1.6, 2.0]))
def test_random_uniphase_oracle(n, eps, P):
    rep = uniphase_spectrum(LatticeConfig(n, P, eps))
    assert rep.max_discrepancy < 1e-8
