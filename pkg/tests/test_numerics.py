from __future__ import annotations

import cmath
import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from phasewave.numerics import bracketed_root, solve_quadratic

coef = st.floats(-1e3, 1e3, allow_nan=False).filter(lambda x: abs(x) > 1e-3)


def test_bracketed_root_sqrt2():
    r = bracketed_root(lambda x: x * x - 2, 0.0, 2.0, lambda x: 2 * x)
    assert r == pytest.approx(math.sqrt(2), abs=1e-15)


def test_bracketed_root_endpoint_and_no_sign_change():
    assert bracketed_root(lambda x: x, 0.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        bracketed_root(lambda x: x * x + 1, -1.0, 1.0)


def test_conjugate_pair_is_exact():
    r1, r2 = solve_quadratic(1.0, 0.8, 8.0)
    assert r1 == r2.conjugate()
    assert r1 == pytest.approx(-0.4 + 2.8j, abs=1e-14)


def test_cancellation_free_small_root():
    r1, r2 = solve_quadratic(1.0, -1e8, 1.0)
    assert abs(r2 - 1e-8) < 1e-22


def test_complex_coefficients():
    a, b, c = 1.0, 2 + 1j, -3j
    for r in solve_quadratic(a, b, c):
        assert abs(a * r * r + b * r + c) < 1e-12


def test_zero_leading_coefficient():
    with pytest.raises(ZeroDivisionError):
        solve_quadratic(0.0, 1.0, 1.0)


@settings(max_examples=200, deadline=None)
@given(coef, st.floats(-1e3, 1e3, allow_nan=False, allow_subnormal=False),
       st.floats(-1e3, 1e3, allow_nan=False, allow_subnormal=False))
def test_vieta(a, b, c):
    r1, r2 = solve_quadratic(a, b, c)
    scale_s = max(abs(b / a), abs(r1), abs(r2), 1e-300)
    assert abs((r1 + r2) + b / a) <= 1e-12 * scale_s * 4
    assume(abs(c) > 1e-6)
    assert abs(r1 * r2 - c / a) <= 1e-12 * max(abs(c / a), abs(r1) * abs(r2)) * 4


@settings(max_examples=100, deadline=None)
@given(st.complex_numbers(max_magnitude=100), st.complex_numbers(max_magnitude=100))
def test_complex_roots_satisfy_polynomial(b, c):
    r1, r2 = solve_quadratic(1.0, b, c)
    scale = 1 + abs(b) ** 2 + abs(c)
    assert abs(r1 * r1 + b * r1 + c) <= 1e-10 * scale
    assert abs(r2 * r2 + b * r2 + c) <= 1e-10 * scale
