"""Small numerical kernels shared by the analysis modules.

Scalar root bracketing for the monotone stress branches and a
cancellation-free quadratic solver used for every mode polynomial.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable

from scipy.optimize import brentq

ROOT_XTOL = 1e-14


def bracketed_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    fprime: Callable[[float], float] | None = None,
    xtol: float = ROOT_XTOL,
) -> float:
    """Root of ``f`` on a sign-change bracket ``[lo, hi]``.

    The bracket is shrunk to width ``xtol`` and the midpoint is then given a
    single Newton correction when ``fprime`` is provided. The Newton step is
    discarded if it would leave the bracket.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError(f"no sign change on [{lo!r}, {hi!r}]")
    x = brentq(f, lo, hi, xtol=xtol, rtol=4 * 2.220446049250313e-16, maxiter=500)
    if fprime is not None:
        d = fprime(x)
        if d != 0.0 and math.isfinite(d):
            x_new = x - f(x) / d
            if min(lo, hi) <= x_new <= max(lo, hi) and abs(f(x_new)) <= abs(f(x)):
                x = x_new
    return x


def solve_quadratic(a: complex, b: complex, c: complex) -> tuple[complex, complex]:
    """Both roots of ``a z**2 + b z + c`` with ``a != 0``.

    Real coefficients with a negative discriminant give an exact conjugate
    pair. Otherwise the larger-magnitude root is formed first and the other
    follows from the product ``c / a``, which avoids cancellation.
    """
    if a == 0:
        raise ZeroDivisionError("leading coefficient vanishes")
    real_coeffs = all(complex(x).imag == 0.0 for x in (a, b, c))
    if real_coeffs:
        a, b, c = complex(a).real, complex(b).real, complex(c).real
        disc = b * b - 4.0 * a * c
        if disc < 0.0:
            re = -b / (2.0 * a) + 0.0
            im = abs(math.sqrt(-disc) / (2.0 * a))
            return complex(re, im), complex(re, -im)
        if disc == 0.0:
            r = -b / (2.0 * a) + 0.0
            return complex(r), complex(r)
        q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        if q == 0.0:
            return 0j, 0j
        r1, r2 = q / a, c / q
        return complex(max(r1, r2)), complex(min(r1, r2))

    a, b, c = complex(a), complex(b), complex(c)
    d = cmath.sqrt(b * b - 4.0 * a * c)
    # pick the sign that makes |b + s d| largest
    if (b.conjugate() * d).real < 0.0:
        d = -d
    q = -0.5 * (b + d)
    if q == 0:
        return 0j, 0j
    r1, r2 = q / a, c / q
    return (r1, r2) if r1.real >= r2.real else (r2, r1)
