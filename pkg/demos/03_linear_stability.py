"""Linear stability of steady states: mode roots against the dense Jacobian.

Run: python3 demos/03_linear_stability.py
"""

from __future__ import annotations

from phasewave.lattice import LatticeConfig
from phasewave.spectral import analyze, uniphase_spectrum
from phasewave.steady import all_solutions

# The uniphase state: stable, a center or a saddle depending on tau and eps.
for P, eps in [(0.4, 0.1), (0.4, 0.0), (1.0, 0.1)]:
    rep = uniphase_spectrum(LatticeConfig(4, P, eps))
    agree, total = rep.agreement()
    print(f"uniphase n=4 P={P} eps={eps}: {rep.classification.value}, "
          f"max Re = {rep.max_real:+.5f}, oracle gap = {rep.max_discrepancy:.1e}, "
          f"closed-form conditions agree {agree}/{total}")
    for m in rep.modes:
        print(f"    k={m.k} mu={m.mu:+.4f} {m.tag.value:<13} roots {m.roots[0]:.4f}, {m.roots[1]:.4f}")

# Two-phase states of a damped lattice.
cfg = LatticeConfig(4, 1.0, 0.2)
for sol in all_solutions(cfg)[1:]:
    rep = analyze(cfg, sol)
    print(f"{sol.arrangement} ({sol.membership.value}): {rep.classification.value}, "
          f"max Re = {rep.max_real:+.5f}")
