"""Steady states: the uniphase line and every two-phase arrangement.

Run: python3 demos/02_steady_states.py
"""

from __future__ import annotations

from phasewave.lattice import LatticeConfig
from phasewave.steady import all_solutions, two_phase_families

for n, P in [(2, 1.0), (3, 1.0), (4, 1.0), (4, 2.0)]:
    cfg = LatticeConfig(n, P)
    sols = all_solutions(cfg)
    print(f"n = {n}, P = {P}: {len(sols)} steady solutions")
    for fam in two_phase_families(cfg):
        flag = " (band edge)" if fam.degenerate else ""
        print(f"  k_alpha = {fam.k_alpha}: alpha = {fam.alpha:.6f}, beta = {fam.beta:.6f}, "
              f"C = {fam.C:.6f}, {fam.total} arrangements{flag}")
    for s in sols:
        print(f"    {s.kind.value:<9} {s.arrangement:<6} {s.membership.value:<7} u = {s.u.round(6)}")
