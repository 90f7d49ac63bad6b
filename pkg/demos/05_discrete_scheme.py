"""The space-time discretisation: amplification factors and a growing run.

Run: python3 demos/05_discrete_scheme.py
"""

from __future__ import annotations

import math

from phasewave.discrete import SchemeGrid, classify_discrete_uniphase, oracle_roots, run_discrete, seeded_state
from phasewave.spectral import mode_mu
from phasewave.stress import DEFAULT_STRESS

for h2, eps in [(0.2, 0.05), (0.5, 0.0), (0.8, 0.2)]:
    g = SchemeGrid(4, h2, 0.4, eps)
    rep = classify_discrete_uniphase(g)
    agree, total = rep.agreement()
    print(f"h2={h2} eps={eps}: {rep.classification.value}, max |lambda| = {rep.max_modulus:.6f}, "
          f"conditions agree {agree}/{total}, oracle eigenvalues {len(oracle_roots(g))}")

# An undamped grid tuned so the top mode amplifies by 1.01 per step.
n, P = 4, 0.4
tau = float(DEFAULT_STRESS.dsigma(P))
h2 = math.sqrt((1.01 + 1 / 1.01 + 2) / (n * tau * abs(mode_mu(n - 1, n))))
g = SchemeGrid(n, h2, P)
traj = run_discrete(g, seeded_state(g, n - 1, 1e-12), 1000)
print(f"h2={h2:.5f}: predicted ratio {classify_discrete_uniphase(g).max_modulus:.5f}, "
      f"measured {traj.growth_ratio(skip=50):.5f}")
