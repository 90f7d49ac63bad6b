"""The non-monotone cubic stress law and its threshold strains.

Run: python3 demos/01_stress_law.py
"""

from __future__ import annotations

import numpy as np

from phasewave.stress import DEFAULT_STRESS, make_stress

s = DEFAULT_STRESS
cd = s.critical
print("stress: sigma(xi) = xi^3 + c2 xi^2 + c1 xi with", s)
print(f"  alpha_under = {cd.alpha_under:.6f}  alpha_bar  = {cd.alpha_bar:.6f}")
print(f"  beta_under  = {cd.beta_under:.6f}  beta_bar   = {cd.beta_bar:.6f}")
print(f"  sigma_under = {cd.sigma_under:.6f}  sigma_bar  = {cd.sigma_bar:.6f}")

# Every stress level inside the band has one strain on each rising branch.
for C in np.linspace(cd.sigma_under, cd.sigma_bar, 5):
    pair = s.conjugate_pair(C)
    print(f"  C = {C:.4f}: alpha = {pair.alpha:.6f}, beta = {pair.beta:.6f}")

# A monotone cubic has no spinodal interval and fails validation.
bad = make_stress("cubic", c2=0.0, c1=1.0)
print("monotone law valid?", bad.validate().ok)
print(bad.validate())
