"""Time integration: period of an undamped mode and the energy balance.

Run: python3 demos/04_simulation.py
"""

from __future__ import annotations

import math

import numpy as np

from phasewave.cli import modal_amplitude, zero_crossing_period
from phasewave.lattice import LatticeConfig, LatticeState, integrate, sine_mode

n, P = 4, 0.4
cfg = LatticeConfig(n, P, 0.0)
tau = float(cfg.stress.dsigma(P))
ubar = np.arange(1, n) * P / n
for k in range(1, n):
    T = math.pi / (n * math.sqrt(tau)) / math.sin(k * math.pi / (2 * n))
    traj = integrate(cfg, LatticeState.at_rest(ubar + 1e-4 * P * sine_mode(n, k)), T / 400, 10 * T)
    print(f"mode {k}: predicted period {T:.6f}, measured {zero_crossing_period(traj.t, modal_amplitude(traj, k)):.6f}")

# With damping the energy decays at exactly the dissipation rate.
damped = cfg.with_(eps=0.1)
traj = integrate(damped, LatticeState(0.0, ubar + 0.01, np.full(n - 1, 0.1)), 1e-3, 5.0)
V, D = traj.energy(), traj.dissipation()
rate = np.gradient(V, traj.dt)
print(f"damped: V {V[0]:.6f} -> {V[-1]:.6f}, "
      f"max |dV/dt - D| = {np.max(np.abs(rate - D)[2:-2]):.1e}")
