"""Driving the command-line tool: a damping sweep across the stability boundary.

Run: python3 demos/06_cli_sweep.py
"""

from __future__ import annotations

import tempfile
from pathlib import Path

from phasewave import io
from phasewave.cli import main

CONFIG = """\
[lattice]
n = 4
P = 0.4
eps = 0.0

[sweep]
param = eps
from = -0.2
to = 0.2
steps = 5
"""

with tempfile.TemporaryDirectory() as d:
    cfg = Path(d) / "run.cfg"
    cfg.write_text(CONFIG)
    out = Path(d) / "sweep.csv"
    status = main(["sweep", "--config", str(cfg), "--out", str(out)])
    print("exit status", status)
    cols = io.read_csv(out)
    for v, c, m in zip(cols["param_value"], cols["classification"], cols["max_re_lambda_or_max_modulus"]):
        print(f"  eps = {v:+.2f}: {c:<22} max Re = {m:+.5f}")
