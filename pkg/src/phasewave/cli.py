"""Command-line entry point.

    phasewave <steady|analyze|simulate|discrete|sweep> --config FILE --out FILE
              [--solution SEL] [--run STEPS] [--jobs N]

Exit status is 0 on success, 2 for configuration or validation errors and 3
for numerical failures.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal
from pathlib import Path

import numpy as np
from scipy.signal import find_peaks

from . import io
from .config import RunConfig, load_config
from .discrete import (SchemeGrid, classify_discrete_uniphase, run_discrete,
                       seeded_state)
from .errors import PhasewaveError
from .lattice import LatticeConfig, LatticeState, default_dt, integrate, sine_mode
from .spectral import analyze, uniphase_modes, uniphase_spectrum
from .steady import all_solutions, uniphase

log = logging.getLogger("phasewave")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class SelectorError(PhasewaveError, ValueError):
    pass


def _sibling(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix)


# -- steady / analyze --------------------------------------------------------

def cmd_steady(cfg: RunConfig, out: Path) -> int:
    sols = all_solutions(cfg.lattice())
    io.write_json(out, [s.to_dict() for s in sols])
    return EXIT_OK


def select_solution(lat: LatticeConfig, selector: str):
    if selector == "uniphase":
        return uniphase(lat)
    try:
        idx = int(selector)
    except ValueError:
        raise SelectorError(f"unknown solution selector {selector!r}") from None
    sols = all_solutions(lat)
    if not 0 <= idx < len(sols):
        raise SelectorError(f"solution index {idx} outside 0..{len(sols) - 1}")
    return sols[idx]


def cmd_analyze(cfg: RunConfig, out: Path, selector: str = "uniphase") -> int:
    lat = cfg.lattice()
    report = analyze(lat, select_solution(lat, selector))
    d = report.to_dict()
    agree, applicable = report.agreement()
    d["max_re_lambda"] = report.max_real
    d["paper_condition_agreement"] = f"{agree}/{applicable}"
    io.write_json(out, d)
    return EXIT_OK


# -- simulate ------------------------------------------------------------------

def modal_amplitude(traj, k: int) -> np.ndarray:
    n = traj.cfg.n
    ubar = np.arange(1, n) * traj.cfg.P / n
    phi = sine_mode(n, k)
    return (traj.u - ubar) @ phi / (phi @ phi)


def zero_crossing_period(t: np.ndarray, a: np.ndarray) -> float:
    """Twice the mean spacing of sign changes, located by linear interpolation."""
    s = np.signbit(a)
    idx = np.nonzero(s[1:] != s[:-1])[0]
    if len(idx) < 3:
        return math.nan
    tc = t[idx] - a[idx] * (t[idx + 1] - t[idx]) / (a[idx + 1] - a[idx])
    return float(2.0 * (tc[-1] - tc[0]) / (len(tc) - 1))


def envelope_rate(t: np.ndarray, a: np.ndarray) -> float:
    """Exponential rate of ``|a|``: a fit through its peaks, or its late tail."""
    mag = np.abs(a)
    peaks, _ = find_peaks(mag)
    peaks = peaks[mag[peaks] > 0]
    if len(peaks) >= 3:
        return float(np.polyfit(t[peaks], np.log(mag[peaks]), 1)[0])
    half = len(t) // 2
    keep = mag[half:] > 0
    if keep.sum() < 2:
        return math.nan
    return float(np.polyfit(t[half:][keep], np.log(mag[half:][keep]), 1)[0])


def cmd_simulate(cfg: RunConfig, out: Path) -> int:
    lat = cfg.lattice()
    sim = cfg.require("simulate")
    if "t_end" not in sim:
        raise SelectorError("[simulate] needs 't_end'")
    k = sim.get("perturb_mode", 1)
    amp = sim.get("perturb_amp", 1e-4)
    ubar = np.arange(1, lat.n) * lat.P / lat.n
    state0 = LatticeState.at_rest(ubar + amp * lat.P * sine_mode(lat.n, k))
    dt = sim.get("dt", default_dt(lat, state0))
    seed = abs(amp * lat.P)
    threshold = max(0.5 * abs(lat.P), 1e3 * seed)
    traj = integrate(lat, state0, dt, sim["t_end"], max_deviation=threshold)
    io.write_trajectory_csv(out, traj)

    tau = float(lat.stress.dsigma(lat.P))
    modes = uniphase_modes(lat.n, lat.eps, tau)
    mode_roots = modes[k - 1].roots
    a = modal_amplitude(traj, k)
    summary = {
        "perturb_mode": k,
        "perturb_amp": amp,
        "dt": dt,
        "samples": len(traj),
        "t_final": float(traj.t[-1]),
        "truncated": traj.truncated,
        "reason": traj.reason,
        "nonfinite": traj.reason == "non-finite",
        "max_re_lambda": max(max(r.real for r in m.roots) for m in modes),
        "mode_max_re_lambda": max(r.real for r in mode_roots),
        "energy_initial": float(traj.energy()[0]),
        "energy_final": float(traj.energy()[-1]),
    }
    peak = float(np.max(np.abs(traj.u - ubar)))
    summary["growth_detected"] = bool(traj.truncated or peak > 10.0 * seed)
    if lat.eps == 0.0:
        summary["measured_period"] = zero_crossing_period(traj.t, a)
        summary["predicted_period"] = (2 * math.pi / abs(mode_roots[0].imag)
                                       if abs(mode_roots[0].imag) > 0 else math.nan)
    else:
        summary["measured_rate"] = envelope_rate(traj.t, a)
    io.write_json(_sibling(out, ".summary.json"), summary)
    return EXIT_OK


# -- discrete ------------------------------------------------------------------

def cmd_discrete(cfg: RunConfig, out: Path, run_steps: int | None = None) -> int:
    grid = cfg.grid()
    report = classify_discrete_uniphase(grid)
    d = report.to_dict()
    agree, applicable = report.agreement()
    d["paper_condition_agreement"] = f"{agree}/{applicable}"
    if run_steps is not None:
        if run_steps < 0:
            raise SelectorError("--run needs a non-negative step count")
        sim = cfg.section("simulate")
        worst = max(report.modes, key=lambda m: max(m.modulus))
        k = sim.get("perturb_mode", worst.k)
        if not 1 <= k <= grid.n - 1:
            raise SelectorError(f"perturb_mode {k} outside 1..{grid.n - 1}")
        traj = run_discrete(grid, seeded_state(grid, k, sim.get("perturb_amp", 1e-12)), run_steps)
        io.write_discrete_csv(_sibling(out, ".trajectory.csv"), traj)
        d["run"] = {
            "steps": run_steps,
            "perturb_mode": k,
            "growth_ratio": traj.growth_ratio(skip=min(50, run_steps // 10)),
            "predicted_ratio": max(report.modes[k - 1].modulus),
            "truncated": traj.truncated,
            "reason": traj.reason,
        }
    io.write_json(out, d)
    return EXIT_OK


# -- sweep ---------------------------------------------------------------------

def sweep_values(start: Decimal, stop: Decimal, steps: int) -> list[Decimal]:
    if steps == 1:
        return [start]
    width = (stop - start) / (steps - 1)
    return [start + i * width for i in range(steps)]


def _sweep_point(task):
    scheme, param, value, lat, h2 = task
    tau_scale = 1.0
    if param == "eps":
        lat = lat.with_(eps=value)
    elif param == "P":
        lat = lat.with_(P=value)
    elif param == "tau-scale":
        tau_scale = value
    elif param == "h2":
        h2 = value
    try:
        if scheme == "continuous":
            rep = uniphase_spectrum(lat, tau_scale=tau_scale)
            return value, rep.classification.value, rep.max_real, rep.agreement()
        grid = SchemeGrid(lat.n, h2, lat.P, lat.eps, lat.stress)
        rep = classify_discrete_uniphase(grid, tau_scale=tau_scale)
        return value, rep.classification.value, rep.max_modulus, rep.agreement()
    except ArithmeticError as exc:
        log.warning("sweep point %s=%r: %s", param, value, exc)
        return value, "Singular", math.nan, (0, 0)


def cmd_sweep(cfg: RunConfig, out: Path, jobs: int = 1) -> int:
    sw = cfg.require("sweep")
    for key in ("param", "from", "to", "steps"):
        if key not in sw:
            raise SelectorError(f"[sweep] needs '{key}'")
    param = sw["param"]
    scheme = sw.get("scheme", "discrete" if param == "h2" else "continuous")
    if scheme == "continuous" and param == "h2":
        raise SelectorError("h2 sweeps need scheme = discrete")
    lat = cfg.lattice()
    h2 = None
    if scheme == "discrete":
        h2 = cfg.grid().h2 if cfg.has("discrete") else None
        if h2 is None and param != "h2":
            raise SelectorError("discrete sweeps need a [discrete] section")
    values = [float(v) for v in sweep_values(sw.decimal("from"), sw.decimal("to"), sw["steps"])]
    tasks = [(scheme, param, v, lat, h2) for v in values]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    rows.sort(key=lambda r: r[0])
    io.write_sweep_csv(out, rows)
    return EXIT_OK


# -- entry -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phasewave", description="Phase-transition lattice analyses.")
    p.add_argument("command", choices=["steady", "analyze", "simulate", "discrete", "sweep"])
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--solution", default="uniphase", help="'uniphase' or an index into the steady list")
    p.add_argument("--run", type=int, default=None, metavar="STEPS", help="also iterate the discrete scheme")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = load_config(args.config)
        if args.command == "steady":
            return cmd_steady(cfg, args.out)
        if args.command == "analyze":
            return cmd_analyze(cfg, args.out, args.solution)
        if args.command == "simulate":
            return cmd_simulate(cfg, args.out)
        if args.command == "discrete":
            return cmd_discrete(cfg, args.out, args.run)
        return cmd_sweep(cfg, args.out, args.jobs)
    except ArithmeticError as exc:
        print(f"phasewave: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"phasewave: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
