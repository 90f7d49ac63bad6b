"""Steady states, linear stability and simulation of a damped lattice with non-monotone stress."""

from .stress import CubicStress, CriticalData, StressModel, DEFAULT_STRESS
from .lattice import LatticeConfig, LatticeState, Trajectory, integrate, step
from .steady import SteadySolution, all_solutions, enumerate_two_phase, uniphase
from .spectral import Classification, SpectrumReport, Tag, classify_two_phase, uniphase_spectrum

__all__ = [
    "CubicStress", "CriticalData", "StressModel", "DEFAULT_STRESS",
    "LatticeConfig", "LatticeState", "Trajectory", "integrate", "step",
    "SteadySolution", "all_solutions", "enumerate_two_phase", "uniphase",
    "Classification", "SpectrumReport", "Tag", "classify_two_phase", "uniphase_spectrum",
]
