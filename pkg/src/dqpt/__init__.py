"""Momentum-space diagnostics of dynamical quantum phase transitions in
transverse-field Ising and SSH chains after a sudden quench."""

from .criticality import CriticalPoint, critical_times, find_critical_momenta, verify_triad
from .diagnostics import entropy, loschmidt_amplitude, loschmidt_echo, otoc, rate_function
from .models import GaplessPointError, Model, ModeGrid, QuenchSpec, SshParams, TfiParams
from .quench import ModeState, mode_state
from .sweep import CuspReport, SweepConfig, detect_cusps, run_sweep

__version__ = "0.1.0"

__all__ = [
    "CriticalPoint",
    "CuspReport",
    "GaplessPointError",
    "ModeGrid",
    "ModeState",
    "Model",
    "QuenchSpec",
    "SshParams",
    "SweepConfig",
    "TfiParams",
    "critical_times",
    "detect_cusps",
    "entropy",
    "find_critical_momenta",
    "loschmidt_amplitude",
    "loschmidt_echo",
    "mode_state",
    "otoc",
    "rate_function",
    "run_sweep",
    "verify_triad",
]
