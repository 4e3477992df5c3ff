"""Application-level quantum benchmark toolkit.

Circuit generation, static feature profiling, noisy simulation, scoring and
suite analysis.
"""

from __future__ import annotations

from .circuit import Circuit, CircuitBuilder, Instruction, QubitId
from .features import FeatureVector, compute_features
from .histogram import ShotHistogram
from .pauli import Observable, PauliString
from .qasm import QasmError, emit_qasm, parse_qasm
from .simulator import NoiseModel, sample, simulate_state

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "CircuitBuilder",
    "FeatureVector",
    "Instruction",
    "NoiseModel",
    "Observable",
    "PauliString",
    "QasmError",
    "QubitId",
    "ShotHistogram",
    "compute_features",
    "emit_qasm",
    "parse_qasm",
    "sample",
    "simulate_state",
]
