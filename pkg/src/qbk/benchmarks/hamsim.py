"""Trotterized dynamics of a driven transverse-field Ising chain.

``H(t) = -J_z sum_i Z_i Z_{i+1} - eps_ph cos(omega_ph t) sum_i X_i``. The
benchmark observable is the average magnetization ``m_z = (1/N) sum_i <Z_i>``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..circuit import Circuit, CircuitBuilder
from ..histogram import ShotHistogram, as_histogram
from ..simulator import simulate_state
from .core import BenchmarkInstance, clamp01

MAX_IDEAL_QUBITS = 20


@dataclass(frozen=True)
class TFIMParams:
    J_z: float = 1.0
    eps_ph: float = 1.0
    omega_ph: float = 2 * math.pi
    dt: float = 0.1
    steps: int = 10

    def __post_init__(self) -> None:
        if self.steps < 0:
            raise ValueError("steps must be non-negative")
        if not self.dt > 0:
            raise ValueError("dt must be positive")

    def to_dict(self) -> dict[str, float | int]:
        return asdict(self)


def trotter_circuit(n: int, params: TFIMParams, measure: bool = True) -> Circuit:
    builder = CircuitBuilder(n, n if measure else 0)
    for s in range(params.steps):
        t = s * params.dt
        for q in range(n - 1):
            builder.rzz(-2 * params.J_z * params.dt, q, q + 1)
        angle = -2 * params.eps_ph * math.cos(params.omega_ph * t) * params.dt
        for q in range(n):
            builder.rx(angle, q)
    if measure:
        builder.measure_all()
    return builder.build()


def ideal_magnetization(n: int, params: TFIMParams) -> float:
    if n > MAX_IDEAL_QUBITS:
        raise ValueError(f"ideal magnetization needs a statevector of at most {MAX_IDEAL_QUBITS} qubits")
    probs = simulate_state(trotter_circuit(n, params, measure=False)).probabilities()
    idx = np.arange(1 << n)
    ones = np.zeros(1 << n)
    for q in range(n):
        ones += (idx >> q) & 1
    return float(np.dot(probs, 1 - 2 * ones / n))


def hamsim_circuit(n: int, params: TFIMParams | None = None) -> BenchmarkInstance:
    params = params or TFIMParams()
    if n < 2:
        raise ValueError("Hamiltonian simulation needs at least 2 qubits")
    ideal = ideal_magnetization(n, params)
    return BenchmarkInstance(
        "hamsim", n, params.to_dict(), (trotter_circuit(n, params),), {"magnetization": ideal}
    )


def magnetization_from_histogram(hist: ShotHistogram) -> float:
    """Shot average of ``(1/N) sum_i (-1)^bit_i``."""
    h = as_histogram(hist)
    total = sum(count * (1 - 2 * key.count("1") / h.width) for key, count in h.counts.items())
    return total / h.shots


def hamsim_score(exp_mz: float, ideal_mz: float) -> float:
    return clamp01(1.0 - abs(ideal_mz - exp_mz) / 2.0)
