from __future__ import annotations

from ..circuit import Circuit, CircuitBuilder
from ..histogram import ShotHistogram
from .core import BenchmarkInstance, histogram_fidelity


def ghz_circuit(n: int) -> Circuit:
    """Hadamard on qubit 0, a CX ladder, then readout of every qubit."""
    if n < 2:
        raise ValueError("GHZ needs at least 2 qubits")
    builder = CircuitBuilder(n, n)
    builder.h(0)
    for i in range(n - 1):
        builder.cx(i, i + 1)
    return builder.measure_all().build()


def ghz_ideal_distribution(n: int) -> dict[str, float]:
    return {"0" * n: 0.5, "1" * n: 0.5}


def ghz_instance(n: int) -> BenchmarkInstance:
    return BenchmarkInstance("ghz", n, {}, (ghz_circuit(n),), {"distribution": ghz_ideal_distribution(n)})


def ghz_score(hist: ShotHistogram) -> float:
    if hist.shots == 0:
        raise ValueError("empty histogram")
    return histogram_fidelity(hist, ghz_ideal_distribution(hist.width))
