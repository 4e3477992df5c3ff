from __future__ import annotations

from ..circuit import CircuitBuilder
from ..histogram import ShotHistogram
from ..pauli import Observable, expectation_from_histogram, mermin_operator, shared_basis_circuit
from .core import BenchmarkInstance, clamp01


def classical_bound(n: int) -> float:
    """Largest Mermin expectation allowed by local hidden variables."""
    return 2.0 ** ((n - n % 2) / 2)


def mermin_bell_circuits(n: int) -> BenchmarkInstance:
    """GHZ state with relative phase i, rotated into the Mermin operator's shared basis."""
    if n < 2:
        raise ValueError("Mermin-Bell needs at least 2 qubits")
    rotation, diagonal = shared_basis_circuit(mermin_operator(n))
    builder = CircuitBuilder(n, n)
    builder.h(0).s(0)
    for i in range(n - 1):
        builder.cx(i, i + 1)
    builder.extend(rotation).measure_all()
    ideal = {"expectation": 2.0 ** (n - 1), "observable": diagonal.to_list()}
    return BenchmarkInstance("mermin", n, {}, (builder.build(),), ideal)


def mermin_score_from_observable(hist: ShotHistogram, diagonal: Observable) -> float:
    n = diagonal.num_qubits
    value = expectation_from_histogram(diagonal, hist)
    return clamp01((value + 2.0 ** (n - 1)) / 2.0**n)


def mermin_score(hist: ShotHistogram, n: int) -> float:
    _, diagonal = shared_basis_circuit(mermin_operator(n))
    return mermin_score_from_observable(hist, diagonal)
