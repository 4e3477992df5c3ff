"""Bit-flip and phase-flip repetition-code proxy applications.

Layout: ``2k - 1`` qubits with data on even indices and ancillas in between.
Each round checks neighbouring data parities onto the ancilla, then measures
and resets every ancilla into the ``syn`` register. A barrier precedes the
final readout of all qubits into register ``c``; the score compares that
final readout (ancillas ideally back in ``|0>``) against the ideal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..circuit import CircuitBuilder, ClbitId
from ..histogram import ShotHistogram
from .core import BenchmarkInstance, histogram_fidelity


@dataclass(frozen=True)
class ECConfig:
    data_qubits: int
    rounds: int = 1
    pattern: str = ""

    def __post_init__(self) -> None:
        if self.data_qubits < 2:
            raise ValueError("need at least 2 data qubits")
        if self.rounds < 1:
            raise ValueError("need at least one round")

    def pattern_for(self, alphabet: str) -> str:
        pattern = self.pattern or (alphabet * self.data_qubits)[: self.data_qubits]
        if len(pattern) != self.data_qubits or set(pattern) - set(alphabet):
            raise ValueError(f"pattern {pattern!r} must be {self.data_qubits} symbols from {alphabet!r}")
        return pattern


def _build(cfg: ECConfig, phase: bool, pattern: str):
    k, r = cfg.data_qubits, cfg.rounds
    n = 2 * k - 1
    builder = CircuitBuilder(n, n)
    syn = builder.add_creg("syn", (k - 1) * r)
    for i, symbol in enumerate(pattern):
        if symbol in "1-":
            builder.x(2 * i)
        if phase:
            builder.h(2 * i)
    for rnd in range(r):
        if phase:
            for i in range(k):
                builder.h(2 * i)
        for a in range(k - 1):
            builder.cx(2 * a, 2 * a + 1)
            builder.cx(2 * a + 2, 2 * a + 1)
        if phase:
            for i in range(k):
                builder.h(2 * i)
        for a in range(k - 1):
            builder.measure(2 * a + 1, ClbitId(syn, rnd * (k - 1) + a))
            builder.reset(2 * a + 1)
    builder.barrier()
    builder.measure_all()
    return builder.build()


def _instance(family: str, cfg: ECConfig, pattern: str, ideal: dict[str, float]) -> BenchmarkInstance:
    circuit = _build(cfg, family == "phase_code", pattern)
    params = {"rounds": cfg.rounds, "pattern": pattern}
    payload = {"distribution": ideal, "bits": list(range(2 * cfg.data_qubits - 1))}
    return BenchmarkInstance(family, cfg.data_qubits, params, (circuit,), payload)


def bit_code_circuit(cfg: ECConfig) -> BenchmarkInstance:
    pattern = cfg.pattern_for("01")
    final = "0".join(pattern)
    return _instance("bit_code", cfg, pattern, {final: 1.0})


def phase_code_circuit(cfg: ECConfig) -> BenchmarkInstance:
    """Data qubits start in ``|+>``/``|->`` per pattern; readout is in the Z basis,
    so the ideal is uniform over data values with ancillas at 0."""
    pattern = cfg.pattern_for("+-")
    k = cfg.data_qubits
    weight = 1.0 / 2**k
    ideal = {"0".join(bits): weight for bits in itertools.product("01", repeat=k)}
    return _instance("phase_code", cfg, pattern, ideal)


def ec_score(hist: ShotHistogram, instance: BenchmarkInstance) -> float:
    bits = instance.ideal["bits"]
    return histogram_fidelity(hist.marginal(bits), instance.ideal["distribution"])
