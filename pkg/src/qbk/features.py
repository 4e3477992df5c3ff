"""Hardware-agnostic application features of a circuit.

All six features lie in ``[0, 1]``. The per-feature functions expect a circuit
whose terminal readout has already been removed; :func:`compute_features`
does that once and evaluates all six.

Counting conventions: ``n_g`` is every non-barrier instruction (unitaries,
mid-circuit measurements and resets); ``n_e`` is the number of two-qubit
unitaries; depth ``d`` is the ASAP moment count, in which barriers occupy a
moment. The qubit count is the number of declared qubits.
"""

from __future__ import annotations

from dataclasses import astuple, dataclass

from .circuit import Circuit, dependency_dag, interaction_graph, schedule_moments, strip_terminal_measurements

AXES = ("communication", "critical_depth", "entanglement", "parallelism", "liveness", "measurement")


@dataclass(frozen=True)
class FeatureVector:
    communication: float
    critical_depth: float
    entanglement: float
    parallelism: float
    liveness: float
    measurement: float

    def as_tuple(self) -> tuple[float, ...]:
        return astuple(self)

    @classmethod
    def zeros(cls) -> FeatureVector:
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def _gate_count(circuit: Circuit) -> int:
    return sum(1 for inst in circuit.instructions if inst.name != "barrier")


def _two_qubit_count(circuit: Circuit) -> int:
    return sum(1 for inst in circuit.instructions if inst.is_two_qubit_gate)


def program_communication(circuit: Circuit) -> float:
    """Normalized average degree of the interaction graph."""
    n = circuit.num_qubits
    if n < 2:
        return 0.0
    graph = interaction_graph(circuit)
    return 2 * len(graph.edges) / (n * (n - 1))


def critical_depth(circuit: Circuit) -> float:
    """Fraction of two-qubit gates lying on the critical path.

    Among several longest paths the one holding the most two-qubit gates is used.
    """
    n_e = _two_qubit_count(circuit)
    if n_e == 0:
        return 0.0
    weight = [1 if inst.is_two_qubit_gate else 0 for inst in circuit.instructions]
    path = dependency_dag(circuit).longest_path(weight)
    return sum(weight[v] for v in path) / n_e


def entanglement_ratio(circuit: Circuit) -> float:
    n_g = _gate_count(circuit)
    return _two_qubit_count(circuit) / n_g if n_g else 0.0


def parallelism(circuit: Circuit) -> float:
    n = circuit.num_qubits
    d = schedule_moments(circuit).depth
    if n <= 1 or d == 0:
        return 0.0
    value = (_gate_count(circuit) / d - 1) / (n - 1)
    return min(1.0, max(0.0, value))


def liveness(circuit: Circuit) -> float:
    sched = schedule_moments(circuit)
    n, d = circuit.num_qubits, sched.depth
    if n == 0 or d == 0:
        return 0.0
    busy = 0
    for moment in sched.moments:
        busy += sum(len(circuit.instructions[i].qubits) for i in moment if circuit.instructions[i].name != "barrier")
    return busy / (n * d)


def measurement_ratio(circuit: Circuit) -> float:
    """Share of moments holding a mid-circuit measurement or reset."""
    sched = schedule_moments(circuit)
    if sched.depth == 0:
        return 0.0
    layers = sum(
        1 for moment in sched.moments if any(circuit.instructions[i].name in ("measure", "reset") for i in moment)
    )
    return layers / sched.depth


def compute_features(circuit: Circuit) -> FeatureVector:
    stripped = strip_terminal_measurements(circuit)
    return FeatureVector(
        communication=program_communication(stripped),
        critical_depth=critical_depth(stripped),
        entanglement=entanglement_ratio(stripped),
        parallelism=parallelism(stripped),
        liveness=liveness(stripped),
        measurement=measurement_ratio(stripped),
    )


def circuit_profile(circuit: Circuit) -> dict[str, int]:
    """Conventional size metrics: depth, qubit count and two-qubit gate count."""
    stripped = strip_terminal_measurements(circuit)
    return {
        "depth": schedule_moments(stripped).depth,
        "num_qubits": circuit.num_qubits,
        "two_qubit_gates": _two_qubit_count(stripped),
    }
