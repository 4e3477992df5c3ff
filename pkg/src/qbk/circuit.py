"""Circuit intermediate representation, ASAP scheduling and circuit graphs.

A :class:`Circuit` is an immutable, ordered list of :class:`Instruction` objects
over named quantum and classical registers. Everything else in the package
(features, QASM, simulation) consumes this representation.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

# name -> (number of qubits, number of real parameters)
GATES: dict[str, tuple[int, int]] = {
    "h": (1, 0),
    "x": (1, 0),
    "y": (1, 0),
    "z": (1, 0),
    "s": (1, 0),
    "sdg": (1, 0),
    "t": (1, 0),
    "tdg": (1, 0),
    "rx": (1, 1),
    "ry": (1, 1),
    "rz": (1, 1),
    "cx": (2, 0),
    "cz": (2, 0),
    "swap": (2, 0),
    "rzz": (2, 1),
}
NON_UNITARY = ("measure", "reset", "barrier")


@dataclass(frozen=True, order=True)
class QubitId:
    register: str
    index: int

    def __str__(self) -> str:
        return f"{self.register}[{self.index}]"


@dataclass(frozen=True, order=True)
class ClbitId:
    register: str
    index: int

    def __str__(self) -> str:
        return f"{self.register}[{self.index}]"


@dataclass(frozen=True)
class Register:
    name: str
    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"register {self.name!r} must have positive size")


@dataclass(frozen=True)
class Instruction:
    """One circuit operation.

    ``name`` is a lowercase gate tag from :data:`GATES` or one of ``measure``,
    ``reset``, ``barrier``. ``clbit`` is set for ``measure`` only.
    """

    name: str
    qubits: tuple[QubitId, ...]
    params: tuple[float, ...] = ()
    clbit: ClbitId | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.name}: duplicate qubit in {self.qubits}")
        if self.name in GATES:
            nq, npar = GATES[self.name]
            if len(self.qubits) != nq:
                raise ValueError(f"{self.name} acts on {nq} qubit(s), got {len(self.qubits)}")
            if len(self.params) != npar:
                raise ValueError(f"{self.name} takes {npar} parameter(s), got {len(self.params)}")
            if not all(math.isfinite(p) for p in self.params):
                raise ValueError(f"{self.name}: non-finite angle")
        elif self.name in ("measure", "reset"):
            if len(self.qubits) != 1 or self.params:
                raise ValueError(f"{self.name} acts on exactly one qubit without parameters")
        elif self.name == "barrier":
            if not self.qubits or self.params:
                raise ValueError("barrier needs at least one qubit and no parameters")
        else:
            raise ValueError(f"unsupported instruction {self.name!r}")
        if (self.clbit is None) == (self.name == "measure"):
            raise ValueError("a classical target is required for measure and only for measure")

    @property
    def is_unitary(self) -> bool:
        return self.name in GATES

    @property
    def is_two_qubit_gate(self) -> bool:
        return self.name in GATES and len(self.qubits) == 2


@dataclass(frozen=True)
class Circuit:
    qregs: tuple[Register, ...]
    cregs: tuple[Register, ...] = ()
    instructions: tuple[Instruction, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "qregs", tuple(self.qregs))
        object.__setattr__(self, "cregs", tuple(self.cregs))
        object.__setattr__(self, "instructions", tuple(self.instructions))
        names = [r.name for r in self.qregs + self.cregs]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate register names in {names}")
        qsizes = {r.name: r.size for r in self.qregs}
        csizes = {r.name: r.size for r in self.cregs}
        for inst in self.instructions:
            for q in inst.qubits:
                if qsizes.get(q.register, 0) <= q.index or q.index < 0:
                    raise ValueError(f"{inst.name}: undeclared qubit {q}")
            c = inst.clbit
            if c is not None and (csizes.get(c.register, 0) <= c.index or c.index < 0):
                raise ValueError(f"{inst.name}: undeclared classical bit {c}")

    @cached_property
    def qubits(self) -> tuple[QubitId, ...]:
        return tuple(QubitId(r.name, i) for r in self.qregs for i in range(r.size))

    @cached_property
    def clbits(self) -> tuple[ClbitId, ...]:
        return tuple(ClbitId(r.name, i) for r in self.cregs for i in range(r.size))

    @cached_property
    def qubit_index(self) -> dict[QubitId, int]:
        return {q: i for i, q in enumerate(self.qubits)}

    @cached_property
    def clbit_index(self) -> dict[ClbitId, int]:
        return {c: i for i, c in enumerate(self.clbits)}

    @property
    def num_qubits(self) -> int:
        return sum(r.size for r in self.qregs)

    @property
    def num_clbits(self) -> int:
        return sum(r.size for r in self.cregs)

    def __len__(self) -> int:
        return len(self.instructions)

    def replace_instructions(self, instructions: Iterable[Instruction]) -> Circuit:
        return Circuit(self.qregs, self.cregs, tuple(instructions))

    def approx_equal(self, other: Circuit, atol: float = 1e-10) -> bool:
        """Structural equality with angles compared to ``atol``."""
        if self.qregs != other.qregs or self.cregs != other.cregs:
            return False
        if len(self.instructions) != len(other.instructions):
            return False
        for a, b in zip(self.instructions, other.instructions):
            if (a.name, a.qubits, a.clbit) != (b.name, b.qubits, b.clbit):
                return False
            if any(abs(x - y) > atol for x, y in zip(a.params, b.params)):
                return False
        return True


class CircuitBuilder:
    """Mutable helper for assembling a :class:`Circuit`.

    Integer qubit/clbit arguments refer to the first declared quantum/classical
    register respectively.
    """

    def __init__(self, num_qubits: int = 0, num_clbits: int = 0, qreg: str = "q", creg: str = "c"):
        self.qregs: list[Register] = []
        self.cregs: list[Register] = []
        self.instructions: list[Instruction] = []
        if num_qubits:
            self.add_qreg(qreg, num_qubits)
        if num_clbits:
            self.add_creg(creg, num_clbits)

    def add_qreg(self, name: str, size: int) -> str:
        self.qregs.append(Register(name, size))
        return name

    def add_creg(self, name: str, size: int) -> str:
        self.cregs.append(Register(name, size))
        return name

    def _q(self, q: int | QubitId) -> QubitId:
        return q if isinstance(q, QubitId) else QubitId(self.qregs[0].name, q)

    def _c(self, c: int | ClbitId) -> ClbitId:
        return c if isinstance(c, ClbitId) else ClbitId(self.cregs[0].name, c)

    def gate(self, name: str, *qubits: int | QubitId, params: Sequence[float] = ()) -> CircuitBuilder:
        self.instructions.append(Instruction(name, tuple(self._q(q) for q in qubits), tuple(params)))
        return self

    def h(self, q):
        return self.gate("h", q)

    def x(self, q):
        return self.gate("x", q)

    def s(self, q):
        return self.gate("s", q)

    def sdg(self, q):
        return self.gate("sdg", q)

    def rx(self, theta: float, q):
        return self.gate("rx", q, params=(theta,))

    def ry(self, theta: float, q):
        return self.gate("ry", q, params=(theta,))

    def rz(self, theta: float, q):
        return self.gate("rz", q, params=(theta,))

    def cx(self, control, target):
        return self.gate("cx", control, target)

    def cz(self, a, b):
        return self.gate("cz", a, b)

    def swap(self, a, b):
        return self.gate("swap", a, b)

    def rzz(self, theta: float, a, b):
        return self.gate("rzz", a, b, params=(theta,))

    def measure(self, q, c) -> CircuitBuilder:
        self.instructions.append(Instruction("measure", (self._q(q),), clbit=self._c(c)))
        return self

    def reset(self, q) -> CircuitBuilder:
        self.instructions.append(Instruction("reset", (self._q(q),)))
        return self

    def barrier(self, *qubits) -> CircuitBuilder:
        if not qubits:
            targets = tuple(QubitId(r.name, i) for r in self.qregs for i in range(r.size))
        else:
            targets = tuple(self._q(q) for q in qubits)
        self.instructions.append(Instruction("barrier", targets))
        return self

    def measure_all(self) -> CircuitBuilder:
        """Measure qubit ``i`` of the first register into classical bit ``i``."""
        for i in range(self.qregs[0].size):
            self.measure(i, i)
        return self

    def extend(self, circuit: Circuit) -> CircuitBuilder:
        """Append the instructions of ``circuit`` (its registers must exist here)."""
        self.instructions.extend(circuit.instructions)
        return self

    def build(self) -> Circuit:
        return Circuit(tuple(self.qregs), tuple(self.cregs), tuple(self.instructions))


# ---------------------------------------------------------------------------
# Scheduling and graphs


@dataclass(frozen=True)
class MomentSchedule:
    moments: tuple[tuple[int, ...], ...]
    moment_of: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.moments)


@dataclass(frozen=True)
class InteractionGraph:
    vertices: tuple[QubitId, ...]
    edges: frozenset[tuple[QubitId, QubitId]]

    def degree(self, q: QubitId) -> int:
        return sum(1 for e in self.edges if q in e)

    def degrees(self) -> dict[QubitId, int]:
        deg = dict.fromkeys(self.vertices, 0)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg


@dataclass(frozen=True)
class DependencyDag:
    num_nodes: int
    edges: tuple[tuple[int, int], ...]
    predecessors: tuple[tuple[int, ...], ...] = field(repr=False)

    def longest_path(self, weight: Sequence[int] | None = None) -> list[int]:
        """Return a node-count-maximal path.

        Ties between equally long paths are broken by maximizing the summed
        ``weight`` of the path nodes, then by the earliest end node.
        """
        if self.num_nodes == 0:
            return []
        w = weight if weight is not None else [0] * self.num_nodes
        best: list[tuple[int, int]] = []
        back: list[int] = []
        # node ids are already a topological order
        for v in range(self.num_nodes):
            key, arg = (1, w[v]), -1
            for u in self.predecessors[v]:
                cand = (best[u][0] + 1, best[u][1] + w[v])
                if cand > key:
                    key, arg = cand, u
            best.append(key)
            back.append(arg)
        end = max(range(self.num_nodes), key=lambda v: (best[v], -v))
        path = [end]
        while back[path[-1]] != -1:
            path.append(back[path[-1]])
        return path[::-1]


def strip_terminal_measurements(circuit: Circuit) -> Circuit:
    """Drop measurements that are the trailing operations on their qubit.

    A measurement is removed when nothing but further measurements or barriers
    follow it on that qubit. Resets, unitaries, barriers and mid-circuit
    measurements are kept. Idempotent.
    """
    trailing = dict.fromkeys(circuit.qubits, True)
    kept: list[Instruction] = []
    for inst in reversed(circuit.instructions):
        if inst.name == "measure" and trailing[inst.qubits[0]]:
            continue
        if inst.name != "barrier":
            for q in inst.qubits:
                trailing[q] = False
        kept.append(inst)
    kept.reverse()
    if len(kept) == len(circuit.instructions):
        return circuit
    return circuit.replace_instructions(kept)


def schedule_moments(circuit: Circuit) -> MomentSchedule:
    """Greedy as-soon-as-possible layering. Barriers occupy a moment too."""
    free: dict[QubitId, int] = {}
    moment_of: list[int] = []
    moments: list[list[int]] = []
    for i, inst in enumerate(circuit.instructions):
        m = max((free.get(q, 0) for q in inst.qubits), default=0)
        for q in inst.qubits:
            free[q] = m + 1
        if m == len(moments):
            moments.append([])
        moments[m].append(i)
        moment_of.append(m)
    return MomentSchedule(tuple(tuple(m) for m in moments), tuple(moment_of))


def interaction_graph(circuit: Circuit) -> InteractionGraph:
    edges = set()
    for inst in circuit.instructions:
        if inst.is_two_qubit_gate:
            a, b = sorted(inst.qubits)
            edges.add((a, b))
    return InteractionGraph(circuit.qubits, frozenset(edges))


def dependency_dag(circuit: Circuit) -> DependencyDag:
    last: dict[QubitId, int] = {}
    edges: list[tuple[int, int]] = []
    preds: list[tuple[int, ...]] = []
    for v, inst in enumerate(circuit.instructions):
        ps = sorted({last[q] for q in inst.qubits if q in last})
        edges.extend((u, v) for u in ps)
        preds.append(tuple(ps))
        for q in inst.qubits:
            last[q] = v
    return DependencyDag(len(circuit.instructions), tuple(edges), tuple(preds))
