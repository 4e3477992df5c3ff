"""Statevector and noisy trajectory simulation.

Amplitude index bit ``i`` is qubit ``i`` (qubits flattened in register
declaration order). Noisy execution unravels the channel into stochastic Pauli
trajectories, simulated in fixed-size blocks of shots. Each block draws from
its own keyed random stream, so a histogram depends only on
``(circuit, shots, noise, seed)`` and never on how blocks are scheduled.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._rng import keyed_generator
from .circuit import Circuit
from .histogram import ShotHistogram
from .pauli import Observable, expectation_from_histogram

MAX_QUBITS = 24
_BLOCK_AMPLITUDES = 1 << 20
_MAX_BLOCK = 1024

_S2 = 1 / math.sqrt(2)
_FIXED = {
    "h": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "t": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    "tdg": np.array([[1, 0], [0, np.exp(-1j * math.pi / 4)]], dtype=complex),
    "cx": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "cz": np.diag([1, 1, 1, -1]).astype(complex),
    "swap": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}


def gate_matrix(name: str, params: tuple[float, ...] = ()) -> np.ndarray:
    """Unitary of a supported gate; two-qubit matrices use ``|first second>`` order."""
    if name in _FIXED:
        return _FIXED[name]
    (theta,) = params
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if name == "rx":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if name == "ry":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if name == "rz":
        return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
    if name == "rzz":
        a, b = np.exp(-0.5j * theta), np.exp(0.5j * theta)
        return np.diag([a, b, b, a])
    raise ValueError(f"unknown gate {name!r}")


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing gate noise plus readout and reset errors."""

    p1: float = 0.0
    p2: float = 0.0
    p_meas: float = 0.0
    p_reset: float = 0.0

    def __post_init__(self) -> None:
        for name in ("p1", "p2", "p_meas", "p_reset"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} is not a probability")

    @classmethod
    def from_dict(cls, data: Mapping[str, float]) -> NoiseModel:
        unknown = set(data) - {"p1", "p2", "p_meas", "p_reset"}
        if unknown:
            raise ValueError(f"unknown noise parameters {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in data.items()})

    def to_dict(self) -> dict[str, float]:
        return {"p1": self.p1, "p2": self.p2, "p_meas": self.p_meas, "p_reset": self.p_reset}


NOISELESS = NoiseModel()


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    num_qubits: int

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def expectation(self, obs: Observable) -> float:
        """Exact expectation value of a Pauli observable."""
        return sum(c * pauli_expectation(self.amplitudes, p.letters) for c, p in obs.terms)


def pauli_expectation(amplitudes: np.ndarray, letters: str) -> float:
    n = len(letters)
    idx = np.arange(1 << n)
    flip = sum(1 << q for q, c in enumerate(letters) if c in "XY")
    phase = np.ones(1 << n, dtype=complex)
    for q, c in enumerate(letters):
        bit = (idx >> q) & 1
        if c == "Z":
            phase *= 1 - 2 * bit
        elif c == "Y":
            # Y|0> = i|1>, Y|1> = -i|0>; phase indexed by the input bit
            phase *= 1j * (1 - 2 * bit)
    # (P psi)[i ^ flip] = phase[i] * psi[i]
    p_psi = np.empty_like(amplitudes, dtype=complex)
    p_psi[idx ^ flip] = phase * amplitudes
    return float(np.real(np.vdot(amplitudes, p_psi)))


# ---------------------------------------------------------------------------
# batched kernels; ``psi`` has shape (B, 2**n)


def _apply_1q(psi: np.ndarray, mat: np.ndarray, q: int, n: int) -> np.ndarray:
    b = psi.shape[0]
    view = psi.reshape(b, 1 << (n - 1 - q), 2, 1 << q)
    return np.ascontiguousarray(np.einsum("ij,xajc->xaic", mat, view)).reshape(b, -1)


def _apply_2q(psi: np.ndarray, mat: np.ndarray, qa: int, qb: int, n: int) -> np.ndarray:
    b = psi.shape[0]
    hi, lo = max(qa, qb), min(qa, qb)
    view = psi.reshape(b, 1 << (n - 1 - hi), 2, 1 << (hi - lo - 1), 2, 1 << lo)
    u = mat.reshape(2, 2, 2, 2)
    if qa == hi:
        out = np.einsum("pqrs,wxrysz->wxpyqz", u, view)
    else:
        out = np.einsum("pqrs,wxsyrz->wxqypz", u, view)
    return np.ascontiguousarray(out).reshape(b, -1)


def _apply_x(psi: np.ndarray, rows: np.ndarray, q: int, n: int) -> None:
    if rows.any():
        view = psi.reshape(psi.shape[0], 1 << (n - 1 - q), 2, 1 << q)
        view[rows] = view[rows][:, :, ::-1, :]


def _apply_z(psi: np.ndarray, rows: np.ndarray, q: int, n: int) -> None:
    if rows.any():
        view = psi.reshape(psi.shape[0], 1 << (n - 1 - q), 2, 1 << q)
        sub = view[rows]
        sub[:, :, 1, :] *= -1
        view[rows] = sub


def _measure(psi: np.ndarray, q: int, n: int, u: np.ndarray) -> np.ndarray:
    """Projectively measure qubit ``q`` of each row; return outcomes (bool)."""
    b = psi.shape[0]
    view = psi.reshape(b, 1 << (n - 1 - q), 2, 1 << q)
    p1 = np.sum(np.abs(view[:, :, 1, :]) ** 2, axis=(1, 2))
    norm = np.sum(np.abs(view) ** 2, axis=(1, 2, 3))
    p1 = np.clip(p1 / norm, 0.0, 1.0)
    outcome = u < p1
    keep = np.where(outcome, p1, 1.0 - p1)
    view[outcome, :, 0, :] = 0
    view[~outcome, :, 1, :] = 0
    psi /= np.sqrt(np.maximum(keep, 1e-300))[:, None]
    return outcome


def _check_size(n: int) -> None:
    if n > MAX_QUBITS:
        raise ValueError(f"{n} qubits exceeds the simulator limit of {MAX_QUBITS}")


def simulate_state(circuit: Circuit) -> StateVector:
    """Exact statevector of a measurement-free circuit (barriers ignored)."""
    n = circuit.num_qubits
    _check_size(n)
    psi = np.zeros((1, 1 << n), dtype=complex)
    psi[0, 0] = 1.0
    index = circuit.qubit_index
    for inst in circuit.instructions:
        if inst.name in ("measure", "reset"):
            raise ValueError("simulate_state does not accept measure or reset")
        if inst.name == "barrier":
            continue
        qs = [index[q] for q in inst.qubits]
        mat = gate_matrix(inst.name, inst.params)
        psi = _apply_1q(psi, mat, qs[0], n) if len(qs) == 1 else _apply_2q(psi, mat, qs[0], qs[1], n)
    return StateVector(psi[0], n)


def block_size(num_qubits: int) -> int:
    return max(1, min(_MAX_BLOCK, _BLOCK_AMPLITUDES >> num_qubits))


def _run_block(circuit: Circuit, shots: int, noise: NoiseModel, rng: np.random.Generator) -> np.ndarray:
    """Simulate ``shots`` trajectories; return the classical record (shots, num_clbits)."""
    n = circuit.num_qubits
    qindex, cindex = circuit.qubit_index, circuit.clbit_index
    psi = np.zeros((shots, 1 << n), dtype=complex)
    psi[:, 0] = 1.0
    record = np.zeros((shots, circuit.num_clbits), dtype=np.uint8)
    for inst in circuit.instructions:
        if inst.name == "barrier":
            continue
        qs = [qindex[q] for q in inst.qubits]
        if inst.name == "measure":
            born, flip = rng.random(shots), rng.random(shots)
            outcome = _measure(psi, qs[0], n, born)
            record[:, cindex[inst.clbit]] = outcome ^ (flip < noise.p_meas)
        elif inst.name == "reset":
            born, fail = rng.random(shots), rng.random(shots)
            outcome = _measure(psi, qs[0], n, born)
            _apply_x(psi, outcome ^ (fail < noise.p_reset), qs[0], n)
        else:
            mat = gate_matrix(inst.name, inst.params)
            hit, which = rng.random(shots), rng.random(shots)
            if len(qs) == 1:
                psi = _apply_1q(psi, mat, qs[0], n)
                mask = hit < noise.p1
                # uniform over X, Y, Z encoded as (x, z) in {(1,0), (1,1), (0,1)}
                code = 1 + np.minimum((which * 3).astype(np.int64), 2)
            else:
                psi = _apply_2q(psi, mat, qs[0], qs[1], n)
                mask = hit < noise.p2
                # uniform over the 15 non-identity two-qubit Paulis
                code = 1 + np.minimum((which * 15).astype(np.int64), 14)
            if mask.any():
                for k, q in enumerate(qs):
                    xbit = ((code >> (2 * k)) & 1).astype(bool)
                    zbit = ((code >> (2 * k + 1)) & 1).astype(bool)
                    _apply_z(psi, mask & zbit, q, n)
                    _apply_x(psi, mask & xbit, q, n)
    return record


def sample(
    circuit: Circuit,
    shots: int,
    noise: NoiseModel = NOISELESS,
    seed: int = 0,
    jobs: int = 1,
) -> ShotHistogram:
    """Sample ``shots`` noisy executions of ``circuit``.

    Random draws are made for every noise opportunity whatever the noise
    strength, so runs sharing a seed use common random numbers across noise
    models.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    n = circuit.num_qubits
    _check_size(n)
    size = block_size(n)
    blocks = [(k, min(size, shots - k * size)) for k in range(-(-shots // size))]

    def run(block: tuple[int, int]) -> np.ndarray:
        k, count = block
        return _run_block(circuit, count, noise, keyed_generator("sample", seed, k))

    if jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run, blocks))
    else:
        records = [run(b) for b in blocks]
    record = np.concatenate(records, axis=0)
    width = circuit.num_clbits
    if width == 0:
        return ShotHistogram(0, {"": shots})
    rows, counts = np.unique(record, axis=0, return_counts=True)
    hist = {"".join("1" if b else "0" for b in row): int(c) for row, c in zip(rows, counts)}
    return ShotHistogram(width, hist)


def expectation_sampling(
    circuit: Circuit,
    obs: Observable,
    shots: int,
    noise: NoiseModel = NOISELESS,
    seed: int = 0,
) -> float:
    return expectation_from_histogram(obs, sample(circuit, shots, noise, seed))
