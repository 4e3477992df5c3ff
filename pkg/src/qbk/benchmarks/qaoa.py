"""Level-one QAOA on Sherrington-Kirkpatrick instances.

The cost operator is ``H = sum_{i<j} w_ij Z_i Z_j`` with ``w_ij`` in {-1, +1}.
Two ansatz layouts are provided: the direct all-to-all one and a SWAP network
that only couples neighbouring lines.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .._rng import keyed_generator
from ..circuit import Circuit, CircuitBuilder
from ..histogram import ShotHistogram
from .core import BenchmarkInstance, ScoreUndefinedError, SCORE_GUARD, relative_energy_score, zz_expectations

MAX_OPTIMIZE_QUBITS = 16
GRID_POINTS = 64
REFINE_RESOLUTION = 1e-4


@dataclass(frozen=True)
class SKInstance:
    n: int
    weights: tuple[int, ...]  # ordered as itertools.combinations(range(n), 2)
    seed: int

    def __post_init__(self) -> None:
        if len(self.weights) != self.n * (self.n - 1) // 2:
            raise ValueError("an SK instance needs one weight per vertex pair")

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(itertools.combinations(range(self.n), 2))

    def weight(self, i: int, j: int) -> int:
        i, j = min(i, j), max(i, j)
        # index of (i, j) in the lexicographic pair order
        return self.weights[i * self.n - i * (i + 1) // 2 + (j - i - 1)]

    def cost_diagonal(self) -> np.ndarray:
        """``H`` evaluated on every basis state (bit i of the index = qubit i)."""
        idx = np.arange(1 << self.n)
        spins = 1 - 2 * ((idx[:, None] >> np.arange(self.n)) & 1)
        cost = np.zeros(1 << self.n)
        for (i, j), w in zip(self.pairs, self.weights):
            cost += w * spins[:, i] * spins[:, j]
        return cost


@dataclass(frozen=True)
class QAOAParams:
    gamma: float
    beta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.gamma) and math.isfinite(self.beta)):
            raise ValueError("QAOA parameters must be finite")


def sk_instance(n: int, seed: int) -> SKInstance:
    if n < 2:
        raise ValueError("an SK instance needs at least 2 vertices")
    rng = keyed_generator("sk", n, seed)
    draws = rng.integers(0, 2, size=n * (n - 1) // 2)
    return SKInstance(n, tuple(int(2 * d - 1) for d in draws), seed)


def qaoa_vanilla_circuit(sk: SKInstance, params: QAOAParams) -> Circuit:
    builder = CircuitBuilder(sk.n, sk.n)
    for q in range(sk.n):
        builder.h(q)
    for (i, j), w in zip(sk.pairs, sk.weights):
        builder.rzz(2 * params.gamma * w, i, j)
    for q in range(sk.n):
        builder.rx(2 * params.beta, q)
    return builder.measure_all().build()


def swap_network_order(n: int) -> tuple[list[list[tuple[int, int, int, int]]], list[int]]:
    """Odd-even transposition schedule.

    Returns the layers as ``(line_a, line_b, logical_a, logical_b)`` blocks and
    the final map from line to logical qubit.
    """
    lines = list(range(n))
    layers = []
    for layer in range(n):
        blocks = []
        for a in range(layer % 2, n - 1, 2):
            blocks.append((a, a + 1, lines[a], lines[a + 1]))
            lines[a], lines[a + 1] = lines[a + 1], lines[a]
        layers.append(blocks)
    return layers, lines


def qaoa_zzswap_circuit(sk: SKInstance, params: QAOAParams) -> Circuit:
    """SWAP-network ansatz; readout maps each line back to its logical bit."""
    builder = CircuitBuilder(sk.n, sk.n)
    for q in range(sk.n):
        builder.h(q)
    layers, final = swap_network_order(sk.n)
    for blocks in layers:
        for a, b, la, lb in blocks:
            builder.rzz(2 * params.gamma * sk.weight(la, lb), a, b)
            builder.swap(a, b)
    for q in range(sk.n):
        builder.rx(2 * params.beta, q)
    for line, logical in enumerate(final):
        builder.measure(line, logical)
    return builder.build()


def _rx_all(psi: np.ndarray, beta: float, n: int) -> np.ndarray:
    c, s = math.cos(beta), -1j * math.sin(beta)
    for q in range(n):
        view = psi.reshape(1 << (n - 1 - q), 2, 1 << q)
        a, b = view[:, 0, :].copy(), view[:, 1, :].copy()
        view[:, 0, :] = c * a + s * b
        view[:, 1, :] = s * a + c * b
    return psi


def qaoa_energy(sk: SKInstance, params: QAOAParams, cost: np.ndarray | None = None) -> float:
    """Noiseless ``<H>`` using the diagonal form of the phase separator."""
    if cost is None:
        cost = sk.cost_diagonal()
    n = sk.n
    psi = np.exp(-1j * params.gamma * cost) / math.sqrt(1 << n)
    psi = _rx_all(psi.astype(complex), params.beta, n)
    return float(np.dot(np.abs(psi) ** 2, cost))


def optimize_qaoa_params(sk: SKInstance) -> QAOAParams:
    """Grid search over [-pi/2, pi/2]^2 then coordinate refinement to 1e-4."""
    if sk.n > MAX_OPTIMIZE_QUBITS:
        raise ValueError(f"parameter optimization is limited to {MAX_OPTIMIZE_QUBITS} qubits")
    cost = sk.cost_diagonal()
    grid = np.linspace(-math.pi / 2, math.pi / 2, GRID_POINTS)
    best_val, best = math.inf, (0.0, 0.0)
    for g in grid:
        for b in grid:
            val = qaoa_energy(sk, QAOAParams(g, b), cost)
            if val < best_val:
                best_val, best = val, (float(g), float(b))
    step = float(grid[1] - grid[0])
    point = list(best)
    while step >= REFINE_RESOLUTION:
        improved = False
        for axis in (0, 1):
            for direction in (1.0, -1.0):
                trial = list(point)
                trial[axis] += direction * step
                val = qaoa_energy(sk, QAOAParams(*trial), cost)
                if val < best_val:
                    best_val, point, improved = val, trial, True
        if not improved:
            step /= 2
    return QAOAParams(point[0], point[1])


def sk_energy_from_histogram(sk: SKInstance, hist: ShotHistogram) -> float:
    return float(np.dot(sk.weights, zz_expectations(hist, sk.pairs)))


def qaoa_score(exp_val: float, ideal_val: float) -> float:
    return relative_energy_score(exp_val, ideal_val)


def qaoa_instance(n: int, seed: int = 0, variant: str = "vanilla", max_attempts: int = 100) -> BenchmarkInstance:
    """Instance with optimized parameters; reseeds while the ideal energy is ~0."""
    for attempt in range(max_attempts):
        sk = sk_instance(n, seed + attempt)
        params = optimize_qaoa_params(sk)
        ideal = qaoa_energy(sk, params)
        if abs(ideal) >= SCORE_GUARD:
            break
    else:
        raise ScoreUndefinedError(f"no SK instance with nonzero ideal energy after {max_attempts} seeds")
    build = qaoa_vanilla_circuit if variant == "vanilla" else qaoa_zzswap_circuit
    payload = {
        "energy": ideal,
        "gamma": params.gamma,
        "beta": params.beta,
        "weights": list(sk.weights),
    }
    return BenchmarkInstance(f"qaoa_{variant}", n, {"seed": sk.seed}, (build(sk, params),), payload)
