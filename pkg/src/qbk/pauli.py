"""Pauli strings, observables and shared-basis measurement.

Pauli letters are indexed by qubit: ``PauliString("XZ")`` is X on qubit 0 and
Z on qubit 1. Conjugation through Clifford gates is done on the symplectic
(x|z) representation with an explicit sign bit, so diagonalized coefficients
are exact.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, CircuitBuilder
from .histogram import ShotHistogram, as_histogram


@dataclass(frozen=True, order=True)
class PauliString:
    letters: str

    def __post_init__(self) -> None:
        if not self.letters or set(self.letters) - set("IXYZ"):
            raise ValueError(f"invalid Pauli string {self.letters!r}")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters

    @property
    def is_diagonal(self) -> bool:
        return set(self.letters) <= {"I", "Z"}

    def symplectic(self) -> tuple[np.ndarray, np.ndarray]:
        x = np.array([c in "XY" for c in self.letters], dtype=bool)
        z = np.array([c in "ZY" for c in self.letters], dtype=bool)
        return x, z


@dataclass(frozen=True)
class Observable:
    terms: tuple[tuple[float, PauliString], ...]

    def __post_init__(self) -> None:
        terms = tuple((float(c), p if isinstance(p, PauliString) else PauliString(p)) for c, p in self.terms)
        if not terms:
            raise ValueError("observable needs at least one term")
        if len({len(p) for _, p in terms}) != 1:
            raise ValueError("all terms must act on the same number of qubits")
        if len({p for _, p in terms}) != len(terms):
            raise ValueError("duplicate Pauli strings in observable")
        if not all(math.isfinite(c) for c, _ in terms):
            raise ValueError("non-finite coefficient")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, str | PauliString]]) -> Observable:
        return cls(tuple(pairs))

    @property
    def num_qubits(self) -> int:
        return len(self.terms[0][1])

    @property
    def is_diagonal(self) -> bool:
        return all(p.is_diagonal for _, p in self.terms)

    def to_list(self) -> list[list]:
        return [[c, p.letters] for c, p in self.terms]


def mermin_operator(n: int) -> Observable:
    """Expand the n-qubit Mermin operator into X/Y Pauli strings.

    Strings with an odd number of Y letters survive, with coefficient +1 when
    that number is 1 mod 4 and -1 when it is 3 mod 4.
    """
    if n < 2:
        raise ValueError("the Mermin operator needs n >= 2")
    terms = []
    for letters in itertools.product("XY", repeat=n):
        ny = letters.count("Y")
        if ny % 2:
            terms.append((1.0 if ny % 4 == 1 else -1.0, PauliString("".join(letters))))
    return Observable(tuple(terms))


def pauli_commutes(a: PauliString, b: PauliString) -> bool:
    if len(a) != len(b):
        raise ValueError("Pauli strings differ in length")
    clashes = sum(1 for p, q in zip(a.letters, b.letters) if p != "I" and q != "I" and p != q)
    return clashes % 2 == 0


# ---------------------------------------------------------------------------
# Clifford conjugation P -> U P U^dagger on (x, z, sign)


def _conjugate(x: np.ndarray, z: np.ndarray, sign: int, name: str, qs: Sequence[int]) -> int:
    """Update ``x``/``z`` in place for gate ``name``; return the new sign bit."""
    if name == "h":
        (a,) = qs
        sign ^= int(x[a] & z[a])
        x[a], z[a] = z[a], x[a]
    elif name == "s":
        (a,) = qs
        sign ^= int(x[a] & z[a])
        z[a] ^= x[a]
    elif name == "sdg":
        (a,) = qs
        z[a] ^= x[a]
        sign ^= int(x[a] & z[a])
    elif name == "x":
        sign ^= int(z[qs[0]])
    elif name == "z":
        sign ^= int(x[qs[0]])
    elif name == "y":
        sign ^= int(x[qs[0]] ^ z[qs[0]])
    elif name == "cx":
        a, b = qs
        sign ^= int(x[a] & z[b] & (x[b] ^ z[a] ^ True))
        x[b] ^= x[a]
        z[a] ^= z[b]
    elif name == "cz":
        a, b = qs
        sign = _conjugate(x, z, sign, "h", (b,))
        sign = _conjugate(x, z, sign, "cx", (a, b))
        sign = _conjugate(x, z, sign, "h", (b,))
    elif name == "swap":
        a, b = qs
        x[a], x[b] = x[b], x[a]
        z[a], z[b] = z[b], z[a]
    else:
        raise ValueError(f"{name} is not a supported Clifford gate")
    return sign


def conjugate_pauli(pauli: PauliString, ops: Sequence[tuple[str, tuple[int, ...]]]) -> tuple[int, PauliString]:
    """Conjugate ``pauli`` through the gate list; return ``(+1|-1, result)``."""
    x, z = pauli.symplectic()
    sign = 0
    for name, qs in ops:
        sign = _conjugate(x, z, sign, name, qs)
    letters = "".join("IXZY"[int(xi) + 2 * int(zi)] for xi, zi in zip(x, z))
    return (-1 if sign else 1), PauliString(letters)


def _independent_rows(rows: np.ndarray) -> list[np.ndarray]:
    """GF(2) row basis of a boolean matrix."""
    basis: list[np.ndarray] = []
    pivots: list[int] = []
    for row in rows:
        r = row.copy()
        for b, p in zip(basis, pivots):
            if r[p]:
                r ^= b
        nz = np.flatnonzero(r)
        if nz.size:
            basis.append(r)
            pivots.append(int(nz[0]))
    return basis


def _diagonalizing_ops(obs: Observable) -> list[tuple[str, tuple[int, ...]]]:
    if obs.is_diagonal:
        return []
    n = obs.num_qubits
    rows = np.array([np.concatenate(p.symplectic()) for _, p in obs.terms], dtype=bool)
    gens = [(g[:n].copy(), g[n:].copy()) for g in _independent_rows(rows)]
    ops: list[tuple[str, tuple[int, ...]]] = []

    def apply(name: str, *qs: int) -> None:
        ops.append((name, qs))
        for gx, gz in gens:
            _conjugate(gx, gz, 0, name, qs)

    for idx in range(len(gens)):
        gx, gz = gens[idx]
        support = np.flatnonzero(gx | gz)
        j = int(support[0])
        if gz[j] and not gx[j]:
            apply("h", j)
        elif gz[j]:
            apply("sdg", j)
        for k in (int(k) for k in support[1:]):
            if gx[k] and gz[k]:
                apply("sdg", k)
                apply("cx", j, k)
            elif gx[k]:
                apply("cx", j, k)
            else:
                apply("cz", j, k)
        apply("h", j)
        # every other generator commutes with Z_j; clear its Z_j component
        for other in range(len(gens)):
            if other != idx and gens[other][1][j]:
                gens[other][0][:] ^= gx
                gens[other][1][:] ^= gz
    return ops


def shared_basis_circuit(obs: Observable) -> tuple[Circuit, Observable]:
    """Clifford rotation that maps a commuting observable onto Z strings.

    Returns ``(U, diag)`` with ``U P U^dagger = s Z_P`` for every term, where
    ``diag`` holds the ``Z_P`` strings with coefficients multiplied by ``s``.
    """
    terms = [p for _, p in obs.terms]
    for a, b in itertools.combinations(terms, 2):
        if not pauli_commutes(a, b):
            raise ValueError(f"terms {a} and {b} do not commute")
    ops = _diagonalizing_ops(obs)
    builder = CircuitBuilder(obs.num_qubits)
    for name, qs in ops:
        builder.gate(name, *qs)
    diag = []
    for coeff, p in obs.terms:
        sign, q = conjugate_pauli(p, ops)
        if not q.is_diagonal:
            raise AssertionError(f"diagonalization left {q} non-diagonal")
        diag.append((sign * coeff, q))
    return builder.build(), Observable(tuple(diag))


def per_term_circuits(obs: Observable) -> list[tuple[Circuit, Observable]]:
    """One basis-change circuit per term; cross-validation mode for n <= 4."""
    if obs.num_qubits > 4:
        raise ValueError("per-term measurement is limited to 4 qubits")
    out = []
    for coeff, p in obs.terms:
        builder = CircuitBuilder(obs.num_qubits)
        for q, letter in enumerate(p.letters):
            if letter == "Y":
                builder.sdg(q)
            if letter in "XY":
                builder.h(q)
        diag = "".join("I" if c == "I" else "Z" for c in p.letters)
        out.append((builder.build(), Observable(((coeff, PauliString(diag)),))))
    return out


def expectation_from_histogram(obs: Observable, hist: ShotHistogram | Mapping[str, int]) -> float:
    """Estimate a diagonal observable from measured bitstrings (bit j = qubit j)."""
    if not obs.is_diagonal:
        raise ValueError("observable must contain only I and Z letters")
    h = as_histogram(hist)
    if h.width != obs.num_qubits:
        raise ValueError(f"histogram width {h.width} does not match {obs.num_qubits} qubits")
    keys = list(h.counts)
    bits = np.array([[c == "1" for c in k] for k in keys], dtype=np.int64)
    weights = np.array([h.counts[k] for k in keys], dtype=float) / h.shots
    total = 0.0
    for coeff, p in obs.terms:
        support = np.array([c == "Z" for c in p.letters])
        parity = bits[:, support].sum(axis=1) % 2
        total += coeff * float(np.dot(weights, 1 - 2 * parity))
    return total
