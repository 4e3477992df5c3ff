from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

from ..circuit import Circuit
from ..histogram import ShotHistogram, as_histogram

SCORE_GUARD = 1e-6


class ScoreUndefinedError(ValueError):
    """The ideal reference value is too close to zero for a relative score."""


@dataclass(frozen=True)
class BenchmarkInstance:
    """A fully specified benchmark: its circuits plus the ideal reference payload.

    ``params`` and ``ideal`` are plain JSON-compatible dictionaries so that an
    instance can be scored from its serialized form alone.
    """

    family: str
    size: int
    params: Mapping[str, Any]
    circuits: tuple[Circuit, ...]
    ideal: Mapping[str, Any]
    label: str = field(default="")

    def __post_init__(self) -> None:
        if not self.circuits:
            raise ValueError("a benchmark instance needs at least one circuit")

    @property
    def id(self) -> str:
        base = f"{self.family}-{self.size}"
        return f"{base}-{self.label}" if self.label else base

    def score(self, histograms) -> float:
        from .suite import score_payload

        return score_payload(self.family, self.ideal, histograms)


def clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def hellinger_fidelity(p: Mapping[str, float], q: Mapping[str, float], tol: float = 1e-9) -> float:
    """Squared Bhattacharyya coefficient of two normalized distributions."""
    for name, dist in (("p", p), ("q", q)):
        total = sum(dist.values())
        if abs(total - 1.0) > tol or any(v < 0 for v in dist.values()):
            raise ValueError(f"{name} is not a normalized distribution (sums to {total})")
    bc = sum(math.sqrt(p[k] * q[k]) for k in p.keys() & q.keys())
    return clamp01(bc * bc)


def histogram_fidelity(hist: ShotHistogram | Mapping[str, int], ideal: Mapping[str, float]) -> float:
    h = as_histogram(hist)
    width = len(next(iter(ideal)))
    if h.width != width:
        raise ValueError(f"histogram width {h.width} does not match ideal width {width}")
    return hellinger_fidelity(h.probabilities(), ideal)


def relative_energy_score(exp_val: float, ideal_val: float) -> float:
    """``1 - |(ideal - exp) / (2 ideal)|`` clamped to [0, 1]."""
    if abs(ideal_val) < SCORE_GUARD:
        raise ScoreUndefinedError(f"ideal value {ideal_val} is within {SCORE_GUARD} of zero")
    return clamp01(1.0 - abs((ideal_val - exp_val) / (2.0 * ideal_val)))


def zz_expectations(hist: ShotHistogram, pairs) -> list[float]:
    """<Z_i Z_j> for each pair, from a histogram with bit i = qubit i."""
    total = hist.shots
    out = []
    for i, j in pairs:
        acc = sum(v if key[i] == key[j] else -v for key, v in hist.counts.items())
        out.append(acc / total)
    return out


def z_expectations(hist: ShotHistogram) -> list[float]:
    total = hist.shots
    return [sum(v if key[i] == "0" else -v for key, v in hist.counts.items()) / total for i in range(hist.width)]
