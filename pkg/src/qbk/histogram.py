"""Shot histograms: classical bitstring -> count.

Bitstrings list classical bit 0 first (registers flattened in declaration
order), so ``"01"`` means bit 0 read 0 and bit 1 read 1.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ShotHistogram:
    width: int
    counts: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        counts = {k: int(v) for k, v in sorted(self.counts.items()) if v}
        for key, value in counts.items():
            if len(key) != self.width or set(key) - {"0", "1"}:
                raise ValueError(f"bitstring {key!r} does not have width {self.width}")
            if value < 0:
                raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    @property
    def shots(self) -> int:
        return sum(self.counts.values())

    def probabilities(self) -> dict[str, float]:
        total = self.shots
        if total == 0:
            raise ValueError("empty histogram")
        return {k: v / total for k, v in self.counts.items()}

    def marginal(self, bits: Sequence[int]) -> ShotHistogram:
        """Histogram restricted to the listed bit positions (in that order)."""
        out: dict[str, int] = {}
        for key, value in self.counts.items():
            sub = "".join(key[b] for b in bits)
            out[sub] = out.get(sub, 0) + value
        return ShotHistogram(len(bits), out)

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> ShotHistogram:
        widths = {len(k) for k in counts}
        if len(widths) != 1:
            raise ValueError("bitstrings must share one width")
        return cls(widths.pop(), dict(counts))


def as_histogram(hist: ShotHistogram | Mapping[str, int]) -> ShotHistogram:
    return hist if isinstance(hist, ShotHistogram) else ShotHistogram.from_counts(hist)
