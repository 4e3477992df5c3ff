"""Suite coverage (convex-hull volume in feature space) and feature/score R².

Volumes come from qhull through :class:`scipy.spatial.ConvexHull`; a simplex
is handled exactly by the determinant formula and a Monte-Carlo estimator is
available for cross-checking.
"""

from __future__ import annotations

import math
import statistics
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from ._rng import keyed_generator
from .features import AXES, FeatureVector

EXTRA_AXES = ("depth", "num_qubits", "two_qubit_gates")
MC_SAMPLES = 10_000_000
_MC_CHUNK = 1 << 19
_RANK_TOL = 1e-12


def _as_points(points: Iterable[Sequence[float]]) -> np.ndarray:
    arr = np.asarray([list(p) for p in points], dtype=float)
    if arr.size == 0:
        return arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ValueError("points must share one dimension")
    if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("point coordinates must lie in [0, 1]")
    return arr


def _full_dimensional(arr: np.ndarray) -> bool:
    m, d = arr.shape
    if m < d + 1:
        return False
    centred = arr[1:] - arr[0]
    return np.linalg.matrix_rank(centred, tol=_RANK_TOL) == d


def simplex_volume(vertices: np.ndarray) -> float:
    d = vertices.shape[1]
    return abs(float(np.linalg.det(vertices[1:] - vertices[0]))) / math.factorial(d)


def hull_volume(points: Iterable[Sequence[float]]) -> float:
    """Lebesgue volume of the convex hull; 0 for empty or affinely dependent input.

    Raises:
        ValueError: if any coordinate falls outside [0, 1].
    """
    arr = _as_points(points)
    if arr.size == 0 or not _full_dimensional(arr):
        return 0.0
    if arr.shape[0] == arr.shape[1] + 1:
        return simplex_volume(arr)
    if arr.shape[1] == 1:
        return float(arr.max() - arr.min())
    try:
        return float(ConvexHull(arr).volume)
    except QhullError:
        return 0.0


def monte_carlo_hull_volume(
    points: Iterable[Sequence[float]], samples: int = MC_SAMPLES, seed: int = 0
) -> tuple[float, float]:
    """Hit-or-miss estimate over the bounding box; returns ``(volume, standard error)``.

    Membership uses the hull's facet inequalities, so the only error is
    sampling error.
    """
    arr = _as_points(points)
    if arr.size == 0 or not _full_dimensional(arr):
        return 0.0, 0.0
    lo, hi = arr.min(axis=0), arr.max(axis=0)
    box = float(np.prod(hi - lo))
    if arr.shape[1] == 1:
        return box, 0.0
    equations = ConvexHull(arr).equations
    normals, offsets = equations[:, :-1], equations[:, -1]
    hits = 0
    for chunk, start in enumerate(range(0, samples, _MC_CHUNK)):
        count = min(_MC_CHUNK, samples - start)
        rng = keyed_generator("hull", seed, chunk)
        u = lo + (hi - lo) * rng.random((count, arr.shape[1]))
        inside = np.all(u @ normals.T + offsets <= 1e-12, axis=1)
        hits += int(inside.sum())
    frac = hits / samples
    return box * frac, box * math.sqrt(frac * (1 - frac) / samples)


def synthetic_suite(dim: int = len(AXES)) -> list[tuple[float, ...]]:
    """Origin plus one unit vector per feature axis."""
    return [tuple(0.0 for _ in range(dim))] + [tuple(float(i == j) for j in range(dim)) for i in range(dim)]


def linear_r2(x: Sequence[float], y: Sequence[float]) -> float:
    """OLS coefficient of determination of ``y`` on ``x``.

    Returns 0 when either variable has zero variance.
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("need at least two points")
    xa, ya = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    dx, dy = xa - xa.mean(), ya - ya.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx <= 0.0 or syy <= 0.0:
        return 0.0
    sxy = float(dx @ dy)
    return min(1.0, max(0.0, sxy * sxy / (sxx * syy)))


@dataclass(frozen=True)
class FeatureRecord:
    benchmark_id: str
    features: FeatureVector
    extras: Mapping[str, float] = field(default_factory=dict)

    def axis(self, name: str) -> float:
        if name in AXES:
            return getattr(self.features, name)
        return float(self.extras[name])


@dataclass(frozen=True)
class ScoreRow:
    benchmark_id: str
    backend: str
    mean: float
    std: float
    repetitions: int

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.std < 0:
            raise ValueError("std must be non-negative")


@dataclass(frozen=True)
class ScoreTable:
    rows: tuple[ScoreRow, ...]

    @classmethod
    def from_scores(cls, scores: Iterable[tuple[str, str, float]]) -> ScoreTable:
        """Aggregate ``(benchmark id, backend, score)`` triples; std is the sample deviation."""
        grouped: dict[tuple[str, str], list[float]] = {}
        for bench, backend, score in scores:
            grouped.setdefault((bench, backend), []).append(float(score))
        rows = []
        for (bench, backend), values in sorted(grouped.items()):
            std = statistics.stdev(values) if len(values) > 1 else 0.0
            rows.append(ScoreRow(bench, backend, statistics.fmean(values), std, len(values)))
        return cls(tuple(rows))

    @property
    def backends(self) -> list[str]:
        return sorted({r.backend for r in self.rows})

    def without_families(self, families: Iterable[str]) -> ScoreTable:
        drop = set(families)
        return ScoreTable(tuple(r for r in self.rows if family_of(r.benchmark_id) not in drop))


def family_of(benchmark_id: str) -> str:
    return benchmark_id.split("-", 1)[0]


@dataclass(frozen=True)
class CorrelationMatrix:
    axes: tuple[str, ...]
    backends: tuple[str, ...]
    values: Mapping[tuple[str, str], float]

    def __getitem__(self, key: tuple[str, str]) -> float:
        return self.values[key]

    def rows(self) -> list[list[str | float]]:
        """One row per axis: ``[axis, r2(backend_0), r2(backend_1), ...]``."""
        return [[axis, *(self.values[(axis, b)] for b in self.backends)] for axis in self.axes]


def correlation_table(
    features: Iterable[FeatureRecord],
    scores: ScoreTable,
    extra_axes: bool = False,
    exclude: Iterable[str] = (),
) -> CorrelationMatrix:
    """R² of each feature axis against mean score, per backend.

    ``exclude`` names benchmark families whose rows are dropped first. A
    backend with fewer than two rows gets R² = 0 on every axis.

    Raises:
        ValueError: when a scored benchmark has no feature record.
    """
    by_id = {rec.benchmark_id: rec for rec in features}
    table = scores.without_families(exclude)
    for row in table.rows:
        if row.benchmark_id not in by_id:
            raise ValueError(f"no feature record for benchmark {row.benchmark_id!r}")
    axes = AXES + (EXTRA_AXES if extra_axes else ())
    values: dict[tuple[str, str], float] = {}
    for backend in table.backends:
        rows = [r for r in table.rows if r.backend == backend]
        for axis in axes:
            if len(rows) < 2:
                values[(axis, backend)] = 0.0
                continue
            x = [by_id[r.benchmark_id].axis(axis) for r in rows]
            values[(axis, backend)] = linear_r2(x, [r.mean for r in rows])
    return CorrelationMatrix(tuple(axes), tuple(table.backends), values)
