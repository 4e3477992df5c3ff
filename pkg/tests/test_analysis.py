from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import Delaunay

from qbk.analysis import (
    FeatureRecord,
    ScoreRow,
    ScoreTable,
    correlation_table,
    family_of,
    hull_volume,
    linear_r2,
    monte_carlo_hull_volume,
    synthetic_suite,
)
from qbk.benchmarks import default_suite
from qbk.features import AXES, FeatureVector, compute_features

DEFAULT_SUITE_VOLUME = 1.7524153589169509e-4


def delaunay_volume(points) -> float:
    """Sum of simplex volumes over a Delaunay triangulation."""
    pts = np.asarray(points, dtype=float)
    d = pts.shape[1]
    tri = Delaunay(pts)
    return sum(abs(np.linalg.det(pts[s[1:]] - pts[s[0]])) for s in tri.simplices) / math.factorial(d)


class TestHullVolume:
    def test_synthetic_suite(self):
        assert hull_volume(synthetic_suite()) == pytest.approx(1 / 720, abs=1e-12)

    def test_synthetic_monte_carlo(self):
        vol, se = monte_carlo_hull_volume(synthetic_suite())
        assert abs(vol - 1 / 720) <= 3 * se

    @pytest.mark.parametrize("count", [0, 1, 3, 6])
    def test_too_few_points(self, count):
        assert hull_volume(synthetic_suite()[:count]) == 0.0

    def test_affinely_dependent(self):
        flat = [(x, y, 0.5, 0, 0, 0) for x in (0, 1) for y in (0, 1)] + [(0.5, 0.5, 0.5, 0, 0, 0)] * 4
        assert hull_volume(flat) == 0.0
        assert monte_carlo_hull_volume(flat, 1000) == (0.0, 0.0)

    def test_triangle(self):
        assert hull_volume([(0, 0), (1, 0), (0, 1)]) == pytest.approx(0.5)

    def test_unit_square_and_interval(self):
        assert hull_volume([(0, 0), (1, 0), (0, 1), (1, 1), (0.3, 0.3)]) == pytest.approx(1)
        assert hull_volume([(0.2,), (0.9,), (0.5,)]) == pytest.approx(0.7)

    def test_box_product(self):
        corners = [tuple(0.25 + 0.5 * ((i >> k) & 1) for k in range(6)) for i in range(64)]
        assert hull_volume(corners) == pytest.approx(0.5**6, rel=1e-12)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            hull_volume([(0, 0), (1.5, 0), (0, 1)])

    def test_default_suite_frozen(self):
        points = [compute_features(inst.circuits[0]).as_tuple() for inst in default_suite()]
        assert hull_volume(points) == pytest.approx(DEFAULT_SUITE_VOLUME, rel=1e-9)
        assert delaunay_volume(points) == pytest.approx(DEFAULT_SUITE_VOLUME, rel=1e-9)

    def test_monte_carlo_deterministic(self):
        pts = synthetic_suite(3)
        assert monte_carlo_hull_volume(pts, 10_000, seed=4) == monte_carlo_hull_volume(pts, 10_000, seed=4)


unit = st.floats(0, 1, allow_nan=False)


@st.composite
def point_clouds(draw, dim=3):
    m = draw(st.integers(dim + 1, 12))
    return [tuple(draw(unit) for _ in range(dim)) for _ in range(m)]


@settings(max_examples=60, deadline=None)
@given(point_clouds(), st.randoms(use_true_random=False))
def test_permutation_invariance(points, rnd):
    shuffled = list(points)
    rnd.shuffle(shuffled)
    assert hull_volume(shuffled) == pytest.approx(hull_volume(points), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(point_clouds(), st.lists(unit, min_size=1, max_size=4))
def test_interior_points_do_not_change_volume(points, weights):
    base = hull_volume(points)
    arr = np.asarray(points)
    w = np.zeros(len(points))
    w[: len(weights)] = weights
    if w.sum() == 0:
        w[0] = 1
    inner = tuple(np.clip((w / w.sum()) @ arr, 0, 1))
    assert hull_volume(points + [inner]) == pytest.approx(base, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(point_clouds(dim=4))
def test_matches_delaunay(points):
    vol = hull_volume(points)
    assert 0 <= vol <= 1
    if vol > 1e-9:
        assert vol == pytest.approx(delaunay_volume(points), rel=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_monte_carlo_matches_exact_on_random_simplices(seed):
    rng = np.random.default_rng(seed)
    pts = rng.random((7, 6))
    vol, se = monte_carlo_hull_volume(pts, 400_000, seed=seed)
    assert abs(vol - hull_volume(pts)) <= 3 * se + 1e-15


class TestLinearR2:
    def test_exact_line(self):
        assert linear_r2([0, 1, 2, 3], [1, 3, 5, 7]) == pytest.approx(1, abs=1e-12)
        assert linear_r2([0, 1, 2, 3], [7, 5, 3, 1]) == pytest.approx(1, abs=1e-12)

    def test_zero_variance(self):
        assert linear_r2([1, 1, 1], [0.2, 0.5, 0.9]) == 0.0
        assert linear_r2([0.1, 0.4, 0.9], [0.3, 0.3, 0.3]) == 0.0

    def test_uncorrelated(self):
        assert linear_r2([-1, 0, 1, 0], [0, 1, 0, -1]) == pytest.approx(0, abs=1e-12)

    def test_hand_value(self):
        # x = 0,1,2 ; y = 0,2,1: sxy = 1, sxx = 2, syy = 2 -> 1/4
        assert linear_r2([0, 1, 2], [0, 2, 1]) == pytest.approx(0.25)

    @pytest.mark.parametrize("x, y", [([1, 2], [1]), ([1], [1])])
    def test_bad_input(self, x, y):
        with pytest.raises(ValueError):
            linear_r2(x, y)

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=3, max_size=20),
        st.floats(0.1, 5),
        st.floats(-5, 5),
        st.sampled_from([1.0, -1.0]),
    )
    def test_bounds_and_affine_invariance(self, pairs, scale, shift, sign):
        x, y = zip(*pairs)
        r2 = linear_r2(x, y)
        assert 0 <= r2 <= 1
        moved = [sign * scale * v + shift for v in x]
        if np.ptp(x) > 1e-6 and np.ptp(y) > 1e-6:
            assert linear_r2(moved, y) == pytest.approx(r2, abs=1e-7)
            assert linear_r2(y, x) == pytest.approx(r2, abs=1e-9)


def record(bid: str, values, extras=None) -> FeatureRecord:
    return FeatureRecord(bid, FeatureVector(*values), extras or {})


def linear_fixture():
    """Scores exactly linear in liveness; communication constant; measurement random."""
    rng = np.random.default_rng(0)
    ids = [f"{fam}-{k}" for fam in ("ghz", "bit_code", "qaoa_vanilla") for k in (3, 4, 5)]
    records, triples = [], []
    for i, bid in enumerate(ids):
        live = 0.1 + 0.08 * i
        vec = (0.5, rng.random(), rng.random(), rng.random(), live, rng.random())
        records.append(record(bid, vec, {"depth": i + 1, "num_qubits": 3, "two_qubit_gates": 2 * i}))
        triples.append((bid, "dev", 0.9 - 0.5 * live))
        triples.append((bid, "other", rng.random()))
    return records, ScoreTable.from_scores(triples)


class TestCorrelation:
    def test_exactly_linear_feature(self):
        records, table = linear_fixture()
        matrix = correlation_table(records, table)
        assert matrix[("liveness", "dev")] == pytest.approx(1.0, abs=1e-9)
        assert matrix[("communication", "dev")] == 0.0
        assert matrix.axes == AXES
        assert matrix.backends == ("dev", "other")
        assert all(0 <= v <= 1 for v in matrix.values.values())

    def test_extra_axes(self):
        records, table = linear_fixture()
        matrix = correlation_table(records, table, extra_axes=True)
        assert matrix[("depth", "dev")] == pytest.approx(1.0, abs=1e-9)
        assert matrix[("num_qubits", "dev")] == 0.0
        assert [row[0] for row in matrix.rows()][-3:] == ["depth", "num_qubits", "two_qubit_gates"]

    def test_exclude_is_row_removal(self):
        records, table = linear_fixture()
        dropped = ScoreTable(tuple(r for r in table.rows if family_of(r.benchmark_id) != "bit_code"))
        assert len(dropped.rows) == len(table.rows) - 6
        excluded = correlation_table(records, table, exclude=["bit_code"])
        assert excluded == correlation_table(records, dropped)
        assert excluded[("liveness", "dev")] == pytest.approx(1.0, abs=1e-9)

    def test_single_row_backend(self):
        records, _ = linear_fixture()
        table = ScoreTable.from_scores([("ghz-3", "lonely", 0.4)])
        assert set(correlation_table(records, table).values.values()) == {0.0}

    def test_missing_feature_record(self):
        records, table = linear_fixture()
        with pytest.raises(ValueError, match="ghz-3"):
            correlation_table([r for r in records if r.benchmark_id != "ghz-3"], table)

    def test_from_scores_statistics(self):
        table = ScoreTable.from_scores([("ghz-3", "a", 0.9), ("ghz-3", "a", 0.8), ("ghz-3", "a", 1.0), ("ghz-4", "a", 0.5)])
        first, second = table.rows
        assert (first.mean, first.repetitions) == (pytest.approx(0.9), 3)
        assert first.std == pytest.approx(0.1)
        assert (second.std, second.repetitions) == (0.0, 1)

    @pytest.mark.parametrize("bad", [dict(repetitions=0), dict(std=-0.1)])
    def test_row_validation(self, bad):
        kwargs = dict(benchmark_id="x", backend="b", mean=0.5, std=0.0, repetitions=1) | bad
        with pytest.raises(ValueError):
            ScoreRow(**kwargs)

    def test_family_of(self):
        assert family_of("qaoa_zzswap-5-extra") == "qaoa_zzswap"
