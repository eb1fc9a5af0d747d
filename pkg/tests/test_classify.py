"""Classifiers and quality metrics.

Expected values come from independent oracles: exhaustive partition
enumeration for optimal SSW, and hand computations (recorded inline) for the
GVF and Moran's I cases.
"""
import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geolint.classify import (
    Classification,
    Dataset,
    assign_by_breaks,
    average_gvf,
    classed_morans_i,
    equal_intervals,
    fisher_jenks,
    gvf,
    head_tail,
    jenks_caspall,
    knee_point_k,
    max_p,
    maximum_breaks,
    mean_std,
    morans_i,
    quantiles,
    recommend,
    sweep,
)
from geolint.errors import (
    DegenerateRange,
    InfeasibleFloor,
    InvalidClassCount,
    NoNeighbors,
    TooManyClasses,
    ZeroVariance,
)
from geolint.geodata import WeightsMatrix, build_contiguity, load_geojson

from grids import chain_geojson, grid_geojson


def ds(*values) -> Dataset:
    return Dataset.from_values(values)


def chain_weights(n: int) -> WeightsMatrix:
    neighbors = [[j for j in (i - 1, i + 1) if 0 <= j < n] for i in range(n)]
    return WeightsMatrix(n=n, kind="rook", neighbors=neighbors)


# ---------------------------------------------------------------------------
# Independent oracle: minimal weighted SSW over all contiguous partitions
# ---------------------------------------------------------------------------

def exhaustive_min_ssw(values, k: int) -> float:
    """Brute force over every ordered partition of the sorted distinct values."""
    u, counts = np.unique(np.asarray(values, dtype=float), return_counts=True)
    m = len(u)
    assert k <= m
    best = math.inf
    for cuts in itertools.combinations(range(1, m), k - 1):
        bounds = (0, *cuts, m)
        total = 0.0
        for a, b in zip(bounds, bounds[1:]):
            seg_v, seg_c = u[a:b], counts[a:b]
            mean = (seg_v * seg_c).sum() / seg_c.sum()
            total += (((seg_v - mean) ** 2) * seg_c).sum()
        best = min(best, total)
    return best


def classification_ssw(d: Dataset, c: Classification) -> float:
    total = 0.0
    for i in range(c.k):
        members = d.values[c.assignment == i]
        if members.size:
            total += float(((members - members.mean()) ** 2).sum())
    return total


class TestEqualIntervals:
    def test_breaks_at_fifths(self):
        c = equal_intervals(ds(0, 1, 5, 9, 10), 5)
        assert c.breaks == pytest.approx([2, 4, 6, 8])

    def test_four_values_two_classes(self):
        c = equal_intervals(ds(1, 2, 3, 4), 2)
        assert c.breaks == pytest.approx([2.5])
        assert list(c.assignment) == [0, 0, 1, 1]

    def test_degenerate_range(self):
        with pytest.raises(DegenerateRange):
            equal_intervals(ds(5, 5, 5), 3)


class TestQuantiles:
    def test_even_split(self):
        c = quantiles(ds(*range(1, 11)), 2)
        assert [s.count for s in c.class_stats] == [5, 5]

    def test_nearest_rank_break(self):
        c = quantiles(ds(1, 2, 3, 4, 5), 2)
        # q=1/2, rank=ceil(2.5)=3 -> break at sorted[2]=3; right-closed
        assert c.breaks == [3.0]
        assert [s.count for s in c.class_stats] == [3, 2]

    def test_duplicate_breaks_collapse_with_warning(self):
        c = quantiles(ds(1, 1, 1, 1, 2, 3), 3)
        assert c.k == 2
        assert c.breaks == [1.0]
        assert c.warnings

    def test_k_above_n_rejected(self):
        with pytest.raises(InvalidClassCount):
            quantiles(ds(1, 2), 3)


class TestMeanStd:
    def test_symmetric_breaks_k5(self):
        # engineered: mean 10, sample std exactly 2, range beyond [6, 14]
        a = math.sqrt(18)
        d = ds(10 - a, 10 + a, *([10.0] * 8))
        assert d.mean == pytest.approx(10)
        assert d.std == pytest.approx(2)
        c = mean_std(d, 5)
        assert c.breaks == pytest.approx([6, 8, 12, 14])
        assert c.k == 5

    def test_out_of_range_breaks_pruned(self):
        # mean 10, s = 2: candidates [6, 8, 12, 14]; 6 is below the minimum
        # and 12/14 would leave the top class empty, so only 8 survives
        d = ds(8, 10, 12)
        c = mean_std(d, 5)
        assert c.breaks == pytest.approx([8.0])
        assert c.k == 2
        assert c.warnings

    def test_symmetric_k3(self):
        d = ds(-2, -1, 0, 1, 2)
        s = d.std
        c = mean_std(d, 3)
        assert c.breaks == pytest.approx([-s, s])

    def test_constant_data(self):
        with pytest.raises(ZeroVariance):
            mean_std(ds(4, 4, 4), 5)

    def test_even_k_rejected(self):
        with pytest.raises(InvalidClassCount):
            mean_std(ds(1, 2, 3), 4)


class TestMaximumBreaks:
    def test_two_largest_gaps(self):
        c = maximum_breaks(ds(1, 2, 3, 10, 11, 12, 100), 3)
        assert c.breaks == pytest.approx([6.5, 56.0])
        assert [s.count for s in c.class_stats] == [3, 3, 1]

    def test_k_equals_distinct_count(self):
        c = maximum_breaks(ds(1, 5, 9), 3)
        assert c.k == 3
        assert [s.count for s in c.class_stats] == [1, 1, 1]

    def test_tie_breaks_leftmost(self):
        c = maximum_breaks(ds(0, 1, 2, 3), 2)
        assert c.breaks == pytest.approx([0.5])

    def test_too_many_classes(self):
        with pytest.raises(TooManyClasses):
            maximum_breaks(ds(1, 1, 2), 3)


class TestHeadTail:
    def test_single_split_small_head(self):
        c = head_tail(ds(1, 1, 1, 1, 10))
        assert c.breaks == pytest.approx([2.8])
        assert c.k == 2

    def test_first_split_kept_when_head_large(self):
        c = head_tail(ds(1, 2, 3, 4))
        assert c.breaks == pytest.approx([2.5])
        assert c.k == 2

    def test_constant_data_single_class(self):
        c = head_tail(ds(5, 5, 5))
        assert c.k == 1
        assert c.breaks == []

    def test_recurses_on_heavy_tail(self):
        # 1 x16, then 10 x3, then 100: head fractions 4/20=0.2, 1/4=0.25
        d = ds(*([1.0] * 16), 10, 10, 10, 100)
        c = head_tail(d)
        assert c.k == 3

    def test_cap_at_eleven(self):
        values = [2.0**i for i in range(40)]
        c = head_tail(ds(*values))
        assert c.k <= 11


class TestJenksCaspall:
    def test_split_between_clusters(self):
        c = jenks_caspall(ds(1, 2, 3, 10, 11, 12), 2)
        assert list(c.assignment) == [0, 0, 0, 1, 1, 1]

    def test_deterministic(self):
        d = ds(4, 1, 7, 2, 9, 3, 8, 2, 5)
        c1 = jenks_caspall(d, 3)
        c2 = jenks_caspall(d, 3)
        assert c1.breaks == c2.breaks
        assert list(c1.assignment) == list(c2.assignment)

    def test_too_many_classes(self):
        with pytest.raises(TooManyClasses):
            jenks_caspall(ds(1, 2, 2), 3)

    @given(
        values=st.lists(st.integers(min_value=0, max_value=30), min_size=4, max_size=10),
        k=st.integers(min_value=2, max_value=4),
    )
    @settings(max_examples=80, deadline=None)
    def test_never_beats_optimal(self, values, k):
        d = Dataset.from_values([float(v) for v in values])
        if d.n_distinct < k:
            return
        heuristic = classification_ssw(d, jenks_caspall(d, k))
        optimal = classification_ssw(d, fisher_jenks(d, k))
        assert heuristic >= optimal - 1e-9


class TestFisherJenks:
    def test_known_split(self):
        d = ds(1, 2, 3, 10, 11, 12)
        c = fisher_jenks(d, 2)
        assert c.breaks == pytest.approx([6.5])
        assert classification_ssw(d, c) == pytest.approx(4.0)

    def test_k1_single_class(self):
        d = ds(3, 1, 4, 1, 5)
        c = fisher_jenks(d, 1)
        assert c.k == 1
        assert gvf(d, c) == 0.0

    def test_matches_exhaustive_oracle_small(self):
        rng = np.random.default_rng(7)
        for _ in range(60):
            n = int(rng.integers(2, 13))
            values = rng.integers(0, 50, size=n).astype(float)
            d = Dataset.from_values(values)
            for k in range(1, min(4, d.n_distinct) + 1):
                got = classification_ssw(d, fisher_jenks(d, k))
                want = exhaustive_min_ssw(values, k)
                assert got == pytest.approx(want, abs=1e-9), (values, k)

    def test_too_many_classes(self):
        with pytest.raises(TooManyClasses):
            fisher_jenks(ds(1, 1, 2, 2), 3)


class TestMaxP:
    def test_chain_splits_at_value_jump(self):
        d = ds(1, 1, 9, 9)
        c = max_p(d, chain_weights(4), floor=2, seed=0)
        assert c.k == 2
        assert list(c.assignment) == [0, 0, 1, 1]

    def test_floor_equals_n_single_region(self):
        d = ds(1, 2, 3, 4)
        c = max_p(d, chain_weights(4), floor=4, seed=0)
        assert c.k == 1

    def test_same_seed_same_partition(self):
        rng = np.random.default_rng(3)
        values = rng.normal(size=9)
        rs = load_geojson(grid_geojson(3, 3))
        w = build_contiguity(rs, "queen")
        d = Dataset.from_values(values)
        a = max_p(d, w, floor=3, seed=42)
        b = max_p(d, w, floor=3, seed=42)
        assert list(a.assignment) == list(b.assignment)

    def test_floor_above_n(self):
        with pytest.raises(InfeasibleFloor):
            max_p(ds(1, 2), chain_weights(2), floor=3)

    def test_regions_are_contiguous(self):
        rng = np.random.default_rng(5)
        values = rng.normal(size=16)
        rs = load_geojson(grid_geojson(4, 4))
        w = build_contiguity(rs, "rook")
        d = Dataset.from_values(values)
        c = max_p(d, w, floor=4, seed=1)
        for region in range(c.k):
            members = [i for i in range(16) if c.assignment[i] == region]
            seen = {members[0]}
            queue = [members[0]]
            while queue:
                cur = queue.pop()
                for j in w.neighbors[cur]:
                    if j in members and j not in seen:
                        seen.add(j)
                        queue.append(j)
            assert seen == set(members)


class TestGvf:
    def test_k1_zero(self):
        d = ds(1, 2, 3)
        assert gvf(d, fisher_jenks(d, 1)) == 0.0

    def test_each_distinct_value_own_class_is_one(self):
        d = ds(1, 2, 3, 3)
        assert gvf(d, fisher_jenks(d, 3)) == 1.0

    def test_hand_case(self):
        # SST about mean 6.5 = 125.5; split {1,2,3},{10,11,12} -> SSW 4
        d = ds(1, 2, 3, 10, 11, 12)
        c = fisher_jenks(d, 2)
        assert gvf(d, c) == pytest.approx(1 - 4 / 125.5, abs=1e-9)
        assert gvf(d, c) == pytest.approx(0.9681, abs=1e-4)

    def test_zero_variance(self):
        d = ds(2, 2)
        c = Classification("x", 1, [], np.zeros(2, dtype=int), [])
        with pytest.raises(ZeroVariance):
            gvf(d, c)

    def test_monotone_in_k_for_fisher(self):
        rng = np.random.default_rng(11)
        values = rng.normal(size=30)
        d = Dataset.from_values(values)
        scores = [gvf(d, fisher_jenks(d, k)) for k in range(1, 9)]
        assert all(b >= a - 1e-12 for a, b in zip(scores, scores[1:]))

    @given(values=st.lists(st.integers(0, 100), min_size=3, max_size=25),
           k=st.integers(1, 6))
    @settings(max_examples=80, deadline=None)
    def test_bounds(self, values, k):
        d = Dataset.from_values([float(v) for v in values])
        if d.n_distinct < max(k, 2):
            return
        assert 0.0 <= gvf(d, fisher_jenks(d, k)) <= 1.0


class TestMoransI:
    def test_alternating_chain_is_minus_one(self):
        # N=4, sum w=6, numerator -1.5, denominator 1 -> (4/6)*(-1.5) = -1
        assert morans_i([1, 0, 1, 0], chain_weights(4)) == pytest.approx(-1.0)

    def test_two_region_contrast_is_minus_one(self):
        w = WeightsMatrix(n=2, kind="queen", neighbors=[[1], [0]])
        assert morans_i([0, 1], w) == pytest.approx(-1.0)

    def test_constant_field_raises(self):
        with pytest.raises(ZeroVariance):
            morans_i([3, 3, 3], chain_weights(3))

    def test_empty_weights_raise(self):
        w = WeightsMatrix(n=2, kind="queen", neighbors=[[], []])
        with pytest.raises(NoNeighbors):
            morans_i([0, 1], w)

    def test_clustered_chain_positive(self):
        assert morans_i([1, 1, 1, 9, 9, 9], chain_weights(6)) > 0

    def test_row_standardized_option(self):
        value = morans_i([1, 0, 1, 0], chain_weights(4), row_standardized=True)
        assert value <= -0.5  # still strongly negative


class TestClassedMoransI:
    def test_k1_zero_variance(self):
        d = ds(1, 2, 3, 4)
        c = fisher_jenks(d, 1)
        with pytest.raises(ZeroVariance):
            classed_morans_i(d, c, chain_weights(4))

    def test_classed_surface_hand_case(self):
        # classes {1,1},{9,9} -> classed surface [1,1,9,9];
        # dev [-4,-4,4,4], num 2*(16-16+16)=32? -> compute: pairs (0,1),(1,2),(2,3)
        # ordered sum = 2*(16 + (-16) + 16) = 32; I = (4/6)*(32/64) = 1/3
        d = ds(1, 1, 9, 9)
        c = fisher_jenks(d, 2)
        got = classed_morans_i(d, c, chain_weights(4))
        assert got == pytest.approx((4 / 6) * (32 / 64))

    def test_k_equals_n_matches_raw(self):
        d = ds(1, 2, 5, 9)
        c = fisher_jenks(d, 4)
        w = chain_weights(4)
        assert classed_morans_i(d, c, w) == pytest.approx(morans_i(d.values, w))


class TestInvariants:
    @given(
        values=st.lists(st.integers(0, 1000), min_size=4, max_size=20),
        k=st.integers(2, 5),
        seed=st.randoms(),
    )
    @settings(max_examples=60, deadline=None)
    def test_permutation_invariance(self, values, k, seed):
        d = Dataset.from_values([float(v) for v in values])
        if d.n_distinct < k or d.sst <= 0:
            return
        shuffled = list(values)
        seed.shuffle(shuffled)
        d2 = Dataset.from_values([float(v) for v in shuffled])
        for method in (equal_intervals, quantiles, maximum_breaks, jenks_caspall, fisher_jenks):
            assert method(d, k).breaks == pytest.approx(method(d2, k).breaks)

    @given(
        values=st.lists(st.integers(0, 100), min_size=4, max_size=15),
        k=st.integers(2, 4),
        a=st.integers(1, 9),
        b=st.integers(-50, 50),
    )
    @settings(max_examples=60, deadline=None)
    def test_scale_equivariance(self, values, k, a, b):
        d = Dataset.from_values([float(v) for v in values])
        if d.n_distinct < k or d.sst <= 0:
            return
        d2 = Dataset.from_values([a * v + b for v in values])
        for method in (equal_intervals, quantiles, maximum_breaks, fisher_jenks):
            c1, c2 = method(d, k), method(d2, k)
            mapped = [a * x + b for x in c1.breaks]
            assert c2.breaks == pytest.approx(mapped, abs=1e-9 * max(1, a))
            assert gvf(d, c1) == pytest.approx(gvf(d2, c2), abs=1e-9)

    def test_break_value_lands_in_lower_class(self):
        # right-closed intervals: a value equal to a break joins the class below
        for method in (equal_intervals, quantiles, maximum_breaks, fisher_jenks, jenks_caspall):
            d = ds(1, 2, 3, 4, 5, 6)
            c = method(d, 2)
            for b in c.breaks:
                assert int(assign_by_breaks(np.array([b]), c.breaks)[0]) == c.breaks.index(b)


class TestRecommendAndThresholds:
    def _fixture(self):
        rng = np.random.default_rng(2)
        clusters = [2, 10, 25, 50, 80, 99]
        values = [c + rng.normal(0, 0.5) for c in clusters for _ in range(4)]
        return Dataset.from_values(values)

    def test_sorted_descending_by_gvf(self):
        d = self._fixture()
        scores = recommend(d, None, sort_by="gvf")
        gvfs = [s.gvf for s in scores]
        assert gvfs == sorted(gvfs, reverse=True)
        assert scores[0].gvf == max(gvfs)

    def test_no_weights_means_no_morans(self):
        d = self._fixture()
        scores = recommend(d, None)
        assert all(s.morans_i is None for s in scores)

    def test_sort_by_morans_without_weights_warns(self):
        d = self._fixture()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            recommend(d, None, sort_by="morans_i")
        assert any("Moran" in str(w.message) for w in caught)

    def test_tie_break_prefers_smaller_k(self):
        d = ds(1, 2, 3, 10, 11, 12, 20, 21, 22)
        scores = recommend(d, None)
        for s1, s2 in zip(scores, scores[1:]):
            if s1.gvf == s2.gvf:
                assert (s1.k, s1.method) <= (s2.k, s2.method)

    def test_knee_point_hand_case(self):
        assert knee_point_k(ds(1, 2, 3, 10, 11, 12)) == 2

    def test_knee_point_needs_more_classes(self):
        # three well-separated clusters: k=2 leaves one mixed pair of clusters
        d = ds(0, 0, 0, 0, 100, 100, 100, 100, 201, 201, 201, 201)
        assert knee_point_k(d) == 2  # GVF(2) = 1 - 2*... compute below

    def test_knee_point_sweep_consistency(self):
        rng = np.random.default_rng(9)
        d = Dataset.from_values(rng.uniform(0, 1, size=40))
        k = knee_point_k(d)
        assert gvf(d, fisher_jenks(d, k)) > 0.5
        if k > 2:
            assert gvf(d, fisher_jenks(d, k - 1)) <= 0.5

    def test_knee_point_cap_with_warning(self):
        rng = np.random.default_rng(1)
        d = Dataset.from_values(rng.uniform(0, 1, size=30))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            k = knee_point_k(d, threshold=0.9999999)
        assert k == 11
        assert any("cap" in str(w.message) for w in caught)

    def test_zero_variance_rejected(self):
        with pytest.raises(ZeroVariance):
            knee_point_k(ds(2, 2, 2))
        with pytest.raises(ZeroVariance):
            average_gvf(ds(2, 2, 2))

    def test_average_gvf_is_mean_of_sweep(self):
        d = self._fixture()
        scores, _ = sweep(d, None, range(3, 12))
        assert average_gvf(d) == pytest.approx(sum(s.gvf for s in scores) / len(scores))

    def test_three_distinct_values_limits_sweep(self):
        d = ds(1, 1, 2, 2, 3, 3)
        scores, skipped = sweep(d, None, range(3, 12))
        assert all(s.k <= 3 for s in scores)
        assert any("distinct" in s.reason for s in skipped)

    def test_single_applicable_classifier_average(self):
        # only k=3 classifiers can run on 3 distinct values
        d = ds(1, 2, 3)
        value = average_gvf(d)
        scores, _ = sweep(d, None, range(3, 12))
        assert value == pytest.approx(sum(s.gvf for s in scores) / len(scores))

    def test_sweep_with_weights_adds_max_p_and_morans(self):
        rs = load_geojson(grid_geojson(4, 3))
        w = build_contiguity(rs, "queen")
        rng = np.random.default_rng(0)
        d = Dataset.from_values(np.round(rng.uniform(0, 100, size=12), 1))
        scores, _ = sweep(d, w, range(3, 8))
        methods = {s.method for s in scores}
        assert "max_p" in methods
        assert any(s.morans_i is not None for s in scores)

    def test_determinism_across_runs(self):
        rs = load_geojson(grid_geojson(4, 3))
        w = build_contiguity(rs, "queen")
        rng = np.random.default_rng(4)
        d = Dataset.from_values(np.round(rng.uniform(0, 100, size=12), 1))
        a = [(s.method, s.k, s.gvf, s.morans_i) for s in recommend(d, w, seed=7)]
        b = [(s.method, s.k, s.gvf, s.morans_i) for s in recommend(d, w, seed=7)]
        assert a == b


class TestQuantileRankExactness:
    @given(
        n=st.integers(min_value=2, max_value=400),
        k=st.integers(min_value=2, max_value=50),
    )
    @settings(max_examples=200, deadline=None)
    def test_nearest_rank_matches_integer_definition(self, n, k):
        if k > n:
            return
        d = Dataset.from_values([float(v) for v in range(n)])
        c = quantiles(d, k)
        # independent oracle: rank_i = ceil(i*n/k) over exact integers
        expected = []
        for i in range(1, k):
            rank = (i * n + k - 1) // k
            b = float(rank - 1)  # sorted values are 0..n-1
            if not expected or b > expected[-1]:
                expected.append(b)
        pruned = [b for b in expected if b < n - 1]
        assert c.breaks == pytest.approx(pruned)
