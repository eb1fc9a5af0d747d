"""Data classification methods and the quality metrics that rank them.

All classifiers share one interval convention: a value v belongs to class i
iff breaks[i-1] < v <= breaks[i], i.e. classes are right-closed and the first
class is open below.  Classifiers operate on the distinct sorted values with
multiplicities, so duplicated values can never straddle a class boundary.

The spatial regionalization classifier (max_p) is the one exception: its
classes are contiguous map regions, not value intervals, so it carries no
breaks.
"""
from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    DegenerateRange,
    InfeasibleFloor,
    InvalidClassCount,
    NoNeighbors,
    TooManyClasses,
    ZeroVariance,
)
from .geodata import WeightsMatrix

MAX_CLASSES = 11  # beyond this a map counts as unclassed
RECOMMENDED_K = range(3, 8)  # advisable class counts
SWEEP_K = range(3, 12)  # class counts scored for the average-quality threshold
KNEE_GVF_THRESHOLD = 0.5

METHOD_NAMES = (
    "equal_intervals",
    "quantiles",
    "mean_std",
    "maximum_breaks",
    "head_tail",
    "jenks_caspall",
    "fisher_jenks",
    "max_p",
)


@dataclass(frozen=True)
class Dataset:
    """Finite real values to classify; the sorted copy is cached."""

    values: np.ndarray

    @classmethod
    def from_values(cls, values) -> "Dataset":
        arr = np.asarray(list(values), dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("dataset must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(arr)):
            raise ValueError("dataset values must be finite")
        return cls(arr)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @cached_property
    def sorted_values(self) -> np.ndarray:
        return np.sort(self.values)

    @cached_property
    def distinct(self) -> np.ndarray:
        return np.unique(self.values)

    @cached_property
    def counts(self) -> np.ndarray:
        return np.unique(self.values, return_counts=True)[1]

    @property
    def n_distinct(self) -> int:
        return int(self.distinct.size)

    @property
    def mean(self) -> float:
        return float(self.values.mean())

    @property
    def std(self) -> float:
        """Sample standard deviation (n-1 denominator)."""
        if self.n < 2:
            return 0.0
        return float(self.values.std(ddof=1))

    @property
    def sst(self) -> float:
        return float(((self.values - self.values.mean()) ** 2).sum())


@dataclass
class ClassStats:
    count: int
    mean: float | None
    min: float | None
    max: float | None


@dataclass
class Classification:
    method: str
    k: int
    breaks: list[float] | None  # k-1 ascending interior breaks; None for max_p
    assignment: np.ndarray  # class index per value, input order
    class_stats: list[ClassStats]
    warnings: list[str] = field(default_factory=list)

    def class_means(self) -> np.ndarray:
        return np.array(
            [s.mean if s.mean is not None else math.nan for s in self.class_stats]
        )


def assign_by_breaks(values: np.ndarray, breaks: list[float]) -> np.ndarray:
    """Right-closed interval assignment: class i iff breaks[i-1] < v <= breaks[i]."""
    return np.searchsorted(np.asarray(breaks, dtype=np.float64), values, side="left")


def _stats_for(values: np.ndarray, assignment: np.ndarray, k: int) -> list[ClassStats]:
    stats = []
    for i in range(k):
        members = values[assignment == i]
        if members.size == 0:
            stats.append(ClassStats(0, None, None, None))
        else:
            stats.append(
                ClassStats(
                    int(members.size),
                    float(members.mean()),
                    float(members.min()),
                    float(members.max()),
                )
            )
    return stats


def _from_breaks(
    d: Dataset, method: str, breaks: list[float], warnings_: list[str] | None = None
) -> Classification:
    """Build a Classification from interior breaks, pruning useless ones.

    Breaks at or above the data maximum (or below the minimum) would create
    permanently empty classes; they are dropped with a warning.
    """
    warnings_ = list(warnings_ or [])
    vmin, vmax = float(d.sorted_values[0]), float(d.sorted_values[-1])
    pruned: list[float] = []
    for b in breaks:
        if b >= vmax or b < vmin:
            warnings_.append(f"dropped break {b:g} outside the data range")
        elif pruned and b <= pruned[-1]:
            warnings_.append(f"collapsed duplicate break {b:g}")
        else:
            pruned.append(float(b))
    if len(pruned) < len(breaks) and not warnings_:
        warnings_.append("collapsed classes")
    k = len(pruned) + 1
    assignment = assign_by_breaks(d.values, pruned)
    return Classification(
        method=method,
        k=k,
        breaks=pruned,
        assignment=assignment,
        class_stats=_stats_for(d.values, assignment, k),
        warnings=warnings_,
    )


# ---------------------------------------------------------------------------
# Classifiers
# ---------------------------------------------------------------------------

def equal_intervals(d: Dataset, k: int) -> Classification:
    """k classes of equal width over the data range."""
    if k < 1:
        raise InvalidClassCount("k must be >= 1")
    vmin, vmax = float(d.sorted_values[0]), float(d.sorted_values[-1])
    if vmax <= vmin:
        raise DegenerateRange("all values are equal")
    width = (vmax - vmin) / k
    breaks = [vmin + i * width for i in range(1, k)]
    return _from_breaks(d, "equal_intervals", breaks)


def quantiles(d: Dataset, k: int) -> Classification:
    """Nearest-rank quantile classes of roughly n/k members each."""
    if k < 1:
        raise InvalidClassCount("k must be >= 1")
    if k > d.n:
        raise InvalidClassCount(f"k={k} exceeds n={d.n}")
    s = d.sorted_values
    breaks: list[float] = []
    warn: list[str] = []
    for i in range(1, k):
        rank = -(-(i * d.n) // k)  # nearest-rank quantile, exact integer ceil
        b = float(s[rank - 1])
        if breaks and b <= breaks[-1]:
            warn.append(f"collapsed duplicate quantile break {b:g}")
            continue
        breaks.append(b)
    if warn:
        warn.insert(0, "collapsed classes: duplicate values span quantile boundaries")
    return _from_breaks(d, "quantiles", breaks, warn)


def mean_std(d: Dataset, k: int = 5) -> Classification:
    """Classes bounded at whole standard deviations around the mean.

    k must be odd (3..7): boundaries sit at mean +/- m*s for m = 1..(k-1)/2,
    keeping the break set symmetric about the mean.  Boundaries that fall
    outside the data range are dropped (with a warning), so the effective
    class count can be smaller than requested.
    """
    if k % 2 == 0 or not 3 <= k <= 7:
        raise InvalidClassCount("mean_std requires odd k in 3..7")
    s = d.std
    if s <= 0:
        raise ZeroVariance("standard deviation is zero")
    half = (k - 1) // 2
    breaks = sorted(d.mean + m * s for m in range(-half, half + 1) if m != 0)
    return _from_breaks(d, "mean_std", breaks)


def maximum_breaks(d: Dataset, k: int) -> Classification:
    """Breaks at the midpoints of the k-1 widest gaps between sorted values."""
    if k < 1:
        raise InvalidClassCount("k must be >= 1")
    if k > d.n_distinct:
        raise TooManyClasses(f"k={k} exceeds {d.n_distinct} distinct values")
    u = d.distinct
    gaps = np.diff(u)
    # widest k-1 gaps; ties resolved to the leftmost gap
    order = sorted(range(len(gaps)), key=lambda i: (-gaps[i], i))[: k - 1]
    breaks = sorted(float((u[i] + u[i + 1]) / 2) for i in order)
    return _from_breaks(d, "maximum_breaks", breaks)


def head_tail(d: Dataset) -> Classification:
    """Iterative mean splits for heavy-tailed data; k emerges from the data.

    Each round splits at the current mean and recurses into the head (values
    above the mean) while the head holds at most 40% of the current values
    and still has more than one distinct value.  The first split always
    counts.  Capped at 11 classes.
    """
    if d.n < 1:
        raise InvalidClassCount("empty dataset")
    breaks: list[float] = []
    current = d.sorted_values
    while len(breaks) < MAX_CLASSES - 1:
        m = float(current.mean())
        head = current[current > m]
        if head.size == 0:
            break  # constant segment, nothing to split
        breaks.append(m)
        if head.size / current.size > 0.40:
            break
        if np.unique(head).size <= 1:
            break
        current = head
    return _from_breaks(d, "head_tail", breaks)


# -- Jenks-Caspall -----------------------------------------------------------

def _weighted_partition_breaks(u: np.ndarray, starts: list[int]) -> list[float]:
    """Interior breaks as midpoints between adjacent classes of distinct values."""
    return [float((u[s - 1] + u[s]) / 2) for s in starts[1:]]


def jenks_caspall(d: Dataset, k: int) -> Classification:
    """Heuristic minimization of total absolute deviation about class means.

    Deterministic: quantile initialization over the distinct values, then
    single-value boundary moves accepted while the objective decreases, with
    a fixed pass cap.
    """
    if k < 1:
        raise InvalidClassCount("k must be >= 1")
    if k > d.n_distinct:
        raise TooManyClasses(f"k={k} exceeds {d.n_distinct} distinct values")
    u = d.distinct
    c = d.counts.astype(np.float64)
    m = len(u)

    # initial contiguous partition: spread distinct values by cumulative count
    cum = np.cumsum(c)
    total = cum[-1]
    starts = [0]
    for i in range(1, k):
        target = total * i / k
        idx = int(np.searchsorted(cum, target, side="left"))
        idx = max(idx, starts[-1] + 1)
        idx = min(idx, m - (k - i))
        starts.append(idx)

    def objective(starts_: list[int]) -> float:
        bounds = starts_ + [m]
        tot = 0.0
        for a, b in zip(bounds, bounds[1:]):
            seg_v, seg_c = u[a:b], c[a:b]
            mean = float((seg_v * seg_c).sum() / seg_c.sum())
            tot += float((np.abs(seg_v - mean) * seg_c).sum())
        return tot

    best = objective(starts)
    for _ in range(1000):
        improved = False
        for bi in range(1, k):
            candidates = []
            # move last value of the left class into the right class
            left_lo = starts[bi - 1]
            if starts[bi] - left_lo > 1:
                candidates.append(starts[bi] - 1)
            # move first value of the right class into the left class
            right_hi = starts[bi + 1] if bi + 1 < k else m
            if right_hi - starts[bi] > 1:
                candidates.append(starts[bi] + 1)
            for new_start in candidates:
                trial = list(starts)
                trial[bi] = new_start
                val = objective(trial)
                if val < best - 1e-9 * max(1.0, best):
                    starts = trial
                    best = val
                    improved = True
                    break
        if not improved:
            break

    return _from_breaks(d, "jenks_caspall", _weighted_partition_breaks(u, starts))


# -- Fisher-Jenks -------------------------------------------------------------

def fisher_jenks(d: Dataset, k: int) -> Classification:
    """Optimal partition minimizing the within-class sum of squares (dynamic
    programming over distinct values with multiplicities, O(k m^2))."""
    if k < 1:
        raise InvalidClassCount("k must be >= 1")
    if k > d.n_distinct:
        raise TooManyClasses(f"k={k} exceeds {d.n_distinct} distinct values")
    u = d.distinct
    c = d.counts.astype(np.float64)
    m = len(u)

    pw = np.concatenate([[0.0], np.cumsum(c)])
    ps = np.concatenate([[0.0], np.cumsum(c * u)])
    pq = np.concatenate([[0.0], np.cumsum(c * u * u)])

    def sse(i: int, j: int) -> float:
        """Weighted SSE of distinct values i..j inclusive."""
        w = pw[j + 1] - pw[i]
        s = ps[j + 1] - ps[i]
        q = pq[j + 1] - pq[i]
        return max(q - s * s / w, 0.0)

    INF = math.inf
    cost = [[INF] * m for _ in range(k + 1)]
    back = [[0] * m for _ in range(k + 1)]
    for j in range(m):
        cost[1][j] = sse(0, j)
    for cls in range(2, k + 1):
        for j in range(cls - 1, m):
            best_val, best_i = INF, cls - 1
            for i in range(cls - 1, j + 1):
                val = cost[cls - 1][i - 1] + sse(i, j)
                # relative tie window: exact ties carry float noise that is
                # not scale-invariant, so near-ties keep the smaller i
                if best_val == INF or val < best_val - 1e-9 * max(1.0, best_val):
                    best_val, best_i = val, i
            cost[cls][j] = best_val
            back[cls][j] = best_i

    starts = [0] * k
    j = m - 1
    for cls in range(k, 1, -1):
        start = back[cls][j]
        starts[cls - 1] = start
        j = start - 1
    return _from_breaks(d, "fisher_jenks", _weighted_partition_breaks(u, starts))


# -- max-p regionalization -----------------------------------------------------

def max_p(d: Dataset, w: WeightsMatrix, floor: int, seed: int = 0) -> Classification:
    """Seeded greedy contiguous regionalization with local improvement.

    Grows regions to the floor size in a seeded random order, absorbs
    enclaves into the most similar adjacent region, then applies single-unit
    border moves that lower the within-region sum of squares while keeping
    every region contiguous and at floor size.  Heuristic; deterministic for
    a fixed seed.
    """
    n = d.n
    if w.n != n:
        raise ValueError("weights size does not match dataset")
    if floor < 1:
        raise InvalidClassCount("floor must be >= 1")
    if floor > n:
        raise InfeasibleFloor(f"floor={floor} exceeds n={n}")
    values = d.values
    if 2 * floor > n:
        assignment = np.zeros(n, dtype=np.int64)
        return Classification(
            method="max_p",
            k=1,
            breaks=None,
            assignment=assignment,
            class_stats=_stats_for(values, assignment, 1),
            warnings=["floor allows only a single region"],
        )

    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)

    assignment = np.full(n, -1, dtype=np.int64)
    regions: list[list[int]] = []
    for seed_unit in order:
        if assignment[seed_unit] != -1:
            continue
        members = [seed_unit]
        assignment[seed_unit] = len(regions)
        while len(members) < floor:
            frontier = sorted(
                {
                    j
                    for i in members
                    for j in w.neighbors[i]
                    if assignment[j] == -1
                }
            )
            if not frontier:
                break
            mean = float(values[members].mean())
            nxt = min(frontier, key=lambda j: (abs(values[j] - mean), j))
            members.append(nxt)
            assignment[nxt] = len(regions)
        if len(members) < floor:
            # could not reach the floor: release as enclaves
            for i in members:
                assignment[i] = -1
        else:
            regions.append(members)

    if not regions:
        assignment = np.zeros(n, dtype=np.int64)
        return Classification(
            method="max_p",
            k=1,
            breaks=None,
            assignment=assignment,
            class_stats=_stats_for(values, assignment, 1),
            warnings=["contiguity too sparse to grow regions; single region"],
        )

    # enclave assignment: most similar adjacent region, passes until done
    while np.any(assignment == -1):
        snapshot = assignment.copy()
        means = [float(values[r].mean()) for r in regions]
        progressed = False
        for i in range(n):
            if snapshot[i] != -1:
                continue
            adjacent = sorted({int(snapshot[j]) for j in w.neighbors[i] if snapshot[j] != -1})
            if not adjacent:
                continue
            target = min(adjacent, key=lambda r: (abs(values[i] - means[r]), r))
            assignment[i] = target
            regions[target].append(i)
            progressed = True
        if not progressed:
            # disconnected leftovers: merge them into the most similar region
            means = [float(values[r].mean()) for r in regions]
            for i in range(n):
                if assignment[i] == -1:
                    target = min(
                        range(len(regions)), key=lambda r: (abs(values[i] - means[r]), r)
                    )
                    assignment[i] = target
                    regions[target].append(i)

    def region_sse(members: list[int]) -> float:
        if not members:
            return 0.0
        vals = values[members]
        return float(((vals - vals.mean()) ** 2).sum())

    def contiguous_without(members: list[int], removed: int) -> bool:
        rest = [i for i in members if i != removed]
        if not rest:
            return False
        seen = {rest[0]}
        queue = [rest[0]]
        member_set = set(rest)
        while queue:
            cur = queue.pop()
            for j in w.neighbors[cur]:
                if j in member_set and j not in seen:
                    seen.add(j)
                    queue.append(j)
        return len(seen) == len(rest)

    for _ in range(100):
        improved = False
        for i in range(n):
            src = int(assignment[i])
            if len(regions[src]) <= floor:
                continue
            neighbor_regions = sorted(
                {int(assignment[j]) for j in w.neighbors[i] if assignment[j] != src}
            )
            if not neighbor_regions or not contiguous_without(regions[src], i):
                continue
            base = region_sse(regions[src])
            best_delta, best_target = -1e-12, None
            for target in neighbor_regions:
                delta = (
                    base
                    - region_sse([x for x in regions[src] if x != i])
                    + region_sse(regions[target])
                    - region_sse(regions[target] + [i])
                )
                if delta > best_delta:
                    best_delta, best_target = delta, target
            if best_target is not None and best_delta > 1e-12:
                regions[src].remove(i)
                regions[best_target].append(i)
                assignment[i] = best_target
                improved = True
        if not improved:
            break

    # renumber regions by ascending mean so output labels are deterministic
    order_by_mean = sorted(
        range(len(regions)), key=lambda r: (float(values[regions[r]].mean()), r)
    )
    remap = {old: new for new, old in enumerate(order_by_mean)}
    assignment = np.array([remap[int(a)] for a in assignment], dtype=np.int64)
    k = len(regions)
    return Classification(
        method="max_p",
        k=k,
        breaks=None,
        assignment=assignment,
        class_stats=_stats_for(values, assignment, k),
        warnings=["heuristic regionalization; classes are regions, not value bins"],
    )


# ---------------------------------------------------------------------------
# Quality metrics
# ---------------------------------------------------------------------------

def gvf(d: Dataset, c: Classification) -> float:
    """Goodness of variance fit on [0, 1]: 1 - SSW/SST."""
    sst = d.sst
    if sst <= 0:
        raise ZeroVariance("SST is zero")
    ssw = 0.0
    for i in range(c.k):
        members = d.values[c.assignment == i]
        if members.size:
            ssw += float(((members - members.mean()) ** 2).sum())
    return min(max(1.0 - ssw / sst, 0.0), 1.0)


def morans_i(x, w: WeightsMatrix, row_standardized: bool = False) -> float:
    """Global spatial autocorrelation with binary symmetric weights."""
    arr = np.asarray(list(x), dtype=np.float64)
    if arr.size != w.n:
        raise ValueError("value count does not match weights size")
    total_w = w.total_weight
    if total_w <= 0:
        raise NoNeighbors("spatial weights are empty")
    dev = arr - arr.mean()
    denom = float((dev**2).sum())
    if denom <= 0:
        raise ZeroVariance("variance of the surface is zero")
    num = 0.0
    s0 = 0.0
    for i, ns in enumerate(w.neighbors):
        if not ns:
            continue
        weight = (1.0 / len(ns)) if row_standardized else 1.0
        for j in ns:
            num += weight * dev[i] * dev[j]
            s0 += weight
    return float(arr.size / s0 * num / denom)


def classed_morans_i(d: Dataset, c: Classification, w: WeightsMatrix) -> float:
    """Moran's I of the classed surface (each value replaced by its class mean)."""
    means = c.class_means()
    surface = means[c.assignment]
    return morans_i(surface, w)


# ---------------------------------------------------------------------------
# Scoring sweep, recommendation, thresholds
# ---------------------------------------------------------------------------

@dataclass
class MethodScore:
    method: str
    k: int
    gvf: float
    morans_i: float | None
    breaks: list[float] | None = None

    def to_row(self) -> dict:
        return {
            "method": self.method,
            "k": self.k,
            "gvf": self.gvf,
            "morans_i": self.morans_i,
        }


@dataclass
class SkippedCombination:
    method: str
    k: int | None
    reason: str


def _classify_for_sweep(
    d: Dataset, method: str, k: int, w: WeightsMatrix | None, seed: int
) -> Classification | str:
    """Run one classifier; return a Classification or a skip reason."""
    try:
        if method == "equal_intervals":
            return equal_intervals(d, k)
        if method == "quantiles":
            return quantiles(d, k)
        if method == "mean_std":
            if k % 2 == 0 or not 3 <= k <= 7:
                return "requires odd k in 3..7"
            return mean_std(d, k)
        if method == "maximum_breaks":
            return maximum_breaks(d, k)
        if method == "jenks_caspall":
            return jenks_caspall(d, k)
        if method == "fisher_jenks":
            return fisher_jenks(d, k)
        if method == "max_p":
            if w is None:
                return "no spatial weights supplied"
            if w.total_weight <= 0:
                return "contiguity graph has no edges"
            return max_p(d, w, floor=max(1, d.n // k), seed=seed)
        if method == "head_tail":
            return head_tail(d)
        return f"unknown method {method}"
    except (DegenerateRange, ZeroVariance, TooManyClasses, InvalidClassCount, InfeasibleFloor) as exc:
        return str(exc)


def sweep(
    d: Dataset,
    w: WeightsMatrix | None = None,
    k_range: range = RECOMMENDED_K,
    seed: int = 0,
) -> tuple[list[MethodScore], list[SkippedCombination]]:
    """Score every applicable (method, k) combination.

    head_tail determines its own k and contributes a single entry when that
    k lands inside the range; max_p derives a floor of n//k per requested k
    and is recorded at its emergent class count.  Duplicate (method, k)
    results are scored once.
    """
    scores: list[MethodScore] = []
    skipped: list[SkippedCombination] = []
    seen: set[tuple[str, int]] = set()

    def record(method: str, requested_k: int | None, c: Classification | str):
        if isinstance(c, str):
            skipped.append(SkippedCombination(method, requested_k, c))
            return
        key = (method, c.k)
        if key in seen:
            return
        if requested_k is not None and c.k not in k_range and method in ("head_tail", "max_p"):
            skipped.append(
                SkippedCombination(method, requested_k, f"emergent k={c.k} outside range")
            )
            return
        seen.add(key)
        try:
            g = gvf(d, c)
        except ZeroVariance:
            skipped.append(SkippedCombination(method, c.k, "zero variance"))
            return
        mi: float | None = None
        if w is not None and w.total_weight > 0:
            try:
                mi = classed_morans_i(d, c, w)
            except (ZeroVariance, NoNeighbors):
                mi = None
        scores.append(MethodScore(method, c.k, g, mi, breaks=c.breaks))

    for method in METHOD_NAMES:
        if method == "head_tail":
            c = _classify_for_sweep(d, method, 0, w, seed)
            if isinstance(c, str):
                skipped.append(SkippedCombination(method, None, c))
            elif c.k in k_range:
                record(method, c.k, c)
            else:
                skipped.append(
                    SkippedCombination(method, None, f"emergent k={c.k} outside range")
                )
            continue
        for k in k_range:
            if k > d.n_distinct:
                skipped.append(
                    SkippedCombination(method, k, f"k exceeds {d.n_distinct} distinct values")
                )
                continue
            record(method, k, _classify_for_sweep(d, method, k, w, seed))
    return scores, skipped


def recommend(
    d: Dataset,
    w: WeightsMatrix | None = None,
    k_range: range = RECOMMENDED_K,
    sort_by: str = "gvf",
    seed: int = 0,
) -> list[MethodScore]:
    """Applicable (method, k) scores sorted best-first by the chosen metric.

    Ties break toward smaller k, then method name.  When sorting by Moran's I
    and no score has one, the GVF-sorted order is kept with a warning.
    """
    if sort_by not in ("gvf", "morans_i"):
        raise ValueError(f"sort_by must be gvf or morans_i, got {sort_by!r}")
    scores, _ = sweep(d, w, k_range, seed)
    if sort_by == "morans_i" and all(s.morans_i is None for s in scores):
        warnings.warn("no Moran's I available; keeping GVF order", stacklevel=2)
        sort_by = "gvf"

    def sort_key(s: MethodScore):
        metric = s.gvf if sort_by == "gvf" else (s.morans_i if s.morans_i is not None else -math.inf)
        return (-metric, s.k, s.method)

    return sorted(scores, key=sort_key)


def knee_point_k(d: Dataset, threshold: float = KNEE_GVF_THRESHOLD, cap: int = MAX_CLASSES) -> int:
    """Smallest k >= 2 whose optimal-partition GVF exceeds the threshold."""
    if d.sst <= 0:
        raise ZeroVariance("SST is zero")
    limit = min(cap, d.n_distinct)
    for k in range(2, limit + 1):
        if gvf(d, fisher_jenks(d, k)) > threshold:
            return k
    warnings.warn(
        f"GVF never exceeded {threshold} by k={limit}; returning the cap", stacklevel=2
    )
    return limit


def average_gvf(d: Dataset, w: WeightsMatrix | None = None, seed: int = 0) -> float:
    """Mean GVF over every applicable (method, k) pair for k in 3..11.

    This is the default low-quality threshold: a classification scoring
    below it is flagged.
    """
    if d.sst <= 0:
        raise ZeroVariance("SST is zero")
    scores, _ = sweep(d, w, SWEEP_K, seed)
    if not scores:
        raise ZeroVariance("no classification method applicable")
    return float(sum(s.gvf for s in scores) / len(scores))
