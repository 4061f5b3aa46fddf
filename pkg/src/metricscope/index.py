"""Similarity queries: kNN and range, by sequential scan and by VP-tree.

The sequential scan is the ground truth; the vantage-point tree accelerates
kNN for descriptors that claim the triangle inequality and must return
entry-for-entry identical results (ties broken by ascending COD).
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, get_row, row_index
from .errors import ContractError, UnsupportedError
from .metrics import MetricDescriptor, bind, distance


@dataclass(frozen=True)
class QuerySpec:
    dataset_id: str
    metric: MetricDescriptor
    center_cod: int | None = None
    center_vector: tuple[float, ...] | None = None
    k: int | None = None
    radius: float | None = None

    @property
    def kind(self) -> str:
        return "knn" if self.k is not None else "range"

    def __post_init__(self):
        if (self.center_cod is None) == (self.center_vector is None):
            raise ContractError("exactly one of center_cod / center_vector is required")
        if (self.k is None) == (self.radius is None):
            raise ContractError("exactly one of k / radius is required")
        if self.k is not None and self.k < 1:
            raise ContractError("k must be >= 1")
        if self.radius is not None and self.radius < 0:
            raise ContractError("radius must be >= 0")


@dataclass(frozen=True)
class QueryStats:
    distance_evaluations: int
    elapsed_seconds: float


@dataclass(frozen=True)
class ResultSet:
    entries: tuple[tuple[int, float], ...]  # (cod, distance), non-decreasing distance
    center_echo: tuple[float, ...]
    metric_echo: MetricDescriptor
    stats: QueryStats = field(compare=False, default=QueryStats(0, 0.0))

    def __post_init__(self):
        # ordering contract, enforced at construction so every result set in
        # the system is ordered
        prev = -float("inf")
        seen = set()
        for cod, d in self.entries:
            if d < prev:
                raise ContractError("result set distances must be non-decreasing")
            if cod in seen:
                raise ContractError(f"duplicate cod {cod} in result set")
            seen.add(cod)
            prev = d

    @property
    def cods(self) -> tuple[int, ...]:
        return tuple(cod for cod, _ in self.entries)


def query_stats(rs: ResultSet) -> QueryStats:
    return rs.stats


def _resolve_center(ds: Dataset, q: QuerySpec) -> np.ndarray:
    if q.center_cod is not None:
        return ds.matrix[row_index(ds, q.center_cod)]
    c = np.asarray(q.center_vector, dtype=np.float64)
    if c.shape != (ds.n,):
        raise ContractError(f"center has {c.shape[0]} values, dataset has {ds.n} attributes")
    return c


def knn_scan(ds: Dataset, m: MetricDescriptor, q: QuerySpec) -> ResultSet:
    if q.kind != "knn":
        raise ContractError("knn_scan requires a knn query")
    m = bind(m, ds)
    center = _resolve_center(ds, q)
    t0 = time.perf_counter()
    scored = sorted(
        ((distance(m, center, ds.matrix[i]), ds.rows[i].cod) for i in range(len(ds))),
    )
    k = min(q.k, len(ds))
    entries = tuple((cod, d) for d, cod in scored[:k])
    stats = QueryStats(len(ds), time.perf_counter() - t0)
    return ResultSet(entries, tuple(center.tolist()), m, stats)


def range_scan(ds: Dataset, m: MetricDescriptor, q: QuerySpec) -> ResultSet:
    if q.kind != "range":
        raise ContractError("range_scan requires a range query")
    m = bind(m, ds)
    center = _resolve_center(ds, q)
    t0 = time.perf_counter()
    scored = sorted(
        (d, cod)
        for d, cod in (
            (distance(m, center, ds.matrix[i]), ds.rows[i].cod) for i in range(len(ds))
        )
        if d <= q.radius
    )
    entries = tuple((cod, d) for d, cod in scored)
    stats = QueryStats(len(ds), time.perf_counter() - t0)
    return ResultSet(entries, tuple(center.tolist()), m, stats)


@dataclass(frozen=True)
class VpNode:
    cod: int
    radius: float  # median distance from the vantage point to its subset
    inside: "VpNode | None"
    outside: "VpNode | None"


@dataclass(frozen=True)
class VpTree:
    root: VpNode
    dataset: Dataset
    metric: MetricDescriptor
    size: int
    build_distance_evaluations: int


def _spread_vantage(ds: Dataset, m: MetricDescriptor, idxs: list[int], rng, evals: list[int]) -> int:
    """Pick the candidate whose distances to a probe subset spread the most."""
    if len(idxs) <= 2:
        return idxs[0]
    n_cand = min(5, len(idxs))
    n_probe = min(10, len(idxs))
    cand = rng.choice(len(idxs), size=n_cand, replace=False)
    probe = rng.choice(len(idxs), size=n_probe, replace=False)
    best, best_spread = int(cand[0]), -1.0
    for c in cand:
        ds_to_probe = [distance(m, ds.matrix[idxs[c]], ds.matrix[idxs[p]]) for p in probe]
        evals[0] += n_probe
        spread = float(np.std(ds_to_probe))
        if spread > best_spread:
            best, best_spread = int(c), spread
    return idxs[best]


def build_vptree(ds: Dataset, m: MetricDescriptor, seed: int = 0) -> VpTree:
    if not m.claims_triangle_inequality:
        raise UnsupportedError(
            f"metric family {m.family!r} does not claim the triangle inequality; "
            "use sequential scan"
        )
    m = bind(m, ds)
    rng = np.random.default_rng(seed)
    evals = [0]

    def build(idxs: list[int]) -> VpNode | None:
        if not idxs:
            return None
        if len(idxs) == 1:
            return VpNode(ds.rows[idxs[0]].cod, 0.0, None, None)
        v = _spread_vantage(ds, m, idxs, rng, evals)
        rest = [i for i in idxs if i != v]
        dists = [distance(m, ds.matrix[v], ds.matrix[i]) for i in rest]
        evals[0] += len(rest)
        mu = float(np.median(dists))
        inside = [i for i, d in zip(rest, dists) if d <= mu]
        outside = [i for i, d in zip(rest, dists) if d > mu]
        if not inside or not outside:
            # all-equal distances; split arbitrarily to keep depth bounded
            half = len(rest) // 2
            inside, outside = rest[:half], rest[half:]
        return VpNode(ds.rows[v].cod, mu, build(inside), build(outside))

    root = build(list(range(len(ds))))
    return VpTree(root, ds, m, len(ds), evals[0])


def knn_tree(t: VpTree, q: QuerySpec) -> ResultSet:
    if q.kind != "knn":
        raise ContractError("knn_tree requires a knn query")
    ds, m = t.dataset, t.metric
    center = _resolve_center(ds, q)
    k = min(q.k, len(ds))
    t0 = time.perf_counter()
    evals = 0
    # max-heap (via negation) of the k best (distance, cod) pairs
    heap: list[tuple[float, int]] = []

    def worst() -> tuple[float, int]:
        d, c = heap[0]
        return (-d, -c)

    def visit(node: VpNode | None):
        nonlocal evals
        if node is None:
            return
        d = distance(m, center, ds.matrix[row_index(ds, node.cod)])
        evals += 1
        cand = (d, node.cod)
        if len(heap) < k:
            heapq.heappush(heap, (-d, -node.cod))
        elif cand < worst():
            heapq.heapreplace(heap, (-d, -node.cod))
        near_first = (node.inside, node.outside) if d <= node.radius else (node.outside, node.inside)
        for child in near_first:
            if child is None:
                continue
            if child is node.inside:
                lb = d - node.radius
            else:
                lb = node.radius - d
            if len(heap) < k or max(lb, 0.0) <= worst()[0]:
                visit(child)

    visit(t.root)
    entries = tuple((c, d) for d, c in sorted((-nd, -nc) for nd, nc in heap))
    stats = QueryStats(evals, time.perf_counter() - t0)
    return ResultSet(entries, tuple(center.tolist()), m, stats)
