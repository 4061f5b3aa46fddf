"""Distance-function family, metric-axiom checks and the runtime registry.

Families:

  euclidean            (sum_i |x_i - y_i|^2)^(1/2)
  city_block           sum_i |x_i - y_i|
  minkowski            (sum_i |x_i - y_i|^p)^(1/p), p >= 1
  weighted_minkowski   (sum_i w_i |x_i - y_i|^p)^(1/p), w_i >= 0
  exp_weighted         (sum_i (exp(w_i |x_i - y_i| / r_i) - 1)^p)^(1/p)

exp_weighted stretches large per-attribute differences exponentially; r_i is
the attribute range of the dataset it is bound to (1.0 for constant
attributes) so the exponent is scale-free. It does not satisfy the triangle
inequality, so indexes must fall back to sequential scan for it.

All families evaluate on |x_i - y_i|, which is bit-symmetric under IEEE
negation, so distance(x, y) == distance(y, x) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dataset import Dataset, FeatureVector
from .errors import ConflictError, ContractError, NotFoundError

FAMILIES = ("euclidean", "city_block", "minkowski", "weighted_minkowski", "exp_weighted")


@dataclass(frozen=True)
class MetricDescriptor:
    family: str
    p: float = 2.0
    weights: tuple[float, ...] | None = None
    ranges: tuple[float, ...] | None = None  # exp_weighted only; from dataset stats
    claims_triangle_inequality: bool = True

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ContractError(f"unknown metric family {self.family!r}")
        if self.p < 1:
            raise ContractError(f"exponent p must be >= 1, got {self.p}")
        if self.weights is not None and any(w < 0 for w in self.weights):
            raise ContractError("weights must be non-negative")
        if self.family == "exp_weighted" and self.claims_triangle_inequality:
            raise ContractError("exp_weighted cannot claim the triangle inequality")


def euclidean() -> MetricDescriptor:
    return MetricDescriptor("euclidean", p=2.0)


def city_block() -> MetricDescriptor:
    return MetricDescriptor("city_block", p=1.0)


def minkowski(p: float) -> MetricDescriptor:
    return MetricDescriptor("minkowski", p=p)


def weighted_minkowski(p: float, weights) -> MetricDescriptor:
    return MetricDescriptor("weighted_minkowski", p=p, weights=tuple(weights))


def exp_weighted(p: float = 2.0, weights=None, ranges=None) -> MetricDescriptor:
    return MetricDescriptor(
        "exp_weighted",
        p=p,
        weights=tuple(weights) if weights is not None else None,
        ranges=tuple(ranges) if ranges is not None else None,
        claims_triangle_inequality=False,
    )


def bind(m: MetricDescriptor, ds: Dataset) -> MetricDescriptor:
    """Attach dataset-dependent defaults (attribute ranges for exp_weighted)
    and validate weight dimensionality against the dataset."""
    if m.weights is not None and len(m.weights) != ds.n:
        raise ContractError(
            f"weight vector has {len(m.weights)} entries, dataset has {ds.n} attributes"
        )
    if m.family == "exp_weighted" and m.ranges is None:
        return replace(m, ranges=ds.ranges)
    return m


def _as_array(v) -> np.ndarray:
    if isinstance(v, FeatureVector):
        return np.asarray(v.values, dtype=np.float64)
    return np.asarray(v, dtype=np.float64)


def distance(m: MetricDescriptor, x, y) -> float:
    """Distance between two feature vectors under descriptor m."""
    xa, ya = _as_array(x), _as_array(y)
    if xa.shape != ya.shape:
        raise ContractError(f"dimensionality mismatch: {xa.shape} vs {ya.shape}")
    return float(_eval(m, np.abs(xa - ya)))


def distance_to_many(m: MetricDescriptor, x, ys: np.ndarray) -> np.ndarray:
    """Distances from x to every row of the (k, n) matrix ys."""
    xa = _as_array(x)
    ys = np.asarray(ys, dtype=np.float64)
    if ys.ndim != 2 or ys.shape[1] != xa.shape[0]:
        raise ContractError(f"dimensionality mismatch: {xa.shape} vs {ys.shape}")
    return _eval(m, np.abs(ys - xa[None, :]), axis=1)


def _eval(m: MetricDescriptor, diffs: np.ndarray, axis=None):
    if m.family == "euclidean":
        return np.sqrt(np.sum(diffs * diffs, axis=axis))
    if m.family == "city_block":
        return np.sum(diffs, axis=axis)
    if m.family == "minkowski":
        return np.sum(diffs**m.p, axis=axis) ** (1.0 / m.p)
    n = diffs.shape[-1]
    w = np.ones(n) if m.weights is None else np.asarray(m.weights, dtype=np.float64)
    if w.shape[0] != n:
        raise ContractError(f"weight vector length {w.shape[0]} does not match dimensionality {n}")
    if m.family == "weighted_minkowski":
        return np.sum(w * diffs**m.p, axis=axis) ** (1.0 / m.p)
    # exp_weighted
    if m.ranges is None:
        raise ContractError("exp_weighted metric must be bound to a dataset (missing ranges)")
    r = np.asarray(m.ranges, dtype=np.float64)
    if r.shape[0] != n:
        raise ContractError(f"range vector length {r.shape[0]} does not match dimensionality {n}")
    return np.sum(np.expm1(w * diffs / r) ** m.p, axis=axis) ** (1.0 / m.p)


class MetricRegistry:
    """Named metric descriptor templates, instantiable with per-query
    parameter overrides. Replaces dynamic plug-in loading with in-process
    registration."""

    def __init__(self):
        self._entries: dict[str, MetricDescriptor] = {}
        for name, template in (
            ("euclidean", euclidean()),
            ("city_block", city_block()),
            ("minkowski", minkowski(2.0)),
            ("weighted_minkowski", MetricDescriptor("weighted_minkowski", p=2.0)),
            ("exp_weighted", exp_weighted()),
        ):
            self._entries[name] = template

    def register(self, name: str, template: MetricDescriptor) -> None:
        if name in self._entries:
            raise ConflictError(f"metric {name!r} already registered")
        self._entries[name] = template

    def names(self) -> list[str]:
        return sorted(self._entries)

    def get(self, name: str) -> MetricDescriptor:
        try:
            return self._entries[name]
        except KeyError:
            raise NotFoundError(f"unknown metric {name!r}") from None

    def instantiate(self, name: str, p: float | None = None, weights=None) -> MetricDescriptor:
        template = self.get(name)
        kwargs = {}
        if p is not None:
            kwargs["p"] = float(p)
        if weights is not None:
            kwargs["weights"] = tuple(float(w) for w in weights)
        return replace(template, **kwargs) if kwargs else template


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str  # symmetry | identity | non_negativity | triangle
    elements: tuple[int, ...]  # indexes into the sample
    magnitude: float


@dataclass(frozen=True)
class AxiomReport:
    checked_pairs: int
    checked_triples: int
    violations: tuple[AxiomViolation, ...]

    @property
    def is_metric(self) -> bool:
        return not self.violations

    def by_axiom(self, axiom: str) -> list[AxiomViolation]:
        return [v for v in self.violations if v.axiom == axiom]


def validate_axioms(m: MetricDescriptor, sample: list, tol: float = 1e-9) -> AxiomReport:
    """Exhaustively check symmetry, non-negativity/identity and the triangle
    inequality over all pairs/triples of the sample. Violations are reported,
    never raised."""
    if len(sample) < 3:
        raise ContractError("axiom validation needs a sample of at least 3 vectors")
    pts = [_as_array(v) for v in sample]
    k = len(pts)
    d = np.empty((k, k))
    violations: list[AxiomViolation] = []
    for i in range(k):
        d[i, i] = distance(m, pts[i], pts[i])
        if d[i, i] != 0.0:
            violations.append(AxiomViolation("identity", (i,), d[i, i]))
        for j in range(i + 1, k):
            d[i, j] = distance(m, pts[i], pts[j])
            d[j, i] = distance(m, pts[j], pts[i])
            if d[i, j] != d[j, i]:
                violations.append(AxiomViolation("symmetry", (i, j), abs(d[i, j] - d[j, i])))
            if d[i, j] < 0 or not np.isfinite(d[i, j]):
                violations.append(AxiomViolation("non_negativity", (i, j), d[i, j]))
            if d[i, j] == 0.0 and not np.array_equal(pts[i], pts[j]):
                violations.append(AxiomViolation("non_negativity", (i, j), d[i, j]))
    pairs = k * (k - 1) // 2
    triples = 0
    for i in range(k):
        for j in range(k):
            if j == i:
                continue
            for l in range(k):
                if l == i or l == j:
                    continue
                triples += 1
                slack = d[i, l] + d[l, j] - d[i, j]
                scale = max(d[i, j], d[i, l], d[l, j], 1.0)
                if slack < -tol * scale:
                    violations.append(AxiomViolation("triangle", (i, j, l), -slack))
    return AxiomReport(checked_pairs=pairs, checked_triples=triples, violations=tuple(violations))
