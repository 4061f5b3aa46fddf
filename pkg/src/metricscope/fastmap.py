"""FastMap projection of feature vectors into 3-D.

Coordinates are assigned axis by axis. For each axis a pivot pair (a, b) is
chosen by alternating farthest-point sweeps under the residual distance, and
every point o gets

    x_o = (d(a,o)^2 + d(a,b)^2 - d(b,o)^2) / (2 d(a,b))

on that axis. The residual (squared) distance carried to the next axis is
d^2 minus the squared coordinate differences accumulated so far, clamped at
zero so non-Euclidean (or non-metric) inputs degrade gracefully instead of
producing NaNs.

Stress is reported as sum|original - projected| / sum(original) over pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import MetricDescriptor, _eval, distance_to_many

AXES = 3
PIVOT_SWEEPS = 5
EXACT_STRESS_LIMIT = 2000  # above this, stress is sampled
STRESS_SAMPLE_PAIRS = 1_000_000


@dataclass(frozen=True)
class Projection3D:
    coords: dict[int, tuple[float, float, float]]  # cod -> (x, y, z)
    pivots: tuple[tuple[int, int], ...]  # per axis (a_cod, b_cod); (-1,-1) = degenerate
    metric_echo: MetricDescriptor
    stress: float
    seed: int


def _residual_to_many(m, X, i: int, coords: np.ndarray, axis: int) -> np.ndarray:
    """Residual distances from point i to all points, given coordinates of
    the axes already assigned (columns 0..axis-1). Clamped at zero."""
    base = distance_to_many(m, X[i], X)
    res2 = base * base
    for t in range(axis):
        diff = coords[:, t] - coords[i, t]
        res2 = res2 - diff * diff
    return np.sqrt(np.maximum(res2, 0.0))


def residual_distance(m, X, i: int, j: int, coords: np.ndarray, axis: int) -> float:
    """Scalar form of the residual metric between points i and j."""
    return float(_residual_to_many(m, X, i, coords, axis)[j])


def choose_pivots(m, X, coords: np.ndarray, axis: int, rng) -> tuple[int, int, float]:
    """Alternating farthest-point sweeps on the residual metric.

    Returns (a, b, d_ab); d_ab == 0 flags a degenerate axis."""
    n = X.shape[0]
    a = int(rng.integers(n))
    b = a
    for _ in range(PIVOT_SWEEPS):
        d = _residual_to_many(m, X, a, coords, axis)
        far = int(np.argmax(d))
        if far == b:
            break
        a, b = far, a
    d_ab = residual_distance(m, X, a, b, coords, axis)
    return a, b, d_ab


def project(rows, m: MetricDescriptor, seed: int = 0) -> Projection3D:
    """Project feature vectors (FeatureVector list) to 3-D, deterministically
    for a given seed."""
    cods = [r.cod for r in rows]
    X = np.asarray([r.values for r in rows], dtype=np.float64)
    n = X.shape[0]
    rng = np.random.default_rng(seed)
    coords = np.zeros((n, AXES))
    pivots: list[tuple[int, int]] = []

    for axis in range(AXES):
        if n < 2:
            pivots.append((-1, -1))
            continue
        a, b, d_ab = choose_pivots(m, X, coords, axis, rng)
        if d_ab == 0.0:
            pivots.append((-1, -1))
            continue
        d_a = _residual_to_many(m, X, a, coords, axis)
        d_b = _residual_to_many(m, X, b, coords, axis)
        coords[:, axis] = (d_a * d_a + d_ab * d_ab - d_b * d_b) / (2.0 * d_ab)
        # pin pivots (and their exact duplicates) so anchoring is bit-exact:
        # coord = 0 at a, coord = d_ab at b
        coords[d_a == 0.0, axis] = 0.0
        coords[d_b == 0.0, axis] = d_ab
        pivots.append((cods[a], cods[b]))

    stress = _stress(m, X, coords, rng)
    return Projection3D(
        coords={cod: tuple(float(v) for v in coords[i]) for i, cod in enumerate(cods)},
        pivots=tuple(pivots),
        metric_echo=m,
        stress=stress,
        seed=seed,
    )


def _stress(m, X, coords, rng) -> float:
    n = X.shape[0]
    if n < 2:
        return 0.0
    num = 0.0
    den = 0.0
    if n <= EXACT_STRESS_LIMIT:
        for i in range(n - 1):
            orig = distance_to_many(m, X[i], X[i + 1 :])
            diff = coords[i + 1 :] - coords[i]
            proj = np.sqrt(np.sum(diff * diff, axis=1))
            num += float(np.sum(np.abs(orig - proj)))
            den += float(np.sum(orig))
    else:
        ii = rng.integers(n, size=STRESS_SAMPLE_PAIRS)
        jj = rng.integers(n, size=STRESS_SAMPLE_PAIRS)
        keep = ii != jj
        ii, jj = ii[keep], jj[keep]
        for start in range(0, len(ii), 10_000):
            i_chunk, j_chunk = ii[start : start + 10_000], jj[start : start + 10_000]
            diffs = np.abs(X[i_chunk] - X[j_chunk])
            orig = _eval(m, diffs, axis=1)
            cd = coords[i_chunk] - coords[j_chunk]
            proj = np.sqrt(np.sum(cd * cd, axis=1))
            num += float(np.sum(np.abs(orig - proj)))
            den += float(np.sum(orig))
    return num / den if den > 0 else 0.0


def projection_to_csv(p: Projection3D) -> str:
    """cod,x,y,z rows in input order; repr() floats for exact round-trip."""
    lines = ["cod,x,y,z"]
    for cod, (x, y, z) in p.coords.items():
        lines.append(f"{cod},{x!r},{y!r},{z!r}")
    return "\n".join(lines) + "\n"
