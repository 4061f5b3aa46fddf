"""Render-ready view models for the multivariate techniques.

All techniques operate on a list of FeatureVector plus normalization bounds
(usually the full dataset's per-attribute min/max so views stay comparable
across workspaces). No pixels here: items are geometry + metadata, the SVG
export lives in render_svg.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from .dataset import FeatureVector
from .errors import ContractError

TECHNIQUES = ("parallel_coordinates", "scatter", "table_lens", "star")


@dataclass(frozen=True)
class ViewModel:
    technique: str
    items: tuple[dict[str, Any], ...]  # one entry per cod
    axis_meta: dict[str, Any]
    params_echo: dict[str, Any]


def normalize(value: float, lo: float, hi: float) -> float:
    """Map to [0,1]; constant attributes (lo == hi) pin to 0.5."""
    if hi <= lo:
        return 0.5
    v = (value - lo) / (hi - lo)
    return min(1.0, max(0.0, v))


def bounds_from_rows(rows: list[FeatureVector]) -> tuple[tuple[float, ...], tuple[float, ...]]:
    n = len(rows[0].values)
    mins = tuple(min(r.values[i] for r in rows) for i in range(n))
    maxs = tuple(max(r.values[i] for r in rows) for i in range(n))
    return mins, maxs


def _check_rows(rows):
    if not rows:
        raise ContractError("view requires at least one row")


def parallel_coordinates(
    rows: list[FeatureVector],
    axis_order: list[int],
    bounds: tuple[tuple[float, ...], tuple[float, ...]],
    attribute_names: tuple[str, ...],
) -> ViewModel:
    _check_rows(rows)
    n = len(attribute_names)
    if sorted(axis_order) != list(range(n)):
        raise ContractError(f"axis_order must be a permutation of 0..{n - 1}")
    mins, maxs = bounds
    items = tuple(
        {
            "cod": r.cod,
            "polyline": [normalize(r.values[a], mins[a], maxs[a]) for a in axis_order],
        }
        for r in rows
    )
    axis_meta = {
        "axes": [
            {"label": attribute_names[a], "min": mins[a], "max": maxs[a]}
            for a in axis_order
        ],
        "order": list(axis_order),
    }
    return ViewModel("parallel_coordinates", items, axis_meta, {"axis_order": list(axis_order)})


def scatter(
    rows: list[FeatureVector],
    x_attr: int,
    y_attr: int,
    bounds: tuple[tuple[float, ...], tuple[float, ...]],
    attribute_names: tuple[str, ...],
) -> ViewModel:
    _check_rows(rows)
    n = len(attribute_names)
    if not (0 <= x_attr < n) or not (0 <= y_attr < n):
        raise ContractError(f"attribute index out of range 0..{n - 1}")
    if x_attr == y_attr:
        raise ContractError("scatter needs two distinct attributes")
    mins, maxs = bounds
    items = tuple(
        {"cod": r.cod, "x": r.values[x_attr], "y": r.values[y_attr]} for r in rows
    )
    axis_meta = {
        "x": {"label": attribute_names[x_attr], "min": mins[x_attr], "max": maxs[x_attr]},
        "y": {"label": attribute_names[y_attr], "min": mins[y_attr], "max": maxs[y_attr]},
    }
    return ViewModel("scatter", items, axis_meta, {"x_attr": x_attr, "y_attr": y_attr})


def table_lens(
    rows: list[FeatureVector],
    sort_attr: int,
    direction: str,
    bounds: tuple[tuple[float, ...], tuple[float, ...]],
    attribute_names: tuple[str, ...],
) -> ViewModel:
    _check_rows(rows)
    n = len(attribute_names)
    if not (0 <= sort_attr < n):
        raise ContractError(f"attribute index out of range 0..{n - 1}")
    if direction not in ("asc", "desc"):
        raise ContractError("direction must be 'asc' or 'desc'")
    mins, maxs = bounds
    # stable sort key (value, cod); descending negates the comparison, not
    # the tie-break, so equal values stay in ascending-cod order
    ordered = sorted(rows, key=lambda r: (r.values[sort_attr], r.cod))
    if direction == "desc":
        ordered = sorted(rows, key=lambda r: (-r.values[sort_attr], r.cod))
    items = tuple(
        {
            "cod": r.cod,
            "bars": [normalize(r.values[i], mins[i], maxs[i]) for i in range(n)],
            "values": list(r.values),
        }
        for r in ordered
    )
    axis_meta = {
        "columns": [
            {"label": attribute_names[i], "min": mins[i], "max": maxs[i]} for i in range(n)
        ]
    }
    return ViewModel("table_lens", items, axis_meta, {"sort_attr": sort_attr, "direction": direction})


_QUARTER_TURNS = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))


def _unit_vector(i: int, n: int) -> tuple[float, float]:
    """Unit vector at angle 2*pi*i/n, exact on quarter turns so opposing
    axes cancel bit-exactly."""
    q, rem = divmod(4 * i, n)
    if rem == 0:
        return _QUARTER_TURNS[q % 4]
    angle = 2 * math.pi * i / n
    return (math.cos(angle), math.sin(angle))


def star(
    rows: list[FeatureVector],
    bounds: tuple[tuple[float, ...], tuple[float, ...]],
    attribute_names: tuple[str, ...],
) -> ViewModel:
    _check_rows(rows)
    n = len(attribute_names)
    if n < 2:
        raise ContractError("star coordinates need at least 2 attributes")
    mins, maxs = bounds
    axes = [_unit_vector(i, n) for i in range(n)]
    items = []
    for r in rows:
        x = y = 0.0
        for i in range(n):
            v = normalize(r.values[i], mins[i], maxs[i])
            x += axes[i][0] * v
            y += axes[i][1] * v
        items.append({"cod": r.cod, "x": x, "y": y})
    axis_meta = {
        "axes": [
            {"label": attribute_names[i], "ux": axes[i][0], "uy": axes[i][1]} for i in range(n)
        ]
    }
    return ViewModel("star", tuple(items), axis_meta, {})
