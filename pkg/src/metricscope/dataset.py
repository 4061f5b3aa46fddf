"""Tabular feature datasets: CSV ingestion, row access, per-attribute stats.

The file format is plain CSV where every column but the last is a numeric
feature and the last column is COD, an integer identifier unique within the
dataset. A single header row is allowed and detected by being non-numeric.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, IntegrityError, NotFoundError, ParseError


@dataclass(frozen=True)
class FeatureVector:
    cod: int
    values: tuple[float, ...]


@dataclass(frozen=True)
class AttributeStats:
    min: tuple[float, ...]
    max: tuple[float, ...]
    mean: tuple[float, ...]


@dataclass(frozen=True)
class Dataset:
    id: str
    attribute_names: tuple[str, ...]
    rows: tuple[FeatureVector, ...]
    stats: AttributeStats
    matrix: np.ndarray = field(repr=False, compare=False)
    _by_cod: dict[int, int] = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.attribute_names)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def ranges(self) -> tuple[float, ...]:
        """Per-attribute max - min, substituting 1.0 for constant attributes."""
        return tuple(
            (hi - lo) if hi > lo else 1.0
            for lo, hi in zip(self.stats.min, self.stats.max)
        )

    def attribute_index(self, name: str) -> int:
        try:
            return self.attribute_names.index(name)
        except ValueError:
            raise NotFoundError(f"unknown attribute {name!r}") from None


def _try_parse_float(cell: str) -> float | None:
    try:
        return float(cell)
    except ValueError:
        return None


def compute_stats(matrix: np.ndarray) -> AttributeStats:
    return AttributeStats(
        min=tuple(float(v) for v in matrix.min(axis=0)),
        max=tuple(float(v) for v in matrix.max(axis=0)),
        mean=tuple(float(v) for v in matrix.mean(axis=0)),
    )


def load_dataset(source: str | io.TextIOBase, dataset_id: str = "dataset") -> Dataset:
    """Parse CSV text (or a text stream) into an immutable Dataset.

    The last column is COD; all prior columns must be finite numbers.
    An optional header row is recognized when its first line contains any
    non-numeric cell.
    """
    text = source.read() if hasattr(source, "read") else source
    lines = [ln for ln in text.replace("\r\n", "\n").split("\n") if ln.strip() != ""]
    if not lines:
        raise ParseError("empty dataset")

    first_cells = [c.strip() for c in lines[0].split(",")]
    has_header = any(_try_parse_float(c) is None for c in first_cells)
    width = len(first_cells)
    if width < 2:
        raise ParseError("need at least one feature column plus the COD column")

    if has_header:
        names = tuple(first_cells[:-1])
        data_lines = lines[1:]
        start_row = 2
    else:
        names = tuple(f"attr{i}" for i in range(width - 1))
        data_lines = lines
        start_row = 1
    if not data_lines:
        raise ParseError("dataset has a header but no data rows")

    rows: list[FeatureVector] = []
    values: list[list[float]] = []
    seen: dict[int, int] = {}
    for lineno, line in enumerate(data_lines, start=start_row):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != width:
            raise ParseError(
                f"row {lineno}: expected {width} columns, got {len(cells)}",
                detail={"row": lineno},
            )
        feats = []
        for col, cell in enumerate(cells[:-1]):
            v = _try_parse_float(cell)
            if v is None or not np.isfinite(v):
                raise ParseError(
                    f"row {lineno}, column {col + 1}: non-numeric feature {cell!r}",
                    detail={"row": lineno, "column": col + 1},
                )
            feats.append(v)
        cod_cell = cells[-1]
        try:
            cod = int(cod_cell)
        except ValueError:
            raise ParseError(
                f"row {lineno}: COD {cod_cell!r} is not an integer",
                detail={"row": lineno, "column": width},
            ) from None
        if cod in seen:
            raise IntegrityError(
                f"duplicate COD {cod} at rows {seen[cod]} and {lineno}",
                detail={"cod": cod},
            )
        seen[cod] = lineno
        rows.append(FeatureVector(cod=cod, values=tuple(feats)))
        values.append(feats)

    matrix = np.array(values, dtype=np.float64)
    return Dataset(
        id=dataset_id,
        attribute_names=names,
        rows=tuple(rows),
        stats=compute_stats(matrix),
        matrix=matrix,
        _by_cod={r.cod: i for i, r in enumerate(rows)},
    )


def serialize(ds: Dataset) -> str:
    """CSV form that round-trips through load_dataset."""
    out = [",".join(ds.attribute_names) + ",COD"]
    for r in ds.rows:
        out.append(",".join(repr(v) for v in r.values) + f",{r.cod}")
    return "\n".join(out) + "\n"


def get_row(ds: Dataset, cod: int) -> FeatureVector:
    try:
        return ds.rows[ds._by_cod[cod]]
    except KeyError:
        raise NotFoundError(f"no row with COD {cod} in dataset {ds.id!r}") from None


def row_index(ds: Dataset, cod: int) -> int:
    try:
        return ds._by_cod[cod]
    except KeyError:
        raise NotFoundError(f"no row with COD {cod} in dataset {ds.id!r}") from None


def page_rows(ds: Dataset, offset: int, limit: int) -> list[FeatureVector]:
    if offset < 0:
        raise ContractError("offset must be >= 0")
    if limit < 1:
        raise ContractError("limit must be >= 1")
    return list(ds.rows[offset : offset + limit])
