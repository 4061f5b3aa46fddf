"""Query workspaces and sessions: the interactive refinement loop.

A similarity query spawns a Workspace holding its result set, a 3-D
projection of that result, and a cache of derived view models. Any view can
nominate a result element as the center of a follow-up query, which creates
a child workspace; the parent link forms an acyclic provenance chain.

Sessions can be saved as a small manifest (dataset files + query specs +
seeds) and replayed deterministically; result sets and projections are
recomputed, never persisted.
"""

from __future__ import annotations

import json
import threading
import time
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import views as views_mod
from .dataset import Dataset, load_dataset
from .errors import ConflictError, ContractError, NotFoundError, UnsupportedError
from .fastmap import Projection3D, project
from .index import QuerySpec, ResultSet, build_vptree, knn_scan, knn_tree, range_scan
from .metrics import MetricDescriptor, MetricRegistry, bind

SCHEMA_VERSION = 1
DEFAULT_SEED = 42
VPTREE_MIN_ROWS = 64  # below this a scan beats the tree; also keeps builds cheap


@dataclass
class Workspace:
    id: str
    query: QuerySpec
    parent_id: str | None
    created_at: float
    seed: int
    result: ResultSet
    projection: Projection3D
    parent_closed: bool = False
    _view_cache: dict[str, views_mod.ViewModel] = field(default_factory=dict, repr=False)


class Session:
    """Holds datasets, cached overview projections and live workspaces.

    Registry mutations are serialized with a lock; published payloads are
    immutable, so concurrent reads need no coordination.
    """

    def __init__(self, seed: int = DEFAULT_SEED):
        self.seed = seed
        self.registry = MetricRegistry()
        self.datasets: dict[str, Dataset] = {}
        self.dataset_sources: dict[str, str] = {}  # raw CSV text, for manifests
        self.workspaces: dict[str, Workspace] = {}
        self._overviews: dict[tuple, Projection3D] = {}
        self._trees: dict[tuple, Any] = {}
        self._counter = 0
        self._lock = threading.Lock()

    # -- datasets ---------------------------------------------------------

    def add_dataset(self, csv_text: str, dataset_id: str | None = None) -> Dataset:
        with self._lock:
            if dataset_id is None:
                self._counter += 1
                dataset_id = f"ds-{self._counter}"
            if dataset_id in self.datasets:
                raise ConflictError(f"dataset {dataset_id!r} already exists")
            ds = load_dataset(csv_text, dataset_id=dataset_id)
            self.datasets[dataset_id] = ds
            self.dataset_sources[dataset_id] = csv_text
            return ds

    def get_dataset(self, dataset_id: str) -> Dataset:
        try:
            return self.datasets[dataset_id]
        except KeyError:
            raise NotFoundError(f"unknown dataset {dataset_id!r}") from None

    # -- seeds ------------------------------------------------------------

    def derive_seed(self, *parts) -> int:
        key = ":".join(str(p) for p in (self.seed, *parts))
        return zlib.crc32(key.encode("utf-8"))

    # -- queries ----------------------------------------------------------

    def _metric_key(self, m: MetricDescriptor) -> tuple:
        return (m.family, m.p, m.weights)

    def run_query(
        self,
        q: QuerySpec,
        parent_id: str | None = None,
        seed: int | None = None,
    ) -> Workspace:
        ds = self.get_dataset(q.dataset_id)
        m = bind(q.metric, ds)
        result = self._execute(ds, m, q)
        with self._lock:
            self._counter += 1
            ws_id = f"ws-{self._counter}"
        if seed is None:
            # seed depends on the query content, not the workspace counter, so
            # re-running an identical QuerySpec reproduces the projection
            seed = self.derive_seed(
                "workspace", q.dataset_id, self._metric_key(m), q.center_cod,
                q.center_vector, q.k, q.radius,
            )
        rows = [ds.rows[ds._by_cod[cod]] for cod, _ in result.entries]
        projection = project(rows, m, seed=seed)
        ws = Workspace(
            id=ws_id,
            query=q,
            parent_id=parent_id,
            created_at=time.time(),
            seed=seed,
            result=result,
            projection=projection,
        )
        with self._lock:
            if parent_id is not None and parent_id not in self.workspaces:
                ws.parent_closed = True
            self.workspaces[ws_id] = ws
        return ws

    def _execute(self, ds: Dataset, m: MetricDescriptor, q: QuerySpec) -> ResultSet:
        if q.kind == "range":
            return range_scan(ds, m, q)
        if not m.claims_triangle_inequality or len(ds) < VPTREE_MIN_ROWS:
            return knn_scan(ds, m, q)
        key = (ds.id, self._metric_key(m))
        with self._lock:
            tree = self._trees.get(key)
        if tree is None:
            tree = build_vptree(ds, m, seed=self.derive_seed("vptree", ds.id))
            with self._lock:
                self._trees.setdefault(key, tree)
        return knn_tree(tree, q)

    # -- overview ---------------------------------------------------------

    def overview(self, dataset_id: str, m: MetricDescriptor) -> Projection3D:
        ds = self.get_dataset(dataset_id)
        m = bind(m, ds)
        key = (dataset_id, self._metric_key(m))
        with self._lock:
            cached = self._overviews.get(key)
        if cached is not None:
            return cached
        proj = project(list(ds.rows), m, seed=self.derive_seed("overview", dataset_id))
        with self._lock:
            return self._overviews.setdefault(key, proj)

    # -- workspaces -------------------------------------------------------

    def get_workspace(self, ws_id: str) -> Workspace:
        try:
            return self.workspaces[ws_id]
        except KeyError:
            raise NotFoundError(f"unknown workspace {ws_id!r}") from None

    def derive_view(self, ws_id: str, technique: str, params: dict | None = None) -> views_mod.ViewModel:
        ws = self.get_workspace(ws_id)
        ds = self.get_dataset(ws.query.dataset_id)
        params = dict(params or {})
        norm_source = params.pop("norm_source", "dataset")
        cache_key = json.dumps(
            {"technique": technique, "norm_source": norm_source, **params}, sort_keys=True
        )
        cached = ws._view_cache.get(cache_key)
        if cached is not None:
            return cached
        rows = [ds.rows[ds._by_cod[cod]] for cod, _ in ws.result.entries]
        if norm_source == "result_set":
            bounds = views_mod.bounds_from_rows(rows)
        elif norm_source == "dataset":
            bounds = (ds.stats.min, ds.stats.max)
        else:
            raise ContractError("norm_source must be 'dataset' or 'result_set'")
        names = ds.attribute_names
        if technique == "parallel_coordinates":
            order = params.get("axis_order", list(range(ds.n)))
            vm = views_mod.parallel_coordinates(rows, order, bounds, names)
        elif technique == "scatter":
            vm = views_mod.scatter(
                rows, _attr(ds, params, "x_attr"), _attr(ds, params, "y_attr"), bounds, names
            )
        elif technique == "table_lens":
            vm = views_mod.table_lens(
                rows,
                _attr(ds, params, "sort_attr", default=0),
                params.get("direction", "asc"),
                bounds,
                names,
            )
        elif technique == "star":
            vm = views_mod.star(rows, bounds, names)
        else:
            raise UnsupportedError(f"unknown view technique {technique!r}")
        ws._view_cache[cache_key] = vm
        return vm

    def pick_center(self, ws_id: str, cod: int) -> QuerySpec:
        ws = self.get_workspace(ws_id)
        if cod not in ws.result.cods:
            raise NotFoundError(f"COD {cod} is not in workspace {ws_id!r}")
        q = ws.query
        return QuerySpec(
            dataset_id=q.dataset_id,
            metric=q.metric,
            center_cod=cod,
            k=q.k,
            radius=q.radius,
        )

    def close_workspace(self, ws_id: str) -> None:
        with self._lock:
            if ws_id not in self.workspaces:
                raise NotFoundError(f"unknown workspace {ws_id!r}")
            del self.workspaces[ws_id]
            for ws in self.workspaces.values():
                if ws.parent_id == ws_id:
                    ws.parent_closed = True

    def ancestry(self, ws_id: str) -> list[str]:
        chain = []
        cur: str | None = ws_id
        while cur is not None and cur in self.workspaces:
            if cur in chain:
                raise ContractError(f"provenance cycle at {cur!r}")
            chain.append(cur)
            cur = self.workspaces[cur].parent_id
        return chain


def _attr(ds: Dataset, params: dict, key: str, default=None):
    v = params.get(key, default)
    if v is None:
        raise ContractError(f"missing view parameter {key!r}")
    if isinstance(v, str):
        return ds.attribute_index(v)
    return int(v)


# -- persistence ----------------------------------------------------------


def _query_to_json(q: QuerySpec) -> dict:
    m = {"family": q.metric.family, "p": q.metric.p}
    if q.metric.weights is not None:
        m["weights"] = list(q.metric.weights)
    if not q.metric.claims_triangle_inequality:
        m["claims_triangle_inequality"] = False
    out: dict[str, Any] = {"dataset": q.dataset_id, "metric": m}
    if q.center_cod is not None:
        out["center"] = {"cod": q.center_cod}
    else:
        out["center"] = {"vector": list(q.center_vector)}
    if q.k is not None:
        out["knn"] = {"k": q.k}
    else:
        out["range"] = {"radius": q.radius}
    return out


def query_from_json(obj: dict) -> QuerySpec:
    m = obj["metric"]
    metric = MetricDescriptor(
        family=m["family"],
        p=m.get("p", 2.0),
        weights=tuple(m["weights"]) if m.get("weights") is not None else None,
        claims_triangle_inequality=m.get(
            "claims_triangle_inequality", m["family"] != "exp_weighted"
        ),
    )
    center = obj["center"]
    return QuerySpec(
        dataset_id=obj["dataset"],
        metric=metric,
        center_cod=center.get("cod"),
        center_vector=tuple(center["vector"]) if "vector" in center else None,
        k=obj.get("knn", {}).get("k"),
        radius=obj.get("range", {}).get("radius"),
    )


def save_session(s: Session, directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    datasets = []
    for ds_id, text in s.dataset_sources.items():
        fname = f"{ds_id}.csv"
        (directory / fname).write_text(text)
        datasets.append({"id": ds_id, "file": fname})
    workspaces = [
        {
            "id": ws.id,
            "parent": ws.parent_id,
            "seed": ws.seed,
            "query": _query_to_json(ws.query),
        }
        for ws in sorted(s.workspaces.values(), key=lambda w: int(w.id.split("-")[1]))
    ]
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "seed": s.seed,
        "datasets": datasets,
        "workspaces": workspaces,
    }
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return directory / "manifest.json"


def load_session(directory: str | Path) -> Session:
    directory = Path(directory)
    manifest = json.loads((directory / "manifest.json").read_text())
    if manifest.get("schema_version") != SCHEMA_VERSION:
        raise ContractError(f"unsupported manifest schema {manifest.get('schema_version')!r}")
    s = Session(seed=manifest["seed"])
    for entry in manifest["datasets"]:
        s.add_dataset((directory / entry["file"]).read_text(), dataset_id=entry["id"])
    id_map: dict[str, str] = {}
    for w in manifest["workspaces"]:
        q = query_from_json(w["query"])
        ws = s.run_query(q, parent_id=id_map.get(w["parent"]), seed=w["seed"])
        id_map[w["id"]] = ws.id
    return s


def result_to_csv(rs: ResultSet) -> str:
    lines = ["cod,distance"]
    for cod, d in rs.entries:
        lines.append(f"{cod},{d!r}")
    return "\n".join(lines) + "\n"
