"""Batch CLI: query / project / views / validate-metric / serve.

Exit codes: 0 success, 2 contract errors (bad arguments or inputs),
1 internal errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .dataset import load_dataset
from .errors import ContractError, EngineError
from .fastmap import project, projection_to_csv
from .index import QuerySpec, knn_scan, range_scan
from .metrics import MetricRegistry, bind, validate_axioms
from .render_svg import render_svg
from .workspace import DEFAULT_SEED, Session, result_to_csv
from . import views as views_mod


def _metric_args(parser: argparse.ArgumentParser):
    parser.add_argument("--metric", required=True, help="registered metric name")
    parser.add_argument("--p", type=float, default=None)
    parser.add_argument("--weights", default=None, help="comma-separated non-negative weights")


def _build_metric(args):
    registry = MetricRegistry()
    weights = None
    if args.weights:
        try:
            weights = [float(w) for w in args.weights.split(",")]
        except ValueError:
            raise ContractError(f"malformed weights {args.weights!r}") from None
    return registry.instantiate(args.metric, p=args.p, weights=weights)


def _load(args):
    path = Path(args.dataset)
    if not path.exists():
        raise ContractError(f"dataset file {path} does not exist")
    return load_dataset(path.read_text(), dataset_id=path.stem)


def _write(out: str | None, text: str):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_query(args) -> int:
    ds = _load(args)
    m = bind(_build_metric(args), ds)
    center_vec = None
    if args.center is not None:
        center_vec = tuple(float(v) for v in args.center.split(","))
    q = QuerySpec(
        dataset_id=ds.id,
        metric=m,
        center_cod=args.center_cod,
        center_vector=center_vec,
        k=args.k,
        radius=args.radius,
    )
    rs = knn_scan(ds, m, q) if q.kind == "knn" else range_scan(ds, m, q)
    _write(args.out, result_to_csv(rs))
    return 0


def cmd_project(args) -> int:
    ds = _load(args)
    m = bind(_build_metric(args), ds)
    rows = list(ds.rows)
    if args.cods:
        wanted = [int(c) for c in Path(args.cods).read_text().split()]
        by_cod = {r.cod: r for r in ds.rows}
        rows = [by_cod[c] for c in wanted]
    proj = project(rows, m, seed=args.seed)
    _write(args.out, projection_to_csv(proj))
    if args.meta_out:
        meta = {"pivots": [list(p) for p in proj.pivots], "stress": proj.stress, "seed": proj.seed}
        Path(args.meta_out).write_text(json.dumps(meta, indent=2) + "\n")
    return 0


def cmd_views(args) -> int:
    ds = _load(args)
    rows = list(ds.rows)
    if args.cods:
        wanted = [int(c) for c in Path(args.cods).read_text().split()]
        by_cod = {r.cod: r for r in ds.rows}
        rows = [by_cod[c] for c in wanted]
    bounds = (ds.stats.min, ds.stats.max)
    names = ds.attribute_names
    t = args.technique
    if t == "parallel_coordinates":
        order = [int(x) for x in args.axis_order.split(",")] if args.axis_order else list(range(ds.n))
        vm = views_mod.parallel_coordinates(rows, order, bounds, names)
    elif t == "scatter":
        if args.x_attr is None or args.y_attr is None:
            raise ContractError("scatter requires --x-attr and --y-attr")
        vm = views_mod.scatter(rows, _attr_index(ds, args.x_attr), _attr_index(ds, args.y_attr), bounds, names)
    elif t == "table_lens":
        vm = views_mod.table_lens(rows, _attr_index(ds, args.sort_attr or "0"), args.direction, bounds, names)
    elif t == "star":
        vm = views_mod.star(rows, bounds, names)
    else:
        raise ContractError(f"unknown technique {t!r}")
    _write(args.out, render_svg(vm))
    return 0


def _attr_index(ds, value: str) -> int:
    if value.lstrip("-").isdigit():
        return int(value)
    return ds.attribute_index(value)


def cmd_validate_metric(args) -> int:
    ds = _load(args)
    m = bind(_build_metric(args), ds)
    rng = np.random.default_rng(args.seed)
    size = min(args.sample, len(ds))
    idx = rng.choice(len(ds), size=size, replace=False)
    sample = [ds.rows[i] for i in idx]
    report = validate_axioms(m, sample, tol=args.tol)
    print(f"metric: {args.metric} (family {m.family}, p={m.p})")
    print(f"sample: {size} rows, {report.checked_pairs} pairs, {report.checked_triples} triples")
    if report.is_metric:
        print("no axiom violations: metric")
    else:
        for axiom in ("symmetry", "identity", "non_negativity", "triangle"):
            hits = report.by_axiom(axiom)
            if hits:
                print(f"{axiom}: {len(hits)} violation(s), worst magnitude {max(h.magnitude for h in hits):.6g}")
        print("violations found: NOT a metric on this sample")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    session = Session(seed=args.seed)
    if args.data_dir:
        for path in sorted(Path(args.data_dir).glob("*.csv")):
            session.add_dataset(path.read_text(), dataset_id=path.stem)
    uvicorn.run(create_app(session), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metricscope")
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("query", help="run a kNN or range query, write cod,distance CSV")
    q.add_argument("--dataset", required=True)
    _metric_args(q)
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--center-cod", type=int, default=None)
    g.add_argument("--center", default=None, help="comma-separated raw feature vector")
    g2 = q.add_mutually_exclusive_group(required=True)
    g2.add_argument("--k", type=int, default=None)
    g2.add_argument("--radius", type=float, default=None)
    q.add_argument("--out", default="-")
    q.set_defaults(func=cmd_query)

    p = sub.add_parser("project", help="FastMap 3-D projection, write cod,x,y,z CSV")
    p.add_argument("--dataset", required=True)
    _metric_args(p)
    p.add_argument("--cods", default=None, help="file with whitespace-separated CODs to project")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default="-")
    p.add_argument("--meta-out", default=None, help="sidecar JSON with pivots and stress")
    p.set_defaults(func=cmd_project)

    v = sub.add_parser("views", help="render a view model as SVG")
    v.add_argument("--dataset", required=True)
    v.add_argument("--cods", default=None)
    v.add_argument("--technique", required=True,
                   choices=["parallel_coordinates", "scatter", "table_lens", "star"])
    v.add_argument("--axis-order", default=None)
    v.add_argument("--x-attr", default=None)
    v.add_argument("--y-attr", default=None)
    v.add_argument("--sort-attr", default=None)
    v.add_argument("--direction", default="asc", choices=["asc", "desc"])
    v.add_argument("--out", default="-")
    v.set_defaults(func=cmd_views)

    a = sub.add_parser("validate-metric", help="check metric axioms on a dataset sample")
    a.add_argument("--dataset", required=True)
    _metric_args(a)
    a.add_argument("--sample", type=int, default=50)
    a.add_argument("--seed", type=int, default=DEFAULT_SEED)
    a.add_argument("--tol", type=float, default=1e-9)
    a.set_defaults(func=cmd_validate_metric)

    s = sub.add_parser("serve", help="start the HTTP service")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=int(os.environ.get("METRICSCOPE_PORT", 8000)))
    s.add_argument("--data-dir", default=os.environ.get("METRICSCOPE_DATA_DIR"))
    s.add_argument("--seed", type=int, default=int(os.environ.get("METRICSCOPE_SEED", DEFAULT_SEED)))
    s.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ContractError as exc:
        print(f"error (bad_request): {exc.message}", file=sys.stderr)
        return 2
    except EngineError as exc:
        if exc.code in ("not_found", "conflict", "unsupported", "bad_request"):
            print(f"error ({exc.code}): {exc.message}", file=sys.stderr)
            return 2
        print(f"error (internal): {exc.message}", file=sys.stderr)
        return 1
    except Exception as exc:  # internal failure
        print(f"error (internal): {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
