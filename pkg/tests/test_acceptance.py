"""Acceptance suite: one test per criterion, each printing a PASS line with
its elapsed time. Run with `pytest tests/test_acceptance.py -s` to see the
per-criterion report.
"""

import math
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from metricscope.api import create_app
from metricscope.dataset import FeatureVector, get_row, load_dataset
from metricscope.errors import UnsupportedError
from metricscope.fastmap import project, projection_to_csv
from metricscope.index import (
    QuerySpec,
    ResultSet,
    build_vptree,
    knn_scan,
    knn_tree,
    range_scan,
)
from metricscope.metrics import (
    bind,
    city_block,
    distance,
    euclidean,
    exp_weighted,
    minkowski,
    validate_axioms,
    weighted_minkowski,
)
from metricscope.workspace import Session, load_session, result_to_csv, save_session


def _report(name: str, t0: float, budget: float | None = None):
    elapsed = time.perf_counter() - t0
    budget_note = f" (budget {budget:.0f}s)" if budget else ""
    print(f"\nACCEPTANCE PASS: {name} in {elapsed:.2f}s{budget_note}")
    if budget is not None:
        assert elapsed <= budget, f"{name} exceeded its {budget}s budget"


def test_metric_axiom_suite():
    """Symmetry exact, identity exact, triangle within 1e-9 relative over
    1000 random triples per configuration."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    dims = 6
    configs = [
        euclidean(),
        city_block(),
        minkowski(1.0),
        minkowski(2.0),
        minkowski(3.0),
        minkowski(4.0),
        weighted_minkowski(4.0, tuple(rng.uniform(0.1, 3.0, size=dims))),
    ]
    for m in configs:
        triples = rng.uniform(-100, 100, size=(1000, 3, dims))
        for x, y, z in triples:
            dxy = distance(m, x, y)
            assert dxy == distance(m, y, x)
            assert distance(m, x, x) == 0.0
            dxz, dzy = distance(m, x, z), distance(m, z, y)
            assert dxy <= dxz + dzy + 1e-9 * max(dxy, dxz, dzy, 1.0)
    _report("metric axiom suite", t0, budget=5.0)


def test_oracle_equivalence():
    """knn_tree == knn_scan entry-for-entry over 200 randomized trials, and
    range_scan matches an independent brute force."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    for trial in range(200):
        rows = int(rng.integers(10, 501))
        dims = int(rng.integers(2, 7))
        pts = rng.uniform(-50, 50, size=(rows, dims))
        text = "\n".join(
            ",".join(f"{v:.5f}" for v in row) + f",{i + 1}" for i, row in enumerate(pts)
        )
        ds = load_dataset(text, dataset_id=f"trial{trial}")
        kind = trial % 3
        if kind == 0:
            m = euclidean()
        elif kind == 1:
            m = city_block()
        else:
            m = weighted_minkowski(4.0, tuple(rng.uniform(0, 2, size=dims)))
        tree = build_vptree(ds, m, seed=trial)
        k = int(rng.choice([1, 5, 40, 50]))
        cod = int(rng.integers(1, rows + 1))
        q = QuerySpec(ds.id, m, center_cod=cod, k=k)
        assert knn_tree(tree, q).entries == knn_scan(ds, m, q).entries
        if trial % 20 == 0:
            center = get_row(ds, cod).values
            radius = float(np.median([distance(m, center, r.values) for r in ds.rows]))
            rq = QuerySpec(ds.id, m, center_cod=cod, radius=radius)
            got = range_scan(ds, m, rq)
            brute = sorted(
                (distance(m, center, r.values), r.cod)
                for r in ds.rows
                if distance(m, center, r.values) <= radius
            )
            assert [c for c, _ in got.entries] == [c for _, c in brute]
    _report("oracle equivalence (200 trials)", t0, budget=30.0)


def test_ordering_contract_global():
    """Non-decreasing distances for every result set; the constructor
    enforces it globally, and a direct sweep over a batch confirms it."""
    t0 = time.perf_counter()
    with pytest.raises(Exception):
        ResultSet(((1, 2.0), (2, 1.0)), (0.0,), euclidean())
    with pytest.raises(Exception):
        ResultSet(((1, 1.0), (1, 2.0)), (0.0,), euclidean())
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(200, 4))
    text = "\n".join(",".join(f"{v:.5f}" for v in r) + f",{i + 1}" for i, r in enumerate(pts))
    ds = load_dataset(text)
    for cod in (1, 50, 100, 200):
        for q in (
            QuerySpec(ds.id, euclidean(), center_cod=cod, k=25),
            QuerySpec(ds.id, euclidean(), center_cod=cod, radius=2.0),
        ):
            rs = knn_scan(ds, euclidean(), q) if q.kind == "knn" else range_scan(ds, euclidean(), q)
            dists = [d for _, d in rs.entries]
            assert dists == sorted(dists)
    _report("kNN ordering contract", t0)


def test_fastmap_criteria():
    """2-point stress 0 exactly; pivot anchoring exact; intrinsically 3-D
    data in 9-D projects with stress < 0.05; bit-identical across runs."""
    t0 = time.perf_counter()
    two = [FeatureVector(1, (0.0, 0.0)), FeatureVector(2, (3.0, 4.0))]
    p2 = project(two, euclidean(), seed=7)
    assert p2.stress == 0.0

    rng = np.random.default_rng(4)
    low = rng.uniform(-5, 5, size=(100, 3))
    basis, _ = np.linalg.qr(rng.normal(size=(9, 9)))
    high = low @ basis[:, :3].T
    rows = [FeatureVector(i + 1, tuple(map(float, v))) for i, v in enumerate(high)]
    proj = project(rows, euclidean(), seed=11)
    assert proj.stress < 0.05

    # pivot anchoring: coord(a) == 0 and coord(b) == residual distance, exact
    from metricscope.fastmap import _residual_to_many

    X = np.asarray(high)
    coords = np.array([proj.coords[i + 1] for i in range(100)])
    for axis, (a_cod, b_cod) in enumerate(proj.pivots):
        if a_cod == -1:
            continue
        ai, bi = a_cod - 1, b_cod - 1
        assert coords[ai, axis] == 0.0
        assert coords[bi, axis] == _residual_to_many(euclidean(), X, ai, coords, axis)[bi]

    assert project(rows, euclidean(), seed=11) == proj
    _report("FastMap projection criteria", t0, budget=5.0)


def test_cars_q1_reproduction(cars):
    """kNN k=51 around record 4: euclidean vs weighted Minkowski p=4 with
    CYLINDERS and WEIGHT silenced differ, and the weighted result admits at
    least as much CYLINDERS variance."""
    t0 = time.perf_counter()
    cyl = cars.attribute_names.index("CYLINDERS")
    wt = cars.attribute_names.index("WEIGHT")
    weights = [1.0] * cars.n
    weights[cyl] = 0.0
    weights[wt] = 0.0

    q_e = QuerySpec("cars", euclidean(), center_cod=4, k=51)
    rs_e = knn_scan(cars, euclidean(), q_e)
    wm = weighted_minkowski(4.0, tuple(weights))
    rs_w = knn_scan(cars, wm, QuerySpec("cars", wm, center_cod=4, k=51))

    assert rs_e.entries[0] == (4, 0.0)
    assert rs_w.entries[0] == (4, 0.0)
    sym_diff = set(rs_e.cods) ^ set(rs_w.cods)
    assert sym_diff, "weighted metric must change the neighborhood"

    def cyl_variance(rs):
        vals = [get_row(cars, c).values[cyl] for c in rs.cods]
        return float(np.var(vals, ddof=1))

    assert cyl_variance(rs_w) >= cyl_variance(rs_e)
    _report("cars Q1 reproduction", t0, budget=2.0)


def test_exp_weighted_fallback(cars):
    """exp_weighted refuses VP-tree construction, completes via scan with an
    oracle-matching ordering, and validate_axioms flags it non-metric."""
    t0 = time.perf_counter()
    m = bind(exp_weighted(p=2.0, weights=(3.0,) * cars.n), cars)
    with pytest.raises(UnsupportedError):
        build_vptree(cars, m)

    q = QuerySpec("cars", m, center_cod=369, k=51)
    rs = knn_scan(cars, m, q)
    assert rs.stats.distance_evaluations == len(cars)
    center = get_row(cars, 369).values
    brute = sorted((distance(m, center, r.values), r.cod) for r in cars.rows)[:51]
    assert rs.entries == tuple((c, d) for d, c in brute)

    sample = [r for r in cars.rows[:25]]
    report = validate_axioms(m, sample, tol=1e-9)
    assert len(report.by_axiom("triangle")) > 0
    _report("exp_weighted sequential-scan fallback", t0)


def test_views_property_suite(cars):
    """Axis permutation preserves per-row multisets; star symmetry exact;
    table lens sort stable with cod tie-break."""
    t0 = time.perf_counter()
    from metricscope.views import parallel_coordinates, star, table_lens

    rows = list(cars.rows[:60])
    bounds = (cars.stats.min, cars.stats.max)
    names = cars.attribute_names
    rng = np.random.default_rng(5)
    base = parallel_coordinates(rows, list(range(8)), bounds, names)
    for _ in range(20):
        order = list(rng.permutation(8))
        vm = parallel_coordinates(rows, order, bounds, names)
        for b, p in zip(base.items, vm.items):
            assert sorted(b["polyline"]) == sorted(p["polyline"])

    unit4 = ((0.0,) * 4, (1.0,) * 4)
    sym = star([FeatureVector(1, (1.0, 1.0, 1.0, 1.0))], unit4, ("a", "b", "c", "d"))
    assert sym.items[0]["x"] == 0.0 and sym.items[0]["y"] == 0.0
    ax0 = star([FeatureVector(1, (1.0, 0.0, 0.0, 0.0))], unit4, ("a", "b", "c", "d"))
    assert (ax0.items[0]["x"], ax0.items[0]["y"]) == (1.0, 0.0)

    tied = [FeatureVector(c, (2.0,)) for c in (30, 10, 20)] + [FeatureVector(5, (1.0,))]
    tl = table_lens(tied, 0, "asc", ((1.0,), (2.0,)), ("a",))
    assert [it["cod"] for it in tl.items] == [5, 10, 20, 30]
    _report("views property suite", t0, budget=2.0)


def test_end_to_end_determinism(cars_csv, tmp_path):
    """Replaying a saved 3-workspace session manifest reproduces
    byte-identical result and projection CSVs."""
    t0 = time.perf_counter()
    s = Session(seed=42)
    s.add_dataset(cars_csv, dataset_id="cars")
    ws1 = s.run_query(QuerySpec("cars", euclidean(), center_cod=4, k=40))
    ws2 = s.run_query(s.pick_center(ws1.id, ws1.result.cods[1]), parent_id=ws1.id)
    wm = weighted_minkowski(4.0, (1, 0, 1, 1, 1, 0, 1, 1))
    ws3 = s.run_query(
        QuerySpec("cars", wm, center_cod=ws2.result.cods[2], k=30), parent_id=ws2.id
    )
    save_session(s, tmp_path / "session")

    replayed = load_session(tmp_path / "session")
    rep = sorted(replayed.workspaces.values(), key=lambda w: int(w.id.split("-")[1]))
    for orig, new in zip((ws1, ws2, ws3), rep):
        assert result_to_csv(new.result) == result_to_csv(orig.result)
        assert projection_to_csv(new.projection) == projection_to_csv(orig.projection)
    assert rep[1].parent_id == rep[0].id
    assert rep[2].parent_id == rep[1].id
    _report("end-to-end manifest determinism", t0)


def test_api_cli_parity_and_error_mapping(cars_csv, tmp_path):
    """20 golden request/response pairs covering every error code, plus
    CLI/API agreement on the same logical query."""
    t0 = time.perf_counter()
    session = Session(seed=42)
    session.add_dataset(cars_csv, dataset_id="cars")
    client = TestClient(create_app(session), raise_server_exceptions=False)

    query_payload = {
        "dataset": "cars",
        "metric": {"name": "euclidean"},
        "center": {"cod": 4},
        "knn": {"k": 51},
    }
    golden = []

    def check(name, resp, status, code=None):
        assert resp.status_code == status, f"{name}: {resp.status_code} != {status}"
        if code is not None:
            assert resp.json()["code"] == code, name
        golden.append((name, status, code))
        return resp

    check("healthz", client.get("/healthz"), 200)
    check("metrics", client.get("/metrics"), 200)
    check("upload", client.post("/datasets?id=g", content="a,b,COD\n1,2,1\n3,4,2"), 200)
    check("upload-conflict", client.post("/datasets?id=g", content="a,COD\n1,1"), 409, "conflict")
    check("upload-parse", client.post("/datasets", content="a,b,COD\n1,x,1"), 400, "bad_request")
    check("upload-dup-cod", client.post("/datasets", content="1,2,7\n3,4,7"), 400, "bad_request")
    check("rows", client.get("/datasets/cars/rows?limit=3"), 200)
    check("rows-missing", client.get("/datasets/missing/rows"), 404, "not_found")
    check("overview", client.get("/datasets/cars/overview"), 200)
    check("overview-missing", client.get("/datasets/missing/overview"), 404, "not_found")
    q = check("query", client.post("/queries", json=query_payload), 200)
    ws_id = q.json()["workspace_id"]
    bad_k = dict(query_payload, knn={"k": 0})
    check("query-bad-k", client.post("/queries", json=bad_k), 400, "bad_request")
    bad_center = dict(query_payload, center={"cod": 123456})
    check("query-bad-center", client.post("/queries", json=bad_center), 404, "not_found")
    bad_metric = dict(query_payload, metric={"name": "nope"})
    check("query-bad-metric", client.post("/queries", json=bad_metric), 404, "not_found")
    check("projection", client.get(f"/workspaces/{ws_id}/projection"), 200)
    check("view", client.get(f"/workspaces/{ws_id}/views/star"), 200)
    check("view-unsupported", client.get(f"/workspaces/{ws_id}/views/heatmap"), 422, "unsupported")
    check("pick", client.post(f"/workspaces/{ws_id}/pick", json={"cod": 4}), 200)
    # instrumented 500: a handler dependency that blows up must still map to
    # a structured ApiError
    import metricscope.workspace as ws_mod

    original = ws_mod.Session.overview
    ws_mod.Session.overview = lambda *a, **k: 1 / 0
    try:
        check("internal", client.get("/datasets/cars/overview"), 500, "internal")
    finally:
        ws_mod.Session.overview = original
    check("delete", client.delete(f"/workspaces/{ws_id}"), 200)

    assert len(golden) == 20
    assert {c for _, _, c in golden if c} == {
        "bad_request", "not_found", "conflict", "unsupported", "internal",
    }

    # CLI parity on the same logical query
    from metricscope.cli import main as cli_main

    data_file = tmp_path / "cars.csv"
    data_file.write_text(cars_csv)
    out = tmp_path / "r.csv"
    assert cli_main(["query", "--dataset", str(data_file), "--metric", "euclidean",
                     "--center-cod", "4", "--k", "51", "--out", str(out)]) == 0
    cli_entries = [
        (int(ln.split(",")[0]), float(ln.split(",")[1]))
        for ln in out.read_text().strip().split("\n")[1:]
    ]
    api_entries = [(e["cod"], e["distance"]) for e in q.json()["entries"]]
    assert cli_entries == api_entries
    _report("API/CLI parity and error mapping", t0)
