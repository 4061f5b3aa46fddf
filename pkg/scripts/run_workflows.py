"""Run the two demo analysis workflows end to end and dump their artifacts.

Workflow A (agro): euclidean kNN around records 430 and 156, parallel
coordinates + scatter + table lens per workspace.
Workflow B (cars): euclidean vs weighted-Minkowski (p=4, CYLINDERS/WEIGHT
silenced) around car 4, then exp-weighted (ACCELERATION/HORSEPOWER) around
car 369.

Artifacts land in out/workflows/: result CSVs, projection CSVs, SVGs and
the session manifest.
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from metricscope.fastmap import projection_to_csv
from metricscope.index import QuerySpec
from metricscope.metrics import euclidean, exp_weighted, weighted_minkowski
from metricscope.render_svg import render_svg
from metricscope.workspace import Session, result_to_csv, save_session

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "out" / "workflows"


def dump(session: Session, ws, label: str, views: list[tuple[str, dict]]):
    (OUT / label).mkdir(parents=True, exist_ok=True)
    (OUT / label / "result.csv").write_text(result_to_csv(ws.result))
    (OUT / label / "projection.csv").write_text(projection_to_csv(ws.projection))
    for technique, params in views:
        vm = session.derive_view(ws.id, technique, params)
        (OUT / label / f"{technique}.svg").write_text(render_svg(vm))
    print(f"{label}: {len(ws.result.entries)} elements, "
          f"stress {ws.projection.stress:.4f}, first {ws.result.entries[0]}")


def main():
    session = Session(seed=42)
    session.add_dataset((ROOT / "data" / "agro.csv").read_text(), dataset_id="agro")
    session.add_dataset((ROOT / "data" / "cars.csv").read_text(), dataset_id="cars")

    print("overview projections:")
    for ds_id in ("agro", "cars"):
        proj = session.overview(ds_id, euclidean())
        print(f"  {ds_id}: {len(proj.coords)} points, stress {proj.stress:.4f}")

    # agro: two euclidean neighborhoods with the standard view set
    agro_views = [
        ("parallel_coordinates", {}),
        ("scatter", {"x_attr": "AVG_TEMP", "y_attr": "ETM"}),
        ("table_lens", {"sort_attr": "NDVI", "direction": "desc"}),
    ]
    w1 = session.run_query(QuerySpec("agro", euclidean(), center_cod=430, k=41))
    dump(session, w1, "agro-q1", agro_views)
    w2 = session.run_query(QuerySpec("agro", euclidean(), center_cod=156, k=41))
    dump(session, w2, "agro-q2", agro_views)

    # cars: semantics via attribute weighting around car 4
    cars_views = [("parallel_coordinates", {}), ("star", {})]
    c1e = session.run_query(QuerySpec("cars", euclidean(), center_cod=4, k=51))
    dump(session, c1e, "cars-q1-euclidean", cars_views)
    wm = weighted_minkowski(4.0, (1, 0, 1, 1, 1, 0, 1, 1))
    c1w = session.run_query(QuerySpec("cars", wm, center_cod=4, k=51))
    dump(session, c1w, "cars-q1-weighted", cars_views)
    changed = len(set(c1e.result.cods) ^ set(c1w.result.cods))
    print(f"cars q1: weighting swapped {changed} of 51 neighborhood members")

    # cars: exponential weighting on ACCELERATION/HORSEPOWER around car 369
    ew = exp_weighted(p=2.0, weights=(0, 0, 0, 2, 2, 0, 0, 0))
    c2 = session.run_query(QuerySpec("cars", ew, center_cod=369, k=51))
    dump(session, c2, "cars-q2-exp", cars_views)

    save_session(session, OUT / "session")
    print(f"artifacts in {OUT}")


if __name__ == "__main__":
    main()
