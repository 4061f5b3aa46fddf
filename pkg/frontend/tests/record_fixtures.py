"""Record the HTTP exchanges for the front end's contract tests.

Drives a seeded in-process backend through the scripted interaction the UI
tests replay (upload cars -> overview -> weighted query around cod 4 ->
pick a neighbor -> second query -> close), capturing each request and the
exact response bytes. Request bodies are normalized the way the browser's
JSON.stringify would emit them (integral floats as integers, no spaces) so
the replaying fake fetch can match on exact bytes.

Run from the repository root:
    python3 frontend/tests/record_fixtures.py
"""

from __future__ import annotations

import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient

from metricscope.api import create_app
from metricscope.workspace import Session

OUT = pathlib.Path(__file__).resolve().parent / "fixtures" / "recording.json"


def js_normalize(value):
    """Mirror JSON.stringify number formatting: 4.0 -> 4."""
    if isinstance(value, bool):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, dict):
        return {k: js_normalize(v) for k, v in value.items()}
    if isinstance(value, list):
        return [js_normalize(v) for v in value]
    return value


def js_stringify(obj) -> str:
    return json.dumps(js_normalize(obj), separators=(",", ":"))


def query_body(payload: dict) -> str:
    """Serialize a query payload with the client's fixed key order."""
    metric = {"name": payload["metric"]["name"]}
    for key in ("p", "weights"):
        if payload["metric"].get(key) is not None:
            metric[key] = payload["metric"][key]
    out = {"dataset": payload["dataset"], "metric": metric, "center": payload["center"]}
    for key in ("knn", "range", "parent"):
        if payload.get(key) is not None:
            out[key] = payload[key]
    return js_stringify(out)


def main() -> None:
    client = TestClient(create_app(Session(seed=42)), raise_server_exceptions=False)
    exchanges: list[dict] = []

    def record(
        name: str, method: str, url: str, body: str | None = None,
        content_type: str = "application/json",
    ) -> dict:
        kwargs = {}
        if body is not None:
            kwargs["content"] = body.encode("utf-8")
            kwargs["headers"] = {"content-type": content_type}
        resp = client.request(method, url, **kwargs)
        exchanges.append(
            {
                "name": name,
                "method": method,
                "url": url,
                "requestBody": body,
                "status": resp.status_code,
                "responseText": resp.content.decode("utf-8"),
            }
        )
        return json.loads(resp.content) if resp.content else {}

    cars_csv = (ROOT / "data" / "cars.csv").read_text()
    record("upload-cars", "POST", "/datasets?id=cars", cars_csv, content_type="text/csv")
    record("metrics", "GET", "/metrics")
    record("overview-cars", "GET", "/datasets/cars/overview?metric=euclidean")

    # dialog opened on cod 4, user switches to weighted minkowski p=4 with
    # CYLINDERS and WEIGHT silenced, k=50
    q1 = {
        "dataset": "cars",
        "metric": {"name": "weighted_minkowski", "p": 4, "weights": [1, 0, 1, 1, 1, 0, 1, 1]},
        "center": {"cod": 4},
        "knn": {"k": 50},
    }
    ws1 = record("query-1", "POST", "/queries", query_body(q1))
    ws1_id = ws1["workspace_id"]
    record("projection-1", "GET", f"/workspaces/{ws1_id}/projection")
    record("view-1-parallel", "GET", f"/workspaces/{ws1_id}/views/parallel_coordinates")

    # pick the farthest neighbor from the panel's result table so the second
    # neighborhood actually shifts (the nearest one reproduces ws1 exactly)
    neighbor = ws1["entries"][-1]["cod"]
    template = record("pick-neighbor", "POST", f"/workspaces/{ws1_id}/pick", js_stringify({"cod": neighbor}))
    ws2 = record("query-2", "POST", "/queries", query_body(template))
    ws2_id = ws2["workspace_id"]
    record("projection-2", "GET", f"/workspaces/{ws2_id}/projection")
    record("close-2", "DELETE", f"/workspaces/{ws2_id}")

    # failure surfaced as a dismissible banner
    record("overview-missing", "GET", "/datasets/nope/overview?metric=euclidean")

    shared = sorted(
        {e["cod"] for e in ws1["entries"]} & {e["cod"] for e in ws2["entries"]}
    )
    only_ws1 = sorted(
        {e["cod"] for e in ws1["entries"]} - {e["cod"] for e in ws2["entries"]}
    )
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(
        json.dumps(
            {
                "seed": 42,
                "script": {
                    "neighborCod": neighbor,
                    "ws1": ws1_id,
                    "ws2": ws2_id,
                    "sharedCods": shared,
                    "onlyWs1Cods": only_ws1,
                },
                "exchanges": exchanges,
            },
            indent=1,
        )
    )
    print(f"recorded {len(exchanges)} exchanges -> {OUT}")
    print(f"ws1={ws1_id} ws2={ws2_id} neighbor={neighbor} shared={len(shared)}")


if __name__ == "__main__":
    main()
