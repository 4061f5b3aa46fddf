"""HTTP surface: JSON over a small route table, backed by a single Session.

Engine errors map onto HTTP statuses via their ``code``:
bad_request -> 400, not_found -> 404, conflict -> 409, unsupported -> 422,
internal -> 500. Every failure body is an ApiError object
{code, message, detail?}.
"""

from __future__ import annotations

import os
from dataclasses import asdict

from fastapi import Body, FastAPI, Query, Request
from fastapi.responses import JSONResponse

from .errors import ContractError, EngineError
from .index import QuerySpec
from .workspace import DEFAULT_SEED, Session, query_from_json, _query_to_json

STATUS_BY_CODE = {
    "bad_request": 400,
    "not_found": 404,
    "conflict": 409,
    "unsupported": 422,
    "internal": 500,
}


def _error_response(code: str, message: str, detail: dict | None = None) -> JSONResponse:
    body = {"code": code, "message": message}
    if detail:
        body["detail"] = detail
    return JSONResponse(status_code=STATUS_BY_CODE[code], content=body)


def _projection_json(proj) -> dict:
    return {
        "coords": [{"cod": cod, "x": x, "y": y, "z": z} for cod, (x, y, z) in proj.coords.items()],
        "pivots": [list(p) for p in proj.pivots],
        "stress": proj.stress,
        "seed": proj.seed,
        "metric": {"family": proj.metric_echo.family, "p": proj.metric_echo.p},
    }


def _result_json(ws) -> dict:
    return {
        "workspace_id": ws.id,
        "parent_id": ws.parent_id,
        "seed": ws.seed,
        "entries": [{"cod": cod, "distance": d} for cod, d in ws.result.entries],
    }


def _metric_from_params(session: Session, name: str, p: float | None, weights: str | None):
    w = None
    if weights:
        try:
            w = [float(x) for x in weights.split(",")]
        except ValueError:
            raise ContractError(f"malformed weights {weights!r}") from None
    return session.registry.instantiate(name, p=p, weights=w)


def create_app(session: Session | None = None) -> FastAPI:
    if session is None:
        session = Session(seed=int(os.environ.get("METRICSCOPE_SEED", DEFAULT_SEED)))
    app = FastAPI(title="metricscope", version="0.1.0")
    app.state.session = session

    @app.exception_handler(EngineError)
    async def engine_error_handler(request: Request, exc: EngineError):
        return _error_response(exc.code, exc.message, exc.detail or None)

    @app.exception_handler(Exception)
    async def internal_error_handler(request: Request, exc: Exception):
        return _error_response("internal", f"{type(exc).__name__}: {exc}")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "seed": session.seed}

    @app.post("/datasets")
    async def upload_dataset(request: Request, id: str | None = Query(default=None)):
        csv_text = (await request.body()).decode("utf-8")
        ds = session.add_dataset(csv_text, dataset_id=id)
        return {
            "id": ds.id,
            "attributes": list(ds.attribute_names),
            "row_count": len(ds),
            "stats": asdict(ds.stats),
        }

    @app.get("/datasets/{dataset_id}/rows")
    def rows(dataset_id: str, offset: int = 0, limit: int = 50):
        from .dataset import page_rows

        ds = session.get_dataset(dataset_id)
        page = page_rows(ds, offset, limit)
        return {
            "offset": offset,
            "total": len(ds),
            "rows": [{"cod": r.cod, "values": list(r.values)} for r in page],
        }

    @app.get("/metrics")
    def metrics_listing():
        reg = session.registry
        return {
            "metrics": [
                {
                    "name": name,
                    "family": reg.get(name).family,
                    "default_p": reg.get(name).p,
                    "claims_triangle_inequality": reg.get(name).claims_triangle_inequality,
                }
                for name in reg.names()
            ]
        }

    @app.get("/datasets/{dataset_id}/overview")
    def overview(
        dataset_id: str,
        metric: str = "euclidean",
        p: float | None = None,
        weights: str | None = None,
    ):
        m = _metric_from_params(session, metric, p, weights)
        return _projection_json(session.overview(dataset_id, m))

    @app.post("/queries")
    def run_query(payload: dict = Body(...)):
        try:
            q = _query_from_payload(session, payload)
        except (KeyError, TypeError, ValueError) as exc:
            raise ContractError(f"malformed query payload: {exc}") from None
        ws = session.run_query(q, parent_id=payload.get("parent"))
        return _result_json(ws)

    @app.get("/workspaces/{ws_id}")
    def workspace_info(ws_id: str):
        ws = session.get_workspace(ws_id)
        out = _result_json(ws)
        out.update(
            {
                "query": _query_to_json(ws.query),
                "parent_closed": ws.parent_closed,
                "created_at": ws.created_at,
                "stress": ws.projection.stress,
            }
        )
        return out

    @app.get("/workspaces/{ws_id}/projection")
    def workspace_projection(ws_id: str):
        return _projection_json(session.get_workspace(ws_id).projection)

    @app.get("/workspaces/{ws_id}/views/{technique}")
    def workspace_view(ws_id: str, technique: str, request: Request):
        params = _view_params(dict(request.query_params))
        vm = session.derive_view(ws_id, technique, params)
        return {
            "technique": vm.technique,
            "items": list(vm.items),
            "axis_meta": vm.axis_meta,
            "params_echo": vm.params_echo,
        }

    @app.post("/workspaces/{ws_id}/pick")
    def pick(ws_id: str, payload: dict = Body(...)):
        if "cod" not in payload:
            raise ContractError("pick payload requires 'cod'")
        template = session.pick_center(ws_id, int(payload["cod"]))
        out = _query_to_json(template)
        # the registry keys built-ins by family name, so the manifest form
        # converts to the wire form by renaming the key
        out["metric"]["name"] = out["metric"].pop("family")
        out["metric"].pop("claims_triangle_inequality", None)
        out["parent"] = ws_id
        return out

    @app.delete("/workspaces/{ws_id}")
    def close(ws_id: str):
        session.close_workspace(ws_id)
        return {"closed": ws_id}

    return app


def _query_from_payload(session: Session, payload: dict) -> QuerySpec:
    metric_obj = payload["metric"]
    m = session.registry.instantiate(
        metric_obj["name"], p=metric_obj.get("p"), weights=metric_obj.get("weights")
    )
    center = payload["center"]
    k = payload.get("knn", {}).get("k")
    radius = payload.get("range", {}).get("radius")
    return QuerySpec(
        dataset_id=payload["dataset"],
        metric=m,
        center_cod=int(center["cod"]) if "cod" in center else None,
        center_vector=tuple(float(v) for v in center["vector"]) if "vector" in center else None,
        k=int(k) if k is not None else None,
        radius=float(radius) if radius is not None else None,
    )


def _view_params(raw: dict) -> dict:
    params: dict = {}
    for key, value in raw.items():
        if key == "axis_order":
            params[key] = [int(x) for x in value.split(",")]
        elif key in ("x_attr", "y_attr", "sort_attr"):
            params[key] = int(value) if value.lstrip("-").isdigit() else value
        else:
            params[key] = value
    return params
