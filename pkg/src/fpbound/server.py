"""HTTP facade over one loaded, calibrated session.

State is built once at startup and read-only afterwards; every endpoint is a
pure function of (session, request). Bound and envelope responses are
rendered with the same serializer as CLI reports, so the payloads match the
CLI byte for byte on shared fragments.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .report import dumps, envelope_fragment
from .session import AnalysisSession

__all__ = ["create_app"]


class SelectionBody(BaseModel):
    ids: list[str] | None = None
    indices: list[int] | None = None
    top_k: int | None = None
    fc_above: float | None = None
    fc_below: float | None = None
    bh_level: float | None = None


class BoundRequest(BaseModel):
    selection: SelectionBody = Field(default_factory=SelectionBody)
    method: str = "simes"
    template: str = "linear"
    k0: int = 1


def _json(payload: dict, status_code: int = 200) -> Response:
    return Response(content=dumps(payload), media_type="application/json",
                    status_code=status_code)


def create_app(session: AnalysisSession | None = None, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="fpbound", docs_url=None, redoc_url=None)
    app.state.session = session
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def current() -> AnalysisSession:
        state = app.state.session
        if state is None:
            raise HTTPException(status_code=503, detail="session not initialized")
        return state

    def available_methods(state: AnalysisSession) -> list[str]:
        methods = ["simes", "bonferroni"]
        methods.extend(f"calibrated:{kind}" for kind in sorted(state.calibrations))
        return methods

    @app.get("/api/meta")
    def meta() -> Response:
        state = current()
        return _json(
            {
                "m": state.m,
                "n1": state.dataset.n1 if state.two_sample else None,
                "n2": state.dataset.n2 if state.two_sample else None,
                "alpha": state.alpha,
                "templates": sorted(state.calibrations),
                "lambda": {kind: cal.lam for kind, cal in sorted(state.calibrations.items())},
                "methods": available_methods(state),
                "dataset_digest": state.digests,
            }
        )

    @app.get("/api/points")
    def points() -> Response:
        state = current()
        if not state.two_sample:
            raise HTTPException(status_code=404, detail="no fold changes in a p-value-only session")
        return _json({"points": state.points()})

    def _parse_method(state: AnalysisSession, method: str, template: str) -> tuple[str, str]:
        if method.startswith("calibrated:"):
            method, template = "calibrated", method.split(":", 1)[1]
        if method not in ("simes", "bonferroni", "calibrated"):
            raise HTTPException(status_code=400, detail=f"unknown method {method!r}")
        if method == "calibrated" and template not in state.calibrations:
            raise HTTPException(
                status_code=400,
                detail=f"template {template!r} not calibrated; available: {sorted(state.calibrations)}",
            )
        return method, template

    @app.post("/api/bound")
    def bound(body: BoundRequest) -> Response:
        state = current()
        method, template = _parse_method(state, body.method, body.template)
        sel = body.selection
        try:
            S, name = state.resolve_selection(
                ids=sel.ids,
                indices=sel.indices,
                top_k=sel.top_k,
                fc_above=sel.fc_above,
                fc_below=sel.fc_below,
                bh_level=sel.bh_level,
            )
        except KeyError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        bv = state.evaluate(S, method, template=template, k0=body.k0)
        size = len(S)
        return _json(
            {
                "name": name,
                "size": size,
                "V": int(bv.v),
                "tp_lower": size - int(bv.v),
                "fdp_upper": (bv.v / size) if size else 0.0,
                "method": state.method_label(method, template, body.k0),
                "lambda": bv.lam,
                "ids": [state.ids[i - 1] for i in S.indices],
            }
        )

    @app.get("/api/envelope")
    def envelope(method: str = "simes", template: str = "linear", k0: int = 1) -> Response:
        state = current()
        method, template = _parse_method(state, method, template)
        env = state.method_envelope(method, template=template, k0=k0)
        payload = envelope_fragment(env)
        payload["method"] = state.method_label(method, template, k0)
        payload["order_ids"] = [state.ids[i - 1] for i in _order(state)]
        return _json(payload)

    def _order(state: AnalysisSession):
        from .bounds import level_set_order

        return level_set_order(state.p)

    if ui_dir:
        ui_path = Path(ui_dir)
        if ui_path.is_dir():
            from fastapi.staticfiles import StaticFiles

            app.mount("/", StaticFiles(directory=str(ui_path), html=True), name="ui")

    return app
