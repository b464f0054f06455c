"""HTTP facade over the model, engine, and sensitivity modules.

All endpoints live under /api/v1. Errors share one body shape
({"error": <code>, "detail": <human readable>}): unknown names are 404,
requests that conflict with current session state are 409, and anything
structurally invalid is 422. Apart from sessions the service holds no
state, and the model itself is immutable after startup.
"""

from __future__ import annotations

import math
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

from fastapi import APIRouter, FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from starlette.exceptions import HTTPException as StarletteHTTPException

from .. import engine
from ..model import FaultModel, Symptom, bundled_dataset, model_to_dict, normalize
from ..sensitivity import SensitivityConfig, diff_distribution
from . import schemas
from .sessions import (
    DEFAULT_TTL_SECONDS,
    ComponentAlreadyTested,
    OutOfOrderReport,
    Session,
    SessionInactive,
    SessionNotFound,
    SessionStore,
    UnknownComponent,
)

_ERROR_CODES = {404: "not_found", 409: "conflict", 422: "invalid_request"}


def _fail(status: int, detail: str) -> HTTPException:
    code = _ERROR_CODES.get(status, "error")
    return HTTPException(status, detail={"error": code, "detail": detail})


def _iso(ts: float) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).isoformat()


def _finite_ratio(ratio: float) -> float | None:
    return None if math.isinf(ratio) else ratio


def _sequence_out(symptom: Symptom) -> list[schemas.SequencedTestOut]:
    return [
        schemas.SequencedTestOut(
            component=t.component_id,
            name=symptom.component(t.component_id).name,
            cost=t.cost,
            prob=t.prob,
            cp_ratio=_finite_ratio(t.cp_ratio),
            rank=t.rank,
        )
        for t in engine.cp_sequence(symptom)
    ]


def _session_view(session: Session) -> schemas.SessionResponse:
    recommendation = None
    remaining: list[schemas.ComponentOut] = []
    if session.remaining is not None:
        remaining = [
            schemas.ComponentOut(id=c.id, name=c.name, cost=c.cost, prob=c.prob)
            for c in session.remaining.components
        ]
    rec_id = session.recommendation_id()
    if rec_id is not None and session.remaining is not None:
        first = engine.cp_sequence(session.remaining)[0]
        comp = session.remaining.component(rec_id)
        recommendation = schemas.RecommendationOut(
            component=comp.id,
            name=comp.name,
            cost=comp.cost,
            prob=comp.prob,
            cp_ratio=_finite_ratio(first.cp_ratio),
        )
    return schemas.SessionResponse(
        id=session.id,
        symptom=session.symptom_id,
        status=session.status,
        recommendation=recommendation,
        remaining=remaining,
        remaining_expected_cost=session.remaining_expected_cost(),
        history=[
            schemas.HistoryEntryOut(
                component=h.component_id, outcome=h.outcome, at=_iso(h.at)
            )
            for h in session.history
        ],
        diagnosis=session.diagnosis,
        created_at=_iso(session.created_at),
        updated_at=_iso(session.updated_at),
    )


def create_app(
    model: FaultModel | None = None,
    ttl_seconds: float = DEFAULT_TTL_SECONDS,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    model = model if model is not None else bundled_dataset()
    store = SessionStore(ttl_seconds=ttl_seconds)
    app = FastAPI(title="diagseq service", version="0.1.0")
    app.state.model = model
    app.state.store = store
    api = APIRouter(prefix="/api/v1")

    def get_symptom(symptom_id: str) -> Symptom:
        try:
            return model.symptom(symptom_id)
        except ValueError as exc:
            raise _fail(404, str(exc)) from exc

    @api.get("/model")
    def get_model() -> dict:
        return model_to_dict(model)

    @api.post("/sessions", response_model=schemas.SessionResponse, status_code=201)
    def create_session(body: schemas.CreateSessionRequest):
        symptom = get_symptom(body.symptom)
        return _session_view(store.create(symptom))

    @api.get("/sessions/{session_id}", response_model=schemas.SessionResponse)
    def get_session(session_id: str):
        try:
            return _session_view(store.get(session_id))
        except SessionNotFound as exc:
            raise _fail(404, str(exc)) from exc

    @api.post(
        "/sessions/{session_id}/outcome", response_model=schemas.SessionResponse
    )
    def report_outcome(session_id: str, body: schemas.OutcomeRequest):
        try:
            session = store.report_outcome(
                session_id, body.component, body.outcome, override=body.override
            )
        except (SessionNotFound, UnknownComponent) as exc:
            raise _fail(404, str(exc)) from exc
        except (SessionInactive, ComponentAlreadyTested, OutOfOrderReport) as exc:
            raise _fail(409, str(exc)) from exc
        return _session_view(session)

    @api.post("/whatif", response_model=schemas.WhatifResponse)
    def whatif(body: schemas.WhatifRequest):
        symptom = get_symptom(body.symptom)
        known = set(symptom.component_ids())
        components = list(symptom.components)
        for cid, override in body.overrides.items():
            if cid not in known:
                raise _fail(
                    422,
                    f"override references unknown component {cid!r}; "
                    f"known: {', '.join(symptom.component_ids())}",
                )
            idx = next(i for i, c in enumerate(components) if c.id == cid)
            comp = components[idx]
            cost = override.cost if override.cost is not None else comp.cost
            prob = override.prob if override.prob is not None else comp.prob
            if cost <= 0:
                raise _fail(422, f"override for {cid!r}: cost must be > 0, got {cost}")
            if not 0.0 <= prob <= 1.0:
                raise _fail(
                    422, f"override for {cid!r}: prob must be in [0, 1], got {prob}"
                )
            components[idx] = replace(comp, cost=cost, prob=prob)
        overridden = replace(symptom, components=tuple(components))
        try:
            modified = normalize(overridden)
            nominal = normalize(symptom)
        except ValueError as exc:
            raise _fail(422, str(exc)) from exc
        ec = engine.expected_cost(engine.cp_strategy(modified), modified).expected_cost
        nominal_ec = engine.expected_cost(
            engine.cp_strategy(nominal), nominal
        ).expected_cost
        return schemas.WhatifResponse(
            symptom=symptom.id,
            expected_cost=ec,
            nominal_expected_cost=nominal_ec,
            delta_vs_nominal=ec - nominal_ec,
            sequence=_sequence_out(modified),
            nominal_sequence=_sequence_out(nominal),
        )

    @api.post("/sensitivity", response_model=schemas.SensitivityResponse)
    def sensitivity(body: schemas.SensitivityRequest):
        symptom = get_symptom(body.symptom)
        try:
            rule = model.expert_rule(body.expert, body.symptom)
        except ValueError as exc:
            raise _fail(404, str(exc)) from exc
        try:
            config = SensitivityConfig(
                error_factor=body.s,
                n_samples=body.n_samples,
                seed=body.seed,
                band_mass=body.band_mass,
                renormalize_samples=body.renormalize_samples,
            )
        except ValueError as exc:
            raise _fail(422, str(exc)) from exc
        summary = diff_distribution(
            symptom, rule.strategy, engine.cp_strategy(symptom), config
        )
        return schemas.SensitivityResponse(
            symptom=symptom.id,
            expert=body.expert,
            s=body.s,
            n_samples=body.n_samples,
            seed=body.seed,
            band_mass=body.band_mass,
            renormalize_samples=body.renormalize_samples,
            nominal_diff=summary.nominal_diff,
            mean_diff=summary.mean_diff,
            quantiles={f"{level:g}": v for level, v in summary.quantiles.items()},
            prob_positive=summary.prob_positive,
            cdf_points=list(summary.cdf_points) if body.include_cdf else [],
        )

    app.include_router(api)

    @app.exception_handler(StarletteHTTPException)
    async def http_error(request: Request, exc: StarletteHTTPException):
        if isinstance(exc.detail, dict) and "error" in exc.detail:
            body = exc.detail
        else:
            body = {
                "error": _ERROR_CODES.get(exc.status_code, "error"),
                "detail": str(exc.detail),
            }
        return JSONResponse(status_code=exc.status_code, content=body)

    @app.exception_handler(RequestValidationError)
    async def request_error(request: Request, exc: RequestValidationError):
        parts = []
        for err in exc.errors():
            loc = ".".join(str(piece) for piece in err.get("loc", ()))
            parts.append(f"{loc}: {err.get('msg', 'invalid')}")
        return JSONResponse(
            status_code=422,
            content={"error": "validation_error", "detail": "; ".join(parts)},
        )

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
