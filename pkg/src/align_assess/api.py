"""HTTP surface. Handlers parse the request, delegate to the service, and
shape the response; module errors map 1:1 onto machine codes and statuses.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Header, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .errors import AppError, MissingFieldError, ValidationError
from .service import AssessmentService


def _field(body: dict, name: str, default=..., kind=None):
    if name not in body or body[name] is None:
        if default is not ...:
            return default
        raise MissingFieldError(f"missing field {name!r}", path=name)
    value = body[name]
    if kind is int:
        # Reject 4.5 etc.; accept 4 and "4".
        if isinstance(value, bool) or (isinstance(value, float)
                                       and not value.is_integer()):
            raise ValidationError(f"field {name!r} must be an integer", path=name)
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ValidationError(f"field {name!r} must be an integer", path=name)
    if kind is float:
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ValidationError(f"field {name!r} must be a number", path=name)
    if kind is str:
        return str(value)
    return value


def create_app(service: AssessmentService, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="align-assess", docs_url=None, redoc_url=None)

    @app.exception_handler(AppError)
    async def app_error_handler(_req: Request, err: AppError):
        return JSONResponse(status_code=err.http_status,
                            content={"error": err.to_dict()})

    @app.exception_handler(RequestValidationError)
    async def body_error_handler(_req: Request, err: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": {
            "code": "invalid-body", "message": "malformed request body"}})

    @app.exception_handler(Exception)
    async def unexpected_handler(_req: Request, _err: Exception):
        return JSONResponse(status_code=500, content={"error": {
            "code": "internal", "message": "internal error"}})

    def identity_check(session_id: str, header_value: str | None,
                       body_assessor: str | None = None):
        if header_value is None:
            return
        service.check_identity(session_id, header_value)
        if body_assessor is not None and body_assessor != header_value:
            raise ValidationError(
                f"body assessor {body_assessor!r} does not match "
                f"X-Assessor-Id header", path="assessor_id")

    # -- models ------------------------------------------------------------------

    @app.get("/api/models")
    async def list_models():
        return {"models": service.list_models()}

    @app.get("/api/models/{model_id}")
    async def get_model(model_id: str, version: int | None = Query(default=None)):
        return service.get_model_dict(model_id, version)

    @app.post("/api/models", status_code=201)
    async def add_model(body: dict):
        model_id, version = service.add_model(body)
        return {"id": model_id, "version": version}

    # -- sessions -----------------------------------------------------------------

    @app.get("/api/sessions")
    async def list_sessions():
        return {"sessions": service.list_sessions()}

    @app.post("/api/sessions", status_code=201)
    async def create_session(body: dict):
        session = service.create_session(
            model_id=_field(body, "model_id", kind=str),
            profile=_field(body, "org_profile", default={}),
            gathering_mode=_field(body, "gathering_mode",
                                  default="individual-survey", kind=str),
            session_id=body.get("id"),
        )
        return session.to_dict()

    @app.get("/api/sessions/{session_id}")
    async def get_session(session_id: str):
        return service.get_session(session_id).to_dict()

    @app.post("/api/sessions/{session_id}/assessors", status_code=201)
    async def add_assessor(session_id: str, body: dict):
        session = service.add_assessor(
            session_id,
            assessor_id=_field(body, "id", kind=str),
            display_name=_field(body, "display_name", default="", kind=str),
            domain_role=_field(body, "domain_role", kind=str),
        )
        return session.to_dict()

    @app.post("/api/sessions/{session_id}/responses")
    async def submit_responses(session_id: str, body: dict,
                               x_assessor_id: str | None = Header(default=None)):
        if "responses" in body:
            rows = body["responses"]
            if not isinstance(rows, list):
                raise ValidationError("responses must be a list", path="responses")
            for row in rows:
                if isinstance(row, dict):
                    identity_check(session_id, x_assessor_id,
                                   row.get("assessor_id"))
            session, result = service.submit_batch(session_id, rows)
            return {"session": session.to_dict(), "import": result.to_dict()}
        assessor_id = _field(body, "assessor_id", kind=str)
        identity_check(session_id, x_assessor_id, assessor_id)
        session = service.submit_response(
            session_id,
            assessor_id=assessor_id,
            practice_id=_field(body, "practice_id", kind=str),
            level=_field(body, "level", kind=int),
            comment=body.get("comment"),
        )
        return session.to_dict()

    @app.put("/api/sessions/{session_id}/weights")
    async def set_weights(session_id: str, body: dict,
                          x_assessor_id: str | None = Header(default=None)):
        identity_check(session_id, x_assessor_id)
        mapping = body.get("weights", body)
        if not isinstance(mapping, dict):
            raise ValidationError("weights must be an object", path="weights")
        return service.set_weights(session_id, mapping).to_dict()

    @app.post("/api/sessions/{session_id}/consensus/{practice_id}")
    async def record_consensus(session_id: str, practice_id: str, body: dict,
                               x_assessor_id: str | None = Header(default=None)):
        identity_check(session_id, x_assessor_id)
        session = service.record_consensus(
            session_id, practice_id,
            agreed_score=_field(body, "agreed_score", kind=float),
            gaps=_field(body, "gaps", default=[]),
            actions=_field(body, "actions", default=[]),
        )
        return session.to_dict()

    @app.post("/api/sessions/{session_id}/adjustment")
    async def set_adjustment(session_id: str, body: dict,
                             x_assessor_id: str | None = Header(default=None)):
        identity_check(session_id, x_assessor_id)
        session = service.set_adjustment(
            session_id,
            value=_field(body, "value", kind=float),
            rationale=_field(body, "rationale", kind=str),
        )
        return session.to_dict()

    @app.post("/api/sessions/{session_id}/phase")
    async def transition(session_id: str, body: dict,
                         x_assessor_id: str | None = Header(default=None)):
        identity_check(session_id, x_assessor_id)
        session, warnings = service.transition(
            session_id, _field(body, "transition", kind=str))
        return {"session": session.to_dict(), "warnings": warnings}

    # -- scores, reports, charts -----------------------------------------------------

    @app.get("/api/sessions/{session_id}/scores")
    async def what_if(session_id: str,
                      weights: str | None = Query(default=None)):
        mapping = None
        if weights is not None:
            try:
                mapping = json.loads(weights)
            except json.JSONDecodeError:
                raise ValidationError("weights query must be JSON", path="weights")
            if not isinstance(mapping, dict):
                raise ValidationError("weights query must be a JSON object",
                                      path="weights")
        return service.what_if(session_id, mapping)

    @app.get("/api/sessions/{session_id}/report")
    async def get_report(session_id: str,
                         format: str = Query(default="structured")):
        payload = service.generate_report(session_id, format)
        media = ("application/json" if format in ("structured", "json")
                 else "text/markdown; charset=utf-8")
        return Response(content=payload, media_type=media)

    @app.get("/api/sessions/{session_id}/chart")
    async def get_chart(session_id: str):
        return service.chart(session_id)

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
