"""Application facade over the store and the domain modules.

Both the CLI (embedded engine) and the HTTP API drive sessions through
this class, so a scripted run produces the same stored state either way.
Mutations of one session are serialized behind a per-session lock and are
durably written before the call returns; distinct sessions proceed in
parallel. What-if scoring never touches the store.
"""

from __future__ import annotations

import threading
from pathlib import Path

from . import catalog, report
from .errors import UnknownModelError, ValidationError
from .model import MaturityModel, model_from_dict, model_to_dict, validate_model
from .scoring import WeightSet
from .session import (
    AssessmentSession,
    Assessor,
    GapNote,
    ImportResult,
    OrgProfile,
    parse_responses_csv,
)
from .store import Store

TRANSITIONS = ("open-collection", "close-collection", "finalize")


class AssessmentService:
    def __init__(self, data_dir: Path | str):
        self.store = Store(data_dir)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            if session_id not in self._locks:
                self._locks[session_id] = threading.Lock()
            return self._locks[session_id]

    # -- models -----------------------------------------------------------------

    def resolve_model(self, model_id: str,
                      version: int | None = None) -> tuple[MaturityModel, int]:
        """Stored models win; the built-in catalog backs them up."""
        if self.store.exists("model", model_id):
            payload = self.store.get("model", model_id, version)
            actual = version or self.store.latest_version("model", model_id)
            return model_from_dict(payload), actual
        try:
            entry = catalog.get_builtin(model_id)
        except UnknownModelError:
            raise UnknownModelError(f"unknown model {model_id!r}", path=model_id)
        return entry.model, 0  # 0 = built-in, not yet persisted

    def _persist_model_if_needed(self, model: MaturityModel, version: int) -> int:
        if version > 0:
            return version
        return self.store.put("model", model.id, model_to_dict(model))

    def add_model(self, data: dict) -> tuple[str, int]:
        model = model_from_dict(data)
        result = validate_model(model)
        if not result.ok:
            from .errors import InvalidModelError
            raise InvalidModelError(
                "model fails validation: " + "; ".join(result.messages()),
                path=model.id)
        version = self.store.put("model", model.id, model_to_dict(model))
        return model.id, version

    def list_models(self) -> list[dict]:
        stored = self.store.list("model")
        stored_ids = {s["id"] for s in stored}
        out = []
        for s in stored:
            model = model_from_dict(s["payload"])
            out.append({
                "id": model.id,
                "name": model.name,
                "version": s["version"],
                "criteria": len(model.criteria),
                "practices": model.practice_count(),
                "builtin": model.id == catalog.BUILTIN_MODEL_ID,
            })
        for entry in catalog.list_builtin():
            if entry["id"] not in stored_ids:
                out.append(entry)
        return sorted(out, key=lambda m: m["id"])

    def get_model_dict(self, model_id: str, version: int | None = None) -> dict:
        model, actual = self.resolve_model(model_id, version)
        data = model_to_dict(model)
        data["version"] = actual if actual > 0 else 1
        return data

    # -- session lifecycle ---------------------------------------------------------

    def create_session(self, model_id: str, profile: dict, gathering_mode: str,
                       session_id: str | None = None) -> AssessmentSession:
        model, version = self.resolve_model(model_id)
        version = self._persist_model_if_needed(model, version)
        if session_id and self.store.exists("session", session_id):
            raise ValidationError(f"session {session_id!r} already exists",
                                  path=session_id)
        session = AssessmentSession.create(
            model, version, OrgProfile.from_dict(profile), gathering_mode,
            session_id=session_id)
        self.store.put("session", session.id, session.to_dict())
        return session

    def get_session(self, session_id: str) -> AssessmentSession:
        return AssessmentSession.from_dict(self.store.get("session", session_id))

    def list_sessions(self) -> list[dict]:
        out = []
        for record in self.store.list("session"):
            payload = record["payload"]
            out.append({
                "id": payload["id"],
                "phase": payload["phase"],
                "model_id": payload["model_id"],
                "model_version": payload["model_version"],
                "gathering_mode": payload["gathering_mode"],
                "assessors": len(payload.get("assessors", [])),
                "created_at": payload.get("created_at", ""),
            })
        return out

    def _model_for(self, session: AssessmentSession) -> MaturityModel:
        payload = self.store.get("model", session.model_id, session.model_version)
        return model_from_dict(payload)

    def _mutate(self, session_id: str, fn):
        """Load-latest, apply, persist — serialized per session."""
        with self._lock_for(session_id):
            session = self.get_session(session_id)
            result = fn(session)
            self.store.put("session", session.id, session.to_dict())
            return session, result

    # -- session operations -----------------------------------------------------------

    def add_assessor(self, session_id: str, assessor_id: str,
                     display_name: str, domain_role: str) -> AssessmentSession:
        session, _ = self._mutate(session_id, lambda s: s.add_assessor(
            Assessor(id=assessor_id, display_name=display_name,
                     domain_role=domain_role)))
        return session

    def submit_response(self, session_id: str, assessor_id: str,
                        practice_id: str, level: int,
                        comment: str | None = None) -> AssessmentSession:
        model_holder = {}

        def apply(s: AssessmentSession):
            model_holder["m"] = self._model_for(s)
            s.submit_response(model_holder["m"], assessor_id, practice_id,
                              level, comment)

        session, _ = self._mutate(session_id, apply)
        return session

    def submit_batch(self, session_id: str,
                     rows: list[dict]) -> tuple[AssessmentSession, ImportResult]:
        """API batch submission; same atomic semantics as CSV import,
        rows numbered from 1."""
        numbered = []
        shape_rejects = []
        for i, row in enumerate(rows, start=1):
            try:
                numbered.append((i, {
                    "assessor_id": str(row["assessor_id"]),
                    "practice_id": str(row["practice_id"]),
                    "level": int(row["level"]),
                    "comment": row.get("comment"),
                }))
            except (KeyError, TypeError, ValueError) as err:
                shape_rejects.append((i, f"malformed row: {err}"))

        def apply(s: AssessmentSession):
            return s.import_responses(self._model_for(s), numbered, shape_rejects)

        with self._lock_for(session_id):
            session = self.get_session(session_id)
            result = apply(session)
            if result.accepted > 0:
                self.store.put("session", session.id, session.to_dict())
            return session, result

    def import_responses_csv(self, session_id: str,
                             text: str) -> tuple[AssessmentSession, ImportResult]:
        rows, shape_rejects = parse_responses_csv(text)

        with self._lock_for(session_id):
            session = self.get_session(session_id)
            result = session.import_responses(self._model_for(session), rows,
                                              shape_rejects)
            if result.accepted > 0:
                self.store.put("session", session.id, session.to_dict())
            return session, result

    def set_weights(self, session_id: str,
                    mapping: dict) -> AssessmentSession:
        def apply(s: AssessmentSession):
            s.set_weights(self._model_for(s), WeightSet(mapping))

        session, _ = self._mutate(session_id, apply)
        return session

    def record_consensus(self, session_id: str, practice_id: str,
                         agreed_score: float,
                         gaps: list[dict] | None = None,
                         actions: list[str] | None = None) -> AssessmentSession:
        gap_notes = [GapNote(description=str(g.get("description", "")),
                             severity=str(g.get("severity", "medium")))
                     for g in (gaps or [])]

        def apply(s: AssessmentSession):
            s.record_consensus(self._model_for(s), practice_id, agreed_score,
                               gap_notes, list(actions or []))

        session, _ = self._mutate(session_id, apply)
        return session

    def set_adjustment(self, session_id: str, value: float,
                       rationale: str) -> AssessmentSession:
        session, _ = self._mutate(
            session_id, lambda s: s.set_overall_adjustment(value, rationale))
        return session

    def transition(self, session_id: str,
                   transition: str) -> tuple[AssessmentSession, list[str]]:
        if transition not in TRANSITIONS:
            raise ValidationError(
                f"unknown transition {transition!r} "
                f"(expected one of {', '.join(TRANSITIONS)})", path="transition")

        def apply(s: AssessmentSession):
            if transition == "open-collection":
                s.open_collection()
                return []
            if transition == "close-collection":
                return s.close_collection()
            s.finalize(self._model_for(s))
            return []

        session, warnings = self._mutate(session_id, apply)
        return session, warnings

    # -- scoring & reporting -------------------------------------------------------------

    def what_if(self, session_id: str, weights_mapping: dict | None = None) -> dict:
        """Hypothetical scores; never persisted, never audited."""
        session = self.get_session(session_id)
        model = self._model_for(session)
        weights = WeightSet(weights_mapping) if weights_mapping is not None else None
        return session.compute_scores(model, weights).to_plain()

    def generate_report(self, session_id: str, fmt: str = "markdown") -> bytes:
        with self._lock_for(session_id):
            session = self.get_session(session_id)
            model = self._model_for(session)
            if session.phase == "finalized":
                session.mark_reported(report.FORMAT_ALIASES.get(fmt, fmt))
                self.store.put("session", session.id, session.to_dict())
            return report.generate_report(session, model, fmt)

    def chart(self, session_id: str) -> dict:
        session = self.get_session(session_id)
        return report.chart_data(session, self._model_for(session))

    def check_identity(self, session_id: str, assessor_id: str):
        """Header-supplied identity must name a session assessor."""
        self.get_session(session_id).assessor(assessor_id)
