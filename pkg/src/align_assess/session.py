"""Assessment session state machine.

Phases move strictly forward: created -> collecting -> consensus ->
finalized -> reported. Every mutating operation appends exactly one audit
event carrying enough detail that replaying the log from scratch rebuilds
the session state exactly (timestamps included; they are read back from
the events). After finalize the session is immutable except for the
reported-phase transition.

The three gathering modes share the machine; joint and combined merely
relax the submit-phase rule so scores can still be entered during the
consensus meeting.
"""

from __future__ import annotations

import csv
import io
import uuid
from dataclasses import dataclass, field
from fractions import Fraction

from . import clock, scoring
from .errors import (
    DuplicateAssessorError,
    LevelOutOfRangeError,
    NoAssessorsError,
    ScoreOutOfRangeError,
    UnknownAssessorError,
    UnknownPracticeError,
    ValidationError,
    WrongPhaseError,
)
from .model import LEVELS, MaturityModel, validate_model
from .scoring import WeightSet, validate_weights

PHASES = ("created", "collecting", "consensus", "finalized", "reported")
GATHERING_MODES = ("joint", "individual-survey", "combined")
ROLES = ("IT", "Business")
GAP_SEVERITIES = ("low", "medium", "high")

CSV_HEADER = ["assessor_id", "practice_id", "level", "comment"]


@dataclass
class OrgProfile:
    sector: str
    employee_band: str = ""
    activity_description: str = ""
    approx_customer_count: int = 0

    def validate(self):
        if not self.sector.strip():
            raise ValidationError("org profile sector is empty", path="sector")
        if self.approx_customer_count < 0:
            raise ValidationError("approx_customer_count must be >= 0",
                                  path="approx_customer_count")

    def to_dict(self) -> dict:
        return {
            "sector": self.sector,
            "employee_band": self.employee_band,
            "activity_description": self.activity_description,
            "approx_customer_count": self.approx_customer_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OrgProfile":
        return cls(
            sector=str(data.get("sector", "")),
            employee_band=str(data.get("employee_band", "")),
            activity_description=str(data.get("activity_description", "")),
            approx_customer_count=int(data.get("approx_customer_count", 0)),
        )


@dataclass
class Assessor:
    id: str
    display_name: str
    domain_role: str  # "IT" | "Business"

    def to_dict(self) -> dict:
        return {"id": self.id, "display_name": self.display_name,
                "domain_role": self.domain_role}

    @classmethod
    def from_dict(cls, data: dict) -> "Assessor":
        return cls(id=str(data["id"]),
                   display_name=str(data.get("display_name", "")),
                   domain_role=str(data.get("domain_role", "")))


@dataclass
class IndividualResponse:
    assessor_id: str
    practice_id: str
    level: int
    comment: str | None = None
    submitted_at: str = ""

    def to_dict(self) -> dict:
        return {"assessor_id": self.assessor_id, "practice_id": self.practice_id,
                "level": self.level, "comment": self.comment,
                "submitted_at": self.submitted_at}

    @classmethod
    def from_dict(cls, data: dict) -> "IndividualResponse":
        return cls(assessor_id=str(data["assessor_id"]),
                   practice_id=str(data["practice_id"]),
                   level=int(data["level"]),
                   comment=data.get("comment"),
                   submitted_at=str(data.get("submitted_at", "")))


@dataclass
class GapNote:
    description: str
    severity: str = "medium"

    def to_dict(self) -> dict:
        return {"description": self.description, "severity": self.severity}

    @classmethod
    def from_dict(cls, data: dict) -> "GapNote":
        return cls(description=str(data["description"]),
                   severity=str(data.get("severity", "medium")))


@dataclass
class ConsensusRecord:
    practice_id: str
    agreed_score: float
    gaps: list[GapNote] = field(default_factory=list)
    actions: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"practice_id": self.practice_id,
                "agreed_score": self.agreed_score,
                "gaps": [g.to_dict() for g in self.gaps],
                "actions": list(self.actions)}

    @classmethod
    def from_dict(cls, data: dict) -> "ConsensusRecord":
        return cls(practice_id=str(data["practice_id"]),
                   agreed_score=float(data["agreed_score"]),
                   gaps=[GapNote.from_dict(g) for g in data.get("gaps", [])],
                   actions=[str(a) for a in data.get("actions", [])])


@dataclass
class AuditEvent:
    seq: int
    at: str
    action: str
    details: dict

    def to_dict(self) -> dict:
        return {"seq": self.seq, "at": self.at, "action": self.action,
                "details": self.details}

    @classmethod
    def from_dict(cls, data: dict) -> "AuditEvent":
        return cls(seq=int(data["seq"]), at=str(data["at"]),
                   action=str(data["action"]), details=dict(data["details"]))


@dataclass
class ImportResult:
    accepted: int
    rejected: list[tuple[int, str]]  # (1-based line number incl. header, reason)

    def to_dict(self) -> dict:
        return {"accepted": self.accepted,
                "rejected": [{"line": ln, "reason": r} for ln, r in self.rejected]}


@dataclass
class AssessmentSession:
    id: str
    model_id: str
    model_version: int
    org_profile: OrgProfile
    gathering_mode: str
    phase: str = "created"
    assessors: list[Assessor] = field(default_factory=list)
    responses: list[IndividualResponse] = field(default_factory=list)
    weights: WeightSet = field(default_factory=lambda: WeightSet({}))
    consensus_records: list[ConsensusRecord] = field(default_factory=list)
    overall_adjustment: dict | None = None  # {"value": float, "rationale": str}
    frozen_scores: dict | None = None
    audit_log: list[AuditEvent] = field(default_factory=list)
    created_at: str = ""

    # -- construction ---------------------------------------------------------

    @classmethod
    def create(cls, model: MaturityModel, model_version: int,
               org_profile: OrgProfile, gathering_mode: str,
               session_id: str | None = None) -> "AssessmentSession":
        result = validate_model(model)
        if not result.ok:
            from .errors import InvalidModelError
            raise InvalidModelError(
                "model fails validation: " + "; ".join(result.messages()[:3]),
                path=model.id)
        if gathering_mode not in GATHERING_MODES:
            raise ValidationError(
                f"gathering_mode must be one of {', '.join(GATHERING_MODES)}",
                path="gathering_mode")
        org_profile.validate()

        now = clock.now_iso()
        weights = WeightSet.equal_for(model)
        session = cls(
            id=session_id or str(uuid.uuid4()),
            model_id=model.id,
            model_version=model_version,
            org_profile=org_profile,
            gathering_mode=gathering_mode,
            weights=weights,
            created_at=now,
        )
        session._append_event("session-created", {
            "model_id": model.id,
            "model_version": model_version,
            "gathering_mode": gathering_mode,
            "org_profile": org_profile.to_dict(),
            "weights": weights.to_mapping(),
        }, at=now)
        return session

    # -- internals -------------------------------------------------------------

    def _append_event(self, action: str, details: dict, at: str | None = None):
        self.audit_log.append(AuditEvent(
            seq=len(self.audit_log) + 1,
            at=at or clock.now_iso(),
            action=action,
            details=details,
        ))

    def _require_phase(self, operation: str, *allowed: str):
        if self.phase not in allowed:
            raise WrongPhaseError(
                f"{operation} not allowed in phase {self.phase!r} "
                f"(requires {' or '.join(allowed)})",
                path=self.id)

    def _submit_phases(self) -> tuple[str, ...]:
        if self.gathering_mode in ("joint", "combined"):
            return ("collecting", "consensus")
        return ("collecting",)

    def assessor(self, assessor_id: str) -> Assessor:
        for a in self.assessors:
            if a.id == assessor_id:
                return a
        raise UnknownAssessorError(f"unknown assessor {assessor_id!r}",
                                   path=assessor_id)

    def consensus_for(self, practice_id: str) -> ConsensusRecord | None:
        for record in self.consensus_records:
            if record.practice_id == practice_id:
                return record
        return None

    def response_index(self, assessor_id: str, practice_id: str) -> int | None:
        for i, r in enumerate(self.responses):
            if r.assessor_id == assessor_id and r.practice_id == practice_id:
                return i
        return None

    # -- operations -------------------------------------------------------------

    def add_assessor(self, assessor: Assessor):
        self._require_phase("add_assessor", "created", *self._submit_phases())
        if assessor.domain_role not in ROLES:
            raise ValidationError(
                f"domain_role must be one of {', '.join(ROLES)}",
                path="domain_role")
        if not assessor.id.strip():
            raise ValidationError("assessor id is empty", path="id")
        if any(a.id == assessor.id for a in self.assessors):
            raise DuplicateAssessorError(
                f"assessor {assessor.id!r} already on session", path=assessor.id)
        self.assessors.append(assessor)
        self._append_event("assessor-added", {"assessor": assessor.to_dict()})

    def open_collection(self):
        self._require_phase("open_collection", "created")
        self.phase = "collecting"
        self._append_event("collection-opened", {})

    def _validate_response(self, model: MaturityModel, assessor_id: str,
                           practice_id: str, level: int):
        self.assessor(assessor_id)
        model.practice(practice_id)
        if level not in LEVELS:
            raise LevelOutOfRangeError(f"level {level} outside 1..5",
                                       path=practice_id)

    def _apply_response(self, assessor_id: str, practice_id: str, level: int,
                        comment: str | None, at: str) -> int | None:
        """Insert or replace in place; returns the prior level when replacing."""
        response = IndividualResponse(assessor_id, practice_id, level,
                                      comment, submitted_at=at)
        idx = self.response_index(assessor_id, practice_id)
        if idx is None:
            self.responses.append(response)
            return None
        prior = self.responses[idx].level
        self.responses[idx] = response
        return prior

    def submit_response(self, model: MaturityModel, assessor_id: str,
                        practice_id: str, level: int, comment: str | None = None):
        self._require_phase("submit_response", *self._submit_phases())
        self._validate_response(model, assessor_id, practice_id, level)
        at = clock.now_iso()
        prior = self._apply_response(assessor_id, practice_id, level, comment, at)
        self._append_event("response-submitted", {
            "assessor_id": assessor_id,
            "practice_id": practice_id,
            "level": level,
            "comment": comment,
            "prior_level": prior,
        }, at=at)

    def import_responses(self, model: MaturityModel,
                         rows: list[tuple[int, dict]],
                         shape_rejects: list[tuple[int, str]] | None = None
                         ) -> ImportResult:
        """Apply a pre-parsed batch. Valid rows land atomically (all of them,
        in one audit event); invalid rows are reported with their line numbers
        and change nothing."""
        self._require_phase("import_responses", *self._submit_phases())
        rejected: list[tuple[int, str]] = list(shape_rejects or [])
        valid: list[tuple[int, dict]] = []
        for line_no, row in rows:
            try:
                self._validate_response(model, row["assessor_id"],
                                        row["practice_id"], row["level"])
            except (UnknownAssessorError, UnknownPracticeError,
                    LevelOutOfRangeError) as err:
                rejected.append((line_no, err.message))
                continue
            valid.append((line_no, row))

        if not valid:
            return ImportResult(accepted=0, rejected=sorted(rejected))

        at = clock.now_iso()
        applied = []
        for _, row in valid:
            prior = self._apply_response(row["assessor_id"], row["practice_id"],
                                         row["level"], row.get("comment"), at)
            applied.append({
                "assessor_id": row["assessor_id"],
                "practice_id": row["practice_id"],
                "level": row["level"],
                "comment": row.get("comment"),
                "prior_level": prior,
            })
        self._append_event("responses-imported", {
            "rows": applied,
            "rejected_count": len(rejected),
        }, at=at)
        return ImportResult(accepted=len(valid), rejected=sorted(rejected))

    def set_weights(self, model: MaturityModel, weights: WeightSet):
        self._require_phase("set_weights", "collecting", "consensus")
        validate_weights(model, weights)
        before = self.weights.to_mapping()
        self.weights = weights.copy()
        self._append_event("weights-set", {
            "before": before,
            "after": self.weights.to_mapping(),
        })

    def record_consensus(self, model: MaturityModel, practice_id: str,
                         agreed_score: float, gaps: list[GapNote] | None = None,
                         actions: list[str] | None = None):
        self._require_phase("record_consensus", "consensus")
        model.practice(practice_id)
        if not scoring.MIN_SCORE <= agreed_score <= scoring.MAX_SCORE:
            raise ScoreOutOfRangeError(
                f"agreed score {agreed_score} outside [1,5]", path=practice_id)
        gaps = gaps or []
        actions = actions or []
        for gap in gaps:
            if not gap.description.strip():
                raise ValidationError("gap description is empty", path=practice_id)
            if gap.severity not in GAP_SEVERITIES:
                raise ValidationError(
                    f"gap severity must be one of {', '.join(GAP_SEVERITIES)}",
                    path=practice_id)

        record = ConsensusRecord(practice_id, float(agreed_score),
                                 list(gaps), list(actions))
        prior = None
        for i, existing in enumerate(self.consensus_records):
            if existing.practice_id == practice_id:
                prior = existing.to_dict()
                self.consensus_records[i] = record
                break
        else:
            self.consensus_records.append(record)
        self._append_event("consensus-recorded", {
            "record": record.to_dict(),
            "prior": prior,
        })

    def set_overall_adjustment(self, value: float, rationale: str):
        self._require_phase("set_overall_adjustment", "consensus")
        # Range/rationale rules are the scoring engine's; reuse them.
        scoring.apply_overall_adjustment(
            scoring.OverallScore(computed=Fraction(3)), value, rationale)
        prior = dict(self.overall_adjustment) if self.overall_adjustment else None
        self.overall_adjustment = {"value": float(value), "rationale": rationale}
        self._append_event("adjustment-set", {
            "value": float(value),
            "rationale": rationale,
            "prior": prior,
        })

    def close_collection(self) -> list[str]:
        self._require_phase("close_collection", "collecting")
        if not self.assessors:
            raise NoAssessorsError("no assessors on session", path=self.id)
        warnings = []
        if len(self.assessors) < 2:
            warnings.append("fewer than 2 assessors; consensus needs dialogue")
        roles = {a.domain_role for a in self.assessors}
        if not {"IT", "Business"} <= roles:
            warnings.append("team lacks both IT and Business roles")
        self.phase = "consensus"
        self._append_event("collection-closed", {"warnings": warnings})
        return warnings

    def finalize(self, model: MaturityModel):
        self._require_phase("finalize", "consensus")
        scores = self.compute_scores(model)
        self.frozen_scores = scores.to_plain()
        self.phase = "finalized"
        self._append_event("finalized", {"scores": self.frozen_scores})

    def mark_reported(self, fmt: str):
        self._require_phase("mark_reported", "finalized")
        self.phase = "reported"
        self._append_event("reported", {"format": fmt})

    # -- scoring inputs ----------------------------------------------------------

    def responses_by_practice(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = {}
        for r in self.responses:
            out.setdefault(r.practice_id, []).append(r.level)
        return out

    def consensus_by_practice(self) -> dict[str, float]:
        return {c.practice_id: c.agreed_score for c in self.consensus_records}

    def adjustment_tuple(self) -> tuple[float, str] | None:
        if self.overall_adjustment is None:
            return None
        return (self.overall_adjustment["value"],
                self.overall_adjustment["rationale"])

    def compute_scores(self, model: MaturityModel,
                       weights: WeightSet | None = None) -> scoring.SessionScores:
        return scoring.score_session(
            model,
            self.responses_by_practice(),
            self.consensus_by_practice(),
            weights if weights is not None else self.weights,
            self.adjustment_tuple(),
        )

    # -- serialization ------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "model_id": self.model_id,
            "model_version": self.model_version,
            "org_profile": self.org_profile.to_dict(),
            "gathering_mode": self.gathering_mode,
            "phase": self.phase,
            "assessors": [a.to_dict() for a in self.assessors],
            "responses": [r.to_dict() for r in self.responses],
            "weights": self.weights.to_mapping(),
            "consensus_records": [c.to_dict() for c in self.consensus_records],
            "overall_adjustment": self.overall_adjustment,
            "frozen_scores": self.frozen_scores,
            "audit_log": [e.to_dict() for e in self.audit_log],
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AssessmentSession":
        return cls(
            id=str(data["id"]),
            model_id=str(data["model_id"]),
            model_version=int(data["model_version"]),
            org_profile=OrgProfile.from_dict(data["org_profile"]),
            gathering_mode=str(data["gathering_mode"]),
            phase=str(data["phase"]),
            assessors=[Assessor.from_dict(a) for a in data.get("assessors", [])],
            responses=[IndividualResponse.from_dict(r)
                       for r in data.get("responses", [])],
            weights=WeightSet(data.get("weights", {})),
            consensus_records=[ConsensusRecord.from_dict(c)
                               for c in data.get("consensus_records", [])],
            overall_adjustment=data.get("overall_adjustment"),
            frozen_scores=data.get("frozen_scores"),
            audit_log=[AuditEvent.from_dict(e) for e in data.get("audit_log", [])],
            created_at=str(data.get("created_at", "")),
        )


def replay(session_id: str, events: list[AuditEvent]) -> AssessmentSession:
    """Rebuild a session purely from its audit log.

    Used to verify audit completeness: the result must equal the live
    session field for field.
    """
    if not events or events[0].action != "session-created":
        raise ValidationError("audit log must start with session-created")
    head = events[0].details
    session = AssessmentSession(
        id=session_id,
        model_id=head["model_id"],
        model_version=head["model_version"],
        org_profile=OrgProfile.from_dict(head["org_profile"]),
        gathering_mode=head["gathering_mode"],
        weights=WeightSet(head["weights"]),
        created_at=events[0].at,
    )
    for event in events[1:]:
        d = event.details
        if event.action == "assessor-added":
            session.assessors.append(Assessor.from_dict(d["assessor"]))
        elif event.action == "collection-opened":
            session.phase = "collecting"
        elif event.action == "response-submitted":
            session._apply_response(d["assessor_id"], d["practice_id"],
                                    d["level"], d.get("comment"), event.at)
        elif event.action == "responses-imported":
            for row in d["rows"]:
                session._apply_response(row["assessor_id"], row["practice_id"],
                                        row["level"], row.get("comment"), event.at)
        elif event.action == "weights-set":
            session.weights = WeightSet(d["after"])
        elif event.action == "consensus-recorded":
            record = ConsensusRecord.from_dict(d["record"])
            for i, existing in enumerate(session.consensus_records):
                if existing.practice_id == record.practice_id:
                    session.consensus_records[i] = record
                    break
            else:
                session.consensus_records.append(record)
        elif event.action == "adjustment-set":
            session.overall_adjustment = {"value": d["value"],
                                          "rationale": d["rationale"]}
        elif event.action == "collection-closed":
            session.phase = "consensus"
        elif event.action == "finalized":
            session.frozen_scores = d["scores"]
            session.phase = "finalized"
        elif event.action == "reported":
            session.phase = "reported"
        else:
            raise ValidationError(f"unknown audit action {event.action!r}")
    session.audit_log = list(events)
    return session


def parse_responses_csv(text: str) -> tuple[list[tuple[int, dict]],
                                            list[tuple[int, str]]]:
    """Parse the bulk-import format: header assessor_id,practice_id,level,comment.

    Returns (rows, shape_rejects); each entry carries its 1-based line number
    (header is line 1). Semantic checks against the session happen later.
    """
    reader = csv.reader(io.StringIO(text))
    rows: list[tuple[int, dict]] = []
    rejects: list[tuple[int, str]] = []
    header: list[str] | None = None
    for line_no, record in enumerate(reader, start=1):
        if header is None:
            header = [c.strip() for c in record]
            if header != CSV_HEADER:
                raise ValidationError(
                    f"expected header {','.join(CSV_HEADER)!r}, "
                    f"got {','.join(header)!r}", path="csv")
            continue
        if not record or all(not c.strip() for c in record):
            continue
        if len(record) < 3:
            rejects.append((line_no, f"expected at least 3 columns, got {len(record)}"))
            continue
        assessor_id = record[0].strip()
        practice_id = record[1].strip()
        level_text = record[2].strip()
        comment = record[3].strip() if len(record) > 3 and record[3].strip() else None
        if not assessor_id or not practice_id:
            rejects.append((line_no, "assessor_id and practice_id are required"))
            continue
        try:
            level = int(level_text)
        except ValueError:
            rejects.append((line_no, f"level {level_text!r} is not an integer"))
            continue
        rows.append((line_no, {"assessor_id": assessor_id,
                               "practice_id": practice_id,
                               "level": level, "comment": comment}))
    if header is None:
        raise ValidationError("empty CSV input", path="csv")
    return rows, rejects
