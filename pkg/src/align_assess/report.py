"""Executive report built from a finalized session.

The human-readable (Markdown) layout mirrors the consensus worksheet the
evaluation meeting works from: criterion / practice / score / weight /
criterion score, then the general level, then gaps and improvement
actions. The structured format is the same content as JSON.

Scores are stored at full precision; rendering rounds to one decimal,
half-up, with a decimal point. Output is deterministic for identical
session content; only the generation timestamp varies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from . import clock
from .errors import WrongPhaseError
from .model import MaturityModel
from .session import AssessmentSession

REPORT_FORMATS = ("structured", "markdown")
# CLI/API accept a couple of spellings for each format.
FORMAT_ALIASES = {
    "structured": "structured", "json": "structured",
    "markdown": "markdown", "md": "markdown", "human-readable": "markdown",
}


def display_score(value: float) -> str:
    """One decimal, half-up, of the value as printed (repr) — so 3.45 -> 3.5."""
    return str(Decimal(str(value)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def display_weight(value: float) -> str:
    quantized = Decimal(str(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    text = str(quantized)
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text or "0"


@dataclass(frozen=True)
class ScoreReport:
    session_id: str
    model_id: str
    model_version: int
    model_name: str
    gathering_mode: str
    org_profile: dict
    assessors: tuple[dict, ...]
    practices: tuple[dict, ...]     # one row per model practice, model order
    criteria: tuple[dict, ...]
    overall: dict
    gaps: tuple[dict, ...]
    actions: tuple[dict, ...]
    generated_at: str

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "model_id": self.model_id,
            "model_version": self.model_version,
            "model_name": self.model_name,
            "gathering_mode": self.gathering_mode,
            "org_profile": dict(self.org_profile),
            "assessors": [dict(a) for a in self.assessors],
            "practices": [dict(p) for p in self.practices],
            "criteria": [dict(c) for c in self.criteria],
            "overall": dict(self.overall),
            "gaps": [dict(g) for g in self.gaps],
            "actions": [dict(a) for a in self.actions],
            "generated_at": self.generated_at,
        }


def _require_reportable(session: AssessmentSession):
    if session.phase not in ("finalized", "reported") or not session.frozen_scores:
        raise WrongPhaseError(
            f"report requires a finalized session (phase is {session.phase!r})",
            path=session.id)


def build_report(session: AssessmentSession, model: MaturityModel) -> ScoreReport:
    _require_reportable(session)
    frozen = session.frozen_scores
    by_practice = {p["practice_id"]: p for p in frozen["practices"]}
    by_criterion = {c["criterion_id"]: c for c in frozen["criteria"]}

    practice_rows: list[dict] = []
    criterion_rows: list[dict] = []
    for criterion in model.criteria:
        crit_scores = by_criterion[criterion.id]
        criterion_rows.append({
            "criterion_id": criterion.id,
            "name": criterion.name,
            "score": crit_scores["score"],
            "display": display_score(crit_scores["score"]),
        })
        weights = session.weights.for_criterion(criterion.id)
        for practice in criterion.practices:
            entry = by_practice[practice.id]
            practice_rows.append({
                "criterion_id": criterion.id,
                "criterion_name": criterion.name,
                "practice_id": practice.id,
                "name": practice.name,
                "individual_levels": entry["individual_levels"],
                "average": entry["average"],
                "consensus": entry["consensus"],
                "effective": entry["effective"],
                "weight": weights[practice.id],
            })

    overall = dict(frozen["overall"])
    band = dict(frozen["band"])
    effective = overall["computed"] if overall["adjusted"] is None else overall["adjusted"]
    qualifier = band["qualifier"]
    statement = (f"{'above' if qualifier == 'above' else 'at'} level "
                 f"{band['level']} - {band['label']}")
    overall_row = {
        "computed": overall["computed"],
        "computed_display": display_score(overall["computed"]),
        "adjusted": overall["adjusted"],
        "adjustment_rationale": overall["adjustment_rationale"],
        "effective": effective,
        "effective_display": display_score(effective),
        "band": {**band, "statement": statement},
    }

    practice_names = {p.id: p.name for _, p in model.iter_practices()}
    gap_rows: list[dict] = []
    action_rows: list[dict] = []
    for record in session.consensus_records:
        pname = practice_names.get(record.practice_id, record.practice_id)
        for gap in record.gaps:
            gap_rows.append({
                "practice_id": record.practice_id,
                "practice_name": pname,
                "description": gap.description,
                "severity": gap.severity,
            })
        for action in record.actions:
            action_rows.append({
                "practice_id": record.practice_id,
                "practice_name": pname,
                "text": action,
            })

    return ScoreReport(
        session_id=session.id,
        model_id=session.model_id,
        model_version=session.model_version,
        model_name=model.name,
        gathering_mode=session.gathering_mode,
        org_profile=session.org_profile.to_dict(),
        assessors=tuple(a.to_dict() for a in session.assessors),
        practices=tuple(practice_rows),
        criteria=tuple(criterion_rows),
        overall=overall_row,
        gaps=tuple(gap_rows),
        actions=tuple(action_rows),
        generated_at=clock.now_iso(),
    )


def render_structured(report: ScoreReport) -> str:
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False, sort_keys=True)


def render_markdown(report: ScoreReport) -> str:
    lines: list[str] = []
    out = lines.append
    profile = report.org_profile

    out(f"# Alignment Maturity Report — {report.model_name}")
    out("")
    out(f"- Session: `{report.session_id}`")
    out(f"- Model: `{report.model_id}` (version {report.model_version})")
    out(f"- Gathering mode: {report.gathering_mode}")
    out(f"- Sector: {profile.get('sector', '')}")
    if profile.get("employee_band"):
        out(f"- Employees: {profile['employee_band']}")
    if profile.get("approx_customer_count"):
        out(f"- Approximate customers: {profile['approx_customer_count']}")
    if profile.get("activity_description"):
        out(f"- Activity: {profile['activity_description']}")
    out(f"- Generated: {report.generated_at}")
    out("")

    out("## Consolidated scores")
    out("")
    out("| Criterion | Practice | Score | Weight % | Criterion score |")
    out("| --- | --- | --- | --- | --- |")
    for crit in report.criteria:
        rows = [p for p in report.practices if p["criterion_id"] == crit["criterion_id"]]
        for i, row in enumerate(rows):
            crit_cell = crit["name"] if i == 0 else ""
            score_cell = crit["display"] if i == 0 else ""
            out(f"| {crit_cell} | {row['name']} | {display_score(row['effective'])} "
                f"| {display_weight(row['weight'])} | {score_cell} |")
    out("")

    overall = report.overall
    out(f"**General level: {overall['effective_display']}**")
    out("")
    out(f"Maturity band: {overall['band']['statement']}")
    out("")
    if overall["adjusted"] is not None:
        out(f"Computed score {overall['computed_display']} adjusted to "
            f"{display_score(overall['adjusted'])}: {overall['adjustment_rationale']}")
        out("")

    out("## Gaps identified")
    out("")
    if report.gaps:
        for gap in report.gaps:
            out(f"- [{gap['severity']}] {gap['description']} "
                f"({gap['practice_name']})")
    else:
        out("No gaps recorded.")
    out("")

    out("## Improvement actions")
    out("")
    if report.actions:
        for action in report.actions:
            out(f"- {action['text']} ({action['practice_name']})")
    else:
        out("No improvement actions recorded.")
    out("")
    return "\n".join(lines)


def generate_report(session: AssessmentSession, model: MaturityModel,
                    fmt: str = "markdown") -> bytes:
    """Render a finalized session. Phase transition to reported is the
    caller's job (the service does it on first generation)."""
    try:
        canonical = FORMAT_ALIASES[fmt]
    except KeyError:
        from .errors import ValidationError
        raise ValidationError(
            f"unknown report format {fmt!r} (expected structured or markdown)",
            path="format")
    report = build_report(session, model)
    if canonical == "structured":
        text = render_structured(report)
    else:
        text = render_markdown(report)
    return text.encode("utf-8")


def chart_data(session: AssessmentSession, model: MaturityModel) -> dict:
    """Per-criterion series for the dashboard radar/bar, plus the overall."""
    _require_reportable(session)
    frozen = session.frozen_scores
    by_criterion = {c["criterion_id"]: c for c in frozen["criteria"]}
    points = []
    for criterion in model.criteria:
        points.append({
            "criterion_id": criterion.id,
            "label": criterion.name,
            "value": by_criterion[criterion.id]["score"],
        })
    overall = frozen["overall"]
    effective = overall["computed"] if overall["adjusted"] is None else overall["adjusted"]
    return {
        "points": points,
        "overall": {"label": "Overall", "value": effective},
        "band": dict(frozen["band"]),
    }
