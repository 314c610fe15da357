"""Scoring over an assessment snapshot: practice averages, weighted
criterion scores, overall score, and maturity band.

All arithmetic runs on exact rationals (`fractions.Fraction`) and converts
to float only at the output edge, so results are order-independent and
reproducible bit-for-bit. Rounding to one decimal is a display concern
handled by the report layer, never here.

A practice's effective score is its recorded consensus when present,
otherwise the arithmetic mean of individual responses. Criterion score is
the weight-normalized sum over positive-weight practices; zero weight
excludes a practice entirely. The overall score is the unweighted mean of
criterion scores, with an optional team adjustment carried alongside (the
computed value is never overwritten).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    AllWeightsZeroError,
    EmptyInputError,
    EmptyRationaleError,
    InvalidWeightsError,
    OutOfRangeError,
    UnknownPracticeError,
    UnscorablePracticeError,
)
from .model import LEVELS, LevelDefinition, MaturityModel

MIN_SCORE = 1
MAX_SCORE = 5
WEIGHT_SUM_TARGET = 100.0
WEIGHT_SUM_TOLERANCE = 0.5


@dataclass(frozen=True)
class PracticeScore:
    practice_id: str
    individual_levels: tuple[int, ...]
    average: Fraction | None          # None when no individual responses
    consensus: Fraction | None        # overrides average when present

    @property
    def effective(self) -> Fraction:
        if self.consensus is not None:
            return self.consensus
        if self.average is not None:
            return self.average
        raise UnscorablePracticeError(
            f"practice {self.practice_id!r} has no responses and no consensus",
            path=self.practice_id)

    @property
    def scorable(self) -> bool:
        return self.consensus is not None or self.average is not None

    def to_plain(self) -> dict:
        return {
            "practice_id": self.practice_id,
            "individual_levels": list(self.individual_levels),
            "average": None if self.average is None else float(self.average),
            "consensus": None if self.consensus is None else float(self.consensus),
            "effective": float(self.effective),
        }


@dataclass(frozen=True)
class Contribution:
    practice_id: str
    weight: Fraction
    effective: Fraction

    def to_plain(self) -> dict:
        return {
            "practice_id": self.practice_id,
            "weight": float(self.weight),
            "effective": float(self.effective),
        }


@dataclass(frozen=True)
class CriterionScore:
    criterion_id: str
    score: Fraction
    contributing: tuple[Contribution, ...]

    def to_plain(self) -> dict:
        return {
            "criterion_id": self.criterion_id,
            "score": float(self.score),
            "contributing": [c.to_plain() for c in self.contributing],
        }


@dataclass(frozen=True)
class OverallScore:
    computed: Fraction
    adjusted: float | None = None
    adjustment_rationale: str | None = None

    @property
    def effective(self) -> float:
        return float(self.computed) if self.adjusted is None else self.adjusted

    def to_plain(self) -> dict:
        return {
            "computed": float(self.computed),
            "adjusted": self.adjusted,
            "adjustment_rationale": self.adjustment_rationale,
        }


@dataclass(frozen=True)
class MaturityBand:
    level: int
    label: str
    qualifier: str  # "at" | "above"

    def to_plain(self) -> dict:
        return {"level": self.level, "label": self.label, "qualifier": self.qualifier}

    def statement(self) -> str:
        if self.qualifier == "above":
            return f"above level {self.level} - {self.label}"
        return f"at level {self.level} - {self.label}"


@dataclass(frozen=True)
class SessionScores:
    practice_scores: tuple[PracticeScore, ...]
    criterion_scores: tuple[CriterionScore, ...]
    overall: OverallScore
    band: MaturityBand

    def to_plain(self) -> dict:
        return {
            "practices": [p.to_plain() for p in self.practice_scores],
            "criteria": [c.to_plain() for c in self.criterion_scores],
            "overall": self.overall.to_plain(),
            "band": self.band.to_plain(),
        }


# -- weights -----------------------------------------------------------------

class WeightSet:
    """Per-criterion practice weights in percent. Zero excludes a practice."""

    def __init__(self, by_criterion: Mapping[str, Mapping[str, float]]):
        self.by_criterion: dict[str, dict[str, float]] = {
            cid: {pid: float(w) for pid, w in weights.items()}
            for cid, weights in by_criterion.items()
        }

    @classmethod
    def equal_for(cls, model: MaturityModel) -> "WeightSet":
        # Stored at full precision (100/n), not a rounded display value like
        # 16.67, so the residual never perturbs scores.
        return cls({
            c.id: {p.id: 100.0 / len(c.practices) for p in c.practices}
            for c in model.criteria
        })

    def for_criterion(self, criterion_id: str) -> dict[str, float]:
        try:
            return self.by_criterion[criterion_id]
        except KeyError:
            raise InvalidWeightsError(
                f"no weights for criterion {criterion_id!r}", path=criterion_id)

    def to_mapping(self) -> dict[str, dict[str, float]]:
        return {cid: dict(w) for cid, w in self.by_criterion.items()}

    def copy(self) -> "WeightSet":
        return WeightSet(self.to_mapping())

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightSet) and self.by_criterion == other.by_criterion

    def __repr__(self) -> str:
        return f"WeightSet({self.by_criterion!r})"


def validate_weights(model: MaturityModel, weights: WeightSet) -> None:
    """Raise InvalidWeightsError unless weights fully, sanely cover the model."""
    problems: list[str] = []
    for criterion in model.criteria:
        given = weights.by_criterion.get(criterion.id)
        if given is None:
            problems.append(f"criterion {criterion.id!r} has no weights")
            continue
        practice_ids = {p.id for p in criterion.practices}
        for pid in given:
            if pid not in practice_ids:
                problems.append(
                    f"criterion {criterion.id!r}: unknown practice {pid!r} in weights")
        missing = practice_ids - set(given)
        for pid in sorted(missing):
            problems.append(
                f"criterion {criterion.id!r}: practice {pid!r} has no weight")
        values = [given[pid] for pid in given if pid in practice_ids]
        if any(w < 0 for w in values):
            problems.append(f"criterion {criterion.id!r}: negative weight")
        if values and not missing:
            if not any(w > 0 for w in values):
                problems.append(f"criterion {criterion.id!r}: all weights are zero")
            total = math.fsum(values)
            if abs(total - WEIGHT_SUM_TARGET) > WEIGHT_SUM_TOLERANCE:
                problems.append(
                    f"criterion {criterion.id!r}: weights sum to {total:g}, "
                    f"expected {WEIGHT_SUM_TARGET:g} +/- {WEIGHT_SUM_TOLERANCE:g}")
    extra = set(weights.by_criterion) - {c.id for c in model.criteria}
    for cid in sorted(extra):
        problems.append(f"unknown criterion {cid!r} in weights")
    if problems:
        raise InvalidWeightsError("; ".join(problems))


# -- operations ---------------------------------------------------------------

def practice_average(levels: Sequence[int]) -> Fraction:
    """Arithmetic mean of integer picks, full precision."""
    if not levels:
        raise EmptyInputError("no levels to average")
    for value in levels:
        if value not in LEVELS:
            raise OutOfRangeError(f"level {value} outside 1..5")
    return Fraction(sum(levels), len(levels))


def practice_score(practice_id: str, levels: Sequence[int],
                   consensus: float | None = None) -> PracticeScore:
    average = practice_average(levels) if levels else None
    cons = None
    if consensus is not None:
        if not MIN_SCORE <= consensus <= MAX_SCORE:
            raise OutOfRangeError(
                f"consensus {consensus} outside [1,5]", path=practice_id)
        cons = Fraction(consensus)
    return PracticeScore(
        practice_id=practice_id,
        individual_levels=tuple(levels),
        average=average,
        consensus=cons,
    )


def criterion_score(criterion_id: str, practices: Sequence[PracticeScore],
                    weights: Mapping[str, float]) -> CriterionScore:
    """Weight-normalized sum over positive-weight practices."""
    by_id = {p.practice_id: p for p in practices}
    for pid in weights:
        if pid not in by_id:
            raise UnknownPracticeError(
                f"weights name unknown practice {pid!r}", path=pid)
    for p in practices:
        if p.practice_id not in weights:
            raise InvalidWeightsError(
                f"practice {p.practice_id!r} has no weight", path=p.practice_id)

    numerator = Fraction(0)
    denominator = Fraction(0)
    contributing: list[Contribution] = []
    for p in practices:
        w = Fraction(float(weights[p.practice_id]))
        if w < 0:
            raise InvalidWeightsError(
                f"negative weight for practice {p.practice_id!r}",
                path=p.practice_id)
        if w == 0:
            continue
        effective = p.effective
        numerator += w * effective
        denominator += w
        contributing.append(Contribution(p.practice_id, w, effective))
    if denominator == 0:
        raise AllWeightsZeroError(
            f"all weights are zero for criterion {criterion_id!r}",
            path=criterion_id)
    return CriterionScore(
        criterion_id=criterion_id,
        score=numerator / denominator,
        contributing=tuple(contributing),
    )


def overall_score(criteria: Sequence[CriterionScore]) -> OverallScore:
    """Unweighted mean of criterion scores; adjustment starts absent."""
    if not criteria:
        raise EmptyInputError("no criterion scores")
    total = sum((c.score for c in criteria), Fraction(0))
    return OverallScore(computed=total / len(criteria))


def apply_overall_adjustment(overall: OverallScore, adjusted: float,
                             rationale: str) -> OverallScore:
    if not MIN_SCORE <= adjusted <= MAX_SCORE:
        raise OutOfRangeError(f"adjusted score {adjusted} outside [1,5]")
    if not rationale or not rationale.strip():
        raise EmptyRationaleError("adjustment requires a rationale")
    return replace(overall, adjusted=float(adjusted),
                   adjustment_rationale=rationale)


def classify_band(score: float | Fraction,
                  scale: Iterable[LevelDefinition]) -> MaturityBand:
    """Integer band for a fractional score: floor, clamped; 5.0 stays at 5."""
    value = Fraction(score) if not isinstance(score, Fraction) else score
    if not MIN_SCORE <= value <= MAX_SCORE:
        raise OutOfRangeError(f"score {float(value)} outside [1,5]")
    level = min(int(math.floor(value)), MAX_SCORE)
    label = next((s.label for s in scale if s.level == level), str(level))
    qualifier = "above" if value > level else "at"
    return MaturityBand(level=level, label=label, qualifier=qualifier)


def score_session(model: MaturityModel,
                  responses_by_practice: Mapping[str, Sequence[int]],
                  consensus_by_practice: Mapping[str, float],
                  weights: WeightSet,
                  adjustment: tuple[float, str] | None = None) -> SessionScores:
    """Compose the pipeline over one session snapshot.

    Every practice must be scorable (at least one response or a consensus
    value); the first unscorable practice is named in the error.
    """
    validate_weights(model, weights)

    practice_scores: list[PracticeScore] = []
    criterion_scores: list[CriterionScore] = []
    for criterion in model.criteria:
        scores_here: list[PracticeScore] = []
        for practice in criterion.practices:
            ps = practice_score(
                practice.id,
                responses_by_practice.get(practice.id, ()),
                consensus_by_practice.get(practice.id),
            )
            if not ps.scorable:
                raise UnscorablePracticeError(
                    f"practice {practice.id!r} has no responses and no consensus",
                    path=practice.id)
            scores_here.append(ps)
        practice_scores.extend(scores_here)
        criterion_scores.append(
            criterion_score(criterion.id, scores_here,
                            weights.for_criterion(criterion.id)))

    overall = overall_score(criterion_scores)
    if adjustment is not None:
        overall = apply_overall_adjustment(overall, adjustment[0], adjustment[1])
    band = classify_band(Fraction(overall.effective), model.scale)
    return SessionScores(
        practice_scores=tuple(practice_scores),
        criterion_scores=tuple(criterion_scores),
        overall=overall,
        band=band,
    )
