"""Multi-assessor maturity assessment of business/IT alignment with customers."""

from .catalog import builtin_model
from .model import (
    Criterion,
    LevelDefinition,
    LevelDescriptor,
    MaturityModel,
    Practice,
    ValidationResult,
    lookup_descriptor,
    validate_model,
)
from .scoring import (
    CriterionScore,
    MaturityBand,
    OverallScore,
    PracticeScore,
    SessionScores,
    WeightSet,
    apply_overall_adjustment,
    classify_band,
    criterion_score,
    overall_score,
    practice_average,
    score_session,
)
from .service import AssessmentService
from .session import AssessmentSession, Assessor, GapNote, OrgProfile

__version__ = "0.1.0"

__all__ = [
    "AssessmentService",
    "AssessmentSession",
    "Assessor",
    "Criterion",
    "CriterionScore",
    "GapNote",
    "LevelDefinition",
    "LevelDescriptor",
    "MaturityBand",
    "MaturityModel",
    "OrgProfile",
    "OverallScore",
    "Practice",
    "PracticeScore",
    "SessionScores",
    "ValidationResult",
    "WeightSet",
    "apply_overall_adjustment",
    "builtin_model",
    "classify_band",
    "criterion_score",
    "lookup_descriptor",
    "overall_score",
    "practice_average",
    "score_session",
    "validate_model",
]
