"""Error taxonomy shared by every layer.

Each error carries a stable machine code (kebab-case) and the HTTP status
the API layer maps it to. The CLI maps the same codes to exit-code
families. `path` optionally names the offending field/entity.
"""

from __future__ import annotations


class AppError(Exception):
    code = "internal"
    http_status = 500

    def __init__(self, message: str, *, path: str | None = None):
        super().__init__(message)
        self.message = message
        self.path = path

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.path is not None:
            out["path"] = self.path
        return out


# -- validation (400) -------------------------------------------------------

class ValidationError(AppError):
    code = "validation"
    http_status = 400


class MissingFieldError(ValidationError):
    code = "missing-field"


class EmptyInputError(ValidationError):
    code = "empty-input"


class OutOfRangeError(ValidationError):
    code = "out-of-range"


class LevelOutOfRangeError(ValidationError):
    code = "level-out-of-range"


class ScoreOutOfRangeError(ValidationError):
    code = "score-out-of-range"


class EmptyRationaleError(ValidationError):
    code = "empty-rationale"


class InvalidModelError(ValidationError):
    code = "invalid-model"


class UnknownPracticeError(ValidationError):
    code = "unknown-practice"


class UnknownAssessorError(ValidationError):
    code = "unknown-assessor"


class DuplicateAssessorError(ValidationError):
    code = "duplicate-assessor"


class InvalidWeightsError(ValidationError):
    code = "invalid-weights"


class AllWeightsZeroError(ValidationError):
    code = "all-weights-zero"


class NoAssessorsError(ValidationError):
    code = "no-assessors"


class UnscorablePracticeError(ValidationError):
    code = "unscorable-practice"


# -- missing entities (404) -------------------------------------------------

class NotFoundError(AppError):
    code = "not-found"
    http_status = 404


class UnknownModelError(NotFoundError):
    code = "unknown-model"


# -- state conflicts (409) --------------------------------------------------

class WrongPhaseError(AppError):
    code = "wrong-phase"
    http_status = 409


class ImmutabilityViolationError(AppError):
    code = "immutability-violation"
    http_status = 409


# -- storage corruption (500) -----------------------------------------------

class ChecksumMismatchError(AppError):
    code = "checksum-mismatch"
    http_status = 500


# Exit-code families for the CLI, keyed by HTTP status of the error class.
EXIT_CODE_FAMILIES = {
    400: 2,   # validation
    404: 3,   # not found
    409: 4,   # wrong phase / immutability
    500: 5,   # corruption / internal
}


def exit_code_for(err: AppError) -> int:
    return EXIT_CODE_FAMILIES.get(err.http_status, 1)
