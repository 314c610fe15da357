"""Rubric structure: criteria grouping practices, each practice described
at five maturity levels.

Models are immutable value objects. A session never mutates its model;
edits go through the store as a new version.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import LevelOutOfRangeError, UnknownPracticeError

SCALE_SIZE = 5
LEVELS = tuple(range(1, SCALE_SIZE + 1))


def _norm_name(name: str) -> str:
    # Name lookup tolerates case and a trailing period (source tables are
    # inconsistent about both).
    return name.strip().rstrip(".").lower()


@dataclass(frozen=True)
class LevelDefinition:
    level: int
    label: str
    meaning: str = ""


@dataclass(frozen=True)
class LevelDescriptor:
    level: int
    reference_state: str
    # True when the published source cell was cut off and the stored text
    # is the recoverable fragment, not a guaranteed-complete sentence.
    abridged: bool = False


@dataclass(frozen=True)
class Practice:
    id: str
    name: str
    description: str
    descriptors: tuple[LevelDescriptor, ...]
    aliases: tuple[str, ...] = ()

    def descriptor(self, level: int) -> LevelDescriptor:
        if level not in LEVELS:
            raise LevelOutOfRangeError(
                f"level {level} outside 1..{SCALE_SIZE}", path=self.id)
        for d in self.descriptors:
            if d.level == level:
                return d
        raise LevelOutOfRangeError(
            f"practice {self.id!r} has no descriptor for level {level}",
            path=self.id)

    def matches_name(self, name: str) -> bool:
        wanted = _norm_name(name)
        if _norm_name(self.name) == wanted:
            return True
        return any(_norm_name(a) == wanted for a in self.aliases)


@dataclass(frozen=True)
class Criterion:
    id: str
    name: str
    objective: str
    practices: tuple[Practice, ...]
    aliases: tuple[str, ...] = ()

    def matches_name(self, name: str) -> bool:
        wanted = _norm_name(name)
        if _norm_name(self.name) == wanted:
            return True
        return any(_norm_name(a) == wanted for a in self.aliases)


@dataclass(frozen=True)
class MaturityModel:
    id: str
    name: str
    description: str
    scale: tuple[LevelDefinition, ...]
    criteria: tuple[Criterion, ...]

    def practice_count(self) -> int:
        return sum(len(c.practices) for c in self.criteria)

    def iter_practices(self):
        for criterion in self.criteria:
            for practice in criterion.practices:
                yield criterion, practice

    def practice_ids(self) -> list[str]:
        return [p.id for _, p in self.iter_practices()]

    def practice(self, practice_id: str) -> Practice:
        for _, p in self.iter_practices():
            if p.id == practice_id:
                return p
        raise UnknownPracticeError(
            f"unknown practice {practice_id!r} in model {self.id!r}",
            path=practice_id)

    def criterion_of(self, practice_id: str) -> Criterion:
        for criterion, p in self.iter_practices():
            if p.id == practice_id:
                return criterion
        raise UnknownPracticeError(
            f"unknown practice {practice_id!r} in model {self.id!r}",
            path=practice_id)

    def criterion(self, criterion_id: str) -> Criterion | None:
        for c in self.criteria:
            if c.id == criterion_id:
                return c
        return None

    def resolve_criterion_name(self, name: str) -> Criterion | None:
        for c in self.criteria:
            if c.matches_name(name):
                return c
        return None

    def resolve_practice_name(self, name: str) -> Practice | None:
        for _, p in self.iter_practices():
            if p.matches_name(name):
                return p
        return None

    def scale_label(self, level: int) -> str:
        for entry in self.scale:
            if entry.level == level:
                return entry.label
        return str(level)


# -- validation --------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    path: str
    message: str


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[Violation, ...] = field(default=())

    def messages(self) -> list[str]:
        return [f"{v.path}: {v.message}" for v in self.violations]


def validate_model(model: MaturityModel) -> ValidationResult:
    """Check every structural invariant; violations are data, not failures."""
    violations: list[Violation] = []

    def bad(path: str, message: str):
        violations.append(Violation(path, message))

    if not model.id.strip():
        bad("model", "model id is empty")

    # Scale: exactly 5 entries for levels 1..5, nonempty labels.
    if len(model.scale) != SCALE_SIZE:
        bad("scale", f"expected {SCALE_SIZE} level definitions, found {len(model.scale)}")
    seen_levels: dict[int, int] = {}
    for i, entry in enumerate(model.scale):
        if entry.level not in LEVELS:
            bad(f"scale[{i}]", f"level {entry.level} outside 1..{SCALE_SIZE}")
        elif entry.level in seen_levels:
            bad(f"scale[{i}]",
                f"duplicate level {entry.level} (also at scale[{seen_levels[entry.level]}])")
        else:
            seen_levels[entry.level] = i
        if not entry.label.strip():
            bad(f"scale[{i}]", f"label for level {entry.level} is empty")

    if not model.criteria:
        bad("criteria", "criteria list is empty")

    crit_positions: dict[str, int] = {}
    for ci, criterion in enumerate(model.criteria):
        cpath = f"criteria[{ci}]"
        if not criterion.id.strip():
            bad(cpath, "criterion id is empty")
        if criterion.id in crit_positions:
            bad(cpath,
                f"duplicate criterion id {criterion.id!r} "
                f"(also at criteria[{crit_positions[criterion.id]}])")
        else:
            crit_positions[criterion.id] = ci

        if not criterion.practices:
            bad(cpath, f"criterion {criterion.id!r} has no practices")

        prac_positions: dict[str, int] = {}
        for pi, practice in enumerate(criterion.practices):
            ppath = f"{cpath}.practices[{pi}]"
            if not practice.id.strip():
                bad(ppath, "practice id is empty")
            if practice.id in prac_positions:
                bad(ppath,
                    f"duplicate practice id {practice.id!r} within criterion "
                    f"{criterion.id!r} (also at {cpath}.practices[{prac_positions[practice.id]}])")
            else:
                prac_positions[practice.id] = pi

            if len(practice.descriptors) != SCALE_SIZE:
                bad(ppath,
                    f"practice {practice.id!r}: expected {SCALE_SIZE} descriptors, "
                    f"found {len(practice.descriptors)}")
            covered: set[int] = set()
            for di, desc in enumerate(practice.descriptors):
                dpath = f"{ppath}.descriptors[{di}]"
                if desc.level not in LEVELS:
                    bad(dpath, f"descriptor level {desc.level} outside 1..{SCALE_SIZE}")
                elif desc.level in covered:
                    bad(dpath, f"duplicate descriptor for level {desc.level}")
                else:
                    covered.add(desc.level)
                if not desc.reference_state.strip():
                    bad(dpath, f"reference state for level {desc.level} is empty")

    return ValidationResult(ok=not violations, violations=tuple(violations))


def lookup_descriptor(model: MaturityModel, practice_id: str, level: int) -> LevelDescriptor:
    """Fetch the reference state used as comparison point during evaluation."""
    if level not in LEVELS:
        raise LevelOutOfRangeError(f"level {level} outside 1..{SCALE_SIZE}",
                                   path=practice_id)
    return model.practice(practice_id).descriptor(level)


# -- (de)serialization --------------------------------------------------------

def model_to_dict(model: MaturityModel) -> dict:
    return {
        "id": model.id,
        "name": model.name,
        "description": model.description,
        "scale": [
            {"level": s.level, "label": s.label, "meaning": s.meaning}
            for s in model.scale
        ],
        "criteria": [
            {
                "id": c.id,
                "name": c.name,
                "objective": c.objective,
                "aliases": list(c.aliases),
                "practices": [
                    {
                        "id": p.id,
                        "name": p.name,
                        "description": p.description,
                        "aliases": list(p.aliases),
                        "descriptors": [
                            {
                                "level": d.level,
                                "reference_state": d.reference_state,
                                **({"abridged": True} if d.abridged else {}),
                            }
                            for d in p.descriptors
                        ],
                    }
                    for p in c.practices
                ],
            }
            for c in model.criteria
        ],
    }


def model_from_dict(data: dict) -> MaturityModel:
    return MaturityModel(
        id=str(data["id"]),
        name=str(data.get("name", "")),
        description=str(data.get("description", "")),
        scale=tuple(
            LevelDefinition(
                level=int(s["level"]),
                label=str(s["label"]),
                meaning=str(s.get("meaning", "")),
            )
            for s in data.get("scale", [])
        ),
        criteria=tuple(
            Criterion(
                id=str(c["id"]),
                name=str(c.get("name", "")),
                objective=str(c.get("objective", "")),
                aliases=tuple(str(a) for a in c.get("aliases", [])),
                practices=tuple(
                    Practice(
                        id=str(p["id"]),
                        name=str(p.get("name", "")),
                        description=str(p.get("description", "")),
                        aliases=tuple(str(a) for a in p.get("aliases", [])),
                        descriptors=tuple(
                            LevelDescriptor(
                                level=int(d["level"]),
                                reference_state=str(d["reference_state"]),
                                abridged=bool(d.get("abridged", False)),
                            )
                            for d in p.get("descriptors", [])
                        ),
                    )
                    for p in c.get("practices", [])
                ),
            )
            for c in data.get("criteria", [])
        ),
    )


def model_to_json(model: MaturityModel, *, indent: int | None = 2) -> str:
    return json.dumps(model_to_dict(model), indent=indent, ensure_ascii=False)


def model_from_json(text: str) -> MaturityModel:
    return model_from_dict(json.loads(text))
