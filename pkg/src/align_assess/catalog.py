"""Built-in model catalog.

Ships the customer-alignment rubric (3 criteria, 17 practices, 85 level
descriptors) as packaged data, validated on first load.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import UnknownModelError
from .model import MaturityModel, model_from_json, validate_model

BUILTIN_MODEL_ID = "customer-alignment"
BUILTIN_MODEL_VERSION = "1"
BUILTIN_SOURCE = "Customer-alignment maturity assessment framework, published 2019"


@dataclass(frozen=True)
class CatalogEntry:
    model: MaturityModel
    source: str
    version: str


@lru_cache(maxsize=None)
def builtin_model() -> MaturityModel:
    """The embedded customer-alignment model; deterministic across calls."""
    text = resources.files("align_assess.data").joinpath(
        "customer_alignment.json").read_text(encoding="utf-8")
    model = model_from_json(text)
    result = validate_model(model)
    if not result.ok:
        # Packaged data is broken; refuse to serve a bad instrument.
        raise RuntimeError(
            "embedded model failed validation: " + "; ".join(result.messages()))
    return model


@lru_cache(maxsize=None)
def builtin_entries() -> tuple[CatalogEntry, ...]:
    return (
        CatalogEntry(
            model=builtin_model(),
            source=BUILTIN_SOURCE,
            version=BUILTIN_MODEL_VERSION,
        ),
    )


def get_builtin(model_id: str) -> CatalogEntry:
    for entry in builtin_entries():
        if entry.model.id == model_id:
            return entry
    raise UnknownModelError(f"no built-in model {model_id!r}", path=model_id)


def list_builtin() -> list[dict]:
    return [
        {
            "id": e.model.id,
            "name": e.model.name,
            "version": e.version,
            "criteria": len(e.model.criteria),
            "practices": e.model.practice_count(),
            "source": e.source,
            "builtin": True,
        }
        for e in builtin_entries()
    ]
