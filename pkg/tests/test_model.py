import dataclasses

import pytest
from hypothesis import given, settings

from align_assess.errors import LevelOutOfRangeError, UnknownPracticeError
from align_assess.model import (
    lookup_descriptor,
    model_from_json,
    model_to_json,
    validate_model,
)

from strategies import small_models


def test_builtin_validates_clean(model):
    result = validate_model(model)
    assert result.ok
    assert result.violations == ()
    assert len(model.criteria) == 3
    assert model.practice_count() == 17
    assert sum(len(p.descriptors) for _, p in model.iter_practices()) == 85


def test_missing_descriptor_is_reported(model):
    practice = model.criteria[0].practices[0]
    broken_practice = dataclasses.replace(practice,
                                          descriptors=practice.descriptors[:4])
    broken_criterion = dataclasses.replace(
        model.criteria[0],
        practices=(broken_practice,) + model.criteria[0].practices[1:])
    broken = dataclasses.replace(
        model, criteria=(broken_criterion,) + model.criteria[1:])

    result = validate_model(broken)
    assert not result.ok
    assert any("expected 5 descriptors, found 4" in v.message
               and practice.id in v.message for v in result.violations)


def test_duplicate_practice_id_names_both_positions(model):
    criterion = model.criteria[0]
    dupe = dataclasses.replace(criterion.practices[2],
                               id=criterion.practices[0].id)
    broken_criterion = dataclasses.replace(
        criterion,
        practices=(criterion.practices[0], criterion.practices[1], dupe)
        + criterion.practices[3:])
    broken = dataclasses.replace(model,
                                 criteria=(broken_criterion,) + model.criteria[1:])

    result = validate_model(broken)
    assert not result.ok
    violation = next(v for v in result.violations if "duplicate practice" in v.message)
    assert "practices[2]" in violation.path
    assert "practices[0]" in violation.message


def test_empty_criteria_rejected(model):
    broken = dataclasses.replace(model, criteria=())
    result = validate_model(broken)
    assert not result.ok
    assert any("criteria" in v.path for v in result.violations)


def test_wrong_scale_size_rejected(model):
    broken = dataclasses.replace(model, scale=model.scale[:3])
    result = validate_model(broken)
    assert any("expected 5 level definitions" in v.message
               for v in result.violations)


def test_lookup_descriptor_returns_requested_level(model):
    descriptor = lookup_descriptor(model, "customer-sentiment-analysis", 1)
    assert descriptor.level == 1
    assert descriptor.reference_state == (
        "There are no tools or data sources for customer sentiment analysis.")


@pytest.mark.parametrize("level", [0, 6, -1])
def test_lookup_descriptor_level_out_of_range(model, level):
    with pytest.raises(LevelOutOfRangeError):
        lookup_descriptor(model, "customer-segmentation", level)


def test_lookup_descriptor_unknown_practice(model):
    with pytest.raises(UnknownPracticeError):
        lookup_descriptor(model, "no-such-practice", 3)


def test_lookup_never_mismatches_level(model):
    for _, practice in model.iter_practices():
        for level in range(1, 6):
            assert lookup_descriptor(model, practice.id, level).level == level


def test_builtin_round_trip(model):
    assert model_from_json(model_to_json(model)) == model


@settings(max_examples=100, deadline=None)
@given(small_models())
def test_round_trip_any_valid_model(generated):
    assert validate_model(generated).ok
    assert model_from_json(model_to_json(generated)) == generated
