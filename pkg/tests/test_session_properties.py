"""Randomized workflow sequences: whatever path a session takes, the audit
log must rebuild it exactly and phases must only move forward.
"""

from hypothesis import given, settings
from hypothesis import strategies as st

from align_assess.catalog import builtin_model
from align_assess.errors import AppError, WrongPhaseError
from align_assess.scoring import WeightSet
from align_assess.session import (
    AssessmentSession,
    Assessor,
    GapNote,
    OrgProfile,
    replay,
)

PHASE_ORDER = {p: i for i, p in enumerate(
    ("created", "collecting", "consensus", "finalized", "reported"))}

ASSESSOR_IDS = ["a1", "a2", "a3", "a4"]


@st.composite
def op_sequences(draw):
    """A mix of valid and phase-invalid operations (invalid ones must raise
    and leave no trace)."""
    ops = []
    n = draw(st.integers(min_value=1, max_value=40))
    model = builtin_model()
    pids = model.practice_ids()
    for _ in range(n):
        kind = draw(st.sampled_from(
            ["add_assessor", "open", "submit", "close", "consensus",
             "weights", "adjust", "finalize", "report"]))
        if kind == "add_assessor":
            ops.append(("add_assessor", draw(st.sampled_from(ASSESSOR_IDS)),
                        draw(st.sampled_from(["IT", "Business"]))))
        elif kind == "submit":
            ops.append(("submit", draw(st.sampled_from(ASSESSOR_IDS)),
                        draw(st.sampled_from(pids)),
                        draw(st.integers(min_value=1, max_value=5))))
        elif kind == "consensus":
            ops.append(("consensus", draw(st.sampled_from(pids)),
                        draw(st.floats(min_value=1, max_value=5,
                                       allow_nan=False)),
                        draw(st.booleans())))
        elif kind == "adjust":
            ops.append(("adjust", draw(st.floats(min_value=1, max_value=5,
                                                 allow_nan=False))))
        else:
            ops.append((kind,))
    mode = draw(st.sampled_from(["joint", "individual-survey", "combined"]))
    return mode, ops


def apply_ops(mode, ops):
    model = builtin_model()
    session = AssessmentSession.create(
        model, 1, OrgProfile(sector="test"), mode, session_id="prop-1")
    for op in ops:
        try:
            if op[0] == "add_assessor":
                session.add_assessor(Assessor(op[1], op[1], op[2]))
            elif op[0] == "open":
                session.open_collection()
            elif op[0] == "submit":
                session.submit_response(model, op[1], op[2], op[3])
            elif op[0] == "close":
                session.close_collection()
            elif op[0] == "consensus":
                gaps = [GapNote("observed gap", "medium")] if op[3] else []
                session.record_consensus(model, op[1], op[2], gaps=gaps)
            elif op[0] == "weights":
                session.set_weights(model, WeightSet.equal_for(model))
            elif op[0] == "adjust":
                session.set_overall_adjustment(op[1], "randomized rationale")
            elif op[0] == "finalize":
                session.finalize(model)
            elif op[0] == "report":
                session.mark_reported("markdown")
        except AppError:
            continue
    return session


@settings(max_examples=150, deadline=None)
@given(op_sequences())
def test_replay_matches_live_session(seq):
    mode, ops = seq
    session = apply_ops(mode, ops)
    assert replay(session.id, session.audit_log) == session


@settings(max_examples=150, deadline=None)
@given(op_sequences())
def test_phase_monotonic_along_audit(seq):
    mode, ops = seq
    session = apply_ops(mode, ops)
    last = 0
    partial = []
    for event in session.audit_log:
        partial.append(event)
        phase = replay(session.id, partial).phase
        assert PHASE_ORDER[phase] >= last
        last = PHASE_ORDER[phase]


@settings(max_examples=150, deadline=None)
@given(op_sequences())
def test_response_uniqueness_invariant(seq):
    mode, ops = seq
    session = apply_ops(mode, ops)
    keys = [(r.assessor_id, r.practice_id) for r in session.responses]
    assert len(keys) == len(set(keys))


@settings(max_examples=150, deadline=None)
@given(op_sequences())
def test_one_audit_event_per_mutation(seq):
    """Failed calls leave nothing behind; successful ones exactly one event."""
    mode, ops = seq
    model = builtin_model()
    session = AssessmentSession.create(
        model, 1, OrgProfile(sector="test"), mode, session_id="prop-2")
    events = len(session.audit_log)
    assert events == 1
    for op in ops:
        before = len(session.audit_log)
        try:
            if op[0] == "add_assessor":
                session.add_assessor(Assessor(op[1], op[1], op[2]))
            elif op[0] == "open":
                session.open_collection()
            elif op[0] == "submit":
                session.submit_response(model, op[1], op[2], op[3])
            elif op[0] == "close":
                session.close_collection()
            elif op[0] == "consensus":
                session.record_consensus(model, op[1], op[2])
            elif op[0] == "weights":
                session.set_weights(model, WeightSet.equal_for(model))
            elif op[0] == "adjust":
                session.set_overall_adjustment(op[1], "why not")
            elif op[0] == "finalize":
                session.finalize(model)
            elif op[0] == "report":
                session.mark_reported("markdown")
            assert len(session.audit_log) == before + 1
        except AppError:
            assert len(session.audit_log) == before


def test_finalized_session_rejects_every_mutation():
    model = builtin_model()
    session = AssessmentSession.create(
        model, 1, OrgProfile(sector="test"), "individual-survey",
        session_id="frozen-1")
    session.add_assessor(Assessor("a1", "one", "IT"))
    session.open_collection()
    session.close_collection()
    for pid in model.practice_ids():
        session.record_consensus(model, pid, 3.0)
    session.finalize(model)

    mutations = [
        lambda: session.add_assessor(Assessor("a9", "late", "IT")),
        lambda: session.open_collection(),
        lambda: session.submit_response(model, "a1", "customer-segmentation", 4),
        lambda: session.close_collection(),
        lambda: session.record_consensus(model, "customer-segmentation", 2.0),
        lambda: session.set_weights(model, WeightSet.equal_for(model)),
        lambda: session.set_overall_adjustment(3.0, "nope"),
        lambda: session.finalize(model),
    ]
    snapshot = session.to_dict()
    for mutate in mutations:
        try:
            mutate()
            raise AssertionError("mutation did not raise")
        except WrongPhaseError:
            pass
    assert session.to_dict() == snapshot
