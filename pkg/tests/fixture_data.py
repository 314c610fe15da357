"""Case-study fixture: the published consensus scores and weights.

Expected values here were hand-derived with exact rational arithmetic
(see test_scoring for the derivations) before the engine existed.
"""

from __future__ import annotations

from align_assess.service import AssessmentService

ORG_PROFILE = {
    "sector": "Technology and services",
    "employee_band": "50 to 200",
    "activity_description": (
        "Business unit of a multinational technology and services company "
        "selling business technology solutions to corporate clients across "
        "Latin America."),
    "approx_customer_count": 20000,
}

# practice id -> team consensus score
CONSENSUS_SCORES = {
    "customer-segmentation": 4.2,
    "customer-sentiment-analysis": 2.2,
    "prospect-behavior-analysis": 2.8,
    "customer-base-management": 3.8,
    "information-source-integration": 3.3,
    "electronic-sales-channels": 3.3,
    "electronic-marketing-channels": 4.0,
    "predictive-marketing": 2.7,
    "sales-process-digitization": 3.5,
    "sales-mobility": 3.7,
    "sales-process-visibility": 2.8,
    "digital-service-channels": 4.0,
    "channel-coherence": 2.8,
    "agile-service-tools": 3.5,
    "service-channel-availability": 3.2,
    "self-service-tools": 4.0,
    "service-feedback-channels": 2.5,
}

UNDERSTANDING_PRACTICES = [
    "customer-segmentation", "customer-sentiment-analysis",
    "prospect-behavior-analysis", "customer-base-management",
    "information-source-integration",
]
SALES_PRACTICES = [
    "electronic-sales-channels", "electronic-marketing-channels",
    "predictive-marketing", "sales-process-digitization",
    "sales-mobility", "sales-process-visibility",
]
SERVICE_PRACTICES = [
    "digital-service-channels", "channel-coherence", "agile-service-tools",
    "service-channel-availability", "self-service-tools",
    "service-feedback-channels",
]

# Sentiment analysis excluded (weight 0); the rest split evenly.
WEIGHTS = {
    "customer-understanding": {
        "customer-segmentation": 25,
        "customer-sentiment-analysis": 0,
        "prospect-behavior-analysis": 25,
        "customer-base-management": 25,
        "information-source-integration": 25,
    },
    "marketing-sales-process": {p: 100 / 6 for p in SALES_PRACTICES},
    "customer-service": {p: 100 / 6 for p in SERVICE_PRACTICES},
}

# Hand-derived expectations: 352.5/100; 20/6; 20/6; mean of the three.
EXPECTED_UNDERSTANDING = 3.525
EXPECTED_SALES = 10 / 3
EXPECTED_SERVICE = 10 / 3
EXPECTED_OVERALL = 3.3972222222222221  # (3.525 + 10/3 + 10/3) / 3

FIXTURE_GAPS = {
    "self-service-tools": [
        {"description": "Service tools lack self-service options",
         "severity": "high"},
    ],
    "service-feedback-channels": [
        {"description": "No user experience feedback channel exists",
         "severity": "medium"},
    ],
}

FIXTURE_ACTIONS = {
    "predictive-marketing": [
        "Evaluate artificial intelligence for the marketing processes",
    ],
    "information-source-integration": [
        "Implement information systems integration processes",
    ],
}


def build_fixture_session(service: AssessmentService,
                          session_id: str = "case-study",
                          with_gaps: bool = True) -> str:
    """Drive the full workflow against a service and return the session id."""
    service.create_session("customer-alignment", ORG_PROFILE,
                           "individual-survey", session_id=session_id)
    service.add_assessor(session_id, "it-lead", "IT lead", "IT")
    service.add_assessor(session_id, "biz-lead", "Business lead", "Business")
    service.transition(session_id, "open-collection")
    service.transition(session_id, "close-collection")
    for practice_id, score in CONSENSUS_SCORES.items():
        gaps = FIXTURE_GAPS.get(practice_id, []) if with_gaps else []
        actions = FIXTURE_ACTIONS.get(practice_id, []) if with_gaps else []
        service.record_consensus(session_id, practice_id, score,
                                 gaps=gaps, actions=actions)
    service.set_weights(session_id, WEIGHTS)
    service.transition(session_id, "finalize")
    return session_id
