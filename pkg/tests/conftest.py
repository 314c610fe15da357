import pytest

from align_assess.catalog import builtin_model
from align_assess.service import AssessmentService

from fixture_data import build_fixture_session


@pytest.fixture(scope="session")
def model():
    return builtin_model()


@pytest.fixture
def service(tmp_path):
    return AssessmentService(tmp_path / "data")


@pytest.fixture
def fixture_session(service):
    """Finalized case-study session; returns (service, session_id)."""
    session_id = build_fixture_session(service)
    return service, session_id
