import pytest

from diagseq.model import bundled_dataset

POOR_IDLING = "poor-idling-due-to-carburettor"


@pytest.fixture(scope="session")
def bundled():
    return bundled_dataset()


@pytest.fixture
def poor_idling(bundled):
    """The published symptom, probabilities as assessed (sum 0.999)."""
    return bundled.symptom(POOR_IDLING)


@pytest.fixture
def expert_strategy(bundled):
    return bundled.expert_rule("expert-2", POOR_IDLING).strategy
