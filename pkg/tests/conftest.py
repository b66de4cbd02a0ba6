from pathlib import Path

import pytest

from rightsflow.graph import Iri, serialize_turtle
from rightsflow.policy import export_policy, instantiate_right_policy
from rightsflow.timeutil import utc

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def policy_text(right: Iri, subject: str = "https://alice.example/me",
                controller: str = "https://controller.example/",
                target: str = "https://controller.example/data/alice",
                deadline=utc(2026, 2, 10, 9, 0, 0),
                policy_id: str = None) -> str:
    """A submission-ready policy document for the given right."""
    p = instantiate_right_policy(
        right, Iri(subject), Iri(controller), Iri(target), deadline,
        policy_id=Iri(policy_id) if policy_id else None)
    return serialize_turtle(export_policy(p))
