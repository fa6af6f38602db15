import pytest

from zkadvisor.attestation import MockBackend
from zkadvisor.llm import StubChatClient
from zkadvisor.questionnaire import AnswerProfile, default_spec


@pytest.fixture(scope="session")
def spec():
    return default_spec()


@pytest.fixture()
def backend():
    return MockBackend()


@pytest.fixture(scope="session")
def stub():
    return StubChatClient()


@pytest.fixture()
def zeros_profile():
    return AnswerProfile(answers=(0,) * 10)


@pytest.fixture()
def twos_profile():
    return AnswerProfile(answers=(2,) * 10)
