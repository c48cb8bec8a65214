import pytest

from infercost import PerfThresholds, canonical_fixture


@pytest.fixture(scope="session")
def fixture_dataset():
    return canonical_fixture()


@pytest.fixture(scope="session")
def fixture_sweeps(fixture_dataset):
    return {sweep.model_id: sweep for sweep in fixture_dataset[0]}


@pytest.fixture(scope="session")
def fixture_cards(fixture_dataset):
    return {card.model_id: card for card in fixture_dataset[1]}


@pytest.fixture
def default_thresholds():
    return PerfThresholds()
