import numpy as np
import pytest

from orbit_embed import (make_cyclic_action, make_pipeline,
                         make_translation_action, separating_set)

# Pass/fail lines recorded by the acceptance tests, echoed after the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def minus_identity_action():
    return make_cyclic_action(2, [1, 1])


@pytest.fixture(scope="session")
def z12_action():
    return make_cyclic_action(12, [6, 3, 4, 2, 2])


@pytest.fixture(scope="session")
def translation_action():
    return make_translation_action(8)


@pytest.fixture(scope="session")
def z12_set(z12_action):
    return separating_set(z12_action)


@pytest.fixture(scope="session")
def minus_identity_pipeline(minus_identity_action):
    return make_pipeline(minus_identity_action)


@pytest.fixture(scope="session")
def z12_pipeline(z12_action):
    return make_pipeline(z12_action, seed=42)


@pytest.fixture(scope="session")
def translation_pipeline(translation_action):
    return make_pipeline(translation_action, seed=42)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture(scope="session")
def golden_path():
    from pathlib import Path
    return Path(__file__).parent / "data" / "golden.json"


def unit_vector(rng, n):
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / np.linalg.norm(z)
