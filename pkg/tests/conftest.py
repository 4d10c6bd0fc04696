import numpy as np
import pytest

from robustpac.oracles import OracleConfig, draw_labeled_sample, make_task

ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, passed: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
    print(ACCEPTANCE_LINES[-1])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_task():
    return make_task(5, 6.0, seed=11)


@pytest.fixture(scope="session")
def small_clean(small_task):
    return draw_labeled_sample(small_task, OracleConfig(0.0, seed=12), 150, 150)


@pytest.fixture(scope="session")
def small_noisy(small_task):
    return draw_labeled_sample(small_task, OracleConfig(0.1, seed=13), 200, 200)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
