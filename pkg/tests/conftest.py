import numpy as np
import pytest

from grfg import DataTable, Task


def make_product_table(seed: int, n: int = 500) -> DataTable:
    """Five independent normal features; the target is x1*x2 plus small noise."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, 5))
    y = X[:, 0] * X[:, 1] + 0.05 * rng.standard_normal(n)
    return DataTable(tuple(f"x{i + 1}" for i in range(5)), X, y, Task.REGRESSION)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_cls_table():
    rng = np.random.default_rng(7)
    X = rng.standard_normal((60, 3))
    y = (X[:, 0] + 0.3 * rng.standard_normal(60) > 0).astype(float)
    return DataTable(("a", "b", "c"), X, y, Task.CLASSIFICATION)


ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, passed: bool, detail: str) -> bool:
    ACCEPTANCE_RESULTS[number] = (bool(passed), detail)
    return bool(passed)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
