import numpy as np
import pytest

ACCEPTANCE_SEED = 20261016
THETAS = np.linspace(-3.0, 3.0, 61)

_RESULTS = []


@pytest.fixture
def thetas():
    return THETAS.copy()


@pytest.fixture
def record():
    """Collects one pass/fail line per acceptance criterion."""

    def _record(criterion, passed, value, tolerance, note=""):
        line = (f"criterion {criterion:>2}: {'PASS' if passed else 'FAIL'}  "
                f"value={value:.3g} tolerance={tolerance:g} {note}".rstrip())
        _RESULTS.append(line)
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_RESULTS, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
