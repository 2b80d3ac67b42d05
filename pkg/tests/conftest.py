import numpy as np
import pytest

from tracecorr.xstates import CorrelationParams

# The GAD example parameters fail positivity (rho22*rho33 < rho32^2); the c2 -> -c2
# twin is physical and has identical correlations and dynamics.
GAD_STATE = CorrelationParams(0.28, 0.22, 0.40, 0.10, 0.60)
GAD_STATE_PHYSICAL = CorrelationParams(0.28, -0.22, 0.40, 0.10, 0.60)
PD_STATE = CorrelationParams(0.50, 0.20, 0.10, 0.10, 0.20)
SINGLET = CorrelationParams(-1.0, -1.0, -1.0, 0.0, 0.0)

_ACCEPTANCE = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for the acceptance summary."""

    def record(label, ok, detail=""):
        _ACCEPTANCE.append((label, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
