import numpy as np
import pytest

from heunreg.params import make_params

FIG_PARAMS = dict(a=1 + 1j, q=0.3, alpha=1.4 + 0.9j, beta=1.1, delta=6.7)


def fig(gamma):
    """The figure parameter set with the given gamma."""
    return make_params(gamma=gamma, **FIG_PARAMS)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# criterion number -> list of (part, passed, detail), filled by the acceptance suite
ACCEPTANCE = {}


def record_acceptance(criterion, part, passed, detail):
    ACCEPTANCE.setdefault(criterion, []).append((part, bool(passed), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[crit]
        ok = all(p for _, p, _ in parts)
        detail = "; ".join(f"{name} {'ok' if p else 'FAILED'} ({d})" for name, p, d in parts)
        tr.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'} - {detail}")
