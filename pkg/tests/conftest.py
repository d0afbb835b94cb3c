import numpy as np
import pytest

from lambdatunnel import _core
from lambdatunnel._core import _rk4_py

try:
    from lambdatunnel._core import _rk4 as _rk4_compiled
except ImportError:  # extension not built
    _rk4_compiled = None

BACKENDS = ["python"] + (["cython"] if _rk4_compiled is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per available RK4 kernel."""
    impl = _rk4_py.rk4_run if request.param == "python" else _rk4_compiled.rk4_run
    monkeypatch.setattr(_core, "rk4_run", impl)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_state(rng, n=3):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
