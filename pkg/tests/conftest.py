import numpy as np
import pytest

from marcpnc import kernels
from marcpnc.codebook import example_coefficients
from marcpnc.mc_sim import SchemeConfig
from marcpnc.netcode import modular_sum_hypercube
from marcpnc.signal import make_psk

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    """Collects one summary line per acceptance criterion."""
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    prev = kernels.get_backend().NAME
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(prev)


@pytest.fixture
def rng():
    return np.random.default_rng(20260415)


@pytest.fixture
def psk4():
    return make_psk(4)


@pytest.fixture
def scheme3():
    return SchemeConfig(make_psk(4), example_coefficients(3), modular_sum_hypercube(4, 3))


@pytest.fixture
def scheme4():
    return SchemeConfig(make_psk(4), example_coefficients(4), modular_sum_hypercube(4, 4))
