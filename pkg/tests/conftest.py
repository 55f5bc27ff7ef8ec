import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from dqpt.models import QuenchSpec

TFI_FIG1 = QuenchSpec.tfi(0.5, 1.5)
SSH_FIG1 = QuenchSpec.ssh(0.5, 2.0)

# closed-form roots, frozen after bisection on critical_condition
TFI_KSTAR = float(np.arccos(-0.875))
SSH_KSTAR = float(np.arccos(-0.8))


@pytest.fixture
def tfi_fig1():
    return TFI_FIG1


@pytest.fixture
def ssh_fig1():
    return SSH_FIG1


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


# fields / hoppings kept away from the gap closings at h = 1 and t2 = t1
_param = st.floats(0.1, 2.5).filter(lambda x: abs(x - 1.0) > 0.05)
momenta = st.floats(0.01, np.pi - 0.01)
ssh_momenta = st.floats(-np.pi, np.pi)
times = st.floats(0.0, 50.0)


@st.composite
def tfi_specs(draw):
    return QuenchSpec.tfi(draw(_param), draw(_param))


@st.composite
def ssh_specs(draw):
    return QuenchSpec.ssh(draw(_param), draw(_param))


def random_specs(rng, model, n):
    """``n`` gapped quench specs, deterministic in ``rng``."""
    out = []
    while len(out) < n:
        a, b = rng.uniform(0.2, 2.0, size=2)
        if min(abs(a - 1), abs(b - 1)) < 0.05:
            continue
        out.append(QuenchSpec.tfi(a, b) if model == "tfi" else QuenchSpec.ssh(a, b))
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
