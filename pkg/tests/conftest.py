import json

import numpy as np
import pytest

from semidet_bc.binary_example import BinaryExampleParams, build_channel
from semidet_bc.channels import AuxPolicy, SemiDetChannel, semidet_to_dict


def random_semidet(rng, y_size=2, z_size=2, x_size=2, s_size=2):
    f = rng.integers(0, y_size, size=(x_size, s_size))
    w = rng.dirichlet(np.ones(z_size), size=(x_size, s_size))
    p_s = rng.dirichlet(np.ones(s_size))
    return SemiDetChannel(f, w, p_s, y_size)


def random_policy(rng, x_size=2, s_size=2, u_size=3, alpha=1.0):
    q = rng.dirichlet(alpha * np.ones(x_size * u_size), size=s_size)
    return AuxPolicy(q.reshape(s_size, x_size, u_size))


@pytest.fixture
def fig1_channel():
    return build_channel(BinaryExampleParams(sigma=0.5, p=0.2))


@pytest.fixture
def fig1_file(tmp_path, fig1_channel):
    path = tmp_path / "fig1.json"
    path.write_text(json.dumps(semidet_to_dict(fig1_channel)))
    return path


# acceptance lines, repeated in the terminal summary so they survive capture
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
