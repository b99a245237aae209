import numpy as np
import pytest

from priormask.signal_io import Waveform

SR = 16000


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_wave(rng, n, sr=SR, scale=0.3):
    return Waveform(scale * rng.standard_normal(n), sr)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
