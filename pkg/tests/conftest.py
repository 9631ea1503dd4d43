import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qpfactor import (
    SampledSignal,
    factorize_signal,
    gen_chirp_recip,
    gen_modulated_periodic,
)


@pytest.fixture(scope="session")
def sine_signal():
    x = 6.0 * np.arange(600) / 600
    return SampledSignal(x, np.sin(2.0 * np.pi * x))


@pytest.fixture(scope="session")
def sine_factorization(sine_signal):
    return factorize_signal(sine_signal)


@pytest.fixture(scope="session")
def modulated_factorization():
    return factorize_signal(gen_modulated_periodic(600, 0.0, 6.0))


@pytest.fixture(scope="session")
def chirp_factorization():
    return factorize_signal(gen_chirp_recip(2000, 0.05, 0.5))
