"""Shared fixtures: deterministic streams and small sampled instances."""

import numpy as np
import pytest

from eur_lab.sampling import RngStream, sample_haar_unitary


@pytest.fixture
def stream() -> RngStream:
    return RngStream(20240817)


@pytest.fixture
def haar_4(stream) -> np.ndarray:
    return sample_haar_unitary(stream.child(4), 4)


@pytest.fixture
def haar_6(stream) -> np.ndarray:
    return sample_haar_unitary(stream.child(6), 6)
