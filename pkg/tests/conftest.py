import math

import numpy as np
import pytest
from hypothesis import strategies as st

from rejectq.core.statevec.state import QubitLabel, qubit_from_bloch

# Bloch angles of an arbitrary input qubit.
polar_angles = st.floats(min_value=0.0, max_value=math.pi, allow_nan=False)
azimuths = st.floats(min_value=0.0, max_value=2 * math.pi, allow_nan=False)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def plus_state():
    """(|0> + |1>)/√2 on particle 1."""
    return qubit_from_bloch(math.pi / 2, 0.0, QubitLabel.PARTICLE1)


@pytest.fixture
def corrupted_corrections():
    """Teleportation corrections with the Φ− and Ψ+ entries swapped."""
    from rejectq.core.protocols.teleportation import BELL_CORRECTIONS

    table = dict(BELL_CORRECTIONS)
    table[1], table[2] = table[2], table[1]
    return table


@pytest.fixture
def isolated_cwd(tmp_path, monkeypatch):
    """Run from an empty directory so no stray config file is picked up."""
    monkeypatch.chdir(tmp_path)
    return tmp_path
