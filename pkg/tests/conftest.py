import numpy as np
import pytest
from hypothesis import strategies as st

from lebesgue_qso import AtomicMeasure, CdfMeasure

probabilities = st.floats(0.0, 1.0, allow_nan=False)
points = st.floats(0.0, 1.0, exclude_max=True, allow_nan=False)


@st.composite
def atomic_measures(draw, max_atoms=10):
    m = draw(st.integers(1, max_atoms))
    atoms = draw(st.lists(st.integers(0, 2**20 - 1), min_size=m, max_size=m, unique=True))
    raw = draw(st.lists(st.floats(1e-3, 1.0), min_size=m, max_size=m))
    w = np.array(raw) / sum(raw)
    return AtomicMeasure(np.array(atoms) / 2.0**20, w)


def random_atomic(rng, max_atoms=10):
    m = int(rng.integers(1, max_atoms + 1))
    atoms = np.sort(rng.choice(2**20, size=m, replace=False)) / 2.0**20
    w = rng.random(m) + 1e-3
    return AtomicMeasure(atoms, w / w.sum())


@pytest.fixture
def uniform():
    return CdfMeasure.uniform()


@pytest.fixture
def pow2():
    return CdfMeasure.power(2)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
