import math

import numpy as np
import pytest

from qbhlab.effective import BASIS


def brute_spin_dot() -> np.ndarray:
    """S_L.S_R from Kronecker products of explicit spin-1 matrices (complex S^y)."""
    sp = np.zeros((3, 3))
    sp[1, 0] = sp[2, 1] = math.sqrt(2.0)
    sx = (sp + sp.T) / 2
    sy = (sp - sp.T) / 2j
    sz = np.diag([-1.0, 0.0, 1.0])
    dot = sum(np.kron(a, a) for a in (sx, sy, sz))
    assert np.allclose(dot.imag, 0)
    return dot.real


@pytest.fixture(scope="session")
def spin_dot_oracle():
    return brute_spin_dot()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def basis_labels():
    return list(BASIS)


def pytest_terminal_summary(terminalreporter):
    lines = getattr(__import__("sys").modules.get("test_acceptance"), "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
