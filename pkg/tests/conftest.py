import math

import numpy as np
import pytest

from core.numeric import Tolerances

S5, S6 = math.sqrt(5.0), math.sqrt(6.0)


@pytest.fixture
def tol():
    return Tolerances()


@pytest.fixture
def five_in_three():
    """Five unit vectors in R^3 forming a tight frame: lam = (5/3, 5/3, 5/3, 0, 0)."""
    return (5 / 3, 5 / 3, 5 / 3, 0.0, 0.0), (1.0,) * 5


@pytest.fixture
def printed_frame():
    return np.array(
        [
            [1.0, 2 / 3, -1 / S6, -1 / 6, 1 / 6],
            [0.0, S5 / 3, S5 / S6, S5 / 6, -S5 / 6],
            [0.0, 0.0, 0.0, S5 / S6, S5 / S6],
        ]
    )


@pytest.fixture
def seven_quarters():
    return (7 / 4, 3 / 4, 1 / 2), (1.0, 1.0, 1.0)


@pytest.fixture
def write_seq(tmp_path):
    """Write a sequence as a JSON array (repr floats round-trip exactly) and return the path."""

    def write(name, values):
        path = tmp_path / name
        path.write_text("[" + ", ".join(repr(float(v)) for v in values) + "]\n")
        return str(path)

    return write
