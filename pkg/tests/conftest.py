import math

import numpy as np
import pytest

from barabanov import MatrixSet

GOLDEN = (1 + math.sqrt(5)) / 2

A1 = np.array([[1.0, 1.0], [0.0, 1.0]])
A2 = np.array([[1.0, 0.0], [1.0, 1.0]])
ROT = np.array([[0.8, 0.6], [-0.6, 0.8]])
A3 = np.array([[1.0, 0.0], [-0.4, 1.3]])


@pytest.fixture
def example1():
    return MatrixSet.of(A1, A2)


@pytest.fixture
def example2():
    return MatrixSet.of(A1, ROT, A3)


def random_irreducible_sets(count, seed=0, sizes=(2, 3)):
    """Seeded random pairs/triples with entries in [-2, 2]; reducible draws skipped."""
    from barabanov import irreducibility_check

    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        r = int(rng.choice(sizes))
        s = MatrixSet(tuple(rng.uniform(-2, 2, (2, 2)) for _ in range(r)))
        if irreducibility_check(s).verdict.value == "irreducible":
            out.append(s)
    return out
