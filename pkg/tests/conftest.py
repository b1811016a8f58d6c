import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ddfkit.ffield import PrimeField


@pytest.fixture(scope="session")
def f2():
    return PrimeField(2)


@pytest.fixture(scope="session")
def f3():
    return PrimeField(3)


@pytest.fixture(scope="session")
def f5():
    return PrimeField(5)


@pytest.fixture(scope="session")
def f101():
    return PrimeField(101)


@pytest.fixture(scope="session")
def irr_tables():
    """Exhaustive irreducible tables for the brute-force oracles."""
    from oracles import irreducibles_up_to

    return {
        2: irreducibles_up_to(PrimeField(2), 12),
        3: irreducibles_up_to(PrimeField(3), 6),
        5: irreducibles_up_to(PrimeField(5), 6),
    }
