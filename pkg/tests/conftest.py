import sys
from pathlib import Path

import pytest

from gclass import build_prime_table

sys.path.insert(0, str(Path(__file__).parent))

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def table():
    return build_prime_table(10**4)


@pytest.fixture(scope="session")
def big_table():
    return build_prime_table(10**6)


@pytest.fixture(scope="session")
def spf_25m():
    from oracles import spf_sieve

    return spf_sieve(25 * 10**6)


@pytest.fixture(scope="session")
def golden():
    return GOLDEN
