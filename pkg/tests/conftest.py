from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings

from rmlist import AnfPolynomial, FunctionTable, anf_to_table

settings.register_profile(
    "ci",
    max_examples=80,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


def table_of(n: int, *monomials) -> FunctionTable:
    """Truth table of an XOR of monomials given as 1-based variable index lists."""
    return anf_to_table(AnfPolynomial.from_variable_lists(n, monomials))


def random_table(n: int, rng: random.Random) -> FunctionTable:
    return FunctionTable(n, rng.getrandbits(1 << n))


def random_table_below_weight(n: int, max_count: int, rng: random.Random) -> FunctionTable:
    """Random table with strictly fewer than max_count ones."""
    count = rng.randrange(max_count)
    points = rng.sample(range(1 << n), count)
    bits = 0
    for p in points:
        bits |= 1 << p
    return FunctionTable(n, bits)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0DE)
