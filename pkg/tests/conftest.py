import random

import pytest

from energysieve.sets import IntegerSet


def make_random_set(rng: random.Random, cap: int, max_size: int) -> IntegerSet:
    size = rng.randint(1, min(max_size, cap))
    return IntegerSet.from_elements(cap, rng.sample(range(1, cap + 1), size))


@pytest.fixture
def rng():
    return random.Random(0xE5E17)
