"""Seeded random market generation for sweeps and property tests.

One fixed recipe so that published sweep tables are regenerable: consumer
count uniform in ``2..max_n``, horizon uniform in ``1..max_t``, integer
valuations uniform in ``1..max_value``, all drawn from ``random.Random(seed)``
in that order per instance.
"""

from __future__ import annotations

import random
from typing import Iterator

from .model import Instance, make_instance


def random_instance(rng: random.Random, max_n: int, max_t: int, max_value: int) -> Instance:
    """Draw one market from the fixed sweep distribution."""
    n = rng.randint(2, max_n)
    periods = rng.randint(1, max_t)
    values = [rng.randint(1, max_value) for _ in range(n)]
    return make_instance(values, periods)


def random_instances(
    seed: int, count: int, max_n: int, max_t: int, max_value: int
) -> Iterator[Instance]:
    """Yield ``count`` markets; the seed fully determines the sequence."""
    rng = random.Random(seed)
    for _ in range(count):
        yield random_instance(rng, max_n, max_t, max_value)
