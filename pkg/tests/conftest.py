from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_ints = st.integers(min_value=-6, max_value=6)
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def points(d: int, elements=small_ints):
    return st.tuples(*([elements] * d))


def random_rational(rng: random.Random, lo: int = -20, hi: int = 20) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 5))


def random_realisation(rng: random.Random, n: int, d: int) -> list[tuple]:
    return [tuple(random_rational(rng) for _ in range(d)) for _ in range(n)]


@pytest.fixture
def rng():
    return random.Random(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
