from fractions import Fraction

import pytest

from acdope.prng import DeterministicGenerator, Seed


def seed_of(byte: int) -> Seed:
    return Seed(bytes([byte]) * 32)


def gen_of(byte: int) -> DeterministicGenerator:
    return DeterministicGenerator(seed_of(byte))


class ForcedGen:
    """Generator stub that returns fixed values, for worked-example tests."""

    def __init__(self, *, forced_int=None, forced_fraction=None):
        self.forced_int = forced_int
        self.forced_fraction = forced_fraction

    def uniform_int(self, lo, hi):
        assert lo <= self.forced_int <= hi, "forced value outside requested range"
        return self.forced_int

    def uniform_fraction(self, precision_bits):
        return Fraction(self.forced_fraction)


@pytest.fixture
def fixed_gen():
    return gen_of(1)
