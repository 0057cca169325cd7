import random
from fractions import Fraction

import pytest

from attrkit.chern import ChernRecord
from attrkit.geometry import EvenClass, preset


@pytest.fixture(scope="session")
def quintic():
    return preset("quintic")


@pytest.fixture(scope="session")
def ell2():
    return preset("elliptic_p2")


@pytest.fixture(params=["quintic", "elliptic_p2"])
def geometry(request):
    return preset(request.param)


def rand_fraction(rng, lo=-10, hi=10, den=4):
    return Fraction(rng.randint(lo * den, hi * den), den)


def rand_vec(rng, b2, lo=-10, hi=10):
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(b2))


def rand_pos_vec(rng, b2, lo=1, hi=10):
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(b2))


def rand_class(rng, b2):
    return EvenClass(
        rand_fraction(rng),
        tuple(rand_fraction(rng) for _ in range(b2)),
        tuple(rand_fraction(rng) for _ in range(b2)),
        rand_fraction(rng),
    )


def rand_record(rng, b2, min_rank=1, max_rank=6):
    """Integer components in [-10, 10], rank in [min_rank, max_rank]."""
    return ChernRecord(
        Fraction(rng.randint(min_rank, max_rank)),
        rand_vec(rng, b2),
        rand_vec(rng, b2),
        Fraction(rng.randint(-10, 10)),
    )


@pytest.fixture
def rng():
    return random.Random(20240817)
