import random
from fractions import Fraction

import pytest

from sphereflow.spherefield import QuadCoeffs, Rotation3


def qc(**kw) -> QuadCoeffs:
    vals = {f"a{i}": 0 for i in range(1, 9)}
    vals.update(kw)
    return QuadCoeffs(*(Fraction(vals[f"a{i}"]) for i in range(1, 9)))


def rand_fraction(rng: random.Random, lo=-6, hi=6, den=4) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def rand_qc(rng: random.Random) -> QuadCoeffs:
    return QuadCoeffs(*(rand_fraction(rng) for _ in range(8)))


def quat_rotation(a, b, c, d) -> Rotation3:
    """Exact rational rotation matrix from an integer quaternion."""
    n = Fraction(a * a + b * b + c * c + d * d)
    return Rotation3((
        ((a * a + b * b - c * c - d * d) / n, 2 * (b * c - a * d) / n,
         2 * (b * d + a * c) / n),
        (2 * (b * c + a * d) / n, (a * a - b * b + c * c - d * d) / n,
         2 * (c * d - a * b) / n),
        (2 * (b * d - a * c) / n, 2 * (c * d + a * b) / n,
         (a * a - b * b - c * c + d * d) / n)))


def rand_rotation(rng: random.Random) -> Rotation3:
    while True:
        q = [rng.randint(-5, 5) for _ in range(4)]
        if any(q):
            return quat_rotation(*q)


@pytest.fixture
def rng():
    return random.Random(12345)
