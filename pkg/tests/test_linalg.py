"""Gaussian elimination over prime and extension fields."""

import random

import pytest

from tracepir import linalg
from tracepir.gf import FieldTower, PrimeField

F7 = PrimeField(7)
E49 = FieldTower.build(7, 2).ext


def test_solve_known_system():
    # x + 2y = 5, 3x + y = 4 over GF(7) -> x = 2(5-2y) ... solved by hand: y = 4, x = 0
    sol = linalg.solve(F7, [[1, 2], [3, 1]], [5, 4])
    assert sol is not None
    x, y = sol
    assert (x + 2 * y) % 7 == 5 and (3 * x + y) % 7 == 4


def test_solve_inconsistent_returns_none():
    assert linalg.solve(F7, [[1, 1], [2, 2]], [1, 3]) is None


def test_solve_underdetermined_picks_a_solution():
    sol = linalg.solve(F7, [[1, 1]], [3])
    assert sol is not None and sum(sol) % 7 == 3


def test_invert_roundtrip_prime_field():
    rng = random.Random(1)
    count = 0
    while count < 10:
        mat = [[rng.randrange(7) for _ in range(4)] for _ in range(4)]
        inv = linalg.invert(F7, mat)
        if inv is None:
            continue
        count += 1
        prod = [
            [sum(mat[i][l] * inv[l][j] for l in range(4)) % 7 for j in range(4)]
            for i in range(4)
        ]
        assert prod == [[1 if i == j else 0 for j in range(4)] for i in range(4)]


def test_invert_singular_returns_none():
    assert linalg.invert(F7, [[1, 2], [2, 4]]) is None
    assert not linalg.is_invertible(F7, [[0, 0], [0, 0]])


def test_extension_field_solve():
    rng = random.Random(2)
    for _ in range(10):
        a = [[tuple(rng.randrange(7) for _ in range(2)) for _ in range(3)] for _ in range(3)]
        x = [tuple(rng.randrange(7) for _ in range(2)) for _ in range(3)]
        b = linalg.mat_vec(E49, a, x)
        sol = linalg.solve(E49, a, b)
        assert sol is not None
        assert linalg.mat_vec(E49, a, sol) == b


def test_non_square_invert_rejected():
    with pytest.raises(ValueError):
        linalg.invert(F7, [[1, 2, 3], [4, 5, 6]])
