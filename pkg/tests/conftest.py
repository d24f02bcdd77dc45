"""Shared fixtures and independent exact-arithmetic oracles.

The oracles here deliberately do not reuse the package's own elimination
code: ranks and determinants are recomputed with ``fractions.Fraction``
so that library results are checked against a second, independent route.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from shiftlab import Backend, make_field_context

# Lines appended by the acceptance tests; printed at the end of the run.
ACCEPTANCE_REPORT: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_REPORT:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_REPORT:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def acceptance_report():
    return ACCEPTANCE_REPORT


@pytest.fixture(scope="session")
def sym_ctx():
    return make_field_context(0, Backend.SYMBOLIC)


@pytest.fixture(scope="session")
def sym_ctx2():
    return make_field_context(2, Backend.SYMBOLIC)


@pytest.fixture(scope="session")
def rand_ctx():
    return make_field_context(0, Backend.RANDOMIZED, seed=0)


@pytest.fixture(scope="session")
def rand_ctx2():
    return make_field_context(2, Backend.RANDOMIZED, seed=0)


def rng(tag: str) -> random.Random:
    """A reproducible generator; the tag keeps tests independent."""
    return random.Random(f"shiftlab-tests:{tag}")


# ------------------------------------------------ exact Fraction oracles


def frac_rank(rows) -> int:
    """Row-echelon rank over the rationals, fractions only."""
    mat = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for j in range(cols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][j]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = 1 / mat[rank][j]
        mat[rank] = [x * inv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][j]:
                factor = mat[i][j]
                mat[i] = [x - factor * y for x, y in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def frac_rank_mod(rows, p: int) -> int:
    """Row-echelon rank over GF(p)."""
    mat = [[int(x) % p for x in row] for row in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for j in range(cols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][j]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = pow(mat[rank][j], -1, p)
        mat[rank] = [x * inv % p for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][j]:
                factor = mat[i][j]
                mat[i] = [(x - factor * y) % p for x, y in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def frac_pivots(rows) -> tuple[tuple[int, ...], list[int]]:
    """Greedy left-to-right pivot columns over the rationals.

    Returns (rank prefix sequence including the empty prefix, pivot column
    indices); a column is a pivot exactly when it enlarges the span of the
    columns before it.
    """
    if not rows:
        return (0,), []
    cols = len(rows[0])
    ranks = [0]
    pivots = []
    for j in range(1, cols + 1):
        r = frac_rank([row[:j] for row in rows])
        ranks.append(r)
        if r > ranks[-2]:
            pivots.append(j - 1)
    return tuple(ranks), pivots


def frac_pivots_mod(rows, p: int) -> tuple[tuple[int, ...], list[int]]:
    if not rows:
        return (0,), []
    cols = len(rows[0])
    ranks = [0]
    pivots = []
    for j in range(1, cols + 1):
        r = frac_rank_mod([row[:j] for row in rows], p)
        ranks.append(r)
        if r > ranks[-2]:
            pivots.append(j - 1)
    return tuple(ranks), pivots


def frac_det(rows) -> Fraction:
    """Determinant by Leibniz expansion; fine for the tiny sizes used here."""
    n = len(rows)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        term = Fraction(1)
        for i in range(n):
            term *= Fraction(rows[i][perm[i]])
        total += sign * term
    return total


def frac_minor(rows, row_idx, col_idx) -> Fraction:
    return frac_det([[rows[i][j] for j in col_idx] for i in row_idx])


def random_invertible(n: int, gen: random.Random, bound: int = 9):
    """A random integer matrix with nonzero determinant."""
    while True:
        rows = [[gen.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        if frac_det(rows) != 0:
            return rows


def random_unit_upper(n: int, gen: random.Random, bound: int = 9):
    """A random upper-triangular integer matrix with nonzero diagonal."""
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = gen.choice([v for v in range(-bound, bound + 1) if v])
        for j in range(i + 1, n):
            rows[i][j] = gen.randint(-bound, bound)
    return rows


def int_matmul(a, b):
    n = len(a)
    return [
        [sum(a[i][t] * b[t][j] for t in range(n)) for j in range(len(b[0]))]
        for i in range(n)
    ]
