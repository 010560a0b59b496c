from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from homlie.deform import Deformation
from homlie.homalg import Basis, BracketConstants, LinMap, Vec
from homlie.symcore import MultiPoly, Registry

SMALL_REG = Registry(["u", "v", "w", "z"])


def rand_fraction(rng: random.Random, span: int = 9) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice((1, 2, 3, 5)))


def rand_poly(rng: random.Random, reg: Registry = SMALL_REG, terms: int = 4, degree: int = 3) -> MultiPoly:
    acc = {}
    for _ in range(rng.randint(0, terms)):
        mono = tuple(sorted(rng.randrange(len(reg)) for _ in range(rng.randint(0, degree))))
        acc[mono] = rand_fraction(rng)
    return MultiPoly(acc, reg)


def rand_vec(rng: random.Random, n: int, reg: Registry = SMALL_REG) -> Vec:
    return Vec(rand_poly(rng, reg, terms=2, degree=1) for _ in range(n))


def rand_bracket(rng: random.Random, n: int, reg: Registry | None = None) -> BracketConstants:
    def coeff():
        return rand_poly(rng, reg, terms=2, degree=1) if reg is not None else rand_fraction(rng, 3)
    return BracketConstants(n, {(i, j): [coeff() for _ in range(n)]
                                for i in range(1, n + 1) for j in range(i + 1, n + 1)
                                if rng.random() < 0.7})


def rand_map(rng: random.Random, n: int) -> LinMap:
    return LinMap([[rand_fraction(rng, 3) if rng.random() < 0.6 else 0 for _ in range(n)]
                   for _ in range(n)])


def rand_unipotent_deformation(rng: random.Random, n: int | None = None, N: int | None = None) -> Deformation:
    n = n or rng.randint(2, 4)
    N = N or rng.randint(1, 4)
    brackets = tuple(rand_bracket(rng, n) for _ in range(rng.randint(1, N)))
    maps = (LinMap.identity(n),) + tuple(rand_map(rng, n) for _ in range(rng.randint(0, N - 1)))
    return Deformation(Basis.default(n), brackets, maps, N)


@st.composite
def polys(draw, reg: Registry = SMALL_REG, max_terms: int = 4, max_degree: int = 3):
    mono = st.lists(st.integers(0, len(reg) - 1), max_size=max_degree).map(lambda m: tuple(sorted(m)))
    coeff = st.fractions(min_value=-20, max_value=20, max_denominator=7)
    terms = draw(st.dictionaries(mono, coeff, max_size=max_terms))
    return MultiPoly(terms, reg)


@pytest.fixture
def rng():
    return random.Random(20261015)


# -- acceptance summary: one line per criterion ------------------------------

_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
