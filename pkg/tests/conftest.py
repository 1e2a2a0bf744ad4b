import random
from fractions import Fraction

import pytest

from lib import corpus
from lib.cyclo import CycNum, root_of_unity
from lib.group import enumerate_group
from lib.polyval import SparsePoly


@pytest.fixture(scope="session")
def trivial():
    return enumerate_group(corpus.trivial(2))


@pytest.fixture(scope="session")
def a1():
    return enumerate_group(corpus.cyclic(2))


@pytest.fixture(scope="session")
def cyclic5():
    return enumerate_group(corpus.cyclic(5))


@pytest.fixture(scope="session")
def q8():
    return enumerate_group(corpus.binary_dihedral(2))


@pytest.fixture(scope="session")
def s2():
    return enumerate_group(corpus.symmetric_pairs(2))


@pytest.fixture(scope="session")
def s3():
    return enumerate_group(corpus.symmetric_pairs(3))


@pytest.fixture(scope="session")
def mu4():
    return enumerate_group(corpus.mu4_counterexample())


@pytest.fixture(scope="session")
def wreath22():
    return enumerate_group(corpus.cyclic_wreath(2, 2))


def element_of_order(G, r):
    return next(g for i, g in enumerate(G.elements) if G.orders[i] == r)


def random_cyc(rng, order):
    """Small random element of Q(zeta_N), a sum of a few roots of unity."""
    total = CycNum.zero(order)
    for _ in range(rng.randint(0, 3)):
        q = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        total = total + root_of_unity(rng.randrange(order), order).scale(q)
    return total


def random_poly(rng, n, order, pool=None):
    """At most 8 terms, degree <= 6, coefficients drawn from pool or random_cyc."""
    terms = {}
    for _ in range(rng.randint(1, 8)):
        exps = [0] * n
        for _ in range(rng.randint(0, 6)):
            exps[rng.randrange(n)] += 1
        c = rng.choice(pool) if pool else random_cyc(rng, order)
        if not c:
            c = CycNum.one(order)
        terms[tuple(exps)] = c
    return SparsePoly(n, order, terms)


@pytest.fixture
def rng():
    return random.Random(20240611)
