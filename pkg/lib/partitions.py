"""Partition counting, independent of the group machinery.

Used as an oracle: classes of S_n acting on (C^2)^n correspond to partitions
of n with age n - length, and the Betti numbers of the Hilbert scheme of n
points in the plane come from the generating function
    prod_{k >= 1} 1 / (1 - t^(2k-2) q^k).
"""

from __future__ import annotations

from itertools import product

from sympy import Poly, Symbol, expand
from sympy.functions.combinatorial.numbers import partition
from sympy.utilities.iterables import partitions


def partition_list(n: int) -> list[tuple[int, ...]]:
    """All partitions of n as descending tuples."""
    out = []
    for p in partitions(n):
        out.append(tuple(sorted((k for k, m in p.items() for _ in range(m)), reverse=True)))
    return sorted(out, reverse=True)


def partition_count(n: int) -> int:
    return int(partition(n))


def length_counts(n: int) -> dict[int, int]:
    counts: dict[int, int] = {}
    for p in partition_list(n):
        counts[len(p)] = counts.get(len(p), 0) + 1
    return counts


def symmetric_age_counts(n: int) -> list[int]:
    """counts[a] = number of partitions of n with exactly n - a parts."""
    by_length = length_counts(n)
    return [by_length.get(n - a, 0) for a in range(n)]


def goettsche_betti(n: int) -> list[int]:
    """Even Betti numbers b_0, b_2, ... of the Hilbert scheme of n points in C^2."""
    t, q = Symbol("t"), Symbol("q")
    total = 1
    for k in range(1, n + 1):
        series = sum(t ** ((2 * k - 2) * m) * q ** (k * m) for m in range(n // k + 1))
        total = expand(total * series)
        total = sum(
            c * t**i * q**j for (j, i), c in Poly(total, q, t).terms() if j <= n
        )
    coeff = Poly(total, q, t)
    betti: dict[int, int] = {}
    for (j, i), c in coeff.terms():
        if j == n:
            betti[i] = int(c)
    top = max(betti) if betti else 0
    return [betti.get(2 * a, 0) for a in range(top // 2 + 1)]


def multipartitions(r: int, n: int) -> list[tuple[tuple[int, ...], ...]]:
    """r-tuples of partitions with total size n."""
    out = []
    for sizes in product(range(n + 1), repeat=r):
        if sum(sizes) != n:
            continue
        for parts in product(*(partition_list(s) if s else [()] for s in sizes)):
            out.append(parts)
    return out


def wreath_age_counts(r: int, n: int) -> list[int]:
    """Ages of mu_r wreath S_n on (C^2)^n: a cycle of length l colored c adds l - 1 + [c != 0]."""
    counts: dict[int, int] = {}
    for multi in multipartitions(r, n):
        age = sum(l - 1 + (1 if color else 0) for color, parts in enumerate(multi) for l in parts)
        counts[age] = counts.get(age, 0) + 1
    return [counts.get(a, 0) for a in range(max(counts) + 1)]
