"""Built-in example groups, with the facts each one is expected to satisfy.

Names take the form  family(arg, ...)  e.g. cyclic(5), cyclic_wreath(2,3).
Coordinates on (C^2)^n are interleaved (x1, y1, x2, y2, ...), matching the
default block symplectic form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import factorial

from .cyclo import CycNum, root_of_unity
from .errors import ValidationError
from .group import GroupSpec
from .linalg import ExactMatrix
from .partitions import multipartitions, partition_count, symmetric_age_counts, wreath_age_counts


@dataclass
class CorpusEntry:
    name: str
    family: str
    params: tuple[int, ...]
    order: int
    class_count: int
    age_counts: list[int]
    symplectic: bool = True
    description: str = ""
    spec: GroupSpec | None = field(default=None, repr=False)


# ── Constructors ──────────────────────────────────────────


def _diag_pair(k: int, order: int, n: int = 2, block: int = 0) -> ExactMatrix:
    """diag(z^k, z^-k) on one C^2 block, identity elsewhere."""
    values = [CycNum.one(order)] * n
    values[2 * block] = root_of_unity(k, order)
    values[2 * block + 1] = root_of_unity(-k, order)
    return ExactMatrix.diagonal(values)


def block_permutation(perm: list[int], order: int) -> ExactMatrix:
    """Permutation sigma of the C^2 blocks: e_(2i+t) -> e_(2 sigma(i)+t)."""
    n = 2 * len(perm)
    rows = [[0] * n for _ in range(n)]
    for i, s in enumerate(perm):
        for t in range(2):
            rows[2 * s + t][2 * i + t] = 1
    return ExactMatrix(rows, order)


def _symmetric_generators(n: int, order: int) -> list[ExactMatrix]:
    if n == 1:
        return [ExactMatrix.identity(2, order)]
    transposition = [1, 0] + list(range(2, n))
    cycle = [(i + 1) % n for i in range(n)]
    gens = [block_permutation(transposition, order)]
    if n > 2:
        gens.append(block_permutation(cycle, order))
    return gens


def trivial(n: int = 2) -> GroupSpec:
    return GroupSpec(dim=n, order=1, generators=[ExactMatrix.identity(n, 1)], name=f"trivial({n})")


def cyclic(r: int) -> GroupSpec:
    """Z/r in SU(2): the A_(r-1) singularity."""
    return GroupSpec(dim=2, order=r, generators=[_diag_pair(1, r)], name=f"cyclic({r})")


def binary_dihedral(m: int) -> GroupSpec:
    """Binary dihedral group of order 4m in SU(2): the D_(m+2) singularity."""
    order = 2 * m
    b = ExactMatrix([[0, 1], [-1, 0]], order)
    return GroupSpec(
        dim=2, order=order, generators=[_diag_pair(1, order), b], name=f"binary_dihedral({m})"
    )


def symmetric_pairs(n: int) -> GroupSpec:
    """S_n permuting the blocks of (C^2)^n."""
    return GroupSpec(
        dim=2 * n, order=1, generators=_symmetric_generators(n, 1), name=f"symmetric_pairs({n})"
    )


def cyclic_wreath(r: int, n: int) -> GroupSpec:
    """mu_r wreath S_n on (C^2)^n."""
    gens = [_diag_pair(1, r, 2 * n, 0)]
    if n > 1:
        gens += _symmetric_generators(n, r)
    return GroupSpec(dim=2 * n, order=r, generators=gens, name=f"cyclic_wreath({r},{n})")


def mu4_counterexample() -> GroupSpec:
    """mu_4 acting on C^4 by scalars: in SL_4 but not symplectic."""
    return GroupSpec(
        dim=4,
        order=4,
        generators=[ExactMatrix.scalar(4, root_of_unity(1, 4))],
        name="mu4_counterexample",
    )


FAMILIES = {
    "trivial": (trivial, (0, 1)),
    "cyclic": (cyclic, (1, 1)),
    "binary_dihedral": (binary_dihedral, (1, 1)),
    "symmetric_pairs": (symmetric_pairs, (1, 1)),
    "cyclic_wreath": (cyclic_wreath, (2, 2)),
    "mu4_counterexample": (mu4_counterexample, (0, 0)),
}

DEFAULTS = [
    "trivial(2)",
    "cyclic(5)",
    "binary_dihedral(2)",
    "symmetric_pairs(3)",
    "cyclic_wreath(2,2)",
    "mu4_counterexample",
]

_NAME = re.compile(r"^\s*([a-z_0-9]+)\s*(?:\(\s*([0-9,\s]*)\))?\s*$")


def parse_name(name: str) -> tuple[str, tuple[int, ...]]:
    m = _NAME.match(name)
    if not m or m.group(1) not in FAMILIES:
        raise ValidationError(f"unknown corpus entry {name!r} (families: {', '.join(FAMILIES)})")
    family = m.group(1)
    params = tuple(int(p) for p in (m.group(2) or "").split(",") if p.strip())
    lo, hi = FAMILIES[family][1]
    if not lo <= len(params) <= hi:
        raise ValidationError(f"{family} takes {lo}..{hi} integer arguments, got {len(params)}")
    if any(p < 1 for p in params):
        raise ValidationError(f"{family} arguments must be positive, got {params}")
    if family == "binary_dihedral" and params[0] < 2:
        raise ValidationError("binary_dihedral needs m >= 2")
    return family, params


def build(name: str) -> GroupSpec:
    family, params = parse_name(name)
    return FAMILIES[family][0](*params)


def expected(family: str, params: tuple[int, ...]) -> tuple[int, int, list[int], bool]:
    """(order, class count, age counts, symplectic)."""
    if family == "trivial":
        return 1, 1, [1], True
    if family == "cyclic":
        (r,) = params
        return r, r, [1, r - 1] if r > 1 else [1], True
    if family == "binary_dihedral":
        (m,) = params
        return 4 * m, m + 3, [1, m + 2], True
    if family == "symmetric_pairs":
        (n,) = params
        return factorial(n), partition_count(n), symmetric_age_counts(n), True
    if family == "cyclic_wreath":
        r, n = params
        return r**n * factorial(n), len(multipartitions(r, n)), wreath_age_counts(r, n), True
    if family == "mu4_counterexample":
        return 4, 4, [1, 1, 1, 1], False
    raise ValidationError(f"unknown corpus family {family!r}")


def entry(name: str) -> CorpusEntry:
    family, params = parse_name(name)
    order, classes, ages, symplectic = expected(family, params)
    spec = FAMILIES[family][0](*params)
    return CorpusEntry(
        name=spec.name,
        family=family,
        params=params,
        order=order,
        class_count=classes,
        age_counts=ages,
        symplectic=symplectic,
        description=(FAMILIES[family][0].__doc__ or "").strip(),
        spec=spec,
    )


def entries() -> list[CorpusEntry]:
    return [entry(name) for name in DEFAULTS]
