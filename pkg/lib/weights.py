"""Weight decomposition and age of finite-order elements.

For g of order r, weight a (0 <= a < r) has multiplicity dim V_a, where g acts
on V_a by zeta_r^(-a). The age is (1/r) * sum(a * dim V_a).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import InvariantViolation, PreconditionError
from .group import ClassRecord, FiniteGroup, check_symplectic, conjugacy_classes, default_cap
from .linalg import ExactMatrix, weight_multiplicities
from .workers import pmap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightData:
    r: int
    pairs: tuple[tuple[int, int], ...]
    age: Fraction
    fixed_dim: int

    @property
    def n(self) -> int:
        return sum(m for _, m in self.pairs)

    def weight_vector(self) -> list[int]:
        """Weights repeated by multiplicity, ascending."""
        return [a for a, m in self.pairs for _ in range(m)]


def element_order(g: ExactMatrix, limit: int | None = None) -> int:
    limit = default_cap() if limit is None else limit
    power = g
    for k in range(1, limit + 1):
        if power.is_identity():
            return k
        power = power @ g
    raise PreconditionError(f"element has infinite order or order above {limit}")


def weight_data(g: ExactMatrix, r: int | None = None) -> WeightData:
    r = element_order(g) if r is None else r
    if g.order % r:
        raise PreconditionError(
            f"element order {r} does not divide the session cyclotomic order {g.order}"
        )
    mults = weight_multiplicities(g, r)
    pairs = tuple((a, m) for a, m in enumerate(mults) if m)
    if sum(mults) != g.n:
        raise InvariantViolation(f"weight multiplicities sum to {sum(mults)}, expected {g.n}")
    return WeightData(
        r=r,
        pairs=pairs,
        age=Fraction(sum(a * m for a, m in pairs), r),
        fixed_dim=mults[0],
    )


def age(g: ExactMatrix) -> int:
    value = weight_data(g).age
    if value.denominator != 1:
        raise PreconditionError(f"age {value} is not an integer: element is not in SL")
    return int(value)


def check_age_lemma(g: ExactMatrix) -> bool:
    """2 * age(g) == n - dim V^g."""
    wd = weight_data(g)
    return 2 * wd.age == wd.n - wd.fixed_dim


def inverse_pairing_holds(g: ExactMatrix) -> bool:
    """age(g) + age(g^-1) == n - dim V^g."""
    wd = weight_data(g)
    inv = weight_data(g.inverse(), wd.r)
    return wd.age + inv.age == wd.n - wd.fixed_dim


def classify(
    G: FiniteGroup,
    classes: list[ClassRecord] | None = None,
    threads: int | None = None,
) -> list[ClassRecord]:
    """Fill weights, age and fixed_dim on every class; sort by (age, r, size, key)."""
    classes = conjugacy_classes(G, threads) if classes is None else classes
    data = pmap(lambda c: weight_data(c.representative), classes, threads)
    symplectic = check_symplectic(G)
    filled = []
    for c, wd in zip(classes, data):
        if wd.r != c.r:
            raise InvariantViolation(
                f"class {c.rep_index}: recomputed order {wd.r} differs from enumerated {c.r}"
            )
        if wd.age.denominator != 1:
            logger.warning("class %d has non-integer age %s (not in SL)", c.rep_index, wd.age)
        if symplectic and 2 * wd.age != G.dim - wd.fixed_dim:
            raise InvariantViolation(
                f"class {c.rep_index}: 2*age {2 * wd.age} != codim of fixed space {G.dim - wd.fixed_dim}"
            )
        filled.append(replace(c, weights=wd.pairs, age=wd.age, fixed_dim=wd.fixed_dim))
    filled.sort(key=lambda c: (c.age, c.r, c.size, c.representative.key()))
    return [replace(c, index=i) for i, c in enumerate(filled)]


def age_counts(classes: list[ClassRecord]) -> list[int]:
    """counts[a] = number of classes of age a (integer ages only)."""
    ages = [int(c.age) for c in classes if c.age.denominator == 1]
    if not ages:
        return []
    counts = [0] * (max(ages) + 1)
    for a in ages:
        counts[a] += 1
    return counts
