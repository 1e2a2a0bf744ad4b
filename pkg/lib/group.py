"""Finite matrix groups: enumeration, element orders, conjugacy classes, SL/Sp checks.

Elements are stored sorted by their canonical key, so indices are stable for a
given generating set no matter how many threads did the enumeration. After
enumeration the session cyclotomic order is raised to lcm(N, exponent) and
every matrix is rescaled, so zeta_r exists for every element order r.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction

from .cyclo import lcm
from .errors import PreconditionError, ResourceCapError, ValidationError
from .linalg import ExactMatrix, Subspace
from .workers import pmap

logger = logging.getLogger(__name__)


def default_cap() -> int:
    return int(os.environ.get("MCKAY_GROUP_CAP", "1000000"))


def orbit_threshold() -> int:
    return int(os.environ.get("MCKAY_ORBIT_THRESHOLD", "10000"))


# ── Data model ────────────────────────────────────────────


@dataclass
class GroupSpec:
    dim: int
    order: int  # cyclotomic order N of the entries
    generators: list[ExactMatrix] = field(default_factory=list)
    symplectic_form: ExactMatrix | None = None
    name: str = ""

    def form(self) -> ExactMatrix | None:
        """The explicit form, or the standard block form when dim is even."""
        if self.symplectic_form is not None:
            return self.symplectic_form
        if self.dim % 2 == 0:
            return standard_form(self.dim, self.order)
        return None


@dataclass(frozen=True)
class ClassRecord:
    representative: ExactMatrix
    rep_index: int
    size: int
    r: int
    members: tuple[int, ...]
    weights: tuple[tuple[int, int], ...] = ()
    age: Fraction | None = None
    fixed_dim: int | None = None
    index: int = 0


def standard_form(n: int, order: int) -> ExactMatrix:
    """Block-diagonal diag(j, ..., j) with j = [[0, 1], [-1, 0]] on (x1, y1, x2, y2, ...)."""
    if n % 2:
        raise PreconditionError(f"no symplectic form in odd dimension {n}")
    rows = [[0] * n for _ in range(n)]
    for b in range(0, n, 2):
        rows[b][b + 1] = 1
        rows[b + 1][b] = -1
    return ExactMatrix(rows, order)


def validate_spec(spec: GroupSpec) -> list[str]:
    """Return a list of problems with a GroupSpec (empty means valid)."""
    errors = []
    if not isinstance(spec.dim, int) or spec.dim <= 0:
        errors.append(f"dim must be a positive integer, got {spec.dim!r}")
        return errors
    if not isinstance(spec.order, int) or spec.order <= 0:
        errors.append(f"cyclotomic_order must be a positive integer, got {spec.order!r}")
        return errors
    if not spec.generators:
        errors.append("at least one generator is required")
    for i, g in enumerate(spec.generators):
        if g.n != spec.dim:
            errors.append(f"generator {i}: dimension {g.n} does not match dim {spec.dim}")
        elif g.order != spec.order:
            errors.append(f"generator {i}: cyclotomic order {g.order} does not match {spec.order}")
        elif g.det().is_zero():
            errors.append(f"generator {i}: singular matrix")
    j = spec.symplectic_form
    if j is not None:
        if spec.dim % 2:
            errors.append("symplectic_form given for odd dim")
        elif j.n != spec.dim:
            errors.append(f"symplectic_form: dimension {j.n} does not match dim {spec.dim}")
        elif j.order != spec.order:
            errors.append(f"symplectic_form: cyclotomic order {j.order} does not match {spec.order}")
        else:
            if j.transpose() != -j:
                errors.append("symplectic_form: not antisymmetric")
            if j.det().is_zero():
                errors.append("symplectic_form: singular")
    return errors


# ── Finite group ──────────────────────────────────────────


class FiniteGroup:
    """An enumerated finite matrix group with index-based multiplication."""

    def __init__(
        self,
        elements: list[ExactMatrix],
        generators: list[ExactMatrix],
        order: int,
        form: ExactMatrix | None = None,
        orders: list[int] | None = None,
        name: str = "",
    ):
        self.elements = sorted(elements, key=ExactMatrix.key)
        self.order = order
        self.dim = self.elements[0].n
        self.form = form
        self.name = name
        self._index = {e.key(): i for i, e in enumerate(self.elements)}
        self.generators = generators
        self.generator_indices = [self.index_of(g) for g in generators]
        self.identity = self.index_of(ExactMatrix.identity(self.dim, order))
        self._mul: dict[tuple[int, int], int] = {}
        self._inv: dict[int, int] = {}
        if orders is None:
            orders = [_matrix_order(e, len(self.elements)) for e in self.elements]
        self.orders = orders
        self.exponent = lcm(*orders)

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> ExactMatrix:
        return self.elements[i]

    def __repr__(self):
        return f"FiniteGroup(order={len(self)}, dim={self.dim}, N={self.order})"

    def index_of(self, m: ExactMatrix) -> int:
        try:
            return self._index[m.key()]
        except KeyError:
            raise ValidationError("matrix is not an element of the group") from None

    def contains(self, m: ExactMatrix) -> bool:
        return m.order == self.order and m.key() in self._index

    def multiply(self, i: int, j: int) -> int:
        k = self._mul.get((i, j))
        if k is None:
            k = self._index[(self.elements[i] @ self.elements[j]).key()]
            self._mul[(i, j)] = k
        return k

    def inverse(self, i: int) -> int:
        k = self._inv.get(i)
        if k is None:
            k = self._index[self.elements[i].power(self.orders[i] - 1).key()]
            self._inv[i] = k
            self._inv[k] = i
        return k

    def element_order(self, i: int) -> int:
        return self.orders[i]

    def conjugate(self, h: int, x: int) -> int:
        """h x h^-1."""
        return self.multiply(self.multiply(h, x), self.inverse(h))

    def subgroup(self, indices) -> FiniteGroup:
        """The subgroup formed by the given (closed) set of element indices."""
        indices = sorted(set(indices))
        members = set(indices)
        gens: list[int] = []
        generated = {self.identity}
        for i in indices:
            if i in generated:
                continue
            gens.append(i)
            generated = self._closure(gens)
            if not generated <= members:
                raise ValidationError("index set is not closed under multiplication")
        if generated != members:
            raise ValidationError("index set is not a subgroup")
        sub = FiniteGroup(
            [self.elements[i] for i in indices],
            [self.elements[i] for i in gens] or [self.elements[self.identity]],
            self.order,
            self.form,
            [self.orders[i] for i in indices],
            name=f"{self.name}[sub {len(indices)}]",
        )
        return sub

    def _closure(self, gens: list[int]) -> set[int]:
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self.multiply(x, s)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen


def _matrix_order(m: ExactMatrix, limit: int) -> int:
    power = m
    for k in range(1, limit + 1):
        if power.is_identity():
            return k
        power = power @ m
    raise PreconditionError(f"element of order greater than {limit}")


def enumerate_group(spec: GroupSpec, cap: int | None = None, threads: int | None = None) -> FiniteGroup:
    """Breadth-first closure of the generators under right multiplication."""
    errors = validate_spec(spec)
    if errors:
        raise ValidationError("; ".join(errors))
    cap = default_cap() if cap is None else cap
    ident = ExactMatrix.identity(spec.dim, spec.order)
    seen = {ident.key(): ident}
    frontier = [ident]
    gens = spec.generators

    def expand(x):
        return [x @ s for s in gens]

    while frontier:
        nxt = []
        for products in pmap(expand, frontier, threads):
            for y in products:
                k = y.key()
                if k not in seen:
                    seen[k] = y
                    nxt.append(y)
                    if len(seen) > cap:
                        raise ResourceCapError(
                            f"group too large or infinite: more than {cap} elements"
                        )
        frontier = nxt
        logger.debug("enumeration frontier %d, total %d", len(frontier), len(seen))

    elements = list(seen.values())
    orders = pmap(lambda e: _matrix_order(e, len(elements)), elements, threads)
    exponent = lcm(*orders)
    session = lcm(spec.order, exponent)
    form = spec.form()
    if session != spec.order:
        logger.info("raising session cyclotomic order %d -> %d", spec.order, session)
        elements = [e.rescale(session) for e in elements]
        gens = [g.rescale(session) for g in gens]
        form = form.rescale(session) if form is not None else None
    order_by_key = {e.key(): o for e, o in zip(elements, orders)}
    G = FiniteGroup(
        elements,
        list(gens),
        session,
        form,
        [order_by_key[k] for k in sorted(order_by_key)],
        name=spec.name,
    )
    logger.info("enumerated %s: order %d, exponent %d", spec.name or "group", len(G), G.exponent)
    return G


# ── Conjugacy ─────────────────────────────────────────────


def conjugacy_classes(G: FiniteGroup, threads: int | None = None) -> list[ClassRecord]:
    """Partition G into conjugacy classes; weights and age are left unset."""
    assigned = [False] * len(G)
    all_elements = len(G) <= orbit_threshold()
    classes = []
    for x in range(len(G)):
        if assigned[x]:
            continue
        if all_elements:
            orbit = set(pmap(lambda h: G.conjugate(h, x), range(len(G)), threads))
        else:
            orbit = {x}
            work = [x]
            while work:
                y = work.pop()
                for s in G.generator_indices:
                    z = G.conjugate(s, y)
                    if z not in orbit:
                        orbit.add(z)
                        work.append(z)
        for y in orbit:
            assigned[y] = True
        members = tuple(sorted(orbit))
        rep = members[0]
        classes.append(
            ClassRecord(
                representative=G[rep],
                rep_index=rep,
                size=len(members),
                r=G.orders[rep],
                members=members,
            )
        )
    logger.info("%d conjugacy classes", len(classes))
    return classes


# ── Membership checks ─────────────────────────────────────


def check_sl(G) -> bool:
    """True iff every generator has determinant 1 (accepts GroupSpec or FiniteGroup)."""
    return all(g.det().is_one() for g in G.generators)


def check_symplectic(G, form: ExactMatrix | None = None) -> bool:
    """True iff every generator satisfies g^T J g = J."""
    if form is None:
        form = G.form() if isinstance(G, GroupSpec) else G.form
    if form is None:
        return False
    order = G.generators[0].order if G.generators else form.order
    form = form.rescale(order) if form.order != order else form
    return all(g.transpose() @ form @ g == form for g in G.generators)


def pointwise_stabilizer(G: FiniteGroup, u: Subspace) -> list[int]:
    """Indices of elements fixing every vector of u."""
    return [
        i for i, g in enumerate(G.elements) if all(g.apply(v) == v for v in u.basis)
    ]


def setwise_stabilizer(G: FiniteGroup, u: Subspace) -> list[int]:
    """Indices of elements with g.u = u."""
    return [i for i, g in enumerate(G.elements) if u.apply(g) == u]


def group_summary(G: FiniteGroup) -> dict:
    return {
        "name": G.name,
        "order": len(G),
        "dim": G.dim,
        "cyclotomic_order": G.order,
        "exponent": G.exponent,
        "sl": check_sl(G),
        "symplectic": check_symplectic(G),
    }

