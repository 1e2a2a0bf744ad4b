"""The stratification of V by fixed subspaces V^H, up to G-conjugacy.

Subgroups are never enumerated: V^H is the intersection of the V^h for h in
H, so the lattice of fixed spaces of elements closed under intersection gives
every V^H. Conjugate subspaces give the same stratum of X = V/G, so nodes are
G-orbits of subspaces.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvariantViolation
from .group import ClassRecord, FiniteGroup, check_symplectic, orbit_threshold, pointwise_stabilizer
from .linalg import Subspace, fixed_space, is_symplectic_subspace
from .weights import classify
from .workers import pmap

logger = logging.getLogger(__name__)


@dataclass
class StratumNode:
    index: int
    subspace: Subspace  # canonical representative of the orbit
    dim: int
    orbit_size: int
    setwise_order: int  # |Stab(V^H)|
    pointwise_order: int  # |Fix(V^H)|
    classes: list[int] = field(default_factory=list)

    @property
    def quotient_order(self) -> int:
        """|G_0| with X_H = V^H / G_0."""
        return self.setwise_order // self.pointwise_order

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "dim": self.dim,
            "orbit_size": self.orbit_size,
            "setwise_stabilizer": self.setwise_order,
            "pointwise_stabilizer": self.pointwise_order,
            "quotient_order": self.quotient_order,
            "classes": list(self.classes),
        }


@dataclass
class StrataPoset:
    nodes: list[StratumNode]
    order: set[tuple[int, int]]  # (i, j): node i lies in a conjugate of node j, i != j
    members: dict = field(default_factory=dict, repr=False)  # subspace key -> node index

    def node_of(self, u: Subspace) -> StratumNode:
        return self.nodes[self.members[u.key()]]

    def below(self, j: int) -> list[int]:
        return sorted(i for i, k in self.order if k == j)

    def contains_conjugate(self, u: Subspace) -> bool:
        return u.key() in self.members


def _orbit(G: FiniteGroup, u: Subspace, threads: int | None = None) -> dict:
    if len(G) <= orbit_threshold():
        images = pmap(lambda h: u.apply(h), G.elements, threads)
        return {w.key(): w for w in images}
    orbit = {u.key(): u}
    work = [u]
    while work:
        w = work.pop()
        for s in G.generators:
            x = w.apply(s)
            if x.key() not in orbit:
                orbit[x.key()] = x
                work.append(x)
    return orbit


def build_strata(
    G: FiniteGroup,
    classes: list[ClassRecord] | None = None,
    threads: int | None = None,
) -> StrataPoset:
    classes = classify(G, threads=threads) if classes is None else classes
    n, order = G.dim, G.order
    fixed = pmap(lambda c: fixed_space(c.representative), classes, threads)

    orbits: list[dict] = []
    members: dict = {}
    pending = [Subspace.full(n, order)] + list(fixed)
    while pending:
        u = pending.pop(0)
        if u.key() in members:
            continue
        orb = _orbit(G, u, threads)
        idx = len(orbits)
        orbits.append(orb)
        for k in orb:
            members[k] = idx
        # intersect the new representative with every known member, its own orbit included
        for other in orbits:
            for w in other.values():
                x = u.intersect(w)
                if x.key() not in members:
                    pending.append(x)

    reps = [min(orb.values(), key=Subspace.key) for orb in orbits]
    ranking = sorted(range(len(orbits)), key=lambda i: (-reps[i].dim, reps[i].key()))
    renumber = {old: new for new, old in enumerate(ranking)}

    nodes = []
    for new, old in enumerate(ranking):
        u = reps[old]
        size = len(orbits[old])
        nodes.append(
            StratumNode(
                index=new,
                subspace=u,
                dim=u.dim,
                orbit_size=size,
                setwise_order=len(G) // size,
                pointwise_order=len(pointwise_stabilizer(G, u)),
            )
        )
    members = {k: renumber[i] for k, i in members.items()}
    for c, u in zip(classes, fixed):
        nodes[members[u.key()]].classes.append(c.index)

    relation = set()
    for i, a in enumerate(nodes):
        for j, b in enumerate(nodes):
            if i != j and a.dim < b.dim:
                if any(w.contains_subspace(a.subspace) for w in orbits[ranking[j]].values()):
                    relation.add((i, j))
    logger.info("%d strata", len(nodes))
    return StrataPoset(nodes=nodes, order=relation, members=members)


def stratum_of_class(poset: StrataPoset, c: ClassRecord) -> StratumNode:
    return poset.node_of(fixed_space(c.representative))


@dataclass(frozen=True)
class CyclePrediction:
    codim_Xg: int
    predicted_codim_Zg: Fraction

    def to_dict(self) -> dict:
        return {"codim_Xg": self.codim_Xg, "predicted_codim_Zg": _num(self.predicted_codim_Zg)}


def maximal_cycle_prediction(c: ClassRecord) -> CyclePrediction:
    """codim X_g and the predicted codim Z_g = age; the latter must be half the former."""
    codim = c.representative.n - c.fixed_dim
    if 2 * c.age != codim:
        raise InvariantViolation(
            f"class {c.index}: age {c.age} is not half of codim X_g = {codim}"
        )
    return CyclePrediction(codim_Xg=codim, predicted_codim_Zg=c.age)


@dataclass(frozen=True)
class SemismallRow:
    stratum: int
    dim: int
    bound: Fraction  # codim(Y_H) >= bound = codim(X_H) / 2
    classes: tuple[int, ...]

    @property
    def contribution(self) -> int:
        """Dimension this stratum adds to H_c^(n+k)(Y), k = dim X_H."""
        return len(self.classes)

    def to_dict(self) -> dict:
        return {
            "stratum": self.stratum,
            "dim": self.dim,
            "bound": _num(self.bound),
            "classes": list(self.classes),
            "contribution": self.contribution,
        }


def semismall_table(
    G: FiniteGroup,
    poset: StrataPoset | None = None,
    classes: list[ClassRecord] | None = None,
) -> list[SemismallRow]:
    if not check_symplectic(G):
        logger.warning("group is not symplectic: semismall bounds are conjectural only")
    poset = build_strata(G, classes) if poset is None else poset
    return [
        SemismallRow(
            stratum=node.index,
            dim=node.dim,
            bound=Fraction(G.dim - node.dim, 2),
            classes=tuple(node.classes),
        )
        for node in poset.nodes
    ]


def strata_symplectic(poset: StrataPoset, G: FiniteGroup) -> bool:
    """Every node subspace is a symplectic subspace for the group's form."""
    if G.form is None:
        return False
    return all(is_symplectic_subspace(node.subspace, G.form) for node in poset.nodes)


def _num(q: Fraction):
    return int(q) if q.denominator == 1 else str(q)
