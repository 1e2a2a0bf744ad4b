"""Invariant polynomials by group averaging, and the ramification index r_g.

r_g is the index in Z of the value group of v_g on K(V)^G. The value group is
generated by v_g on invariant polynomials, so after seeing invariants up to
degree D we know an upper bound g_hat = gcd of the positive values
(r_g | g_hat). A lower bound comes from the torus of v_g: if
torus(zeta_m) lies in G, every invariant has value divisible by m, and every
value is a multiple of the weight gcd d, so lcm(m, d) | r_g. When the two
bounds meet the certificate is exact.

The inertia group of v_g fixes V^g pointwise, so r_g may be computed over the
pointwise stabilizer H of V^g instead of G; that group is usually much
smaller, and so is the degree needed.
"""

from __future__ import annotations

import itertools
import logging
import threading
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cyclo import lcm, root_of_unity
from .errors import PreconditionError
from .group import FiniteGroup, check_symplectic, pointwise_stabilizer
from .linalg import ExactMatrix, fixed_space
from .polyval import MonomialValuation, SparsePoly, act, from_element
from .workers import pmap

logger = logging.getLogger(__name__)

_cache: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()
_cache_lock = threading.Lock()


@dataclass
class InvariantBasis:
    degree_bound: int
    elements: list[SparsePoly]
    by_degree: dict[int, list[SparsePoly]] = field(default_factory=dict)


@dataclass
class RamificationCertificate:
    r: int
    rg_bound: int
    lower_bound: int
    status: str  # "exact" | "lower-confidence"
    scope: str  # "global" | "local"
    degree: int  # highest invariant degree inspected
    values: list[int] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    @property
    def rg(self) -> int | None:
        return self.rg_bound if self.exact else None

    @property
    def note(self) -> str:
        if self.exact:
            return f"r_g = {self.rg_bound} (r = {self.r})"
        return f"{self.r} | {self.lower_bound} | r_g | {self.rg_bound}"

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "rg": self.rg,
            "rg_bound": self.rg_bound,
            "lower_bound": self.lower_bound,
            "status": self.status,
            "scope": self.scope,
            "degree": self.degree,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, data: dict) -> RamificationCertificate:
        return cls(
            r=data["r"],
            rg_bound=data["rg_bound"],
            lower_bound=data["lower_bound"],
            status=data["status"],
            scope=data["scope"],
            degree=data["degree"],
        )


@dataclass
class ProbeReport:
    r: int
    found: bool
    degree: int
    witness: tuple[SparsePoly, SparsePoly] | None = None
    witness_values: tuple[int, int] | None = None
    difference_gcd: int = 0

    def to_dict(self) -> dict:
        out = {"r": self.r, "found": self.found, "degree": self.degree}
        if self.found:
            out["witness"] = [self.witness[0].to_text(), self.witness[1].to_text()]
            if self.witness_values is not None:
                out["witness_values"] = list(self.witness_values)
        else:
            out["difference_gcd"] = self.difference_gcd
        return out


# ── Averaging ─────────────────────────────────────────────


def reynolds(G: FiniteGroup, f: SparsePoly, threads: int | None = None) -> SparsePoly:
    """(1/|G|) sum over G of g.f, summed in element order."""
    if f.order != G.order:
        f = f.rescale(G.order)
    total = SparsePoly.zero(f.nvars, f.order)
    for img in pmap(lambda g: act(g, f), G.elements, threads):
        total = total + img
    return total.scale(Fraction(1, len(G)))


def _monomials(n: int, d: int):
    for combo in itertools.combinations_with_replacement(range(n), d):
        exps = [0] * n
        for i in combo:
            exps[i] += 1
        yield tuple(exps)


def _pivot(p: SparsePoly):
    return max(p.terms, key=lambda e: (sum(e), e))


def _independent(polys: list[SparsePoly]) -> list[SparsePoly]:
    """Keep the polynomials that are not in the span of the earlier ones."""
    table: dict = {}
    kept = []
    for f in polys:
        p = f
        while p:
            piv = _pivot(p)
            row = table.get(piv)
            if row is None:
                table[piv] = p.scale(p.terms[piv].inverse())
                kept.append(f)
                break
            p = p - row.scale(p.terms[piv])
    return kept


def invariants_of_degree(G: FiniteGroup, d: int, threads: int | None = None) -> list[SparsePoly]:
    """A basis of the degree-d invariants (Reynolds images of monomials)."""
    with _cache_lock:
        hit = _cache.setdefault(G, {}).get(d)
    if hit is not None:
        return hit
    n, order = G.dim, G.order
    if d == 0:
        basis = [SparsePoly.constant(1, n, order)]
    else:
        images = {}
        for exps in _monomials(n, d):
            img = reynolds(G, SparsePoly.monomial(exps, order), threads)
            if img and img not in images:
                images[img] = None
        basis = _independent(list(images))
    logger.debug("degree %d: %d invariants", d, len(basis))
    with _cache_lock:
        _cache[G][d] = basis
    return basis


def invariant_basis(G: FiniteGroup, degree_bound: int, threads: int | None = None) -> InvariantBasis:
    if degree_bound < 1:
        raise PreconditionError(f"degree bound must be >= 1, got {degree_bound}")
    by_degree = {d: invariants_of_degree(G, d, threads) for d in range(degree_bound + 1)}
    elements = [f for d in range(degree_bound + 1) for f in by_degree[d]]
    return InvariantBasis(degree_bound=degree_bound, elements=elements, by_degree=by_degree)


# ── Valuation values on invariants ────────────────────────


def _weight(v: MonomialValuation, exps) -> int:
    return sum(a * e for a, e in zip(v.weights, exps))


def value_witnesses(v: MonomialValuation, polys: list[SparsePoly]) -> dict[int, SparsePoly]:
    """Every value v takes on the span of polys, with a polynomial attaining it.

    Row reduction in eigencoordinates with the lowest-weight monomial as pivot;
    the pivot weights are exactly the attained values.
    """
    table: dict = {}
    witnesses: dict[int, SparsePoly] = {}

    def low(p: SparsePoly):
        return min(p.terms, key=lambda e: (_weight(v, e), e))

    for f in polys:
        p, amb = v.to_eigen(f), f
        while p:
            piv = low(p)
            row = table.get(piv)
            if row is None:
                inv = p.terms[piv].inverse()
                table[piv] = (p.scale(inv), amb.scale(inv))
                witnesses.setdefault(_weight(v, piv), amb)
                break
            c = p.terms[piv]
            p = p - row[0].scale(c)
            amb = amb - row[1].scale(c)
    return witnesses


# ── Ramification index ────────────────────────────────────


def _torus_in_group(G: FiniteGroup, v: MonomialValuation, m: int) -> bool:
    """Is torus(zeta_m) an element of G? Checked column by column on the eigenbasis."""
    step = G.order // m
    columns = [v.eigenbasis.column(j) for j in range(v.nvars)]
    scaled = [
        tuple(x * root_of_unity(-a * step, G.order) for x in col)
        for col, a in zip(columns, v.weights)
    ]
    return any(
        all(h.apply(col) == target for col, target in zip(columns, scaled))
        for h in G.elements
    )


def inertia_lower_bound(G: FiniteGroup, v: MonomialValuation) -> int:
    """lcm(m, d): m largest with torus(zeta_m) in G, d the weight gcd.

    The m with torus(zeta_m) in G form the divisors of one m*, and
    torus(zeta_r) = g, so only multiples of r need testing.
    """
    m = v.r
    for cand in sorted((c for c in range(v.r, G.order + 1, v.r) if G.order % c == 0), reverse=True):
        if _torus_in_group(G, v, cand):
            m = cand
            break
    nonzero = [a for a in v.weights if a]
    d = gcd(*nonzero) if nonzero else 1
    return lcm(m, d)


def local_group(G: FiniteGroup, g: ExactMatrix) -> FiniteGroup:
    """Pointwise stabilizer of V^g."""
    idx = pointwise_stabilizer(G, fixed_space(g))
    if len(idx) == len(G):
        return G
    return G.subgroup(idx)


def compute_rg(
    G: FiniteGroup,
    g: ExactMatrix,
    degree_bound: int | None = None,
    threads: int | None = None,
    localize: bool = True,
) -> RamificationCertificate:
    r = G.orders[G.index_of(g)]
    if r == 1:
        return RamificationCertificate(
            r=1, rg_bound=1, lower_bound=1, status="exact", scope="global", degree=0
        )
    v = from_element(g)
    lower = inertia_lower_bound(G, v)
    H = local_group(G, g) if localize else G
    scope = "local" if len(H) < len(G) else "global"
    bound = len(H) if degree_bound is None else degree_bound
    hard_cap = 4 * len(H) if degree_bound is None else bound
    ghat = 0
    values: set[int] = set()
    d = 0
    while True:
        while d < bound and ghat != lower:
            d += 1
            found = value_witnesses(v, invariants_of_degree(H, d, threads))
            for val in found:
                if val > 0:
                    values.add(val)
                    ghat = gcd(ghat, val)
            logger.debug("class r=%d degree %d: g_hat=%d lower=%d", r, d, ghat, lower)
        if ghat == lower or bound >= hard_cap:
            break
        bound = min(2 * bound, hard_cap)
        logger.info("escalating degree bound to %d", bound)
    if ghat == 0:
        raise PreconditionError(f"degree bound too small: no invariant with positive value up to degree {d}")
    status = "exact" if ghat == lower else "lower-confidence"
    if status != "exact":
        logger.warning("r_g inconclusive for element of order %d: %d | r_g | %d", r, lower, ghat)
    return RamificationCertificate(
        r=r,
        rg_bound=ghat,
        lower_bound=lower,
        status=status,
        scope=scope,
        degree=d,
        values=sorted(values),
    )


def check_rg_lemma(G: FiniteGroup, g: ExactMatrix, degree_bound: int | None = None) -> bool | None:
    """True if r_g = r is certified, False if refuted, None if inconclusive."""
    if not check_symplectic(G):
        raise PreconditionError("the r_g = r check needs a symplectic group")
    try:
        cert = compute_rg(G, g, degree_bound)
    except PreconditionError:
        return None
    if cert.exact:
        return cert.rg_bound == cert.r
    if cert.lower_bound > cert.r:
        return False
    return None


def conjecture_probe(G: FiniteGroup, g: ExactMatrix, degree_bound: int | None = None) -> ProbeReport:
    """Search G-invariant polynomials f, h with v_g(f) - v_g(h) = r."""
    r = G.orders[G.index_of(g)]
    n, order = G.dim, G.order
    if r == 1:
        # any nonconstant invariant over 1 will do; no value gap is needed
        x1 = SparsePoly.variable(0, n, order)
        one = SparsePoly.constant(1, n, order)
        return ProbeReport(r=1, found=True, degree=1, witness=(x1, one))
    v = from_element(g)
    bound = len(G) if degree_bound is None else degree_bound
    seen: dict[int, SparsePoly] = {}
    diff_gcd = 0
    for d in range(bound + 1):
        for val, f in value_witnesses(v, invariants_of_degree(G, d)).items():
            if val in seen:
                continue
            for other, h in seen.items():
                diff_gcd = gcd(diff_gcd, abs(val - other))
            seen[val] = f
        for val, f in sorted(seen.items()):
            if val - r in seen:
                return ProbeReport(
                    r=r, found=True, degree=d, witness=(f, seen[val - r]),
                    witness_values=(val, val - r), difference_gcd=diff_gcd,
                )
    logger.info("no witness up to degree %d; value differences have gcd %d", bound, diff_gcd)
    return ProbeReport(r=r, found=False, degree=bound, difference_gcd=diff_gcd)

