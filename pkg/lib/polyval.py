"""Sparse polynomials and differential forms over Q(zeta_N), the linear group
action on them, and monomial valuations.

Polynomial text format (round-trips exactly):
    ((1/2) + (1/3)*z^1) * x1^2*x3^1 + (-1/1) * x2^1 + (5/1)
Variables are x1..xn, z is zeta_N. Free-form input such as
"x1^4 + z*x2^4 - 3" is accepted too.

A MonomialValuation attached to an element g of order r lives on g's
eigencoordinates u = P^-1 x, where the columns of P are eigenvectors; the
coordinate u_j has weight a_j with g.u_j = zeta_r^(a_j) u_j. For a polynomial
written in eigencoordinates, v is the minimum of sum(a_j e_j) over its
monomials.
"""

from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy import Symbol

from .cyclo import CycNum, parse_exact, rescale, root_of_unity
from .errors import InvariantViolation, PreconditionError, ValidationError
from .linalg import ExactMatrix, eigenspace
from .weights import element_order, weight_data

logger = logging.getLogger(__name__)

Exps = tuple[int, ...]
EIGEN_CACHE_SIZE = 4096


def _add_exps(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


# ── Polynomials ───────────────────────────────────────────


class SparsePoly:
    """Polynomial in x1..xn with nonzero CycNum coefficients keyed by exponent vector."""

    __slots__ = ("nvars", "order", "terms", "_hash")

    def __init__(self, nvars: int, order: int, terms=None):
        self.nvars = nvars
        self.order = order
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValidationError(f"bad exponent vector {exps} for {nvars} variables")
            if not isinstance(c, CycNum):
                c = CycNum.from_rational(c, order)
            elif c.order != order:
                raise ValidationError(f"coefficient order {c.order} does not match {order}")
            if c:
                clean[exps] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _make(cls, nvars: int, order: int, terms: dict) -> SparsePoly:
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.order = order
        obj.terms = {e: c for e, c in terms.items() if c}
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, nvars: int, order: int) -> SparsePoly:
        return cls._make(nvars, order, {})

    @classmethod
    def constant(cls, value, nvars: int, order: int) -> SparsePoly:
        if not isinstance(value, CycNum):
            value = CycNum.from_rational(value, order)
        return cls._make(nvars, order, {(0,) * nvars: value})

    @classmethod
    def variable(cls, i: int, nvars: int, order: int) -> SparsePoly:
        """x_(i+1); i is 0-based."""
        exps = [0] * nvars
        exps[i] = 1
        return cls._make(nvars, order, {tuple(exps): CycNum.one(order)})

    @classmethod
    def monomial(cls, exps, order: int, coeff=1) -> SparsePoly:
        exps = tuple(exps)
        if not isinstance(coeff, CycNum):
            coeff = CycNum.from_rational(coeff, order)
        return cls._make(len(exps), order, {exps: coeff})

    @classmethod
    def linear(cls, coeffs, order: int) -> SparsePoly:
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                exps = [0] * n
                exps[i] = 1
                terms[tuple(exps)] = c
        return cls._make(n, order, terms)

    # ── Queries ───────────────────────────────────────────

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        if not self.terms:
            raise ValidationError("degree of zero polynomial undefined")
        return max(sum(e) for e in self.terms)

    def constant_term(self) -> CycNum:
        return self.terms.get((0,) * self.nvars, CycNum.zero(self.order))

    def homogeneous_part(self, d: int) -> SparsePoly:
        return SparsePoly._make(
            self.nvars, self.order, {e: c for e, c in self.terms.items() if sum(e) == d}
        )

    def sorted_terms(self) -> list[tuple[Exps, CycNum]]:
        """Graded lexicographic: higher degree first, then larger exponents first."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    # ── Arithmetic ────────────────────────────────────────

    def _check(self, other: SparsePoly):
        if self.nvars != other.nvars:
            raise ValidationError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
        if self.order != other.order:
            raise ValidationError(f"cyclotomic order mismatch: {self.order} vs {other.order}")

    def _lift(self, other):
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, CycNum)):
            return SparsePoly.constant(other, self.nvars, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return SparsePoly._make(self.nvars, self.order, terms)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._make(self.nvars, self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> SparsePoly:
        if not isinstance(c, CycNum):
            c = CycNum.from_rational(c, self.order)
        if not c:
            return SparsePoly.zero(self.nvars, self.order)
        return SparsePoly._make(self.nvars, self.order, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self.scale(other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        self._check(other)
        terms: dict[Exps, CycNum] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exps(e1, e2)
                p = c1 * c2
                terms[e] = terms[e] + p if e in terms else p
        return SparsePoly._make(self.nvars, self.order, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> SparsePoly:
        if k < 0:
            raise ValidationError("negative power of a polynomial")
        result = SparsePoly.constant(1, self.nvars, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self, i: int) -> SparsePoly:
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = c.scale(e[i])
        return SparsePoly._make(self.nvars, self.order, terms)

    def rescale(self, order: int) -> SparsePoly:
        if order == self.order:
            return self
        return SparsePoly._make(
            self.nvars, order, {e: rescale(c, order) for e, c in self.terms.items()}
        )

    # ── Identity ──────────────────────────────────────────

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return (
                self.nvars == other.nvars and self.order == other.order and self.terms == other.terms
            )
        if isinstance(other, (int, Fraction)):
            return self == SparsePoly.constant(other, self.nvars, self.order)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.order, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"SparsePoly({self.to_text()!r}, nvars={self.nvars}, N={self.order})"

    def __str__(self):
        return self.to_text()

    # ── Text ──────────────────────────────────────────────

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            lit = c.to_text()
            if not c.is_rational() or " + " in lit:
                lit = f"({lit})"
            mono = "*".join(f"x{i + 1}^{e}" for i, e in enumerate(exps) if e)
            parts.append(f"{lit} * {mono}" if mono else lit)
        return " + ".join(parts)

    @classmethod
    def from_text(cls, text: str, nvars: int, order: int) -> SparsePoly:
        poly = parse_exact(text, [Symbol(f"x{i + 1}") for i in range(nvars)])
        result = SparsePoly.zero(nvars, order)
        for monom, coeff in poly.terms():
            exps, zpow = tuple(int(e) for e in monom[:-1]), int(monom[-1])
            c = root_of_unity(zpow, order).scale(Fraction(int(coeff.p), int(coeff.q)))
            result = result + SparsePoly._make(nvars, order, {exps: c})
        return result


# ── Differential forms ────────────────────────────────────


class DiffForm:
    """Polynomial-coefficient differential form: sum of f * dx_I over sorted index sets I."""

    __slots__ = ("nvars", "order", "degree", "terms")

    def __init__(self, nvars: int, order: int, degree: int, terms=None):
        self.nvars = nvars
        self.order = order
        self.degree = degree
        clean = {}
        for (idx, exps), c in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree or any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValidationError(f"form indices {idx} must be strictly increasing of length {degree}")
            if not isinstance(c, CycNum):
                c = CycNum.from_rational(c, order)
            if c:
                clean[(idx, tuple(exps))] = c
        self.terms = clean

    @classmethod
    def _make(cls, nvars: int, order: int, degree: int, terms: dict) -> DiffForm:
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.order = order
        obj.degree = degree
        obj.terms = {k: c for k, c in terms.items() if c}
        return obj

    @classmethod
    def from_poly(cls, f: SparsePoly, indices=()) -> DiffForm:
        """f * dx_I."""
        indices = tuple(indices)
        return cls._make(
            f.nvars, f.order, len(indices), {(indices, e): c for e, c in f.terms.items()}
        )

    @classmethod
    def dx(cls, i: int, nvars: int, order: int) -> DiffForm:
        return cls.from_poly(SparsePoly.constant(1, nvars, order), (i,))

    @classmethod
    def volume(cls, nvars: int, order: int) -> DiffForm:
        """dx1 ^ ... ^ dxn."""
        return cls.from_poly(SparsePoly.constant(1, nvars, order), tuple(range(nvars)))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, indices) -> SparsePoly:
        indices = tuple(indices)
        return SparsePoly._make(
            self.nvars, self.order, {e: c for (idx, e), c in self.terms.items() if idx == indices}
        )

    def index_sets(self) -> list[tuple[int, ...]]:
        return sorted({idx for idx, _ in self.terms})

    def __add__(self, other: DiffForm) -> DiffForm:
        if (self.nvars, self.order, self.degree) != (other.nvars, other.order, other.degree):
            raise ValidationError("cannot add forms of different shape or degree")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return DiffForm._make(self.nvars, self.order, self.degree, terms)

    def __neg__(self) -> DiffForm:
        return DiffForm._make(
            self.nvars, self.order, self.degree, {k: -c for k, c in self.terms.items()}
        )

    def __sub__(self, other: DiffForm) -> DiffForm:
        return self + (-other)

    def mul_poly(self, f: SparsePoly) -> DiffForm:
        terms: dict = {}
        for (idx, e1), c1 in self.terms.items():
            for e2, c2 in f.terms.items():
                k = (idx, _add_exps(e1, e2))
                p = c1 * c2
                terms[k] = terms[k] + p if k in terms else p
        return DiffForm._make(self.nvars, self.order, self.degree, terms)

    def __eq__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        return (self.nvars, self.order, self.degree, self.terms) == (
            other.nvars, other.order, other.degree, other.terms,
        )

    def __hash__(self):
        return hash((self.nvars, self.order, self.degree, frozenset(self.terms.items())))

    def __repr__(self):
        parts = []
        for idx in self.index_sets():
            d = "^".join(f"dx{i + 1}" for i in idx) or "1"
            parts.append(f"({self.coefficient(idx).to_text()}) {d}")
        return f"DiffForm({' + '.join(parts) or '0'})"


def _merge_sign(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and sorted union of dx_a ^ dx_b, or None when they overlap."""
    if set(a) & set(b):
        return None
    seq = list(a + b)
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return (-1 if inversions % 2 else 1), tuple(sorted(seq))


def wedge(alpha: DiffForm, beta: DiffForm) -> DiffForm:
    if (alpha.nvars, alpha.order) != (beta.nvars, beta.order):
        raise ValidationError("wedge of forms over different spaces")
    terms: dict = {}
    for (i1, e1), c1 in alpha.terms.items():
        for (i2, e2), c2 in beta.terms.items():
            merged = _merge_sign(i1, i2)
            if merged is None:
                continue
            sign, idx = merged
            k = (idx, _add_exps(e1, e2))
            p = c1 * c2 if sign > 0 else -(c1 * c2)
            terms[k] = terms[k] + p if k in terms else p
    return DiffForm._make(alpha.nvars, alpha.order, alpha.degree + beta.degree, terms)


def differential(obj) -> DiffForm:
    """Exterior derivative of a polynomial (0-form) or a form."""
    if isinstance(obj, SparsePoly):
        obj = DiffForm.from_poly(obj)
    result = DiffForm._make(obj.nvars, obj.order, obj.degree + 1, {})
    for idx in obj.index_sets():
        coeff = obj.coefficient(idx)
        base = DiffForm.from_poly(SparsePoly.constant(1, obj.nvars, obj.order), idx)
        for j in range(obj.nvars):
            dj = coeff.derivative(j)
            if dj:
                result = result + wedge(DiffForm.from_poly(dj, (j,)), base)
    return result


# ── Linear substitution and the group action ──────────────


def substitute_linear(f: SparsePoly, m: ExactMatrix) -> SparsePoly:
    """f(M x): x_i -> sum_j M[i][j] x_j."""
    if m.n != f.nvars:
        raise ValidationError(f"dimension mismatch: matrix {m.n}, polynomial {f.nvars} variables")
    if m.order != f.order:
        raise ValidationError(f"cyclotomic order mismatch: {m.order} vs {f.order}")
    n = f.nvars
    if m.is_monomial():
        targets = []
        for row in m.rows:
            j = next(k for k, e in enumerate(row) if e)
            targets.append((j, row[j]))
        terms: dict[Exps, CycNum] = {}
        for exps, c in f.terms.items():
            ne = [0] * n
            coeff = c
            for i, e in enumerate(exps):
                if e:
                    j, s = targets[i]
                    ne[j] += e
                    if not s.is_one():
                        coeff = coeff * (s ** e)
            k = tuple(ne)
            terms[k] = terms[k] + coeff if k in terms else coeff
        return SparsePoly._make(n, f.order, terms)

    forms = [SparsePoly.linear(row, f.order) for row in m.rows]
    powers: dict[tuple[int, int], SparsePoly] = {}

    def power(i: int, e: int) -> SparsePoly:
        key = (i, e)
        if key not in powers:
            powers[key] = forms[i] if e == 1 else power(i, e - 1) * forms[i]
        return powers[key]

    result = SparsePoly.zero(n, f.order)
    for exps, c in f.terms.items():
        term = SparsePoly.constant(c, n, f.order)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
        result = result + term
    return result


@lru_cache(maxsize=4096)
def _cached_inverse(g: ExactMatrix) -> ExactMatrix:
    return g.inverse()


def act(g: ExactMatrix, f: SparsePoly) -> SparsePoly:
    """(g.f)(x) = f(g^-1 x)."""
    if g.n != f.nvars:
        raise ValidationError(f"dimension mismatch: element {g.n}, polynomial {f.nvars} variables")
    return substitute_linear(f, _cached_inverse(g))


def pullback_form(alpha: DiffForm, m: ExactMatrix) -> DiffForm:
    """Substitute x = M u into a form: coefficients f(M u), dx_i -> sum_j M[i][j] du_j."""
    n = alpha.nvars
    one = SparsePoly.constant(1, n, alpha.order)
    dxs = []
    for row in m.rows:
        form = DiffForm._make(n, alpha.order, 1, {})
        for j, c in enumerate(row):
            if c:
                form = form + DiffForm.from_poly(one.scale(c), (j,))
        dxs.append(form)
    result = DiffForm._make(n, alpha.order, alpha.degree, {})
    for idx in alpha.index_sets():
        piece = DiffForm.from_poly(substitute_linear(alpha.coefficient(idx), m))
        for i in idx:
            piece = wedge(piece, dxs[i])
        result = result + piece
    return result


# ── Monomial valuations ───────────────────────────────────


@dataclass(eq=False)
class MonomialValuation:
    r: int
    weights: tuple[int, ...]
    basis_change: ExactMatrix  # P^-1: ambient -> eigen coordinates
    eigenbasis: ExactMatrix  # P: columns are eigenvectors
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def nvars(self) -> int:
        return len(self.weights)

    @property
    def order(self) -> int:
        return self.eigenbasis.order

    @property
    def weight_gcd(self) -> int:
        """gcd of the weights together with r."""
        return gcd(self.r, *self.weights)

    def is_surjective(self) -> bool:
        """v maps onto Z when the nonzero weights have gcd 1."""
        nonzero = [a for a in self.weights if a]
        return bool(nonzero) and gcd(*nonzero) == 1

    @classmethod
    def from_weights(cls, weights, r: int | None = None, order: int = 1) -> MonomialValuation:
        """A valuation given directly on coordinates (identity basis change)."""
        weights = tuple(int(a) for a in weights)
        r = max(weights, default=0) + 1 if r is None else r
        if any(a < 0 for a in weights):
            raise ValidationError(f"weights must be nonnegative, got {weights}")
        ident = ExactMatrix.identity(len(weights), order)
        return cls(r=r, weights=weights, basis_change=ident, eigenbasis=ident)

    def to_eigen(self, f: SparsePoly) -> SparsePoly:
        """Rewrite f in eigencoordinates, x = P u. Cached per polynomial, oldest entries evicted."""
        if f.order != self.order:
            f = f.rescale(self.order)
        if self.eigenbasis.is_identity():
            return f
        with self._lock:
            hit = self._cache.get(f)
        if hit is not None:
            return hit
        converted = substitute_linear(f, self.eigenbasis)
        with self._lock:
            if len(self._cache) >= EIGEN_CACHE_SIZE:
                del self._cache[next(iter(self._cache))]
            self._cache[f] = converted
        return converted



def from_element(g: ExactMatrix) -> MonomialValuation:
    wd = weight_data(g)
    columns = []
    weights = []
    for a, m in wd.pairs:
        space = eigenspace(g, wd.r, a)
        if space.dim != m:
            raise InvariantViolation(f"weight {a}: eigenspace dim {space.dim} != multiplicity {m}")
        columns.extend(space.basis)
        weights.extend([a] * m)
    p = ExactMatrix.from_columns(columns)
    return MonomialValuation(
        r=wd.r, weights=tuple(weights), basis_change=p.inverse(), eigenbasis=p
    )


def _monomial_weight(weights, exps) -> int:
    return sum(a * e for a, e in zip(weights, exps))


def v_eval(v: MonomialValuation, f: SparsePoly, eigen: bool = False) -> int:
    if f.is_zero():
        raise ValidationError("valuation of zero undefined")
    if f.nvars != v.nvars:
        raise ValidationError(f"polynomial has {f.nvars} variables, valuation {v.nvars}")
    h = f if eigen else v.to_eigen(f)
    return min(_monomial_weight(v.weights, e) for e in h.terms)


def v_eval_rational(
    v: MonomialValuation, numerator: SparsePoly, denominator: SparsePoly, eigen: bool = False
) -> int:
    if denominator.is_zero():
        raise ValidationError("zero denominator")
    return v_eval(v, numerator, eigen) - v_eval(v, denominator, eigen)


def weight_components(g: ExactMatrix, f: SparsePoly) -> dict[int, SparsePoly]:
    """f_a = (1/r) sum_k zeta_r^(-ak) (g^k . f); nonzero components only."""
    r = element_order(g)
    if g.order % r:
        raise PreconditionError(f"element order {r} does not divide session order {g.order}")
    step = g.order // r
    images = []
    power = ExactMatrix.identity(g.n, g.order)
    for _ in range(r):
        images.append(act(power, f))
        power = power @ g
    inv_r = Fraction(1, r)
    components = {}
    for a in range(r):
        total = SparsePoly.zero(f.nvars, f.order)
        for k, img in enumerate(images):
            total = total + img.scale(root_of_unity(-a * k * step, g.order))
        total = total.scale(inv_r)
        if total:
            components[a] = total
    return components


def v_eval_form(v: MonomialValuation, alpha: DiffForm, eigen: bool = True) -> int:
    """min over terms of the coefficient monomial weight plus the weights of the dx's."""
    if alpha.is_zero():
        raise ValidationError("valuation of zero form undefined")
    if not eigen:
        alpha = pullback_form(alpha, v.eigenbasis)
    return min(
        _monomial_weight(v.weights, exps) + sum(v.weights[i] for i in idx)
        for idx, exps in alpha.terms
    )


def discrepancy_V(v: MonomialValuation) -> int:
    total = sum(v.weights)
    via_form = v_eval_form(v, DiffForm.volume(v.nvars, v.order))
    if via_form != total:
        raise InvariantViolation(f"canonical form weight {via_form} != weight sum {total}")
    return total - 1


def discrepancy_X(g: ExactMatrix, v: MonomialValuation | None = None) -> int:
    """disc(v_g / r, X), computed through the ambient volume form."""
    v = from_element(g) if v is None else v
    value = v_eval_form(v, DiffForm.volume(v.nvars, v.order), eigen=False)
    if value % v.r:
        raise PreconditionError(
            f"v_g(volume form) = {value} is not divisible by r = {v.r}: element is not in SL"
        )
    disc = value // v.r - 1
    age = Fraction(sum(v.weights), v.r)
    if age != disc + 1:
        raise InvariantViolation(f"discrepancy {disc} disagrees with age {age}")
    return disc


def check_adic_minimal(n: int, max_weight: int = 4) -> bool:
    """Among weight vectors in [1, max_weight]^n, the all-ones one alone minimizes discrepancy."""
    ones = discrepancy_V(MonomialValuation.from_weights([1] * n))
    for weights in itertools.product(range(1, max_weight + 1), repeat=n):
        d = discrepancy_V(MonomialValuation.from_weights(weights))
        if d < ones or (d == ones and any(a != 1 for a in weights)):
            return False
    return True


def torus_element(v: MonomialValuation, lam: CycNum) -> ExactMatrix:
    """P diag(lam^(-a_j)) P^-1; torus_element(v_g, zeta_r) == g."""
    if lam.order != v.order:
        raise ValidationError(f"scalar order {lam.order} does not match valuation order {v.order}")
    diag = ExactMatrix.diagonal([lam ** (-a) for a in v.weights])
    return v.eigenbasis @ diag @ v.basis_change


def torus_root(v: MonomialValuation, m: int) -> ExactMatrix:
    """torus_element at zeta_m."""
    if v.order % m:
        raise PreconditionError(f"{m} does not divide session order {v.order}")
    return torus_element(v, root_of_unity(v.order // m, v.order))
