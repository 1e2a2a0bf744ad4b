"""Exact arithmetic in the cyclotomic field Q(zeta_N).

A CycNum stores its coefficients in the power basis 1, z, ..., z^(phi(N)-1)
(z = zeta_N), reduced modulo the N-th cyclotomic polynomial, so two values
are equal exactly when their coefficient tuples are equal. Coefficients are
`fractions.Fraction`, which keeps them gcd-normalized with a positive
denominator after every operation.

Mixing orders is an error; go through `rescale` explicitly.

Text literal form (also used inside polynomial text):
    (p/q)*z^k + (p/q)*z^j + ...
JSON form:
    [N, [[p0, q0], [p1, q1], ...]]
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from tokenize import TokenError

from sympy import QQ, Poly, Rational, Symbol, SympifyError, cyclotomic_poly, totient
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.polyerrors import BasePolynomialError

from .errors import PreconditionError, ValidationError

logger = logging.getLogger(__name__)

Z = Symbol("z")
_ZERO = Fraction(0)
_ONE = Fraction(1)
_TRANSFORMS = standard_transformations + (convert_xor,)
# integers, z, x<k>, arithmetic and parentheses; nothing else reaches parse_expr
_LITERAL = re.compile(r"[\s0-9xz+\-*/^()]*")
_BARE_X = re.compile(r"x(?![1-9])")
_VARIABLE = re.compile(r"x(\d+)")
_PARSE_ERRORS = (
    SyntaxError, TypeError, ValueError, ZeroDivisionError, AttributeError, NameError,
    TokenError, SympifyError, BasePolynomialError,
)


def parse_exact(text: str, variables: list[Symbol], what: str = "polynomial") -> Poly:
    """Parse literal text over Q in `variables` and z into a Poly with gens (*variables, z)."""
    if not isinstance(text, str) or not text.strip():
        raise ValidationError(f"bad {what} text {text!r}: empty")
    if not _LITERAL.fullmatch(text) or _BARE_X.search(text):
        raise ValidationError(f"bad {what} text {text!r}: only x<k>, z, integers, + - * / ^ ( )")
    names = {s.name for s in variables}
    for k in _VARIABLE.findall(text):
        if f"x{k}" not in names:
            raise ValidationError(f"bad {what} text {text!r}: unknown variable x{k}")
    local = {s.name: s for s in variables}
    local["z"] = Z
    try:
        expr = parse_expr(text.strip(), local_dict=local, transformations=_TRANSFORMS)
        return Poly(expr, *variables, Z, domain=QQ)
    except _PARSE_ERRORS as e:
        raise ValidationError(f"bad {what} text {text!r}: {e}") from e



@dataclass(frozen=True)
class CyclotomicField:
    order: int
    phi: int
    modulus: tuple[int, ...]  # c_0..c_{phi-1} of the monic Phi_N


@lru_cache(maxsize=None)
def field(order: int) -> CyclotomicField:
    if not isinstance(order, int) or order <= 0:
        raise PreconditionError(f"cyclotomic order must be a positive integer, got {order!r}")
    poly = cyclotomic_poly(order, Z, polys=True)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    return CyclotomicField(order=order, phi=int(totient(order)), modulus=tuple(coeffs[:-1]))


@lru_cache(maxsize=None)
def _modulus_poly(order: int) -> Poly:
    return Poly(cyclotomic_poly(order, Z), Z, domain=QQ)


def _reduce(order: int, coeffs) -> tuple[Fraction, ...]:
    """Remainder of sum(coeffs[k] z^k) modulo Phi_N, as a phi-length tuple."""
    fld = field(order)
    phi, low = fld.phi, fld.modulus
    work = list(coeffs)
    for k in range(len(work) - 1, phi - 1, -1):
        c = work[k]
        if c:
            base = k - phi
            for j, m in enumerate(low):
                if m:
                    work[base + j] -= c * m
    if len(work) < phi:
        work.extend([_ZERO] * (phi - len(work)))
    return tuple(Fraction(c) for c in work[:phi])


class CycNum:
    """An element of Q(zeta_N). Immutable."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs):
        fld = field(order)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != fld.phi:
            raise ValidationError(
                f"CycNum of order {order} needs {fld.phi} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _make(cls, order: int, coeffs: tuple[Fraction, ...]) -> CycNum:
        obj = object.__new__(cls)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coeffs", coeffs)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CycNum is immutable")

    # ── Constructors ──────────────────────────────────────

    @classmethod
    def from_rational(cls, value, order: int) -> CycNum:
        phi = field(order).phi
        return cls._make(order, (Fraction(value),) + (_ZERO,) * (phi - 1))

    @classmethod
    def zero(cls, order: int) -> CycNum:
        return cls.from_rational(0, order)

    @classmethod
    def one(cls, order: int) -> CycNum:
        return cls.from_rational(1, order)

    # ── Predicates ────────────────────────────────────────

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise PreconditionError(f"{self} is not rational")
        return self.coeffs[0]

    def __bool__(self) -> bool:
        return any(self.coeffs)

    # ── Arithmetic ────────────────────────────────────────

    def _coerce(self, other):
        if isinstance(other, CycNum):
            if other.order != self.order:
                raise ValidationError(
                    f"cyclotomic order mismatch: {self.order} vs {other.order} (rescale first)"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.from_rational(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycNum._make(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum._make(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycNum._make(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q) -> CycNum:
        q = Fraction(q)
        if not q:
            return CycNum.zero(self.order)
        return CycNum._make(self.order, tuple(a * q for a in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not any(a[1:]):
            return other.scale(a[0])
        if not any(b[1:]):
            return self.scale(b[0])
        b_nz = [(j, y) for j, y in enumerate(b) if y]
        prod = [_ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in b_nz:
                    prod[i + j] += x * y
        return CycNum._make(self.order, _reduce(self.order, prod))

    __rmul__ = __mul__

    def inverse(self) -> CycNum:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CycNum.from_rational(1 / self.coeffs[0], self.order)
        poly = Poly.from_list(
            [Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)], Z, domain=QQ
        )
        inv = poly.invert(_modulus_poly(self.order))
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
        return CycNum._make(self.order, _reduce(self.order, coeffs))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int) -> CycNum:
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNum.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> CycNum:
        """Image under z -> z^-1 (complex conjugation)."""
        total = CycNum.zero(self.order)
        for i, c in enumerate(self.coeffs):
            if c:
                total = total + root_of_unity(-i, self.order).scale(c)
        return total

    # ── Identity ──────────────────────────────────────────

    def __eq__(self, other):
        if isinstance(other, CycNum):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            # rational values hash like the int or Fraction they compare equal to
            value = self.coeffs[0] if self.is_rational() else (self.order, self.coeffs)
            object.__setattr__(self, "_hash", hash(value))
        return self._hash

    def __repr__(self):
        return f"CycNum({self.order}, {self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    # ── Serialization ─────────────────────────────────────

    def to_text(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            lit = f"({c.numerator}/{c.denominator})"
            terms.append(lit if k == 0 else f"{lit}*z^{k}")
        return " + ".join(terms) if terms else "0"

    @classmethod
    def from_text(cls, text: str, order: int) -> CycNum:
        poly = parse_exact(text, [], "cyclotomic literal")
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
        return cls._make(order, _reduce(order, coeffs))

    def to_pairs(self) -> list[list[int]]:
        return [[c.numerator, c.denominator] for c in self.coeffs]

    def to_json(self) -> list:
        return [self.order, self.to_pairs()]

    @classmethod
    def from_json(cls, data, order: int | None = None) -> CycNum:
        """Accept [N, pairs], a bare pair list (N implied), or an integer."""
        if isinstance(data, bool):
            raise ValidationError(f"bad cyclotomic literal {data!r}")
        if isinstance(data, int):
            if order is None:
                raise ValidationError("integer literal needs an implied cyclotomic order")
            return cls.from_rational(data, order)
        if not isinstance(data, list):
            raise ValidationError(f"bad cyclotomic literal {data!r}")
        if len(data) == 2 and isinstance(data[0], int) and isinstance(data[1], list):
            n, pairs = data
            if order is not None and n != order:
                raise ValidationError(f"literal has order {n}, expected {order}")
            order = n
        else:
            pairs = data
        if order is None:
            raise ValidationError("coefficient list needs an implied cyclotomic order")
        phi = field(order).phi
        if len(pairs) > phi:
            raise ValidationError(f"literal has {len(pairs)} coefficients, order {order} allows {phi}")
        coeffs = []
        for pair in pairs:
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
                or pair[1] == 0
            ):
                raise ValidationError(f"bad rational pair {pair!r}")
            coeffs.append(Fraction(pair[0], pair[1]))
        coeffs.extend([_ZERO] * (phi - len(coeffs)))
        return cls._make(order, tuple(coeffs))


# ── Module-level operations ───────────────────────────────


def add(a: CycNum, b: CycNum) -> CycNum:
    return a + b


def mul(a: CycNum, b: CycNum) -> CycNum:
    return a * b


def inverse(a: CycNum) -> CycNum:
    return a.inverse()


@lru_cache(maxsize=4096)
def root_of_unity(k: int, order: int) -> CycNum:
    """zeta_N^(k mod N) in canonical form."""
    if not isinstance(order, int) or order <= 0:
        raise PreconditionError(f"root of unity needs N > 0, got {order!r}")
    k %= order
    coeffs = [_ZERO] * k + [_ONE]
    return CycNum._make(order, _reduce(order, coeffs))


def rescale(a: CycNum, order: int) -> CycNum:
    """View a in Q(zeta_N') via zeta_N -> zeta_N'^(N'/N)."""
    if order <= 0 or order % a.order:
        raise ValidationError(f"cannot rescale order {a.order} to {order}: {a.order} does not divide it")
    if order == a.order:
        return a
    step = order // a.order
    coeffs = [_ZERO] * (step * (len(a.coeffs) - 1) + 1)
    for i, c in enumerate(a.coeffs):
        coeffs[i * step] = c
    return CycNum._make(order, _reduce(order, coeffs))


def multiplicative_order(a: CycNum, limit: int | None = None) -> int:
    """Smallest m >= 1 with a^m = 1; raises if none up to limit (default N)."""
    limit = a.order if limit is None else limit
    power = a
    for m in range(1, limit + 1):
        if power.is_one():
            return m
        power = power * a
    raise PreconditionError(f"{a} is not a root of unity of order <= {limit}")


def lcm(*values: int) -> int:
    result = 1
    for v in values:
        result = result * v // gcd(result, v)
    return result
