"""Exact linear algebra over Q(zeta_N).

Matrices are small (n <= ~20) and dense in storage, but most group elements
we meet are monomial, so products skip zero entries.

Weight convention: the weight-a subspace of g (order r) is the eigenspace for
the eigenvalue zeta_r^(-a). Weights are read on linear functions, not on
vectors, so a coordinate function u on V_a satisfies g.u = zeta_r^a u.
"""

from __future__ import annotations

import logging
from fractions import Fraction

from .cyclo import CycNum, rescale, root_of_unity
from .errors import InvariantViolation, PreconditionError, ValidationError

logger = logging.getLogger(__name__)

Vector = tuple[CycNum, ...]


class ExactMatrix:
    """Square n x n matrix of CycNum sharing one cyclotomic order. Immutable."""

    __slots__ = ("n", "order", "rows", "_key", "_hash")

    def __init__(self, rows, order: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0:
            raise ValidationError("matrix must have at least one row")
        if any(len(r) != n for r in rows):
            raise ValidationError(f"matrix is not square: row lengths {[len(r) for r in rows]}")
        if order is None:
            order = next((e.order for r in rows for e in r if isinstance(e, CycNum)), 1)
        rows = tuple(tuple(_as_cyc(e, order) for e in r) for r in rows)
        self.n = n
        self.order = order
        self.rows = rows
        self._key = None
        self._hash = None

    @classmethod
    def _trusted(cls, rows, order: int) -> ExactMatrix:
        obj = object.__new__(cls)
        obj.rows = tuple(tuple(r) for r in rows)
        obj.n = len(obj.rows)
        obj.order = order
        obj._key = None
        obj._hash = None
        return obj

    @classmethod
    def identity(cls, n: int, order: int) -> ExactMatrix:
        return cls.scalar(n, CycNum.one(order))

    @classmethod
    def zero(cls, n: int, order: int) -> ExactMatrix:
        return cls.scalar(n, CycNum.zero(order))

    @classmethod
    def scalar(cls, n: int, value: CycNum) -> ExactMatrix:
        zero = CycNum.zero(value.order)
        return cls([[value if i == j else zero for j in range(n)] for i in range(n)], value.order)

    @classmethod
    def diagonal(cls, values) -> ExactMatrix:
        values = list(values)
        order = values[0].order
        zero = CycNum.zero(order)
        n = len(values)
        return cls([[values[i] if i == j else zero for j in range(n)] for i in range(n)], order)

    @classmethod
    def from_columns(cls, columns) -> ExactMatrix:
        columns = list(columns)
        return cls([[col[i] for col in columns] for i in range(len(columns))])

    # ── Identity ──────────────────────────────────────────

    def key(self) -> tuple:
        """Canonical hashable form: the reduced coefficient vectors of every entry."""
        if self._key is None:
            self._key = tuple(e.coeffs for r in self.rows for e in r)
        return self._key

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.order == other.order and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.order, self.key()))
        return self._hash

    def __repr__(self):
        return f"ExactMatrix(n={self.n}, N={self.order}, rows={[[str(e) for e in r] for r in self.rows]})"

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def is_identity(self) -> bool:
        return all(
            (e.is_one() if i == j else e.is_zero())
            for i, r in enumerate(self.rows)
            for j, e in enumerate(r)
        )

    def is_monomial(self) -> bool:
        """Exactly one nonzero entry in every row and column."""
        cols = set()
        for r in self.rows:
            nz = [j for j, e in enumerate(r) if e]
            if len(nz) != 1:
                return False
            cols.add(nz[0])
        return len(cols) == self.n

    # ── Arithmetic ────────────────────────────────────────

    def _check(self, other: ExactMatrix):
        if self.n != other.n:
            raise ValidationError(f"shape mismatch: {self.n}x{self.n} vs {other.n}x{other.n}")
        if self.order != other.order:
            raise ValidationError(f"cyclotomic order mismatch: {self.order} vs {other.order}")

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        return matmul(self, other)

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._check(other)
        return ExactMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], self.order
        )

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        self._check(other)
        return ExactMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], self.order
        )

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix([[-a for a in r] for r in self.rows], self.order)

    def scale(self, c: CycNum) -> ExactMatrix:
        return ExactMatrix([[c * a for a in r] for r in self.rows], self.order)

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(list(zip(*self.rows)), self.order)

    def trace(self) -> CycNum:
        total = CycNum.zero(self.order)
        for i in range(self.n):
            total = total + self.rows[i][i]
        return total

    def apply(self, v: Vector) -> Vector:
        """Matrix times column vector."""
        zero = CycNum.zero(self.order)
        out = []
        for r in self.rows:
            acc = zero
            for a, x in zip(r, v):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def power(self, k: int) -> ExactMatrix:
        if k < 0:
            return self.inverse().power(-k)
        result = ExactMatrix.identity(self.n, self.order)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def det(self) -> CycNum:
        return det(self)

    def inverse(self) -> ExactMatrix:
        return inverse(self)

    def rescale(self, order: int) -> ExactMatrix:
        if order == self.order:
            return self
        return ExactMatrix([[rescale(e, order) for e in r] for r in self.rows], order)

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    # ── Serialization ─────────────────────────────────────

    def to_json(self) -> list:
        return [[e.to_pairs() for e in r] for r in self.rows]

    @classmethod
    def from_json(cls, data, order: int, n: int | None = None) -> ExactMatrix:
        if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
            raise ValidationError("matrix must be a non-empty list of rows")
        if n is not None and (len(data) != n or any(len(r) != n for r in data)):
            raise ValidationError(f"matrix dimension mismatch: expected {n}x{n}")
        return cls([[CycNum.from_json(e, order) for e in r] for r in data], order)


def _as_cyc(value, order: int) -> CycNum:
    if isinstance(value, CycNum):
        if value.order != order:
            raise ValidationError(f"cyclotomic order mismatch in matrix: {value.order} vs {order}")
        return value
    if isinstance(value, (int, Fraction)):
        return CycNum.from_rational(value, order)
    raise ValidationError(f"bad matrix entry {value!r}")


# ── Matrix operations ─────────────────────────────────────


def matmul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    a._check(b)
    n = a.n
    zero = CycNum.zero(a.order)
    b_rows_nz = [[(j, y) for j, y in enumerate(row) if y] for row in b.rows]
    out = []
    for row in a.rows:
        acc = [zero] * n
        for k, x in enumerate(row):
            if not x:
                continue
            for j, y in b_rows_nz[k]:
                acc[j] = acc[j] + x * y
        out.append(acc)
    return ExactMatrix._trusted(out, a.order)


def det(a: ExactMatrix) -> CycNum:
    """Bareiss fraction-free elimination."""
    n = a.n
    m = [list(r) for r in a.rows]
    sign = 1
    prev = CycNum.one(a.order)
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return CycNum.zero(a.order)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        prev_inv = prev.inverse()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (pivot * m[i][j] - m[i][k] * m[k][j]) * prev_inv
        prev = pivot
    result = m[n - 1][n - 1]
    return -result if sign < 0 else result


def inverse(a: ExactMatrix) -> ExactMatrix:
    """Gauss-Jordan inverse; raises ValidationError for a singular matrix."""
    n = a.n
    one, zero = CycNum.one(a.order), CycNum.zero(a.order)
    m = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(a.rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col]), None)
        if piv is None:
            raise ValidationError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [e * inv for e in m[col]]
        for i in range(n):
            f = m[i][col]
            if i != col and f:
                m[i] = [e - f * p if p else e for e, p in zip(m[i], m[col])]
    return ExactMatrix([r[n:] for r in m], a.order)


# ── Row reduction and subspaces ───────────────────────────


def rref(rows, order: int) -> list[list[CycNum]]:
    """Reduced row echelon form with unit pivots; zero rows dropped."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return []
    width = len(m[0])
    out_row = 0
    for col in range(width):
        piv = next((i for i in range(out_row, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[out_row], m[piv] = m[piv], m[out_row]
        lead = m[out_row][col]
        if not lead.is_one():
            inv = lead.inverse()
            m[out_row] = [e * inv for e in m[out_row]]
        pivot_row = m[out_row]
        for i in range(len(m)):
            f = m[i][col]
            if i != out_row and f:
                m[i] = [e - f * p if p else e for e, p in zip(m[i], pivot_row)]
        out_row += 1
        if out_row == len(m):
            break
    return [r for r in m[:out_row]]


def nullspace(rows, n: int, order: int) -> Subspace:
    """Solutions x of R x = 0 for the given row vectors R (each of length n)."""
    reduced = rref(rows, order)
    pivots = []
    for r in reduced:
        pivots.append(next(j for j, e in enumerate(r) if e))
    free = [j for j in range(n) if j not in set(pivots)]
    one, zero = CycNum.one(order), CycNum.zero(order)
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for r, p in zip(reduced, pivots):
            v[p] = -r[f]
        basis.append(v)
    return Subspace.span(basis, n, order)


class Subspace:
    """Subspace of Q(zeta_N)^n, stored by its reduced row echelon basis.

    Equal subspaces have identical stored bases, so `key()` is canonical.
    """

    __slots__ = ("ambient_dim", "order", "basis", "_key")

    def __init__(self, ambient_dim: int, order: int, basis: tuple[Vector, ...]):
        self.ambient_dim = ambient_dim
        self.order = order
        self.basis = basis
        self._key = None

    @classmethod
    def span(cls, vectors, n: int, order: int) -> Subspace:
        reduced = rref([tuple(_as_cyc(e, order) for e in v) for v in vectors], order)
        return cls(n, order, tuple(tuple(r) for r in reduced))

    @classmethod
    def full(cls, n: int, order: int) -> Subspace:
        return cls.span(ExactMatrix.identity(n, order).rows, n, order)

    @classmethod
    def zero(cls, n: int, order: int) -> Subspace:
        return cls(n, order, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.ambient_dim, tuple(e.coeffs for v in self.basis for e in v))
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def annihilator(self) -> Subspace:
        """Vectors w with sum(u_i w_i) = 0 for every u in self."""
        return nullspace(self.basis, self.ambient_dim, self.order)

    def intersect(self, other: Subspace) -> Subspace:
        if self.dim == self.ambient_dim:
            return other
        if other.dim == other.ambient_dim:
            return self
        rows = self.annihilator().basis + other.annihilator().basis
        return nullspace(rows, self.ambient_dim, self.order)

    def apply(self, g: ExactMatrix) -> Subspace:
        """The image g.U."""
        return Subspace.span([g.apply(v) for v in self.basis], self.ambient_dim, self.order)

    def contains(self, v) -> bool:
        return Subspace.span(self.basis + (tuple(v),), self.ambient_dim, self.order).dim == self.dim

    def contains_subspace(self, other: Subspace) -> bool:
        if other.dim > self.dim:
            return False
        return Subspace.span(self.basis + other.basis, self.ambient_dim, self.order).dim == self.dim

    def to_json(self) -> list:
        return [[e.to_pairs() for e in v] for v in self.basis]


def kernel(a: ExactMatrix) -> Subspace:
    return nullspace(a.rows, a.n, a.order)


def fixed_space(g: ExactMatrix) -> Subspace:
    return kernel(g - ExactMatrix.identity(g.n, g.order))


def _check_finite_order(g: ExactMatrix, r: int):
    if r <= 0 or g.order % r:
        raise PreconditionError(f"order {r} does not divide the session cyclotomic order {g.order}")
    if not g.power(r).is_identity():
        raise PreconditionError(f"g^{r} is not the identity")


def eigenvalue(r: int, a: int, order: int) -> CycNum:
    """zeta_r^(-a) in Q(zeta_order); the eigenvalue carried by weight a."""
    return root_of_unity(-a * (order // r), order)


def eigenspace(g: ExactMatrix, r: int, a: int) -> Subspace:
    """Weight-a subspace of g: the eigenspace for zeta_r^(-a)."""
    _check_finite_order(g, r)
    lam = eigenvalue(r, a, g.order)
    return kernel(g - ExactMatrix.scalar(g.n, lam))


def weight_multiplicities(g: ExactMatrix, r: int, *, checked: bool = False) -> list[int]:
    """dim of every weight space, a = 0..r-1, by the projector trace formula."""
    if not checked:
        _check_finite_order(g, r)
    step = g.order // r
    traces = []
    power = ExactMatrix.identity(g.n, g.order)
    for _ in range(r):
        traces.append(power.trace())
        power = power @ g
    mults = []
    for a in range(r):
        total = CycNum.zero(g.order)
        for k, t in enumerate(traces):
            if t:
                total = total + root_of_unity(a * k * step, g.order) * t
        value = total.scale(Fraction(1, r))
        if not value.is_rational():
            raise InvariantViolation(f"projector trace for weight {a} is irrational: {value}")
        q = value.to_fraction()
        if q.denominator != 1 or q < 0:
            raise InvariantViolation(f"projector trace for weight {a} is not a nonnegative integer: {q}")
        mults.append(int(q))
    return mults


def weight_multiplicity(g: ExactMatrix, r: int, a: int) -> int:
    return weight_multiplicities(g, r)[a % r]


def is_symplectic_subspace(u: Subspace, form: ExactMatrix) -> bool:
    """True when the form restricted to u is nondegenerate."""
    if u.dim == 0:
        return True
    gram = ExactMatrix(
        [[_bilinear(x, form, y) for y in u.basis] for x in u.basis], form.order
    )
    return bool(det(gram))


def _bilinear(x: Vector, form: ExactMatrix, y: Vector) -> CycNum:
    jy = form.apply(y)
    total = CycNum.zero(form.order)
    for a, b in zip(x, jy):
        if a and b:
            total = total + a * b
    return total
