"""Exact arithmetic in cyclotomic fields Q(zeta_m) and exact linear algebra.

Every algebraic computation in the package runs over one of these fields;
complex numbers are modelled by the smallest cyclotomic field that contains
all roots of unity a construction needs.  Nothing here ever rounds.

The linear algebra routines are generic: they work on any field elements
supporting ``+ - * /`` and truthiness (``Scalar``, ``Fraction``).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence


# ---------------------------------------------------------------------------
# cyclotomic polynomials

def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # coefficients low -> high, den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("non-exact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError(f"cyclotomic order must be >= 1, got {m}")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _poly_divexact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)


# ---------------------------------------------------------------------------
# fields and scalars

class CycloField:
    """The field Q(zeta_m) = Q[z]/Phi_m(z).

    Use :func:`make_cyclotomic`; instances are cached per order so identity
    comparison is field equality.
    """

    def __init__(self, order: int):
        if order < 1:
            raise ValueError(f"cyclotomic order must be >= 1, got {order}")
        self.order = order
        self.modulus = cyclotomic_polynomial(order)
        self.degree = len(self.modulus) - 1
        # z^k for k in [degree, 2*degree - 2], reduced
        self._overflow = []
        deg = self.degree
        cur = [Fraction(-c) for c in self.modulus[:-1]]  # z^deg
        for _ in range(max(deg - 1, 0)):
            self._overflow.append(tuple(cur))
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            if top:
                for i in range(deg):
                    cur[i] -= top * self.modulus[i]
        self.zero = Scalar(self, (Fraction(0),) * deg)
        self.one = Scalar(self, (Fraction(1),) + (Fraction(0),) * (deg - 1))

    def __repr__(self):
        return f"CycloField({self.order})"

    def __reduce__(self):
        return (make_cyclotomic, (self.order,))

    # construction -------------------------------------------------------
    def __call__(self, value) -> Scalar:
        if isinstance(value, Scalar):
            if value.field is self:
                return value
            return value.embed(self)
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (int, Fraction)):
            return Scalar(self, (Fraction(value),) + (Fraction(0),) * (self.degree - 1))
        if isinstance(value, (list, tuple)):
            return self.from_poly([Fraction(v) for v in value])
        raise TypeError(f"cannot convert {type(value).__name__} to a scalar of {self}")

    def from_poly(self, coeffs: Sequence[Fraction]) -> Scalar:
        """Reduce an arbitrary polynomial in z (low to high) modulo Phi_m."""
        deg = self.degree
        coeffs = [Fraction(c) for c in coeffs]
        # fold high powers down using z^deg = -sum modulus[i] z^i
        for k in range(len(coeffs) - 1, deg - 1, -1):
            c = coeffs[k]
            if c:
                for i in range(deg):
                    coeffs[k - deg + i] -= c * self.modulus[i]
        coeffs = coeffs[:deg] + [Fraction(0)] * (deg - len(coeffs))
        return Scalar(self, tuple(coeffs))

    def zeta(self) -> Scalar:
        return self.from_poly([0, 1])

    def root_of_unity(self, k: int, r: int | None = None) -> Scalar:
        """zeta_r^k as an element of this field; r must divide the order."""
        if r is None:
            r = self.order
        if r < 1 or self.order % r:
            raise ValueError(f"zeta_{r} does not lie in {self}")
        e = (k * (self.order // r)) % self.order
        return self.from_poly([0] * e + [1])

    def parse(self, text: str) -> Scalar:
        return parse_scalar(text, self)


@lru_cache(maxsize=None)
def make_cyclotomic(m: int) -> CycloField:
    """Return the cyclotomic field Q(zeta_m); m = 1, 2 give the rationals."""
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"cyclotomic order must be a positive integer, got {m!r}")
    return CycloField(m)


class Scalar:
    """Element of a cyclotomic field, stored as reduced coefficients in z."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: CycloField, coeffs: tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other) -> Scalar | None:
        if isinstance(other, Scalar):
            if other.field is not self.field:
                raise ValueError(f"mixing scalars of {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Scalar(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar(self.field, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        field = self.field
        deg = field.degree
        if deg == 1:
            return Scalar(field, (self.coeffs[0] * o.coeffs[0],))
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        out = prod[:deg]
        for k, c in enumerate(prod[deg:]):
            if c:
                row = field._overflow[k]
                for i in range(deg):
                    out[i] += c * row[i]
        return Scalar(field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if not self:
            raise ZeroDivisionError("inverse of zero scalar")
        field = self.field
        if field.degree == 1:
            return Scalar(field, (1 / self.coeffs[0],))
        # solve (multiplication-by-self matrix) v = 1 over Q
        deg = field.degree
        cols = []
        basis = field.one
        z = field.zeta()
        for _ in range(deg):
            cols.append((self * basis).coeffs)
            basis = basis * z
        mat = [[cols[j][i] for j in range(deg)] for i in range(deg)]
        sol = solve_linear(ExactMatrix.from_rows(mat), [Fraction(1)] + [Fraction(0)] * (deg - 1))
        return Scalar(field, tuple(sol.particular))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Scalar(self.field, tuple(a / other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.field.one, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field is other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field.order, self.coeffs))

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def embed(self, target: CycloField) -> Scalar:
        """Image under Q(zeta_m) -> Q(zeta_M), zeta_m -> zeta_M^(M/m), for m | M."""
        src = self.field
        if src is target:
            return self
        if self.is_rational():
            return target(self.coeffs[0])
        if target.order % src.order:
            raise ValueError(f"cannot embed {src} into {target}")
        step = target.order // src.order
        poly = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            poly[i * step] = c
        return target.from_poly(poly)

    def __complex__(self):
        z = complex(math.cos(2 * math.pi / self.field.order), math.sin(2 * math.pi / self.field.order))
        return sum(float(c) * z ** i for i, c in enumerate(self.coeffs))

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r}, m={self.field.order})"

    def __reduce__(self):
        return (_rebuild_scalar, (self.field.order, self.coeffs))


def _rebuild_scalar(order, coeffs):
    return Scalar(make_cyclotomic(order), coeffs)


# ---------------------------------------------------------------------------
# text form:  "3/2*z^2 - 1*z + 5"

def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(s: Scalar) -> str:
    terms = [(i, c) for i, c in enumerate(s.coeffs) if c]
    if not terms:
        return "0"
    out = []
    for i, c in reversed(terms):
        mag = _fmt_frac(abs(c))
        body = mag if i == 0 else (f"{mag}*z" if i == 1 else f"{mag}*z^{i}")
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*(?P<star>\*)?\s*)?
        (?P<z>z(?:\s*\^\s*(?P<exp>\d+))?)?\s*""",
    re.VERBOSE,
)


def parse_scalar(text: str, field: CycloField) -> Scalar:
    """Parse a polynomial in z with rational coefficients, reduced into ``field``."""
    s = text.strip()
    if not s:
        raise ValueError("empty scalar string")
    poly: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse scalar {text!r} at position {pos}")
        sign, coef, star, z = m.group("sign"), m.group("coef"), m.group("star"), m.group("z")
        if sign is None and not first:
            raise ValueError(f"missing operator in scalar {text!r}")
        if coef is None and z is None:
            raise ValueError(f"dangling sign in scalar {text!r}")
        if star and z is None:
            raise ValueError(f"dangling '*' in scalar {text!r}")
        c = Fraction(coef) if coef is not None else Fraction(1)
        if sign == "-":
            c = -c
        e = 0 if z is None else int(m.group("exp") or 1)
        poly[e] = poly.get(e, Fraction(0)) + c
        pos = m.end()
        first = False
    dense = [Fraction(0)] * (max(poly) + 1)
    for e, c in poly.items():
        dense[e] += c
    return field.from_poly(dense)


# ---------------------------------------------------------------------------
# linear algebra

@dataclass(frozen=True)
class ExactMatrix:
    rows: tuple[tuple, ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], ncols: int | None = None) -> ExactMatrix:
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("column count required for a matrix without rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError(f"ragged matrix: row of length {len(r)}, expected {ncols}")
        return cls(rows, ncols)

    @classmethod
    def identity(cls, d: int, one=Fraction(1), zero=Fraction(0)) -> ExactMatrix:
        return cls(tuple(tuple(one if i == j else zero for j in range(d)) for i in range(d)), d)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(tuple(zip(*self.rows)) if self.rows else (), len(self.rows))

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.transpose().rows
            return ExactMatrix(tuple(tuple(_dot(r, c) for c in cols) for r in self.rows), other.ncols)
        vec = list(other)
        if len(vec) != self.ncols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(vec)}")
        return [_dot(r, vec) for r in self.rows]

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        return ExactMatrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        return ExactMatrix(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def scale(self, c) -> ExactMatrix:
        return ExactMatrix(tuple(tuple(c * a for a in r) for r in self.rows), self.ncols)

    def is_zero(self) -> bool:
        return not any(a for r in self.rows for a in r)


def _dot(u, v):
    acc = None
    for a, b in zip(u, v):
        if a and b:
            acc = a * b if acc is None else acc + a * b
    if acc is None:
        # preserve the element type when possible
        for a in u:
            return a * 0
        return 0
    return acc


def rref(A: ExactMatrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form with deterministic pivoting.

    Pivot for the leftmost unresolved column is the first remaining row with
    a nonzero entry there.  Returns the nonzero rows and the pivot columns.
    """
    rows = [list(r) for r in A.rows]
    pivots: list[int] = []
    r = 0
    for c in range(A.ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _zero_like(A: ExactMatrix):
    for r in A.rows:
        for a in r:
            return a * 0
    return Fraction(0)


def _one_like(zero):
    return zero + 1


def nullspace_from_rref(reduced: list[list], pivots: list[int], ncols: int, zero) -> list[list]:
    one = _one_like(zero)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [zero] * ncols
        v[f] = one
        for row, p in zip(reduced, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


def rank_nullspace(A: ExactMatrix) -> tuple[int, list[list]]:
    """Rank and canonical nullspace basis (one vector per free column)."""
    reduced, pivots = rref(A)
    zero = _zero_like(A)
    return len(pivots), nullspace_from_rref(reduced, pivots, A.ncols, zero)


def kernel(A: ExactMatrix) -> tuple[list[list], list[int]]:
    """Canonical nullspace basis together with its free columns.

    Basis vector i is 1 at free column i and 0 at every other free column,
    so the coordinates of a kernel vector are its entries at the free columns.
    """
    reduced, pivots = rref(A)
    pivset = set(pivots)
    free = [c for c in range(A.ncols) if c not in pivset]
    return nullspace_from_rref(reduced, pivots, A.ncols, _zero_like(A)), free


def rank(A: ExactMatrix) -> int:
    return len(rref(A)[1])


class Solution(NamedTuple):
    particular: list
    nullspace: list[list]


def solve_linear(A: ExactMatrix, b: Sequence, zero=None) -> Solution | None:
    """Solve A x = b exactly.

    Returns ``Solution(x, nullspace)`` with free variables set to zero, or
    ``None`` when b is not in the column space.
    """
    if len(b) != A.nrows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.nrows}")
    if zero is None:
        zero = _zero_like(A) if A.rows and A.ncols else (b[0] * 0 if len(b) else Fraction(0))
    aug = ExactMatrix(tuple(tuple(r) + (bi,) for r, bi in zip(A.rows, b)), A.ncols + 1)
    reduced, pivots = rref(aug)
    if pivots and pivots[-1] == A.ncols:
        return None
    x = [zero] * A.ncols
    for row, p in zip(reduced, pivots):
        x[p] = row[-1]
    coeff_rows = [row[:-1] for row in reduced]
    return Solution(x, nullspace_from_rref(coeff_rows, pivots, A.ncols, zero))


class SparseEchelon:
    """Incremental row reduction of sparse rows (dict column -> value).

    Rows are reduced against the stored pivots as they arrive, so huge
    redundant equation systems never need to be held in memory.  The row
    space, and hence :meth:`nullspace`, does not depend on insertion order.
    """

    def __init__(self, ncols: int, zero=Fraction(0)):
        self.ncols = ncols
        self.zero = zero
        self.one = _one_like(zero)
        self._pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def reduce(self, row: dict) -> dict:
        row = {c: v for c, v in row.items() if v}
        pivots = self._pivots
        while True:
            hit = [c for c in row if c in pivots]
            if not hit:
                return row
            c = min(hit)
            f = row[c]
            for k, v in pivots[c].items():
                nv = row.get(k, self.zero) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)

    def add(self, row: dict) -> bool:
        """Insert a row; True if it enlarged the row space."""
        row = self.reduce(row)
        if not row:
            return False
        c = min(row)
        inv = 1 / row[c]
        row = {k: v * inv for k, v in row.items()}
        self._pivots[c] = row
        return True

    def rref(self) -> tuple[list[dict], list[int]]:
        order = sorted(self._pivots)
        rows = {c: dict(self._pivots[c]) for c in order}
        for c in reversed(order):
            prow = rows[c]
            for c2 in order:
                if c2 >= c:
                    break
                r2 = rows[c2]
                f = r2.get(c)
                if f:
                    for k, v in prow.items():
                        nv = r2.get(k, self.zero) - f * v
                        if nv:
                            r2[k] = nv
                        else:
                            r2.pop(k, None)
        return [rows[c] for c in order], order

    def nullspace(self) -> list[list]:
        rows, pivots = self.rref()
        pivset = set(pivots)
        basis = []
        for f in range(self.ncols):
            if f in pivset:
                continue
            v = [self.zero] * self.ncols
            v[f] = self.one
            for row, p in zip(rows, pivots):
                x = row.get(f)
                if x:
                    v[p] = -x
            basis.append(v)
        return basis


def mat_vec(rows: Sequence[Sequence], v: Sequence) -> list:
    return [_dot(r, v) for r in rows]


QQ = make_cyclotomic(1)
