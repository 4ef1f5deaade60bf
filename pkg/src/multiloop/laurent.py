"""Laurent polynomials C[t_1^+-1, ..., t_n^+-1], one-forms and Omega^1 / d Omega^0.

One-forms are written in the logarithmic basis L_k = t_k^-1 dt_k, so the
term t^a L_k has multidegree exactly a and d(t^a) = sum_k a_k t^a L_k.  At a
weight m != 0 the exact forms are the line spanned by the integer vector m;
at m = 0 there are none.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import CycloField, Scalar, make_cyclotomic

DEFAULT_DEGREE_CAP = 64


class DegreeCapExceeded(ArithmeticError):
    def __init__(self, degree, cap):
        self.degree = degree
        self.cap = cap
        super().__init__(f"multidegree {degree} exceeds the degree cap {cap}")


class NotHomogeneous(ValueError):
    pass


def _check_cap(a: tuple[int, ...], cap: int):
    if any(abs(x) > cap for x in a):
        raise DegreeCapExceeded(a, cap)


def add_degrees(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


class LaurentPoly:
    """Sparse Laurent polynomial: multidegree tuple -> nonzero Scalar."""

    __slots__ = ("n", "field", "terms", "cap")

    def __init__(self, n: int, terms: dict, field: CycloField, cap: int = DEFAULT_DEGREE_CAP):
        self.n = n
        self.field = field
        self.cap = cap
        clean = {}
        for a, c in terms.items():
            a = tuple(a)
            if len(a) != n:
                raise ValueError(f"multidegree {a} has wrong length for n = {n}")
            c = field(c)
            if c:
                _check_cap(a, cap)
                clean[a] = c
        self.terms = clean

    @classmethod
    def monomial(cls, a: Sequence[int], coeff=1, field: CycloField | None = None, cap: int = DEFAULT_DEGREE_CAP):
        field = field or make_cyclotomic(1)
        return cls(len(a), {tuple(a): coeff}, field, cap)

    @classmethod
    def constant(cls, n: int, c, field: CycloField, cap: int = DEFAULT_DEGREE_CAP):
        return cls(n, {(0,) * n: c}, field, cap)

    def _like(self, terms, other=None):
        cap = self.cap if other is None else min(self.cap, other.cap)
        return LaurentPoly(self.n, terms, self.field, cap)

    def _check(self, other):
        if self.n != other.n:
            raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.n, other, self.field, self.cap)
        self._check(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out[a] + c if a in out else c
        return self._like(out, other)

    __radd__ = __add__

    def __neg__(self):
        return self._like({a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, OneForm):
                return NotImplemented
            c = self.field(other)
            return self._like({a: c * v for a, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for a, c in self.terms.items():
            for b, e in other.terms.items():
                s = add_degrees(a, b)
                _check_cap(s, min(self.cap, other.cap))
                out[s] = out[s] + c * e if s in out else c * e
        return self._like(out, other)

    __rmul__ = __mul__

    def scale(self, c) -> LaurentPoly:
        return self * c

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            raise ValueError("negative powers are only defined for monomials")
        out = LaurentPoly.constant(self.n, 1, self.field, self.cap)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction, Scalar)):
            return self == LaurentPoly.constant(self.n, other, self.field, self.cap)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def weights(self) -> list[tuple[int, ...]]:
        return sorted(self.terms)

    def homogeneous(self, a: Sequence[int]) -> LaurentPoly:
        a = tuple(a)
        return self._like({a: self.terms[a]} if a in self.terms else {})

    def __str__(self):
        return format_laurent(self)

    def __repr__(self):
        return f"LaurentPoly({format_laurent(self)!r}, n={self.n})"


class OneForm:
    """Sparse one-form sum c_{a,k} t^a L_k, keyed by (multidegree, direction)."""

    __slots__ = ("n", "field", "terms")

    def __init__(self, n: int, terms: dict, field: CycloField):
        self.n = n
        self.field = field
        clean = {}
        for (a, k), c in terms.items():
            a = tuple(a)
            if len(a) != n or not 0 <= k < n:
                raise ValueError(f"bad one-form key {(a, k)} for n = {n}")
            c = field(c)
            if c:
                clean[(a, k)] = c
        self.terms = clean

    @classmethod
    def zero(cls, n: int, field: CycloField) -> OneForm:
        return cls(n, {}, field)

    def __add__(self, other: OneForm) -> OneForm:
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out[key] + c if key in out else c
        return OneForm(self.n, out, self.field)

    def __neg__(self) -> OneForm:
        return OneForm(self.n, {k: -c for k, c in self.terms.items()}, self.field)

    def __sub__(self, other: OneForm) -> OneForm:
        return self + (-other)

    def __rmul__(self, other):
        """p * omega for a LaurentPoly or scalar p."""
        if isinstance(other, LaurentPoly):
            out: dict = {}
            for b, e in other.terms.items():
                for (a, k), c in self.terms.items():
                    s = add_degrees(a, b)
                    _check_cap(s, other.cap)
                    key = (s, k)
                    out[key] = out[key] + c * e if key in out else c * e
            return OneForm(self.n, out, self.field)
        c = self.field(other)
        return OneForm(self.n, {k: c * v for k, v in self.terms.items()}, self.field)

    __mul__ = __rmul__

    def __eq__(self, other):
        if not isinstance(other, OneForm):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def weights(self) -> list[tuple[int, ...]]:
        return sorted({a for a, _ in self.terms})

    def component(self, m: Sequence[int]) -> list[Scalar]:
        """Coefficient vector (c_1..c_n) of t^m L_k at weight m."""
        m = tuple(m)
        z = self.field.zero
        return [self.terms.get((m, k), z) for k in range(self.n)]

    def __str__(self):
        return format_oneform(self)

    def __repr__(self):
        return f"OneForm({format_oneform(self)!r}, n={self.n})"


def exterior_d(p: LaurentPoly) -> OneForm:
    """d(t^a) = sum_k a_k t^a L_k, extended linearly."""
    out = {}
    for a, c in p.terms.items():
        for k, ak in enumerate(a):
            if ak:
                out[(a, k)] = c * ak
    return OneForm(p.n, out, p.field)


@dataclass(frozen=True)
class OneFormClass:
    """Class in Omega^1 / d Omega^0 at one weight, in reduced coordinates.

    At m != 0 the coordinates are the n - 1 entries left after eliminating the
    first direction k* with m_k* != 0; at m = 0 all n entries are kept.
    """
    weight: tuple[int, ...]
    coords: tuple

    def is_zero(self) -> bool:
        return not any(self.coords)


def pivot_direction(m: Sequence[int]) -> int | None:
    return next((k for k, mk in enumerate(m) if mk), None)


def reduce_vector(vec: Sequence, m: Sequence[int]) -> tuple:
    """Reduced coordinates of the weight-m form sum_k vec[k] t^m L_k."""
    k0 = pivot_direction(m)
    if k0 is None:
        return tuple(vec)
    f = vec[k0] / m[k0]
    return tuple(vec[j] - f * m[j] for j in range(len(m)) if j != k0)


def reduce_mod_exact(omega: OneForm, m: Sequence[int]) -> OneFormClass:
    m = tuple(m)
    if len(m) != omega.n:
        raise ValueError(f"weight {m} has wrong length for n = {omega.n}")
    stray = [a for a in omega.weights() if a != m]
    if stray:
        raise NotHomogeneous(f"one-form has terms at weights {stray}, expected only {m}")
    return OneFormClass(m, reduce_vector(omega.component(m), m))


def lift_class(cls: OneFormClass, field: CycloField) -> OneForm:
    """Canonical representative of a class (zero in the eliminated direction)."""
    m = cls.weight
    n = len(m)
    k0 = pivot_direction(m)
    dirs = [k for k in range(n) if k != k0]
    return OneForm(n, {(m, k): c for k, c in zip(dirs, cls.coords)}, field)


def omegabar_weight_dim(n: int, m: Sequence[int]) -> int:
    return n if not any(m) else n - 1


# ---------------------------------------------------------------------------
# torus action

@dataclass(frozen=True)
class TorusAction:
    """Delta = prod Z/r_k acting on t_k by zeta_{r_k}^{delta_k}."""
    orders: tuple[int, ...]

    def __post_init__(self):
        if not self.orders or any(not isinstance(r, int) or r < 1 for r in self.orders):
            raise ValueError(f"torus orders must be positive integers, got {self.orders}")

    @property
    def n(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        """lcm of the r_k: the smallest cyclotomic order carrying the action."""
        return math.lcm(*self.orders)

    def elements(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(*(range(r) for r in self.orders))

    def exponent(self, delta: Sequence[int], a: Sequence[int], field_order: int) -> int:
        # delta acts on t^a by zeta_M^exponent
        return sum((field_order // r) * dk * ak for r, dk, ak in zip(self.orders, delta, a)) % field_order

    def character(self, delta: Sequence[int], a: Sequence[int], field: CycloField) -> Scalar:
        if field.order % self.order:
            raise ValueError(f"{field} does not contain the roots of unity of order {self.order}")
        return field.root_of_unity(self.exponent(delta, a, field.order))

    def is_invariant_weight(self, m: Sequence[int]) -> bool:
        return all(mk % r == 0 for mk, r in zip(m, self.orders))


def delta_act(delta: Sequence[int], p: LaurentPoly, act: TorusAction) -> LaurentPoly:
    delta = tuple(delta)
    if len(delta) != act.n or any(not 0 <= d < r for d, r in zip(delta, act.orders)):
        raise ValueError(f"group element {delta} not reduced modulo {act.orders}")
    return LaurentPoly(p.n, {a: act.character(delta, a, p.field) * c for a, c in p.terms.items()},
                       p.field, p.cap)


def omegabar_invariants(act: TorusAction, m: Sequence[int]) -> tuple[int, list[OneFormClass]]:
    """Delta-invariant part of the weight-m component of Omega^1 / d Omega^0.

    The L_k are invariant, so the component is invariant iff r_k | m_k for all
    k, and zero otherwise.
    """
    m = tuple(m)
    if not act.is_invariant_weight(m):
        return 0, []
    dim = omegabar_weight_dim(act.n, m)
    basis = [OneFormClass(m, tuple(1 if i == j else 0 for j in range(dim))) for i in range(dim)]
    return dim, basis


# ---------------------------------------------------------------------------
# text forms

def _coef_text(c: Scalar) -> tuple[str, str]:
    """(sign, magnitude-or-empty) for a leading coefficient."""
    if c.is_rational():
        q = c.to_fraction()
        mag = abs(q)
        s = "" if mag == 1 else (str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}")
        return ("-" if q < 0 else "+"), s
    return "+", f"({c})"


def _var(n: int, k: int, prefix: str = "t") -> str:
    return prefix if n == 1 else f"{prefix}{k + 1}"


def _monomial_text(a: Sequence[int]) -> list[str]:
    n = len(a)
    out = []
    for k, e in enumerate(a):
        if e == 0:
            continue
        v = _var(n, k)
        out.append(v if e == 1 else f"{v}^{e}")
    return out


def _join_terms(items: list[tuple[str, list[str]]]) -> str:
    # items: (sign, factors) with the coefficient already inside factors
    if not items:
        return "0"
    parts = []
    for i, (sign, factors) in enumerate(items):
        body = "*".join(factors) if factors else "1"
        if i == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append((" - " if sign == "-" else " + ") + body)
    return "".join(parts)


def format_laurent(p: LaurentPoly) -> str:
    items = []
    for a in sorted(p.terms, reverse=True):
        sign, mag = _coef_text(p.terms[a])
        mono = _monomial_text(a)
        factors = ([mag] if mag else []) + mono
        if not factors:
            factors = ["1"]
        items.append((sign, factors))
    return _join_terms(items)


def format_oneform(w: OneForm) -> str:
    items = []
    for (a, k) in sorted(w.terms, key=lambda key: (tuple(-x for x in key[0]), key[1])):
        sign, mag = _coef_text(w.terms[(a, k)])
        factors = ([mag] if mag else []) + _monomial_text(a) + [_var(w.n, k, "L")]
        items.append((sign, factors))
    return _join_terms(items)


def _split_terms(text: str) -> list[str]:
    terms, cur, depth = [], "", 0
    prev = ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and prev not in ("^", "") and cur.strip():
            terms.append(cur)
            cur = ch
        else:
            cur += ch
        if not ch.isspace():
            prev = ch
    if cur.strip():
        terms.append(cur)
    return terms


_VAR = re.compile(r"^(?P<v>[tL])(?P<idx>\d*)(?:\^(?P<e>-?\d+))?$")


def _parse_term(term: str, n: int, field: CycloField, allow_form: bool):
    s = term.replace(" ", "")
    coef = field.one
    if s.startswith("+"):
        s = s[1:]
    elif s.startswith("-"):
        coef = -coef
        s = s[1:]
    factors, cur, depth = [], "", 0
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            factors.append(cur)
            cur = ""
        else:
            cur += ch
    factors.append(cur)
    a = [0] * n
    direction = None
    for f in factors:
        if not f:
            raise ValueError(f"empty factor in {term!r}")
        if f.startswith("("):
            if not f.endswith(")"):
                raise ValueError(f"unbalanced parentheses in {term!r}")
            coef = coef * field.parse(f[1:-1])
            continue
        if re.fullmatch(r"\d+(/\d+)?", f):
            coef = coef * Fraction(f)
            continue
        m = _VAR.match(f)
        if not m:
            raise ValueError(f"cannot parse factor {f!r} in {term!r}")
        idx = int(m.group("idx")) - 1 if m.group("idx") else 0
        if not m.group("idx") and n != 1:
            raise ValueError(f"bare variable {f!r} needs an index when n = {n}")
        if not 0 <= idx < n:
            raise ValueError(f"variable index out of range in {f!r}")
        if m.group("v") == "t":
            a[idx] += int(m.group("e") or 1)
        else:
            if not allow_form or direction is not None or m.group("e"):
                raise ValueError(f"unexpected form factor {f!r} in {term!r}")
            direction = idx
    return tuple(a), direction, coef


def parse_laurent(text: str, n: int, field: CycloField | None = None, cap: int = DEFAULT_DEGREE_CAP) -> LaurentPoly:
    """Parse e.g. ``"3*t1^2*t2^-1 + 1/2"`` or ``"t^3 - t^-1"``."""
    field = field or make_cyclotomic(1)
    out: dict = {}
    for term in _split_terms(text):
        a, direction, c = _parse_term(term, n, field, allow_form=False)
        out[a] = out[a] + c if a in out else c
    return LaurentPoly(n, out, field, cap)


def parse_oneform(text: str, n: int, field: CycloField | None = None) -> OneForm:
    field = field or make_cyclotomic(1)
    out: dict = {}
    if text.strip() == "0":
        return OneForm.zero(n, field)
    for term in _split_terms(text):
        a, direction, c = _parse_term(term, n, field, allow_form=True)
        if direction is None:
            raise ValueError(f"one-form term {term!r} lacks an L factor")
        key = (a, direction)
        out[key] = out[key] + c if key in out else c
    return OneForm(n, out, field)
