"""Twisted multiloop algebras (C[T^n] (x) g)^Delta.

Delta = prod Z/r_k acts on t_k by zeta_{r_k} and on g through commuting
finite-order automorphisms sigma_k.  t^a (x) x is invariant iff
sigma_k x = zeta_{r_k}^{-a_k} x for every k, so the degree-a slice is the
joint eigenspace g_abar indexed by abar = a mod r.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .exactnum import ExactMatrix, kernel
from .laurent import DEFAULT_DEGREE_CAP, DegreeCapExceeded, TorusAction, add_degrees
from .liealg import (
    FiniteAutomorphism,
    LieAlgebra,
    LieAlgebraError,
    OrderMismatch,
    commute,
    induced_action_on_v,
)


class NonCommuting(LieAlgebraError):
    def __init__(self, i, j):
        self.pair = (i, j)
        super().__init__(f"automorphisms sigma_{i + 1} and sigma_{j + 1} do not commute")


class MixedParents(ValueError):
    pass


class NotInvariant(ValueError):
    pass


@dataclass(frozen=True)
class Slice:
    """Joint eigenspace g_abar: basis vectors (ambient coordinates) and the
    free columns that read off coordinates of a member directly."""
    residue: tuple[int, ...]
    basis: tuple
    free: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


class MultiloopAlgebra:
    def __init__(self, lie: LieAlgebra, act: TorusAction, automorphisms: Sequence[FiniteAutomorphism],
                 degree_cap: int = DEFAULT_DEGREE_CAP, name: str = ""):
        if len(automorphisms) != act.n:
            raise ValueError(f"{len(automorphisms)} automorphisms for a torus of rank {act.n}")
        for k, (s, r) in enumerate(zip(automorphisms, act.orders)):
            if r % s.order:
                raise OrderMismatch(f"sigma_{k + 1} has order {s.order}, which does not divide r_{k + 1} = {r}")
        for i, j in itertools.combinations(range(act.n), 2):
            if not commute(automorphisms[i], automorphisms[j]):
                raise NonCommuting(i, j)
        if lie.field.order % act.order:
            raise ValueError(f"{lie.field} lacks the roots of unity of order {act.order}; "
                             f"use lie.over(make_cyclotomic(...))")
        self.lie = lie
        self.field = lie.field
        self.act = act
        self.n = act.n
        self.automorphisms = tuple(automorphisms)
        self.degree_cap = degree_cap
        self.name = name
        self.slices = self._joint_eigenspaces()
        self._check_grading()

    def __repr__(self):
        return f"MultiloopAlgebra({self.name or self.lie.name}, r={self.act.orders})"

    def _joint_eigenspaces(self) -> dict[tuple[int, ...], Slice]:
        field = self.field
        d = self.lie.dim
        out = {}
        total = 0
        for res in itertools.product(*(range(r) for r in self.act.orders)):
            rows = []
            for s, r, rk in zip(self.automorphisms, self.act.orders, res):
                lam = field.root_of_unity(-rk, r)
                for p in range(d):
                    rows.append(tuple(s.matrix.rows[p][q] - (lam if p == q else 0) for q in range(d)))
            null, free = kernel(ExactMatrix(tuple(rows), d))
            out[res] = Slice(res, tuple(tuple(v) for v in null), tuple(free))
            total += len(null)
        # zeta_r^-res runs once through every r-th root, so the slices partition g
        if total != d:
            raise OrderMismatch(f"joint eigenspaces have total dimension {total}, expected {d}")
        return out

    def residue(self, a: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % r for x, r in zip(a, self.act.orders))

    def slice(self, a: Sequence[int]) -> Slice:
        return self.slices[self.residue(a)]

    def slice_dims(self) -> dict[tuple[int, ...], int]:
        return {res: s.dim for res, s in self.slices.items()}

    def ambient(self, a: Sequence[int], coords: Sequence) -> list:
        """Ambient g-coordinates of sum_i coords[i] * (basis vector i of slice a)."""
        sl = self.slice(a)
        out = self.lie.zero_vector()
        for c, v in zip(coords, sl.basis):
            if c:
                out = [o + c * x for o, x in zip(out, v)]
        return out

    def coords_of(self, a: Sequence[int], x: Sequence) -> tuple:
        """Slice coordinates of an ambient vector; NotInvariant if x is not in g_abar."""
        sl = self.slice(a)
        coords = tuple(x[f] for f in sl.free)
        back = self.lie.zero_vector()
        for c, v in zip(coords, sl.basis):
            if c:
                back = [o + c * y for o, y in zip(back, v)]
        if list(back) != list(x):
            raise NotInvariant(f"vector does not lie in the eigenspace for degree {tuple(a)}")
        return coords

    @cached_property
    def slice_brackets(self) -> dict:
        """[v_i, w_j] for slice bases, in coordinates of the target slice, sparse."""
        table = {}
        for ra, sa in self.slices.items():
            for rb, sb in self.slices.items():
                rc = self.residue(add_degrees(ra, rb))
                entries = []
                for i, v in enumerate(sa.basis):
                    row = []
                    for j, w in enumerate(sb.basis):
                        c = self.coords_of(rc, self.lie.bracket(v, w))
                        row.append(tuple((k, x) for k, x in enumerate(c) if x))
                    entries.append(row)
                table[(ra, rb)] = entries
        return table

    def _check_grading(self):
        _ = self.slice_brackets  # coords_of raises if a bracket leaves its eigenspace

    def graded_component(self, a: Sequence[int]) -> list[EqMapElement]:
        a = tuple(a)
        sl = self.slice(a)
        return [self.element({a: tuple(self.field.one if i == j else self.field.zero for j in range(sl.dim))})
                for i in range(sl.dim)]

    def element(self, terms: dict) -> EqMapElement:
        return EqMapElement(self, terms)

    def from_ambient(self, terms: dict) -> EqMapElement:
        """Element from {multidegree: ambient g-vector}; raises NotInvariant."""
        return EqMapElement(self, {a: self.coords_of(a, [self.field(c) for c in x]) for a, x in terms.items()})

    def zero(self) -> EqMapElement:
        return EqMapElement(self, {})

    @cached_property
    def v_actions(self) -> tuple[ExactMatrix, ...]:
        """Induced action of each sigma_k on V(g)."""
        return tuple(induced_action_on_v(self.lie, s) for s in self.automorphisms)

    def random_element(self, rng: random.Random, nterms: int = 2, max_degree: int = 3,
                       coef_range: int = 3) -> EqMapElement:
        terms = {}
        for _ in range(nterms):
            a = tuple(rng.randint(-max_degree, max_degree) for _ in range(self.n))
            sl = self.slice(a)
            if not sl.dim:
                continue
            terms[a] = tuple(self.field(rng.randint(-coef_range, coef_range)) for _ in range(sl.dim))
        return EqMapElement(self, terms)


class EqMapElement:
    """Finite sum of t^a (x) x with x stored in coordinates of the slice g_abar."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent: MultiloopAlgebra, terms: dict):
        self.parent = parent
        clean = {}
        for a, coords in terms.items():
            a = tuple(a)
            if len(a) != parent.n:
                raise ValueError(f"multidegree {a} has wrong length for n = {parent.n}")
            sl = parent.slice(a)
            coords = tuple(parent.field(c) for c in coords)
            if len(coords) != sl.dim:
                raise NotInvariant(f"degree {a} slice has dimension {sl.dim}, got {len(coords)} coordinates")
            if any(coords):
                if any(abs(x) > parent.degree_cap for x in a):
                    raise DegreeCapExceeded(a, parent.degree_cap)
                clean[a] = coords
        self.terms = clean

    def _same(self, other: EqMapElement):
        if not isinstance(other, EqMapElement) or other.parent is not self.parent:
            raise MixedParents("elements belong to different multiloop algebras")

    def __add__(self, other: EqMapElement) -> EqMapElement:
        self._same(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = tuple(x + y for x, y in zip(out[a], c)) if a in out else c
        return EqMapElement(self.parent, out)

    def __neg__(self) -> EqMapElement:
        return EqMapElement(self.parent, {a: tuple(-x for x in c) for a, c in self.terms.items()})

    def __sub__(self, other: EqMapElement) -> EqMapElement:
        return self + (-other)

    def __rmul__(self, s) -> EqMapElement:
        s = self.parent.field(s)
        return EqMapElement(self.parent, {a: tuple(s * x for x in c) for a, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, EqMapElement):
            return NotImplemented
        return self.parent is other.parent and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def ambient_terms(self) -> dict[tuple[int, ...], list]:
        return {a: self.parent.ambient(a, c) for a, c in self.terms.items()}

    def is_invariant(self) -> bool:
        """Literal check delta.(t^a (x) x) = t^a (x) x for the generators of Delta."""
        M = self.parent
        for a, x in self.ambient_terms().items():
            for k, (s, r) in enumerate(zip(M.automorphisms, M.act.orders)):
                delta = tuple(1 if j == k else 0 for j in range(M.n))
                chi = M.act.character(delta, a, M.field)
                if [chi * y for y in s.apply(x)] != x:
                    return False
        return True

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"EqMapElement({format_element(self)!r})"


def bracket(xi: EqMapElement, eta: EqMapElement) -> EqMapElement:
    """[t^a (x) x, t^b (x) y] = t^(a+b) (x) [x, y], extended bilinearly."""
    xi._same(eta)
    M = xi.parent
    table = M.slice_brackets
    out: dict = {}
    zero = M.field.zero
    for a, x in xi.terms.items():
        ra = M.residue(a)
        for b, y in eta.terms.items():
            rb = M.residue(b)
            c = add_degrees(a, b)
            if any(abs(v) > M.degree_cap for v in c):
                raise DegreeCapExceeded(c, M.degree_cap)
            entries = table[(ra, rb)]
            acc = out.get(c)
            if acc is None:
                acc = [zero] * M.slice(c).dim
            for i, xi_ in enumerate(x):
                if not xi_:
                    continue
                row = entries[i]
                for j, yj in enumerate(y):
                    if not yj:
                        continue
                    f = xi_ * yj
                    for k, v in row[j]:
                        acc[k] = acc[k] + f * v
            out[c] = acc
    return EqMapElement(M, out)


def build_multiloop(lie: LieAlgebra, orders: Sequence[int], automorphisms=None,
                    degree_cap: int = DEFAULT_DEGREE_CAP, name: str = "") -> MultiloopAlgebra:
    """Build (C[T^n] (x) g)^Delta; automorphisms default to the identity."""
    from .liealg import identity_automorphism
    act = TorusAction(tuple(orders))
    if automorphisms is None:
        automorphisms = [identity_automorphism(lie)] * act.n
    return MultiloopAlgebra(lie, act, automorphisms, degree_cap, name)


def _deg_text(a) -> str:
    return "t^(" + ",".join(str(x) for x in a) + ")"


def format_element(x: EqMapElement) -> str:
    M = x.parent
    names = M.lie.names
    parts = []
    # highest multidegree first, as for Laurent polynomials
    for a in sorted(x.terms, reverse=True):
        amb = M.ambient(a, x.terms[a])
        for i, c in enumerate(amb):
            if not c:
                continue
            if c.is_rational():
                q = c.to_fraction()
                sign = "-" if q < 0 else "+"
                mag = abs(q)
                coef = "" if mag == 1 else f"{mag}*"
            else:
                sign, coef = "+", f"({c})*"
            parts.append((sign, f"{coef}{_deg_text(a)}⊗{names[i]}"))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
