"""Weight-graded 2-cochains on a cutoff window of a multiloop algebra.

A window (w, D) keeps degrees a with |a_k| <= D.  Unknowns of a weight-w
2-cochain are the values psi(u, v) on basis elements u < v (in window order)
whose degrees sum to w; psi(v, u) = -psi(u, v) is built in.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .eqmap import MultiloopAlgebra
from .laurent import add_degrees


class WindowEmpty(ValueError):
    pass


@dataclass(frozen=True)
class CutoffWindow:
    cutoff: int
    weight: tuple[int, ...]

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")

    def contains(self, a: Sequence[int]) -> bool:
        return all(abs(x) <= self.cutoff for x in a)

    def degrees(self) -> list[tuple[int, ...]]:
        D = self.cutoff
        return list(itertools.product(range(-D, D + 1), repeat=len(self.weight)))

    def degree_pairs(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        w = self.weight
        out = []
        for a in self.degrees():
            b = tuple(x - y for x, y in zip(w, a))
            if self.contains(b):
                out.append((a, b))
        return out


class WindowBasis:
    """Basis elements (degree, slice index) of the window and the pair unknowns."""

    def __init__(self, M: MultiloopAlgebra, window: CutoffWindow):
        if len(window.weight) != M.n:
            raise ValueError(f"weight {window.weight} has wrong length for n = {M.n}")
        if not window.degree_pairs():
            raise WindowEmpty(f"no degree pairs summing to {window.weight} within cutoff {window.cutoff}")
        self.M = M
        self.window = window
        self.elements: list[tuple[tuple[int, ...], int]] = []
        self.by_degree: dict[tuple[int, ...], list[int]] = {}
        for a in window.degrees():
            ids = []
            for i in range(M.slice(a).dim):
                ids.append(len(self.elements))
                self.elements.append((a, i))
            self.by_degree[a] = ids
        self.index = {e: k for k, e in enumerate(self.elements)}
        self.pairs: list[tuple[int, int]] = []
        w = window.weight
        for a, b in window.degree_pairs():
            if a > b:
                continue
            for u in self.by_degree[a]:
                for v in self.by_degree[b]:
                    if u < v:
                        self.pairs.append((u, v))
        self.pairs.sort()
        self.pair_index = {p: k for k, p in enumerate(self.pairs)}

    @property
    def weight(self) -> tuple[int, ...]:
        return self.window.weight

    @property
    def cutoff(self) -> int:
        return self.window.cutoff

    def __len__(self):
        return len(self.pairs)

    def unknown(self, u: int, v: int) -> tuple[int, int] | None:
        """(column, sign) with psi(u, v) = sign * unknowns[column]; None if u == v."""
        if u == v:
            return None
        if u < v:
            return self.pair_index[(u, v)], 1
        return self.pair_index[(v, u)], -1

    def element(self, u: int):
        a, i = self.elements[u]
        return self.M.graded_component(a)[i]

    def bracket_elements(self, u: int, v: int) -> list[tuple[int, object]]:
        """[u, v] as (element id, coefficient) pairs; target degree must be in the window."""
        a, i = self.elements[u]
        b, j = self.elements[v]
        c = add_degrees(a, b)
        entries = self.M.slice_brackets[(self.M.residue(a), self.M.residue(b))][i][j]
        return [(self.index[(c, k)], x) for k, x in entries]

    def triples(self) -> Iterator[tuple[int, int, int]]:
        """Distinct unordered element triples with degrees summing to w and all
        three pairwise bracket degrees inside the window."""
        w = self.weight
        win = self.window
        degs = win.degrees()
        for a in degs:
            for b in degs:
                if b < a:
                    continue
                c = tuple(x - y - z for x, y, z in zip(w, a, b))
                if c < b or not win.contains(c):
                    continue
                if not (win.contains(add_degrees(a, b)) and win.contains(add_degrees(b, c))
                        and win.contains(add_degrees(a, c))):
                    continue
                A, B, C = self.by_degree[a], self.by_degree[b], self.by_degree[c]
                if a == b == c:
                    yield from itertools.combinations(A, 3)
                elif a == b:
                    for u, v in itertools.combinations(A, 2):
                        for z in C:
                            yield (u, v, z)
                elif b == c:
                    for u in A:
                        for v, z in itertools.combinations(B, 2):
                            yield (u, v, z)
                else:
                    yield from itertools.product(A, B, C)

    def cocycle_row(self, u: int, v: int, z: int) -> dict:
        """Sparse row of psi([u,v],z) + psi([v,z],u) + psi([z,u],v) in the unknowns."""
        row: dict = {}
        for (x, y, third) in ((u, v, z), (v, z, u), (z, u, v)):
            for e, c in self.bracket_elements(x, y):
                key = self.unknown(e, third)
                if key is None:
                    continue
                col, sign = key
                val = c if sign > 0 else -c
                if col in row:
                    nv = row[col] + val
                    if nv:
                        row[col] = nv
                    else:
                        del row[col]
                else:
                    row[col] = val
        return row

    def coboundary_rows(self) -> list[list]:
        """Row k: the cochain (u, v) -> k-th coordinate of [u, v] in the weight-w slice."""
        zero = self.M.field.zero
        s = self.M.slice(self.weight).dim
        rows = [[zero] * len(self.pairs) for _ in range(s)]
        w = self.weight
        for col, (u, v) in enumerate(self.pairs):
            a, i = self.elements[u]
            b, j = self.elements[v]
            entries = self.M.slice_brackets[(self.M.residue(a), self.M.residue(b))][i][j]
            for k, x in entries:
                rows[k][col] = x
        return rows

    @cached_property
    def field(self):
        return self.M.field


@dataclass(frozen=True)
class CochainMatrix:
    """Weight-w 2-cochain on a window: one value per pair unknown."""
    basis: WindowBasis
    values: tuple

    @property
    def weight(self) -> tuple[int, ...]:
        return self.basis.weight

    @property
    def cutoff(self) -> int:
        return self.basis.cutoff

    def __call__(self, u: int, v: int):
        key = self.basis.unknown(u, v)
        if key is None:
            return self.basis.field.zero
        col, sign = key
        return self.values[col] if sign > 0 else -self.values[col]

    def as_matrix(self) -> dict[tuple[int, int], object]:
        """Nonzero entries psi(u_i, v_j) keyed by element ids, both orders."""
        out = {}
        for (u, v), x in zip(self.basis.pairs, self.values):
            if x:
                out[(u, v)] = x
                out[(v, u)] = -x
        return out

    def violation(self) -> tuple[int, int, int] | None:
        """First triple on which the cocycle identity fails, or None."""
        for t in self.basis.triples():
            row = self.basis.cocycle_row(*t)
            s = self.basis.field.zero
            for col, c in row.items():
                s = s + c * self.values[col]
            if s:
                return t
        return None

    def is_cocycle(self) -> bool:
        return self.violation() is None

    @classmethod
    def coboundary(cls, basis: WindowBasis, functional: Sequence) -> CochainMatrix:
        """(u, v) -> functional([u, v]) for a functional on the weight-w slice."""
        rows = basis.coboundary_rows()
        zero = basis.field.zero
        vals = [zero] * len(basis)
        for f, row in zip(functional, rows):
            if f:
                vals = [x + f * y for x, y in zip(vals, row)]
        return cls(basis, tuple(vals))

    @classmethod
    def from_function(cls, basis: WindowBasis, fn) -> CochainMatrix:
        """Tabulate fn(u, v) (element ids) over the pair unknowns."""
        return cls(basis, tuple(basis.field(fn(u, v)) for u, v in basis.pairs))
