"""Finite-dimensional Lie algebras over cyclotomic fields.

Structure constants, Killing form, the derivation algebra, the universal
invariant form kappa : g x g -> V(g) with V(g) = Sym^2(g) / der(g).Sym^2(g),
and finite-order automorphisms with their eigenspace decompositions.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

from .exactnum import (
    CycloField,
    ExactMatrix,
    Scalar,
    SparseEchelon,
    make_cyclotomic,
    mat_vec,
    rank_nullspace,
    rref,
)


class LieAlgebraError(ValueError):
    pass


class AntisymmetryViolation(LieAlgebraError):
    def __init__(self, triple):
        self.triple = triple
        super().__init__(f"structure constants not antisymmetric at (i, j, k) = {triple}")


class JacobiViolation(LieAlgebraError):
    def __init__(self, triple):
        self.triple = triple
        super().__init__(f"Jacobi identity fails on basis triple {triple}")


class NotAutomorphism(LieAlgebraError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"matrix does not preserve the bracket on basis pair {pair}")


class OrderMismatch(LieAlgebraError):
    pass


class LieAlgebra:
    """Lie algebra with basis e_0..e_{d-1} and [e_i, e_j] = sum_k c[i][j][k] e_k.

    Construction validates antisymmetry and the Jacobi identity exactly.
    ``matrix_basis`` is kept for matrix algebras so that automorphism presets
    (transpose, conjugation) can be expressed in the same basis.
    """

    def __init__(self, constants, field: CycloField, names: Sequence[str] | None = None,
                 name: str = "", matrix_basis=None, summands: tuple[int, ...] | None = None,
                 validate: bool = True):
        d = len(constants)
        self.field = field
        self.dim = d
        self.name = name
        self.names = tuple(names) if names is not None else tuple(f"x{i + 1}" for i in range(d))
        if len(self.names) != d:
            raise ValueError(f"{len(self.names)} basis names for a {d}-dimensional algebra")
        self.matrix_basis = matrix_basis
        self.summands = summands or (d,)
        zero = field.zero
        if any(len(plane) != d or any(len(row) != d for row in plane) for plane in constants):
            raise ValueError("structure constants must be a d x d x d array")
        c = [[[field(constants[i][j][k]) for k in range(d)] for j in range(d)] for i in range(d)]
        for i, j, k in itertools.product(range(d), repeat=3):
            if c[i][j][k] + c[j][i][k]:
                raise AntisymmetryViolation((i, j, k))
        self._c = c
        # sparse bracket table
        self._br = [[tuple((k, v) for k, v in enumerate(c[i][j]) if v) for j in range(d)] for i in range(d)]
        self._zero = zero
        if validate:
            self._check_jacobi()

    def _check_jacobi(self):
        d = self.dim
        for i in range(d):
            for j in range(i + 1, d):
                for k in range(j + 1, d):
                    e = [self.basis_vector(t) for t in (i, j, k)]
                    s = [a + b + c for a, b, c in zip(
                        self.bracket(self.bracket(e[0], e[1]), e[2]),
                        self.bracket(self.bracket(e[1], e[2]), e[0]),
                        self.bracket(self.bracket(e[2], e[0]), e[1]))]
                    if any(s):
                        raise JacobiViolation((i, j, k))

    def __repr__(self):
        return f"LieAlgebra({self.name or '?'}, dim={self.dim}, m={self.field.order})"

    def __reduce__(self):
        return (_rebuild_lie, (self.structure_constants(), self.field.order, self.names,
                               self.name, self.matrix_basis, self.summands))

    def structure_constants(self):
        return [[list(row) for row in plane] for plane in self._c]

    def basis_vector(self, i: int) -> list[Scalar]:
        v = [self._zero] * self.dim
        v[i] = self.field.one
        return v

    def zero_vector(self) -> list[Scalar]:
        return [self._zero] * self.dim

    def bracket_basis(self, i: int, j: int) -> tuple:
        """Sparse [e_i, e_j] as (k, coefficient) pairs."""
        return self._br[i][j]

    def bracket(self, x: Sequence, y: Sequence) -> list[Scalar]:
        out = [self._zero] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                f = xi * yj
                for k, v in self._br[i][j]:
                    out[k] = out[k] + f * v
        return out

    def ad(self, x: Sequence) -> ExactMatrix:
        """Matrix of ad x, column j = [x, e_j]."""
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return ExactMatrix(tuple(tuple(cols[j][i] for j in range(self.dim)) for i in range(self.dim)), self.dim)

    def over(self, field: CycloField) -> LieAlgebra:
        """The same algebra with scalars embedded into a larger cyclotomic field."""
        if field is self.field:
            return self
        mb = None
        if self.matrix_basis is not None:
            mb = [[[field(a) for a in row] for row in mat] for mat in self.matrix_basis]
        return LieAlgebra(self._c, field, self.names, self.name, mb, self.summands, validate=False)

    @cached_property
    def killing(self) -> ExactMatrix:
        return killing_form(self)

    @cached_property
    def universal(self) -> UniversalFormData:
        return universal_form(self)


def _rebuild_lie(constants, order, names, name, matrix_basis, summands):
    return LieAlgebra(constants, make_cyclotomic(order), names, name, matrix_basis, summands, validate=False)


def make_lie_algebra(constants, field: CycloField | None = None, names=None, name: str = "") -> LieAlgebra:
    """Validated Lie algebra from a d x d x d array of structure constants.

    Entries may be ints, Fractions, Scalars or scalar strings such as
    ``"1/2*z - 1"``.
    """
    if field is None:
        field = make_cyclotomic(1)
    return LieAlgebra(constants, field, names=names, name=name)


# ---------------------------------------------------------------------------
# presets

def _mat_zero(n, field):
    return [[field.zero] * n for _ in range(n)]


def _mat_mul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), a[0][0] * 0) for j in range(n)] for i in range(n)]


def _commutator(a, b):
    ab, ba = _mat_mul(a, b), _mat_mul(b, a)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)]


def from_matrix_basis(mats, field: CycloField, names=None, name="") -> LieAlgebra:
    """Structure constants of the span of square matrices under the commutator."""
    flat = [[a for row in m for a in row] for m in mats]
    d = len(mats)
    # coordinates: solve sum_k c_k flat[k] = target via rref of the transposed system
    cols = ExactMatrix(tuple(tuple(flat[k][p] for k in range(d)) for p in range(len(flat[0]))), d)
    consts = []
    for i in range(d):
        plane = []
        for j in range(d):
            target = [a for row in _commutator(mats[i], mats[j]) for a in row]
            plane.append(_coordinates(cols, target))
        consts.append(plane)
    return LieAlgebra(consts, field, names=names, name=name, matrix_basis=mats)


def _coordinates(cols: ExactMatrix, target):
    from .exactnum import solve_linear
    sol = solve_linear(cols, target)
    if sol is None or sol.nullspace:
        raise LieAlgebraError("matrix span is not closed under the commutator or basis is dependent")
    return sol.particular


def sl(n: int, field: CycloField | None = None) -> LieAlgebra:
    """sl_n in the basis E_ij (i<j), H_i = E_ii - E_i+1,i+1, E_ji (i<j).

    For n = 2 this is the ordered basis (e, h, f).
    """
    field = field or make_cyclotomic(1)
    def unit(i, j):
        m = _mat_zero(n, field)
        m[i][j] = field.one
        return m
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mats, names = [], []
    for i, j in upper:
        mats.append(unit(i, j))
        names.append(f"E{i + 1}{j + 1}")
    for i in range(n - 1):
        h = _mat_zero(n, field)
        h[i][i] = field.one
        h[i + 1][i + 1] = -field.one
        mats.append(h)
        names.append(f"H{i + 1}")
    for i, j in upper:
        mats.append(unit(j, i))
        names.append(f"E{j + 1}{i + 1}")
    if n == 2:
        names = ["e", "h", "f"]
    return from_matrix_basis(mats, field, names=names, name=f"sl{n}")


def sl2(field: CycloField | None = None) -> LieAlgebra:
    return sl(2, field)


def abelian(d: int, field: CycloField | None = None) -> LieAlgebra:
    field = field or make_cyclotomic(1)
    z = field.zero
    return LieAlgebra([[[z] * d for _ in range(d)] for _ in range(d)], field, name=f"abelian{d}")


def direct_sum(*algs: LieAlgebra) -> LieAlgebra:
    fields = {a.field for a in algs}
    if len(fields) != 1:
        raise ValueError("direct sum of algebras over different fields")
    field = fields.pop()
    d = sum(a.dim for a in algs)
    consts = [[[field.zero] * d for _ in range(d)] for _ in range(d)]
    names = []
    off = 0
    for idx, a in enumerate(algs):
        for i in range(a.dim):
            for j in range(a.dim):
                for k, v in a.bracket_basis(i, j):
                    consts[off + i][off + j][off + k] = v
        names += [f"{nm}_{idx + 1}" for nm in a.names]
        off += a.dim
    sizes = tuple(s for a in algs for s in a.summands)
    return LieAlgebra(consts, field, names=names, name="+".join(a.name for a in algs), summands=sizes)


# ---------------------------------------------------------------------------
# Killing form, derivations, V(g)

def killing_form(L: LieAlgebra) -> ExactMatrix:
    """K(x, y) = tr(ad x ad y) on basis pairs."""
    d = L.dim
    ads = [L.ad(L.basis_vector(i)).rows for i in range(d)]
    K = [[L.field.zero] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            t = L.field.zero
            A, B = ads[i], ads[j]
            for p in range(d):
                for q in range(d):
                    if A[p][q] and B[q][p]:
                        t = t + A[p][q] * B[q][p]
            K[i][j] = K[j][i] = t
    return ExactMatrix(tuple(tuple(r) for r in K), d)


def derivations(L: LieAlgebra) -> list[ExactMatrix]:
    """Canonical basis of der(g) from the nullspace of the derivation system.

    Unknown D[p][q] (D e_q = sum_p D[p][q] e_p) sits at column p*d + q; one
    equation per ordered basis pair (i, j) and output coordinate.
    """
    d = L.dim
    zero = L.field.zero
    if d == 0:
        return []
    rows = []
    for i in range(d):
        for j in range(d):
            for out in range(d):
                row = [zero] * (d * d)
                # D[e_i, e_j]
                for k, v in L.bracket_basis(i, j):
                    row[out * d + k] = row[out * d + k] + v
                # - [D e_i, e_j] = - sum_p D[p][i] [e_p, e_j]
                for p in range(d):
                    for k, v in L.bracket_basis(p, j):
                        if k == out:
                            row[p * d + i] = row[p * d + i] - v
                    for k, v in L.bracket_basis(i, p):
                        if k == out:
                            row[p * d + j] = row[p * d + j] - v
                rows.append(row)
    _, null = rank_nullspace(ExactMatrix(tuple(tuple(r) for r in rows), d * d))
    return [ExactMatrix(tuple(tuple(v[p * d + q] for q in range(d)) for p in range(d)), d) for v in null]


def sym2_index(d: int) -> dict[tuple[int, int], int]:
    """Lexicographic index of the pairs (i, j), i <= j, spanning Sym^2."""
    return {pair: n for n, pair in enumerate((i, j) for i in range(d) for j in range(i, d))}


@dataclass(frozen=True)
class UniversalFormData:
    """V(g) in canonical coordinates and kappa on basis pairs.

    ``projection`` is dim V x dim Sym^2; ``kappa[i][j]`` is the V-coordinate
    vector of the class of e_i . e_j.
    """
    dim: int
    projection: ExactMatrix
    kappa: tuple
    sym2_dim: int
    killed_pivots: tuple[int, ...] = dc_field(default=())
    free_columns: tuple[int, ...] = dc_field(default=())

    def value(self, x: Sequence, y: Sequence) -> list:
        """kappa(x, y) for coordinate vectors x, y."""
        d = len(x)
        out = None
        for i in range(d):
            if not x[i]:
                continue
            for j in range(d):
                if not y[j]:
                    continue
                f = x[i] * y[j]
                kv = self.kappa[i][j]
                out = [f * a for a in kv] if out is None else [o + f * a for o, a in zip(out, kv)]
        if out is None:
            zero = (x[0] * 0) if d else 0
            return [zero] * self.dim
        return out


def _sym2_vector_of_product(u: Sequence, v: Sequence, index, zero) -> list:
    out = [zero] * len(index)
    for p, up in enumerate(u):
        if not up:
            continue
        for q, vq in enumerate(v):
            if not vq:
                continue
            k = index[(p, q) if p <= q else (q, p)]
            out[k] = out[k] + up * vq
    return out


def universal_form(L: LieAlgebra) -> UniversalFormData:
    """V(g) = Sym^2(g) / span{D.(e_i e_j)} and kappa(x, y) = class of x.y.

    Canonical coordinates of V are the non-pivot columns of the reduced
    echelon form of the derivation-action subspace.
    """
    d = L.dim
    field = L.field
    zero = field.zero
    index = sym2_index(d)
    n2 = len(index)
    ders = derivations(L)
    ech = SparseEchelon(n2, zero)
    basis = [L.basis_vector(i) for i in range(d)]
    for D in ders:
        images = [[D.rows[p][q] for p in range(d)] for q in range(d)]  # D e_q
        for (i, j) in index:
            w1 = _sym2_vector_of_product(images[i], basis[j], index, zero)
            w2 = _sym2_vector_of_product(basis[i], images[j], index, zero)
            ech.add({k: a + b for k, (a, b) in enumerate(zip(w1, w2)) if a + b})
    rows, pivots = ech.rref()
    pivset = set(pivots)
    free = [c for c in range(n2) if c not in pivset]
    # projection: v -> (v - sum_p v[p] row_p) restricted to free columns
    proj = []
    for f in free:
        prow = [zero] * n2
        prow[f] = field.one
        for row, p in zip(rows, pivots):
            a = row.get(f)
            if a:
                prow[p] = prow[p] - a
        proj.append(prow)
    P = ExactMatrix(tuple(tuple(r) for r in proj), n2)
    kappa = [[None] * d for _ in range(d)]
    for (i, j), k in index.items():
        col = tuple(P.rows[r][k] for r in range(len(free)))
        kappa[i][j] = kappa[j][i] = col
    return UniversalFormData(len(free), P, tuple(tuple(r) for r in kappa), n2, tuple(pivots), tuple(free))


def project_to_v(U: UniversalFormData, sym2_vec: Sequence) -> list:
    return mat_vec(U.projection.rows, sym2_vec)


def induced_action_on_v(L: LieAlgebra, A) -> ExactMatrix:
    """Matrix of the map V(g) -> V(g) induced by an automorphism A of g."""
    if isinstance(A, FiniteAutomorphism):
        A = A.matrix
    U = L.universal
    d = L.dim
    index = sym2_index(d)
    zero = L.field.zero
    cols = []
    images = [[A.rows[p][q] for p in range(d)] for q in range(d)]
    pair_of = {k: pair for pair, k in index.items()}
    for f in U.free_columns:
        i, j = pair_of[f]
        cols.append(project_to_v(U, _sym2_vector_of_product(images[i], images[j], index, zero)))
    return ExactMatrix(tuple(tuple(cols[c][r] for c in range(U.dim)) for r in range(U.dim)), U.dim)


# ---------------------------------------------------------------------------
# automorphisms

def _mat_pow_identity(A: ExactMatrix, k: int) -> bool:
    d = A.ncols
    I = ExactMatrix.identity(d, A.rows[0][0] * 0 + 1, A.rows[0][0] * 0) if d else A
    P = I
    for _ in range(k):
        P = P @ A
    return P == I


@dataclass(frozen=True, eq=False)
class FiniteAutomorphism:
    """Bracket-preserving matrix A on g with A^order = 1, order minimal."""
    matrix: ExactMatrix
    order: int
    label: str = ""

    def apply(self, x: Sequence) -> list:
        return mat_vec(self.matrix.rows, x)


def make_automorphism(L: LieAlgebra, matrix, order: int, label: str = "") -> FiniteAutomorphism:
    d = L.dim
    field = L.field
    if isinstance(matrix, ExactMatrix):
        A = ExactMatrix(tuple(tuple(field(a) for a in r) for r in matrix.rows), matrix.ncols)
    else:
        A = ExactMatrix.from_rows([[field(a) for a in r] for r in matrix], d)
    if A.shape != (d, d):
        raise ValueError(f"automorphism matrix has shape {A.shape}, expected {(d, d)}")
    if order < 1:
        raise OrderMismatch(f"automorphism order must be >= 1, got {order}")
    cols = [[A.rows[p][q] for p in range(d)] for q in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            lhs = mat_vec(A.rows, L.bracket(L.basis_vector(i), L.basis_vector(j)))
            if lhs != L.bracket(cols[i], cols[j]):
                raise NotAutomorphism((i, j))
    if d:
        if not _mat_pow_identity(A, order):
            raise OrderMismatch(f"A^{order} is not the identity")
        for k in range(1, order):
            if order % k == 0 and _mat_pow_identity(A, k):
                raise OrderMismatch(f"declared order {order} but A^{k} is already the identity")
    return FiniteAutomorphism(A, order, label)


def identity_automorphism(L: LieAlgebra) -> FiniteAutomorphism:
    return make_automorphism(L, ExactMatrix.identity(L.dim, L.field.one, L.field.zero), 1, "identity")


def _matrix_algebra_automorphism(L: LieAlgebra, fn, order, label) -> FiniteAutomorphism:
    if L.matrix_basis is None:
        raise LieAlgebraError(f"{label} needs a matrix Lie algebra, got {L!r}")
    mats = L.matrix_basis
    flat = [[a for row in m for a in row] for m in mats]
    d = L.dim
    cols_sys = ExactMatrix(tuple(tuple(flat[k][p] for k in range(d)) for p in range(len(flat[0]))), d)
    images = [_coordinates(cols_sys, [a for row in fn(m) for a in row]) for m in mats]
    A = [[images[q][p] for q in range(d)] for p in range(d)]
    return make_automorphism(L, A, order, label)


def neg_transpose(L: LieAlgebra) -> FiniteAutomorphism:
    """The outer automorphism x -> -x^T of sl_n (order 2)."""
    def fn(m):
        n = len(m)
        return [[-m[j][i] for j in range(n)] for i in range(n)]
    return _matrix_algebra_automorphism(L, fn, 2, "neg-transpose")


def inner_diagonal(L: LieAlgebra, exponents: Sequence[int], r: int) -> FiniteAutomorphism:
    """Ad(g) for g = diag(zeta_r^e_1, ..., zeta_r^e_n); order = the actual order."""
    field = L.field
    g = [field.root_of_unity(e, r) for e in exponents]
    ginv = [x.inverse() for x in g]
    def fn(m):
        n = len(m)
        return [[g[i] * m[i][j] * ginv[j] for j in range(n)] for i in range(n)]
    # order of Ad(g) = order of the ratios g_i/g_j in Z/r
    diffs = [(a - b) % r for a in exponents for b in exponents]
    order = r // math.gcd(r, *diffs) if any(diffs) else 1
    return _matrix_algebra_automorphism(L, fn, order, f"inner{tuple(exponents)}/{r}")


def swap_summands(L: LieAlgebra) -> FiniteAutomorphism:
    """Exchange the two halves of g + g (order 2)."""
    d = L.dim
    if d % 2 or len(L.summands) != 2 or L.summands[0] != L.summands[1]:
        raise LieAlgebraError("swap needs a direct sum of two equal-size summands")
    h = d // 2
    A = [[L.field.zero] * d for _ in range(d)]
    for i in range(h):
        A[i + h][i] = L.field.one
        A[i][i + h] = L.field.one
    return make_automorphism(L, A, 2, "swap")


@dataclass(frozen=True)
class Eigenspace:
    power: int          # eigenvalue zeta_r^power
    eigenvalue: Scalar
    basis: tuple


def automorphism_eigenspaces(L: LieAlgebra, A: FiniteAutomorphism) -> list[Eigenspace]:
    """Decomposition g = sum_j g_j with A = zeta_r^j on g_j, j = 0..r-1."""
    r = A.order
    field = L.field
    if field.order % r:
        raise OrderMismatch(f"{field} lacks the {r}-th roots of unity")
    d = L.dim
    out = []
    total = 0
    for j in range(r):
        lam = field.root_of_unity(j, r)
        M = ExactMatrix(tuple(tuple(A.matrix.rows[p][q] - (lam if p == q else 0) for q in range(d))
                              for p in range(d)), d)
        _, null = rank_nullspace(M)
        total += len(null)
        out.append(Eigenspace(j, lam, tuple(tuple(v) for v in null)))
    if total != d:
        raise OrderMismatch(f"eigenspaces have total dimension {total}, expected {d}")
    for a in out:
        for b in out:
            lam = field.root_of_unity(a.power + b.power, r)
            for x in a.basis:
                for y in b.basis:
                    br = L.bracket(x, y)
                    if A.apply(br) != [lam * t for t in br]:
                        raise NotAutomorphism((a.power, b.power))
    return out


def commute(A: FiniteAutomorphism, B: FiniteAutomorphism) -> bool:
    return (A.matrix @ B.matrix) == (B.matrix @ A.matrix)
