"""The universal 2-cocycle  omega(xi, eta) = [kappa(xi, d eta)]  of a multiloop algebra.

Values live in (Omega^1 / d Omega^0) (x) V(g), stored weight by weight.
kappa is extended C[T]-bilinearly: kappa(p (x) x, w (x) y) = p w (x) kappa(x, y).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .cochains import CochainMatrix, WindowBasis
from .eqmap import EqMapElement, MultiloopAlgebra, bracket
from .exactnum import ExactMatrix, kernel, mat_vec, solve_linear
from .laurent import LaurentPoly, OneForm, add_degrees, exterior_d, omegabar_weight_dim, reduce_vector


class NotACocycle(ValueError):
    def __init__(self, triple):
        self.triple = triple
        super().__init__(f"cochain violates the cocycle identity on element triple {triple}")


class Inconsistent(ArithmeticError):
    """psi is not phi o omega + coboundary on this window: a finite-cutoff result."""

    def __init__(self, weight, cutoff, detail=""):
        self.weight = weight
        self.cutoff = cutoff
        super().__init__(f"cochain at weight {weight} does not factor through omega_alg at cutoff {cutoff}"
                         + (f" ({detail})" if detail else ""))


@dataclass(frozen=True)
class CocycleValue:
    """weight -> coordinates in (weight component of Omega-bar^1) (x) V.

    Coordinate (i, j) -- i-th reduced one-form coordinate, j-th V coordinate --
    sits at position i * dim_v + j.  Zero weights are not stored.
    """
    n: int
    dim_v: int
    values: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for w, c in self.values.items():
            w, c = tuple(w), tuple(c)
            if len(c) != omegabar_weight_dim(self.n, w) * self.dim_v:
                raise ValueError(f"weight {w}: {len(c)} coordinates, expected "
                                 f"{omegabar_weight_dim(self.n, w) * self.dim_v}")
            if any(c):
                clean[w] = c
        object.__setattr__(self, "values", clean)

    def __add__(self, other: CocycleValue) -> CocycleValue:
        out = dict(self.values)
        for w, c in other.values.items():
            out[w] = tuple(x + y for x, y in zip(out[w], c)) if w in out else c
        return CocycleValue(self.n, self.dim_v, out)

    def __neg__(self) -> CocycleValue:
        return CocycleValue(self.n, self.dim_v, {w: tuple(-x for x in c) for w, c in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, s) -> CocycleValue:
        return CocycleValue(self.n, self.dim_v, {w: tuple(s * x for x in c) for w, c in self.values.items()})

    def __eq__(self, other):
        if not isinstance(other, CocycleValue):
            return NotImplemented
        return (self.n, self.dim_v, self.values) == (other.n, other.dim_v, other.values)

    def __bool__(self):
        return bool(self.values)

    def is_zero(self) -> bool:
        return not self.values

    def weights(self) -> list[tuple[int, ...]]:
        return sorted(self.values)

    def at(self, w: Sequence[int], zero=0) -> tuple:
        w = tuple(w)
        if w in self.values:
            return self.values[w]
        return (zero,) * (omegabar_weight_dim(self.n, w) * self.dim_v)

    def __str__(self):
        return format_cocycle_value(self)


def _class_label(n: int, w: tuple[int, ...], i: int) -> str:
    k0 = next((k for k, x in enumerate(w) if x), None)
    dirs = [k for k in range(n) if k != k0]
    k = dirs[i]
    lam = "L" if n == 1 else f"L{k + 1}"
    mono = []
    for idx, e in enumerate(w):
        if e:
            v = "t" if n == 1 else f"t{idx + 1}"
            mono.append(v if e == 1 else f"{v}^{e}")
    return "*".join(mono + [lam])


def format_cocycle_value(c: CocycleValue) -> str:
    """e.g. ``weight (0): [L]⊗κ-class * (-1)``; one line per weight."""
    if not c.values:
        return "0"
    lines = []
    for w in c.weights():
        coords = c.values[w]
        parts = []
        for pos, x in enumerate(coords):
            if not x:
                continue
            i, j = divmod(pos, c.dim_v)
            kap = "κ-class" if c.dim_v == 1 else f"κ-class{j + 1}"
            parts.append(f"[{_class_label(c.n, w, i)}]⊗{kap} * ({x})")
        lines.append(f"weight ({','.join(map(str, w))}): " + " + ".join(parts))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# evaluation

def _same_parent(*xs: EqMapElement) -> MultiloopAlgebra:
    from .eqmap import MixedParents
    M = xs[0].parent
    for x in xs[1:]:
        if x.parent is not M:
            raise MixedParents("elements belong to different multiloop algebras")
    return M


def _kappa_terms(xi: EqMapElement, eta: EqMapElement):
    """Yield (a, b, kappa(x, y)) over term pairs of xi and eta."""
    M = _same_parent(xi, eta)
    U = M.lie.universal
    for a, x in xi.ambient_terms().items():
        for b, y in eta.ambient_terms().items():
            kv = U.value(x, y)
            if any(kv):
                yield a, b, kv


def kappa_d(xi: EqMapElement, eta: EqMapElement) -> list[OneForm]:
    """kappa(xi, d eta) in Omega^1 (x) V, as one one-form per V coordinate."""
    M = _same_parent(xi, eta)
    dim_v = M.lie.universal.dim
    terms = [dict() for _ in range(dim_v)]
    for a, b, kv in _kappa_terms(xi, eta):
        c = add_degrees(a, b)
        for k, bk in enumerate(b):
            if not bk:
                continue
            for j, v in enumerate(kv):
                if v:
                    key = (c, k)
                    val = v * bk
                    terms[j][key] = terms[j][key] + val if key in terms[j] else val
    return [OneForm(M.n, t, M.field) for t in terms]


def kappa_poly(xi: EqMapElement, eta: EqMapElement) -> list[LaurentPoly]:
    """kappa(xi, eta) in C[T] (x) V, one Laurent polynomial per V coordinate."""
    M = _same_parent(xi, eta)
    dim_v = M.lie.universal.dim
    terms = [dict() for _ in range(dim_v)]
    for a, b, kv in _kappa_terms(xi, eta):
        c = add_degrees(a, b)
        for j, v in enumerate(kv):
            if v:
                terms[j][c] = terms[j][c] + v if c in terms[j] else v
    return [LaurentPoly(M.n, t, M.field, M.degree_cap) for t in terms]


def reduce_forms(M: MultiloopAlgebra, forms: Sequence[OneForm]) -> CocycleValue:
    """Class of an element of Omega^1 (x) V in Omega-bar^1 (x) V, per weight."""
    dim_v = len(forms)
    weights = sorted({w for f in forms for w in f.weights()})
    zero = M.field.zero
    out = {}
    for w in weights:
        per_v = [reduce_vector(f.component(w), w) for f in forms]
        wd = omegabar_weight_dim(M.n, w)
        coords = [zero] * (wd * dim_v)
        for j, red in enumerate(per_v):
            for i, x in enumerate(red):
                coords[i * dim_v + j] = x
        out[w] = tuple(coords)
    return CocycleValue(M.n, dim_v, out)


def omega_alg(xi: EqMapElement, eta: EqMapElement) -> CocycleValue:
    """omega(t^a (x) x, t^b (x) y) = kappa(x, y) (x) [t^(a+b) sum_k b_k L_k]."""
    M = _same_parent(xi, eta)
    return reduce_forms(M, kappa_d(xi, eta))


def antisymmetry_witness(xi: EqMapElement, eta: EqMapElement) -> list[OneForm]:
    """kappa(xi, d eta) + kappa(eta, d xi) - d kappa(xi, eta), before any quotient.

    Identically zero; this is why omega is antisymmetric modulo exact forms.
    """
    M = _same_parent(xi, eta)
    left = kappa_d(xi, eta)
    right = kappa_d(eta, xi)
    exact = [exterior_d(p) for p in kappa_poly(xi, eta)]
    return [l + r - e for l, r, e in zip(left, right, exact)]


def cocycle_defect(xi: EqMapElement, eta: EqMapElement, zeta: EqMapElement) -> CocycleValue:
    """omega([xi,eta],zeta) + omega([eta,zeta],xi) + omega([zeta,xi],eta); identically zero."""
    _same_parent(xi, eta, zeta)
    return (omega_alg(bracket(xi, eta), zeta) + omega_alg(bracket(eta, zeta), xi)
            + omega_alg(bracket(zeta, xi), eta))


def v_eigenspace(M: MultiloopAlgebra, w: Sequence[int]) -> list[list]:
    """Basis of {v in V : sigma_k v = zeta_{r_k}^{-w_k} v for all k}."""
    dim_v = M.lie.universal.dim
    if dim_v == 0:
        return []
    rows = []
    for S, r, wk in zip(M.v_actions, M.act.orders, w):
        lam = M.field.root_of_unity(-wk, r)
        for p in range(dim_v):
            rows.append(tuple(S.rows[p][q] - (lam if p == q else 0) for q in range(dim_v)))
    null, _ = kernel(ExactMatrix(tuple(rows), dim_v))
    return null


def target_dim(M: MultiloopAlgebra, w: Sequence[int]) -> int:
    """Dimension of the Delta-invariant weight-w part of Omega-bar^1 (x) V(g).

    For simple g the action on V is trivial and this is the dimension of the
    invariant weight-w part of Omega-bar^1 alone.
    """
    return omegabar_weight_dim(M.n, w) * len(v_eigenspace(M, w))


def is_delta_invariant(M: MultiloopAlgebra, forms: Sequence[OneForm]) -> bool:
    """Whether an element of Omega^1 (x) V is fixed by Delta (checked on generators)."""
    weights = sorted({w for f in forms for w in f.weights()})
    zero = M.field.zero
    for w in weights:
        vecs = [[f.terms.get((w, k), zero) for f in forms] for k in range(M.n)]
        for S, r, wk in zip(M.v_actions, M.act.orders, w):
            lam = M.field.root_of_unity(-wk, r)
            for v in vecs:
                if mat_vec(S.rows, v) != [lam * x for x in v]:
                    return False
    return True


# ---------------------------------------------------------------------------
# factorization through omega

@dataclass(frozen=True)
class LinearFunctional:
    """phi at one weight, dual to CocycleValue coordinates there."""
    weight: tuple[int, ...]
    coeffs: tuple

    def __call__(self, value: CocycleValue):
        coords = value.at(self.weight)
        acc = 0
        for a, b in zip(self.coeffs, coords):
            if a and b:
                acc = a * b + acc
        return acc

    def is_zero(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True)
class Factorization:
    phi: LinearFunctional
    b: tuple              # functional on the weight-w slice
    weight: tuple[int, ...]
    cutoff: int


def window_omega(basis: WindowBasis) -> list[tuple]:
    """omega_alg(u, v) at the window weight, one coordinate tuple per pair unknown."""
    M = basis.M
    zero = M.field.zero
    w = basis.weight
    out = []
    for u, v in basis.pairs:
        val = omega_alg(basis.element(u), basis.element(v))
        out.append(val.at(w, zero))
    return out


def factorize(psi: CochainMatrix) -> Factorization:
    """Solve psi(x, y) = phi(omega(x, y)) + b([x, y]) on every pair of the window.

    Raises NotACocycle if psi fails the cocycle identity on the window and
    Inconsistent if no (phi, b) exists at this cutoff.
    """
    basis = psi.basis
    bad = psi.violation()
    if bad is not None:
        raise NotACocycle(bad)
    M = basis.M
    omegas = window_omega(basis)
    cob = basis.coboundary_rows()
    t = len(omegas[0]) if omegas else 0
    rows = []
    for col in range(len(basis)):
        rows.append(tuple(omegas[col]) + tuple(r[col] for r in cob))
    ncols = t + len(cob)
    if ncols == 0:
        if any(psi.values):
            raise Inconsistent(basis.weight, basis.cutoff, "no unknowns")
        return Factorization(LinearFunctional(basis.weight, ()), (), basis.weight, basis.cutoff)
    sol = solve_linear(ExactMatrix(tuple(rows), ncols), list(psi.values), zero=M.field.zero)
    if sol is None:
        raise Inconsistent(basis.weight, basis.cutoff)
    x = sol.particular
    return Factorization(LinearFunctional(basis.weight, tuple(x[:t])), tuple(x[t:]), basis.weight, basis.cutoff)


def omega_cochain(basis: WindowBasis, functional: Sequence) -> CochainMatrix:
    """phi o omega_alg tabulated on the window, for phi given by coordinates."""
    zero = basis.M.field.zero
    vals = []
    for coords in window_omega(basis):
        acc = zero
        for a, b in zip(functional, coords):
            if a and b:
                acc = acc + a * b
        vals.append(acc)
    return CochainMatrix(basis, tuple(vals))
