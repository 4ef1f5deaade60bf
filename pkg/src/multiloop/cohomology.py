"""Brute-force weight-graded H^2 (trivial scalar coefficients) on cutoff windows.

Z is cut out by the cocycle identity on every element triple whose degrees
and pairwise bracket degrees stay in the window, so it over-approximates the
true cocycle space near the window boundary; results are only trusted when
they agree at cutoffs D and D + 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .cochains import CochainMatrix, CutoffWindow, WindowBasis, WindowEmpty
from .cocycle import Factorization, Inconsistent, factorize, target_dim
from .eqmap import MultiloopAlgebra
from .exactnum import SparseEchelon

__all__ = [
    "H2Result", "StabilityReport", "TargetVerdict", "WeightCertificate", "Unstable", "WindowEmpty",
    "ce_h2_weight", "cutoff_stability", "compare_to_target", "certify_weight", "universality_certificate",
]


class Unstable(RuntimeError):
    def __init__(self, report: StabilityReport):
        self.report = report
        super().__init__(f"dim H^2 at weight {report.weight} changes between cutoffs "
                         f"{report.cutoff} and {report.cutoff + 1}: {report.dim_at_d} vs {report.dim_at_d1}")


@dataclass(frozen=True)
class H2Result:
    weight: tuple[int, ...]
    cutoff: int
    dim_z: int
    dim_b: int
    representatives: tuple[CochainMatrix, ...]
    n_unknowns: int
    n_equations: int

    @property
    def dim_h2(self) -> int:
        return self.dim_z - self.dim_b


def ce_h2_weight(M: MultiloopAlgebra, w: Sequence[int], D: int) -> H2Result:
    """dim Z - dim B for weight-w 2-cochains on the window |a_k| <= D.

    Representatives span a canonical complement of B in Z: Z-basis vectors
    reduced modulo the echelon form of B, then brought to reduced echelon form.
    """
    w = tuple(w)
    basis = WindowBasis(M, CutoffWindow(D, w))
    zero = M.field.zero
    N = len(basis)
    ech = SparseEchelon(N, zero)
    n_eq = 0
    for t in basis.triples():
        n_eq += 1
        row = basis.cocycle_row(*t)
        if row:
            ech.add(row)
            if ech.rank == N:
                break
    Z = ech.nullspace()
    B = SparseEchelon(N, zero)
    for row in basis.coboundary_rows():
        B.add({k: x for k, x in enumerate(row) if x})
    reps = SparseEchelon(N, zero)
    for z in Z:
        reps.add(B.reduce({k: x for k, x in enumerate(z) if x}))
    if reps.rank != len(Z) - B.rank:
        raise ArithmeticError(f"coboundaries are not contained in the cocycle space at weight {w}, D={D}")
    rows, _ = reps.rref()
    rep_mats = tuple(CochainMatrix(basis, tuple(r.get(k, zero) for k in range(N))) for r in rows)
    return H2Result(w, D, len(Z), B.rank, rep_mats, N, n_eq)


@dataclass(frozen=True)
class StabilityReport:
    weight: tuple[int, ...]
    cutoff: int
    dim_at_d: int
    dim_at_d1: int
    result: H2Result = dc_field(repr=False)
    result_next: H2Result = dc_field(repr=False)

    @property
    def stable(self) -> bool:
        return self.dim_at_d == self.dim_at_d1


def cutoff_stability(M: MultiloopAlgebra, w: Sequence[int], D: int) -> StabilityReport:
    r0 = ce_h2_weight(M, w, D)
    r1 = ce_h2_weight(M, w, D + 1)
    return StabilityReport(tuple(w), D, r0.dim_h2, r1.dim_h2, r0, r1)


@dataclass(frozen=True)
class TargetVerdict:
    weight: tuple[int, ...]
    cutoff: int
    h2_dim: int
    target_dim: int
    stability: StabilityReport = dc_field(repr=False)

    @property
    def match(self) -> bool:
        return self.h2_dim == self.target_dim


def compare_to_target(M: MultiloopAlgebra, w: Sequence[int], D: int,
                      stability: StabilityReport | None = None) -> TargetVerdict:
    """Compare dim H^2 with the invariant weight-w part of Omega-bar^1 (x) V(g)."""
    rep = stability or cutoff_stability(M, w, D)
    if not rep.stable:
        raise Unstable(rep)
    return TargetVerdict(tuple(w), D, rep.dim_at_d, target_dim(M, w), rep)


@dataclass(frozen=True)
class WeightCertificate:
    weight: tuple[int, ...]
    cutoff: int
    h2_dim: int
    target_dim: int
    factorizations: tuple[Factorization, ...]

    @property
    def success(self) -> bool:
        return len(self.factorizations) == self.h2_dim

    @property
    def nonzero_phi(self) -> bool:
        return any(not f.phi.is_zero() for f in self.factorizations)


def certify_weight(M: MultiloopAlgebra, w: Sequence[int], D: int,
                   stability: StabilityReport | None = None) -> WeightCertificate:
    rep = stability or cutoff_stability(M, w, D)
    if not rep.stable:
        raise Unstable(rep)
    facts = []
    for psi in rep.result.representatives:
        try:
            facts.append(factorize(psi))
        except Inconsistent as exc:
            raise Inconsistent(tuple(w), D, f"representative {len(facts)} of {rep.dim_at_d}") from exc
    return WeightCertificate(tuple(w), D, rep.dim_at_d, target_dim(M, w), tuple(facts))


def universality_certificate(M: MultiloopAlgebra, weights: Sequence[Sequence[int]], D: int) -> list[WeightCertificate]:
    """Factor every H^2 representative through omega_alg, weight by weight."""
    return [certify_weight(M, w, D) for w in sorted(tuple(w) for w in weights)]
