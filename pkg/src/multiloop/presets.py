"""Named Lie algebras, automorphisms and multiloop algebras used by configs and tests."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .eqmap import MultiloopAlgebra, build_multiloop
from .exactnum import make_cyclotomic
from .liealg import (
    LieAlgebra,
    abelian,
    direct_sum,
    identity_automorphism,
    inner_diagonal,
    neg_transpose,
    sl,
    sl2,
    swap_summands,
)

LIE_PRESETS: dict[str, Callable] = {
    "sl2": lambda F: sl2(F),
    "sl3": lambda F: sl(3, F),
    "sl4": lambda F: sl(4, F),
    "sl2+sl2": lambda F: direct_sum(sl2(F), sl2(F)),
    "abelian1": lambda F: abelian(1, F),
    "abelian2": lambda F: abelian(2, F),
}


def lie_preset(name: str, field_order: int = 1) -> LieAlgebra:
    try:
        build = LIE_PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown Lie algebra preset {name!r}; choose from {sorted(LIE_PRESETS)}") from None
    return build(make_cyclotomic(field_order))


def automorphism_preset(L: LieAlgebra, spec):
    """'identity' | 'neg-transpose' | 'swap' | {'inner': [e_1..e_n], 'order': r}."""
    if spec == "identity":
        return identity_automorphism(L)
    if spec == "neg-transpose":
        return neg_transpose(L)
    if spec == "swap":
        return swap_summands(L)
    if isinstance(spec, dict) and "inner" in spec:
        return inner_diagonal(L, spec["inner"], spec["order"])
    raise ValueError(f"unknown automorphism preset {spec!r}")


@dataclass(frozen=True)
class MultiloopPreset:
    name: str
    algebra: str
    r: tuple[int, ...]
    automorphisms: tuple
    twisted: bool
    note: str = ""

    def as_config(self) -> dict:
        return {"algebra": self.algebra, "r": list(self.r), "automorphisms": list(self.automorphisms)}


MULTILOOP_PRESETS: dict[str, MultiloopPreset] = {p.name: p for p in [
    MultiloopPreset("sl2-loop", "sl2", (1,), ("identity",), False, "affine sl2 loop algebra"),
    MultiloopPreset("sl2-loop2", "sl2", (1, 1), ("identity", "identity"), False, "toroidal sl2, n = 2"),
    MultiloopPreset("a2-twisted", "sl3", (2,), ("neg-transpose",), True, "twisted loop algebra of type A2(2)"),
    MultiloopPreset("sl2-inner", "sl2", (2,), ({"inner": [0, 1], "order": 2},), True,
                    "sl2 twisted by Ad diag(1, -1)"),
    MultiloopPreset("sl3-inner3", "sl3", (3,), ({"inner": [0, 1, 2], "order": 3},), True,
                    "sl3 twisted by Ad diag(1, z3, z3^2)"),
    MultiloopPreset("sl2-bitwisted", "sl2", (2, 2), ({"inner": [0, 1], "order": 2}, "neg-transpose"), True,
                    "n = 2, two commuting involutions"),
    MultiloopPreset("sl2xsl2-loop", "sl2+sl2", (1,), ("identity",), False, "semisimple, dim V = 2"),
    MultiloopPreset("sl2xsl2-swap", "sl2+sl2", (2,), ("swap",), True, "summand swap, acts on V"),
]}

TWISTED_PRESETS = tuple(name for name, p in MULTILOOP_PRESETS.items() if p.twisted)


def build_from_parts(algebra: str, r, automorphisms, degree_cap: int = 64, name: str = "") -> MultiloopAlgebra:
    order = math.lcm(*r)
    L = lie_preset(algebra, order)
    auts = [automorphism_preset(L, s) for s in automorphisms]
    return build_multiloop(L, tuple(r), auts, degree_cap=degree_cap, name=name or algebra)


@lru_cache(maxsize=None)
def multiloop_preset(name: str, degree_cap: int = 64) -> MultiloopAlgebra:
    try:
        p = MULTILOOP_PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown multiloop preset {name!r}; choose from {sorted(MULTILOOP_PRESETS)}") from None
    return build_from_parts(p.algebra, p.r, p.automorphisms, degree_cap, name)
