"""Run configuration: a JSON file validated against a versioned schema.

Defaults are filled in before anything runs, and the expanded config is what
reports echo back.
"""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import jsonschema

from .density import CATALOGUE, INTERVAL_CATALOGUE, DEFAULT_DPS
from .presets import LIE_PRESETS, MULTILOOP_PRESETS

SCHEMA_VERSION = "multiloop-run/1"

_scalar = {"oneOf": [{"type": "integer"}, {"type": "string"}]}
_weight = {"oneOf": [{"type": "integer"}, {"type": "array", "items": {"type": "integer"}, "minItems": 1}]}

_automorphism = {
    "oneOf": [
        {"enum": ["identity", "neg-transpose", "swap"]},
        {"type": "object", "additionalProperties": False, "required": ["inner", "order"],
         "properties": {"inner": {"type": "array", "items": {"type": "integer"}},
                        "order": {"type": "integer", "minimum": 1}}},
        {"type": "object", "additionalProperties": False, "required": ["matrix", "order"],
         "properties": {"matrix": {"type": "array", "items": {"type": "array", "items": _scalar}},
                        "order": {"type": "integer", "minimum": 1},
                        "label": {"type": "string"}}},
    ]
}

_custom_algebra = {
    "type": "object", "additionalProperties": False, "required": ["constants"],
    "properties": {
        "constants": {"type": "array", "items": {"type": "array", "items": {"type": "array", "items": _scalar}}},
        "names": {"type": "array", "items": {"type": "string"}},
        "name": {"type": "string"},
    },
}

SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["schema"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "preset": {"enum": sorted(MULTILOOP_PRESETS)},
        "algebra": {"oneOf": [{"enum": sorted(LIE_PRESETS)}, _custom_algebra]},
        "n": {"type": "integer", "minimum": 1},
        "r": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "automorphisms": {"type": "array", "items": _automorphism},
        "field_order": {"type": "integer", "minimum": 1},
        "degree_cap": {"type": "integer", "minimum": 1},
        "construct": {
            "type": "object", "additionalProperties": False,
            "properties": {"weights": {"type": "array", "items": _weight}},
        },
        "verify": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "triples": {"type": "integer", "minimum": 1},
                "max_degree": {"type": "integer", "minimum": 0},
                "terms": {"type": "integer", "minimum": 1},
                "coef_range": {"type": "integer", "minimum": 1},
            },
        },
        "h2": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "weights": {"type": "array", "items": _weight, "minItems": 1},
                "cutoff": {"type": "integer", "minimum": 1},
                "factorize": {"type": "boolean"},
            },
        },
        "density": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "mode": {"enum": ["fourier", "weierstrass"]},
                "function": {"enum": sorted(set(CATALOGUE) | set(INTERVAL_CATALOGUE))},
                "N": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
                "k": {"type": "integer", "minimum": 0},
                "mu": {"type": "integer", "minimum": 0},
                "grid": {"type": "integer", "minimum": 2},
                "dps": {"type": "integer", "minimum": 15},
                "plot_data": {"type": "boolean"},
            },
        },
    },
}

DEFAULTS: dict = {
    "degree_cap": 64,
    "construct": {"weights": []},
    "verify": {"triples": 500, "max_degree": 3, "terms": 2, "coef_range": 3},
    "h2": {"cutoff": 3, "factorize": True},
    "density": {"mode": "fourier", "function": "exp-sin", "N": [4, 8, 16, 32, 64], "k": 2,
                "mu": 2, "grid": 256, "dps": DEFAULT_DPS, "plot_data": False},
}


class ConfigError(ValueError):
    """Schema or consistency failure; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"config error at {path}: {message}")


def _path_text(path) -> str:
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in path)


@dataclass
class RunConfig:
    raw: dict
    effective: dict = dc_field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.effective["n"]

    @property
    def r(self) -> tuple[int, ...]:
        return tuple(self.effective["r"])

    def section(self, name: str) -> dict:
        return self.effective[name]

    def weights(self, section: str) -> list[tuple[int, ...]]:
        return [normalize_weight(w, self.n, f"$.{section}.weights") for w in self.effective[section]["weights"]]

    def dumps(self) -> str:
        return json.dumps(self.effective, sort_keys=True, indent=2)


def normalize_weight(w, n: int, where: str = "weight") -> tuple[int, ...]:
    if isinstance(w, int):
        w = [w]
    if len(w) != n:
        raise ConfigError(where, f"weight {w} has length {len(w)}, expected n = {n}")
    return tuple(w)


def validate(raw: dict) -> RunConfig:
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(_path_text(exc.absolute_path), exc.message) from None
    eff = copy.deepcopy(raw)
    if "preset" in eff:
        p = MULTILOOP_PRESETS[eff["preset"]]
        for key, val in p.as_config().items():
            if key in eff and eff[key] != val:
                raise ConfigError(f"$.{key}", f"conflicts with preset {p.name!r}")
            eff[key] = val
    for key in ("algebra", "r"):
        if key not in eff:
            raise ConfigError(f"$.{key}", "required unless a preset is given")
    n = len(eff["r"])
    if eff.setdefault("n", n) != n:
        raise ConfigError("$.n", f"n = {eff['n']} but r has {n} entries")
    eff.setdefault("automorphisms", ["identity"] * n)
    if len(eff["automorphisms"]) != n:
        raise ConfigError("$.automorphisms", f"{len(eff['automorphisms'])} automorphisms for n = {n}")
    order = math.lcm(*eff["r"])
    for a in eff["automorphisms"]:
        if isinstance(a, dict) and "inner" in a:
            order = math.lcm(order, a["order"])
    eff.setdefault("field_order", order)
    if eff["field_order"] % order:
        raise ConfigError("$.field_order", f"must be a multiple of {order}")
    eff.setdefault("name", eff.get("preset", ""))
    for key, val in DEFAULTS.items():
        if isinstance(val, dict):
            merged = copy.deepcopy(val)
            merged.update(eff.get(key, {}))
            eff[key] = merged
        else:
            eff.setdefault(key, val)
    if "weights" not in raw.get("h2", {}):
        eff["h2"]["weights"] = [[0] * n]
    cfg = RunConfig(raw, eff)
    cfg.weights("construct")
    cfg.weights("h2")
    return cfg


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON in {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("$", "top level must be an object")
    return validate(raw)


def build_algebra(cfg: RunConfig | dict):
    """Construct the MultiloopAlgebra described by an effective config."""
    from .eqmap import build_multiloop
    from .exactnum import make_cyclotomic
    from .liealg import make_automorphism, make_lie_algebra
    from .presets import automorphism_preset, lie_preset

    eff = cfg.effective if isinstance(cfg, RunConfig) else cfg
    F = make_cyclotomic(eff["field_order"])
    alg = eff["algebra"]
    if isinstance(alg, str):
        L = lie_preset(alg, eff["field_order"])
    else:
        consts = [[[F.parse(c) if isinstance(c, str) else F(c) for c in row] for row in plane]
                  for plane in alg["constants"]]
        L = make_lie_algebra(consts, F, names=alg.get("names"), name=alg.get("name", "custom"))
    auts = []
    for a in eff["automorphisms"]:
        if isinstance(a, dict) and "matrix" in a:
            mat = [[F.parse(c) if isinstance(c, str) else F(c) for c in row] for row in a["matrix"]]
            auts.append(make_automorphism(L, mat, a["order"], a.get("label", "custom")))
        else:
            auts.append(automorphism_preset(L, a))
    return build_multiloop(L, tuple(eff["r"]), auts, degree_cap=eff["degree_cap"], name=eff.get("name", ""))
