"""Command-line driver: construct | verify | h2-scan | density-demo.

Every command reads one JSON config, writes ``<command>.tsv`` and a JSON twin
into --out, plus a timing sidecar kept out of the result files so reports stay
byte-identical between runs.  Exit status: 0 all checks passed, 1 a check
failed, 2 bad config or usage, 3 an algebraic/numeric error was raised.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import importlib.metadata
import itertools
import json
import random
import sys
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Sequence

from .config import ConfigError, RunConfig, build_algebra, load_config

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_ERROR = 0, 1, 2, 3


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = dc_field(default_factory=list)


@dataclass
class Check:
    name: str
    passed: bool
    count: int = 0
    detail: str = ""


@dataclass
class Report:
    command: str
    config: dict
    tables: dict[str, Table] = dc_field(default_factory=dict)
    checks: list[Check] = dc_field(default_factory=list)
    extra: dict = dc_field(default_factory=dict)
    error: str = ""

    @property
    def passed(self) -> bool:
        return not self.error and all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "tables": {k: {"columns": t.columns, "rows": [[_cell(x) for x in r] for r in t.rows]}
                       for k, t in self.tables.items()},
            "checks": [{"name": c.name, "passed": c.passed, "count": c.count, "detail": c.detail}
                       for c in self.checks],
            "extra": self.extra,
            "error": self.error,
            "verdict": "PASS" if self.passed else "FAIL",
            "versions": _versions(),
        }

    def to_tsv(self) -> str:
        lines = [f"# command\t{self.command}"]
        for name, t in self.tables.items():
            lines.append(f"# table\t{name}")
            lines.append("\t".join(t.columns))
            lines.extend("\t".join(_cell(x) for x in r) for r in t.rows)
        lines.append("# checks")
        lines.append("check\tcount\tstatus\tdetail")
        for c in self.checks:
            lines.append(f"{c.name}\t{c.count}\t{'PASS' if c.passed else 'FAIL'}\t{c.detail}")
        if self.error:
            lines.append(f"# error\t{self.error}")
        lines.append(f"# verdict\t{'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _cell(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, float):
        return f"{x:.6e}"
    if isinstance(x, tuple):
        return "(" + ",".join(map(str, x)) + ")"
    return str(x)


def _versions() -> dict:
    out = {}
    for pkg in ("multiloop", "numpy", "mpmath", "jsonschema"):
        try:
            out[pkg] = importlib.metadata.version(pkg)
        except importlib.metadata.PackageNotFoundError:
            out[pkg] = "unknown"
    return out


# ---------------------------------------------------------------------------
# construct

def cmd_construct(cfg: RunConfig, jobs: int = 1, seed: int = 0) -> Report:
    from .cocycle import target_dim
    from .laurent import omegabar_weight_dim
    from .liealg import derivations

    M = build_algebra(cfg)
    L = M.lie
    U = L.universal
    rep = Report("construct", cfg.effective)
    rep.tables["summary"] = Table(["key", "value"], [
        ["algebra", L.name],
        ["dim g", L.dim],
        ["n", M.n],
        ["r", tuple(M.act.orders)],
        ["field order", L.field.order],
        ["automorphisms", ",".join(s.label for s in M.automorphisms)],
        ["dim der g", len(derivations(L))],
        ["dim V", U.dim],
    ])
    rep.tables["slices"] = Table(["residue", "dim"], [[res, s.dim] for res, s in sorted(M.slices.items())])
    K = L.killing
    rep.tables["killing"] = Table(["basis"] + list(L.names),
                                  [[L.names[i]] + [str(x) for x in K.rows[i]] for i in range(L.dim)])
    rows = []
    for w in cfg.weights("construct"):
        rows.append([w, omegabar_weight_dim(M.n, w), M.act.is_invariant_weight(w), target_dim(M, w)])
    rep.tables["targets"] = Table(["weight", "dim omegabar_w", "invariant", "target dim"], rows)
    total = sum(s.dim for s in M.slices.values())
    rep.checks.append(Check("slices-partition-g", total == L.dim, len(M.slices), f"total {total}"))
    return rep


# ---------------------------------------------------------------------------
# verify

def cmd_verify(cfg: RunConfig, jobs: int = 1, seed: int = 0) -> Report:
    from .cocycle import antisymmetry_witness, cocycle_defect, is_delta_invariant, kappa_d, omega_alg
    from .eqmap import bracket
    from .liealg import derivations

    M = build_algebra(cfg)
    L = M.lie
    d = L.dim
    opts = cfg.section("verify")
    rep = Report("verify", cfg.effective, extra={"seed": seed})
    # the constructor already rejected any Jacobi failure
    rep.checks.append(Check("jacobi", True, d * (d - 1) * (d - 2) // 6))

    basis = [L.basis_vector(i) for i in range(d)]
    bad = ""
    count = 0
    for k, D in enumerate(derivations(L)):
        for i, j in itertools.combinations(range(d), 2):
            count += 1
            lhs = D @ L.bracket(basis[i], basis[j])
            rhs = [a + b for a, b in zip(L.bracket(D @ basis[i], basis[j]), L.bracket(basis[i], D @ basis[j]))]
            if list(lhs) != rhs and not bad:
                bad = f"derivation {k} on ({L.names[i]}, {L.names[j]})"
    rep.checks.append(Check("leibniz", not bad, count, bad))

    K = L.killing
    bad = ""
    count = 0
    for z, x, y in itertools.product(range(d), repeat=3):
        count += 1
        zx = L.bracket(basis[z], basis[x])
        zy = L.bracket(basis[z], basis[y])
        s = sum((zx[p] * K.rows[p][y] for p in range(d)), L.field.zero)
        s = s + sum((zy[p] * K.rows[x][p] for p in range(d)), L.field.zero)
        if s and not bad:
            bad = f"({L.names[z]}, {L.names[x]}, {L.names[y]})"
    rep.checks.append(Check("killing-invariance", not bad, count, bad))

    rng = random.Random(seed)
    N = opts["triples"]

    def draw():
        return M.random_element(rng, nterms=opts["terms"], max_degree=opts["max_degree"],
                                coef_range=opts["coef_range"])

    fails = {"antisymmetry-witness": "", "omega-antisymmetric": "", "cocycle-defect": "",
             "delta-equivariance": ""}
    for t in range(N):
        xi, eta, zeta = draw(), draw(), draw()
        if any(w for w in antisymmetry_witness(xi, eta)) and not fails["antisymmetry-witness"]:
            fails["antisymmetry-witness"] = f"triple {t}: {xi} ; {eta}"
        if (omega_alg(xi, eta) + omega_alg(eta, xi)) and not fails["omega-antisymmetric"]:
            fails["omega-antisymmetric"] = f"triple {t}: {xi} ; {eta}"
        if cocycle_defect(xi, eta, zeta) and not fails["cocycle-defect"]:
            fails["cocycle-defect"] = f"triple {t}: {xi} ; {eta} ; {zeta}"
        inv = bracket(xi, eta).is_invariant() and is_delta_invariant(M, kappa_d(xi, eta))
        if not inv and not fails["delta-equivariance"]:
            fails["delta-equivariance"] = f"triple {t}: {xi} ; {eta}"
    for name, bad in fails.items():
        rep.checks.append(Check(name, not bad, N, bad))
    return rep


# ---------------------------------------------------------------------------
# h2-scan

_WORKER_ALGEBRA: dict = {}


def _scan_weight(args) -> dict:
    from .cochains import WindowEmpty
    from .cohomology import certify_weight, cutoff_stability
    from .cocycle import Inconsistent, target_dim

    eff, w, D, want_factor = args
    key = json.dumps(eff, sort_keys=True)
    if key not in _WORKER_ALGEBRA:
        _WORKER_ALGEBRA.clear()
        _WORKER_ALGEBRA[key] = build_algebra(eff)
    M = _WORKER_ALGEBRA[key]
    row = {"weight": w, "D": D, "target": target_dim(M, w)}
    try:
        rep = cutoff_stability(M, w, D)
    except WindowEmpty as exc:
        row.update(error=str(exc))
        return row
    row.update(dim_z=rep.result.dim_z, dim_b=rep.result.dim_b, h2=rep.dim_at_d, h2_next=rep.dim_at_d1,
               stable=rep.stable)
    if want_factor and rep.stable:
        try:
            cert = certify_weight(M, w, D, rep)
            row["factorized"] = cert.success
            row["phi"] = [[str(c) for c in f.phi.coeffs] for f in cert.factorizations]
        except Inconsistent as exc:
            row["factorized"] = False
            row["phi"] = []
            row["detail"] = str(exc)
    return row


def cmd_h2_scan(cfg: RunConfig, jobs: int = 1, seed: int = 0) -> Report:
    opts = cfg.section("h2")
    D = opts["cutoff"]
    weights = sorted(set(cfg.weights("h2")))
    build_algebra(cfg)  # surface construction errors before fanning out
    tasks = [(cfg.effective, w, D, opts["factorize"]) for w in weights]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_weight, tasks))
    else:
        results = [_scan_weight(t) for t in tasks]
    results.sort(key=lambda r: r["weight"])
    rep = Report("h2-scan", cfg.effective)
    cols = ["weight", "D", "dim Z", "dim B", "dim H2", f"dim H2 (D+1)", "target", "stable", "match", "factorized"]
    t = Table(cols)
    all_ok = True
    for r in results:
        if "error" in r:
            t.rows.append([r["weight"], D, "-", "-", "-", "-", r["target"], False, False, "-"])
            all_ok = False
            continue
        match = r["stable"] and r["h2"] == r["target"]
        fac = r.get("factorized", "n/a" if not opts["factorize"] else False)
        t.rows.append([r["weight"], D, r["dim_z"], r["dim_b"], r["h2"], r["h2_next"], r["target"],
                       r["stable"], match, fac])
        all_ok &= match and (fac is True or fac == "n/a")
    rep.tables["h2"] = t
    rep.extra["phi"] = {_cell(r["weight"]): r.get("phi", []) for r in results}
    unstable = [_cell(r["weight"]) for r in results if not r.get("stable", False)]
    rep.checks.append(Check("all-weights-stable", not unstable, len(results),
                            "unstable: " + " ".join(unstable) if unstable else ""))
    rep.checks.append(Check("universality holds degree-wise at this cutoff", all_ok, len(results)))
    return rep


# ---------------------------------------------------------------------------
# density-demo

def cmd_density(cfg: RunConfig, jobs: int = 1, seed: int = 0) -> Report:
    from . import density as dn

    opts = cfg.section("density")
    mode, name, Ns, k = opts["mode"], opts["function"], opts["N"], opts["k"]
    rep = Report("density-demo", cfg.effective)
    if mode == "fourier":
        if name not in dn.CATALOGUE:
            raise ConfigError("$.density.function", f"{name!r} is not a torus catalogue function")
        reports = dn.fourier_ladder(name, Ns, k, grid=opts["grid"], dps=opts["dps"])
        f = dn.catalogue(name)
    else:
        if name not in dn.INTERVAL_CATALOGUE:
            raise ConfigError("$.density.function", f"{name!r} is not an interval catalogue function")
        k = opts["mu"] if "k" not in cfg.raw.get("density", {}) else k
        reports = dn.weierstrass_ladder(name, opts["mu"], Ns, k)
        f = None
    cols = ["N", "grid"] + [f"err C{j}" for j in range(k + 1)]
    rep.tables["convergence"] = Table(cols, [[r.N, r.grid] + list(r.errors) for r in reports])
    errs = [r.errors for r in reports]
    if mode == "fourier" and f is not None and f.degree is not None:
        exact = [e for r, e in zip(reports, errs) if r.N >= f.degree]
        ok = all(x <= 1e-12 for e in exact for x in e)
        rep.checks.append(Check("exact-from-degree", ok, len(exact), f"degree {f.degree}"))
    elif mode == "fourier":
        c0 = [e[0] for e in errs]
        rep.checks.append(Check("c0-strictly-decreasing", all(b < a for a, b in zip(c0, c0[1:])), len(c0)))
        rep.checks.append(Check("final-c0-below-1e-8", c0[-1] <= 1e-8, 1, f"{c0[-1]:.6e}"))
    else:
        top = [e[opts["mu"]] if opts["mu"] < len(e) else e[-1] for e in errs]
        rep.checks.append(Check(f"c{opts['mu']}-nonincreasing", all(b <= a for a, b in zip(top, top[1:])),
                                len(top)))
    # only the C0 error of a truncation is monotone in general; derivative
    # errors of trig polynomials can rise between N = 0 and N = 1
    order = sorted(range(len(Ns)), key=lambda i: Ns[i])
    mono = all(errs[j][0] <= errs[i][0] + 1e-12 for i, j in zip(order, order[1:]))
    rep.checks.append(Check("c0-monotone-in-N", mono, len(Ns)))
    if opts["plot_data"]:
        rep.tables["plot"] = Table(["N", "order", "error"],
                                   [[r.N, j, e] for r in reports for j, e in enumerate(r.errors)])
    return rep


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "h2-scan": cmd_h2_scan,
    "density-demo": cmd_density,
}


def write_report(rep: Report, out: Path, timing: dict) -> tuple[Path, Path]:
    out.mkdir(parents=True, exist_ok=True)
    stem = rep.command
    tsv = out / f"{stem}.tsv"
    js = out / f"{stem}.json"
    tsv.write_text(rep.to_tsv())
    js.write_text(json.dumps(rep.to_json(), sort_keys=True, indent=2) + "\n")
    (out / f"{stem}.timing.json").write_text(json.dumps(timing, sort_keys=True, indent=2) + "\n")
    return tsv, js


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multiloop", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, type=Path, help="JSON run config")
    p.add_argument("--out", type=Path, default=Path("reports"), help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for per-weight work")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    return p


def run(argv: Sequence[str] | None = None) -> tuple[int, Report | None]:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG, None
    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG, None
    t0 = time.perf_counter()
    try:
        rep = COMMANDS[args.command](cfg, jobs=args.jobs, seed=args.seed)
        code = EXIT_OK if rep.passed else EXIT_FAIL
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG, None
    except (ValueError, ArithmeticError, KeyError) as exc:
        rep = Report(args.command, cfg.effective, error=f"{type(exc).__name__}: {exc}")
        print(f"error: {rep.error}", file=sys.stderr)
        code = EXIT_ERROR
    timing = {"seconds": round(time.perf_counter() - t0, 3), "jobs": args.jobs}
    tsv, _ = write_report(rep, args.out, timing)
    sys.stdout.write(rep.to_tsv())
    return code, rep


def main(argv: Sequence[str] | None = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
