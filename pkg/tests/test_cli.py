import json
import subprocess
import sys
from pathlib import Path

import pytest

from multiloop.cli import EXIT_CONFIG, EXIT_ERROR, EXIT_FAIL, EXIT_OK, run
from multiloop.config import ConfigError, SCHEMA_VERSION, build_algebra, load_config, validate

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def _write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return p


def _run(tmp_path, command, cfg, *extra):
    path = cfg if isinstance(cfg, Path) else _write(tmp_path, cfg)
    return run([command, "--config", str(path), "--out", str(tmp_path / "out"), *extra])


def _table(rep, name):
    t = rep.to_json()["tables"][name]
    return [dict(zip(t["columns"], r)) for r in t["rows"]]


# ---------------------------------------------------------------------------
# config validation

def test_unknown_key_rejected():
    with pytest.raises(ConfigError) as exc:
        validate({"schema": SCHEMA_VERSION, "preset": "sl2-loop", "bogus": 1})
    assert exc.value.path == "$"
    with pytest.raises(ConfigError) as exc:
        validate({"schema": SCHEMA_VERSION, "preset": "sl2-loop", "h2": {"cutof": 3}})
    assert exc.value.path == "$.h2"


def test_schema_version_required():
    with pytest.raises(ConfigError):
        validate({"schema": "multiloop-run/0", "preset": "sl2-loop"})
    with pytest.raises(ConfigError):
        validate({"preset": "sl2-loop"})


def test_consistency_checks():
    with pytest.raises(ConfigError) as exc:
        validate({"schema": SCHEMA_VERSION, "algebra": "sl2", "r": [1, 1], "n": 1})
    assert exc.value.path == "$.n"
    with pytest.raises(ConfigError) as exc:
        validate({"schema": SCHEMA_VERSION, "algebra": "sl2", "r": [2], "automorphisms": ["identity"] * 2})
    assert exc.value.path == "$.automorphisms"
    with pytest.raises(ConfigError) as exc:
        validate({"schema": SCHEMA_VERSION, "algebra": "sl2", "r": [2], "field_order": 3})
    assert exc.value.path == "$.field_order"
    with pytest.raises(ConfigError):
        validate({"schema": SCHEMA_VERSION, "preset": "sl2-loop", "h2": {"weights": [[0, 0]]}})
    with pytest.raises(ConfigError):
        validate({"schema": SCHEMA_VERSION, "preset": "sl2-loop", "r": [2]})


def test_defaults_expanded():
    cfg = validate({"schema": SCHEMA_VERSION, "preset": "sl2-loop2"})
    eff = cfg.effective
    assert eff["n"] == 2 and eff["r"] == [1, 1] and eff["field_order"] == 1
    assert eff["h2"]["weights"] == [[0, 0]] and eff["h2"]["cutoff"] == 3
    assert eff["verify"]["triples"] == 500
    assert eff["density"]["N"] == [4, 8, 16, 32, 64]


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_configs_validate(path):
    load_config(path)


def test_custom_matrix_automorphism(tmp_path):
    # -transpose on sl2 in basis (e, h, f): e -> -f, h -> -h, f -> -e
    cfg = validate({"schema": SCHEMA_VERSION, "algebra": "sl2", "r": [2],
                    "automorphisms": [{"matrix": [[0, 0, -1], [0, -1, 0], [-1, 0, 0]], "order": 2}]})
    M = build_algebra(cfg)
    assert M.slice_dims() == {(0,): 1, (1,): 2}


# ---------------------------------------------------------------------------
# commands

def test_construct_sl2(tmp_path):
    code, rep = _run(tmp_path, "construct", {"schema": SCHEMA_VERSION, "preset": "sl2-loop",
                                             "construct": {"weights": [0, 1]}})
    assert code == EXIT_OK
    summary = {r["key"]: r["value"] for r in _table(rep, "summary")}
    assert summary["dim V"] == "1" and summary["dim g"] == "3"
    assert _table(rep, "slices") == [{"residue": "(0)", "dim": "3"}]
    assert [r["target dim"] for r in _table(rep, "targets")] == ["1", "0"]
    assert (tmp_path / "out" / "construct.tsv").exists()
    assert (tmp_path / "out" / "construct.json").exists()


def test_construct_a2(tmp_path):
    code, rep = _run(tmp_path, "construct", CONFIGS / "a2_twisted.json")
    assert code == EXIT_OK
    assert [r["dim"] for r in _table(rep, "slices")] == ["3", "5"]


def test_noncommuting_exit(tmp_path):
    code, rep = _run(tmp_path, "construct", CONFIGS / "noncommuting.json")
    assert code == EXIT_ERROR
    assert "NonCommuting" in rep.error
    assert "FAIL" in (tmp_path / "out" / "construct.tsv").read_text()


def test_corrupted_constants_report_triple(tmp_path, capsys):
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][2], c[1][0][2] = 1, -1
    c[1][2][0], c[2][1][0] = 1, -1
    c[0][2][0], c[2][0][0] = 1, -1
    cfg = {"schema": SCHEMA_VERSION, "algebra": {"constants": c}, "r": [1], "verify": {"triples": 5}}
    code, rep = _run(tmp_path, "verify", cfg)
    assert code == EXIT_ERROR
    assert "JacobiViolation" in rep.error and "(0, 1, 2)" in rep.error
    assert "(0, 1, 2)" in capsys.readouterr().err


def test_degree_cap_surfaced(tmp_path):
    code, rep = _run(tmp_path, "verify", CONFIGS / "degree_cap_stress.json")
    assert code == EXIT_ERROR
    assert "DegreeCapExceeded" in rep.error


def test_bad_config_exit(tmp_path):
    code, rep = _run(tmp_path, "construct", {"schema": SCHEMA_VERSION, "preset": "sl2-loop", "extra": 1})
    assert code == EXIT_CONFIG and rep is None
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert _run(tmp_path, "construct", p)[0] == EXIT_CONFIG
    assert _run(tmp_path, "construct", tmp_path / "missing.json")[0] == EXIT_CONFIG


@pytest.mark.parametrize("cfg", ["sl2_loop.json", "sl2_inner.json", "custom_heisenberg.json"])
def test_verify_passes(tmp_path, cfg):
    raw = json.loads((CONFIGS / cfg).read_text())
    raw["verify"] = dict(raw.get("verify", {}), triples=40)
    code, rep = _run(tmp_path, "verify", raw, "--seed", "3")
    assert code == EXIT_OK, rep.to_tsv()
    assert rep.extra["seed"] == 3
    names = [c.name for c in rep.checks]
    assert names == ["jacobi", "leibniz", "killing-invariance", "antisymmetry-witness",
                     "omega-antisymmetric", "cocycle-defect", "delta-equivariance"]


def test_h2_scan_sl2(tmp_path):
    cfg = {"schema": SCHEMA_VERSION, "preset": "sl2-loop", "h2": {"weights": [-2, -1, 0, 1, 2], "cutoff": 3}}
    code, rep = _run(tmp_path, "h2-scan", cfg)
    assert code == EXIT_OK
    rows = _table(rep, "h2")
    assert [r["dim H2"] for r in rows] == ["0", "0", "1", "0", "0"]
    assert all(r["match"] == "yes" and r["factorized"] == "yes" for r in rows)
    assert rep.checks[-1].name == "universality holds degree-wise at this cutoff"


def test_h2_scan_flags_unstable(tmp_path):
    cfg = {"schema": SCHEMA_VERSION, "preset": "sl2-loop", "h2": {"weights": [0, 5], "cutoff": 3}}
    code, rep = _run(tmp_path, "h2-scan", cfg)
    assert code == EXIT_FAIL
    rows = _table(rep, "h2")
    assert rows[1]["stable"] == "no" and rows[1]["dim H2"] == "6"
    stab = next(c for c in rep.checks if c.name == "all-weights-stable")
    assert not stab.passed and "(5)" in stab.detail


def test_h2_scan_n2(tmp_path):
    cfg = {"schema": SCHEMA_VERSION, "preset": "sl2-loop2", "h2": {"weights": [[0, 0]], "cutoff": 2}}
    code, rep = _run(tmp_path, "h2-scan", cfg)
    assert code == EXIT_OK
    row = _table(rep, "h2")[0]
    assert row["dim H2"] == "2" and row["target"] == "2"


def test_h2_scan_deterministic(tmp_path):
    cfg = _write(tmp_path, {"schema": SCHEMA_VERSION, "preset": "sl2-loop",
                            "h2": {"weights": [1, -1, 0, 2], "cutoff": 3}})
    a = tmp_path / "a"
    b = tmp_path / "b"
    run(["h2-scan", "--config", str(cfg), "--out", str(a), "--jobs", "1"])
    run(["h2-scan", "--config", str(cfg), "--out", str(b), "--jobs", "3"])
    for name in ("h2-scan.tsv", "h2-scan.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert json.loads((b / "h2-scan.timing.json").read_text())["jobs"] == 3


def test_density_trig(tmp_path):
    code, rep = _run(tmp_path, "density-demo", CONFIGS / "density_trig.json")
    assert code == EXIT_OK
    assert rep.checks[0].name == "exact-from-degree" and rep.checks[0].passed


def test_density_weierstrass_mu1(tmp_path):
    cfg = {"schema": SCHEMA_VERSION, "preset": "sl2-loop",
           "density": {"mode": "weierstrass", "function": "exp", "mu": 1, "N": [8, 16, 32], "plot_data": True}}
    code, rep = _run(tmp_path, "density-demo", cfg)
    assert code == EXIT_OK
    assert "plot" in rep.tables
    assert [c.name for c in rep.checks] == ["c1-nonincreasing", "c0-monotone-in-N"]


def test_density_wrong_catalogue(tmp_path):
    cfg = {"schema": SCHEMA_VERSION, "preset": "sl2-loop", "density": {"mode": "fourier", "function": "exp"}}
    assert _run(tmp_path, "density-demo", cfg)[0] == EXIT_CONFIG


def test_report_embeds_effective_config(tmp_path):
    code, rep = _run(tmp_path, "construct", {"schema": SCHEMA_VERSION, "preset": "sl2-inner"})
    js = json.loads((tmp_path / "out" / "construct.json").read_text())
    assert js["config"]["field_order"] == 2
    assert js["config"]["automorphisms"] == [{"inner": [0, 1], "order": 2}]
    assert js["verdict"] == "PASS" and "numpy" in js["versions"]


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "multiloop", "construct", "--config",
                          str(CONFIGS / "sl2_loop.json"), "--out", str(tmp_path)],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "# verdict\tPASS" in out.stdout
