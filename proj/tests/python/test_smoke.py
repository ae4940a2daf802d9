import json
from pathlib import Path

import pytest

import twoscale

ROOT = Path(__file__).resolve().parents[2]
SMOKE = ROOT / "configs" / "smoke.json"


def test_config_roundtrip():
    cfg = twoscale.load_config(str(SMOKE))
    assert cfg["D"] == 20
    assert twoscale.normalize_config(cfg) == cfg
    h = twoscale.config_hash(cfg)
    cfg2 = dict(cfg, scenarios=cfg["scenarios"] + 1)
    assert twoscale.config_hash(cfg2) != h
    # thread count does not enter the hash
    assert twoscale.config_hash(dict(cfg, threads=3)) == h


def test_bad_config_raises():
    cfg = twoscale.default_config()
    cfg["M"] = 1000
    with pytest.raises(twoscale.ConfigError):
        twoscale.normalize_config(cfg)


def test_complexity():
    c = twoscale.complexity(7300, 48, 4)
    assert abs(c["ratio_R"] * 50 - 1) < 0.1
    assert c["ratio_P"] > c["ratio_R"]


def test_oracle_suite():
    res = twoscale.oracle_suite(5, 11)
    assert {r["name"] for r in res} == {"tree", "blocks", "monotone", "sandwich"}
    assert all(r["passed"] for r in res)


def test_missing_dependency(tmp_path):
    cfg = twoscale.load_config(str(SMOKE))
    with pytest.raises(twoscale.MissingDependency):
        twoscale.run_stage("bellman", cfg, str(tmp_path))


def test_smoke_run(tmp_path):
    cfg = twoscale.load_config(str(SMOKE))
    cfg["mode"] = "both"
    twoscale.run_all(cfg, str(tmp_path))
    rep = twoscale.read_report(tmp_path)
    assert rep["sandwich_violations"] == 0
    assert rep["lower_x0"] <= rep["upper_x0"]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["config_hash"] == twoscale.config_hash(cfg)
    for mode in ("price", "resource"):
        s = json.loads((tmp_path / "simulate" / f"simulation_{mode}.json").read_text())
        assert s["admissibility_violations"] == 0
    twoscale.run_stage("verify", cfg, str(tmp_path))
