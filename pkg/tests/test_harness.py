"""Configuration parsing, CSV records, and the experiment drivers.

Driver tests run at desk scale (tiny budgets, a handful of trials) and check
row structure plus the worker-count independence of the output bytes.
"""

import math

import numpy as np
import pytest

from qksd import ConfigError, InfeasibleBudgetError
from qksd.harness import (
    ExperimentConfig,
    load_config,
    run_error_norm_ensemble,
    run_optimal_threshold_scan,
    run_perturbation_vs_bound,
    run_singular_spectrum,
    run_threshold_sweep,
)
from qksd.harness.config import config_from_mapping, parse_config_text
from qksd.harness.drivers import _chunk_ranges
from qksd.harness.records import config_hash, format_value, write_csv


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------


def test_parse_config_text_basics():
    raw = parse_config_text(
        """
        # comment line
        L = 2
        t = 0.2   # trailing comment
        M = 1e6, 1e8
        n = 5,9
        """
    )
    assert raw == {"L": "2", "t": "0.2", "M": "1e6, 1e8", "n": "5,9"}


def test_parse_config_text_errors():
    with pytest.raises(ConfigError):
        parse_config_text("L 2")
    with pytest.raises(ConfigError):
        parse_config_text("L =")
    with pytest.raises(ConfigError):
        parse_config_text("L = 2\nL = 3")


def test_config_scientific_integers():
    cfg = config_from_mapping({"M": "1e8", "trials": "1e3"})
    assert cfg.m_list == (10**8,)
    assert cfg.trials == 1000
    with pytest.raises(ConfigError):
        config_from_mapping({"M": "1.5e0"})
    with pytest.raises(ConfigError):
        config_from_mapping({"M": "abc"})


def test_config_unknown_key():
    with pytest.raises(ConfigError, match="unknown config keys"):
        config_from_mapping({"budget": "100"})


def test_config_lists_and_constructions():
    cfg = config_from_mapping(
        {"n": "5, 9, 13", "construction": "toeplitz, nontoeplitz"}
    )
    assert cfg.n_list == (5, 9, 13)
    assert cfg.constructions == ("toeplitz", "nontoeplitz")
    with pytest.raises(ConfigError):
        config_from_mapping({"construction": "hankel"})
    with pytest.raises(ConfigError):
        config_from_mapping({"n": "4"})  # even order


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(trials=0)
    with pytest.raises(ConfigError):
        ExperimentConfig(mode="poisson")
    with pytest.raises(ConfigError):
        ExperimentConfig(hardware_lambda=-0.1)
    with pytest.raises(ConfigError):
        ExperimentConfig(n_up=5, sites=2)


def test_hardware_decay_keys():
    cfg = config_from_mapping(
        {"L": "2", "hardware_r": "0.999", "hardware_depth": "100"}
    )
    # lambda = 2 L depth ln(1/r): qubit count is twice the site count
    assert cfg.hardware_lambda == pytest.approx(2 * 2 * 100 * math.log(1 / 0.999))
    with pytest.raises(ConfigError):
        config_from_mapping({"hardware_lambda": "0.5", "hardware_r": "0.99"})
    with pytest.raises(ConfigError):
        config_from_mapping({"hardware_r": "0.99"})  # depth missing
    with pytest.raises(ConfigError):
        config_from_mapping({"hardware_r": "1.2", "hardware_depth": "10"})


def test_filling_defaults():
    assert ExperimentConfig(sites=2).filling == (1, 1)
    assert ExperimentConfig(sites=3).filling == (2, 1)
    assert ExperimentConfig(sites=3, n_up=1, n_down=1).filling == (1, 1)


def test_load_config_with_overrides(tmp_path):
    p = tmp_path / "run.conf"
    p.write_text("L = 2\nt = 0.3\nseed = 7\n")
    cfg = load_config(str(p), overrides={"seed": 11, "trials": None})
    assert cfg.seed == 11
    assert cfg.t_hop == 0.3
    assert cfg.trials == ExperimentConfig.trials
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.conf"))


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------


def test_config_hash_ignores_execution_keys():
    a = ExperimentConfig(seed=3, out="a.csv", workers=1)
    b = ExperimentConfig(seed=3, out="b.csv", workers=8)
    c = ExperimentConfig(seed=4)
    assert config_hash(a) == config_hash(b)
    assert config_hash(a) != config_hash(c)


def test_format_value():
    assert format_value(None) == "na"
    assert format_value(True) == "1"
    assert format_value(False) == "0"
    assert format_value(0.1) == "0.1"
    assert format_value(1 / 3) == repr(1 / 3)
    assert format_value(7) == "7"


def test_write_csv_format(tmp_path):
    cfg = ExperimentConfig(seed=5)
    path = tmp_path / "out.csv"
    write_csv(
        str(path),
        ("x", "y"),
        [{"x": 1, "y": None}, {"x": 0.25, "y": False}],
        cfg,
    )
    data = path.read_bytes()
    lines = data.split(b"\r\n")
    assert lines[0].startswith(b"# config=")
    assert b"seed=5" in lines[0]
    assert lines[1] == b"x,y"
    assert lines[2] == b"1,na"
    assert lines[3] == b"0.25,0"
    # every line CRLF-terminated
    assert data.count(b"\n") == data.count(b"\r\n")


def test_write_csv_rejects_unknown_field(tmp_path):
    cfg = ExperimentConfig()
    with pytest.raises(ValueError, match="unknown fields"):
        write_csv(str(tmp_path / "x.csv"), ("a",), [{"a": 1, "b": 2}], cfg)


def test_chunk_ranges():
    assert _chunk_ranges(10, 1) == [(0, 10)]
    assert _chunk_ranges(10, 3) == [(0, 4), (4, 3), (7, 3)]
    assert _chunk_ranges(2, 8) == [(0, 1), (1, 1)]
    ranges = _chunk_ranges(17, 4)
    assert sum(c for _, c in ranges) == 17
    lo = 0
    for start, count in ranges:
        assert start == lo
        lo += count


# ---------------------------------------------------------------------------
# Drivers at desk scale
# ---------------------------------------------------------------------------


def small_cfg(tmp_path, name, **kw):
    base = dict(
        sites=2,
        t_hop=0.2,
        u_int=0.1,
        n_list=(3,),
        m_list=(10_000,),
        trials=5,
        seed=3,
        out=str(tmp_path / name),
    )
    base.update(kw)
    return ExperimentConfig(**base)


def read_rows(result):
    return result.rows


def test_error_norm_driver_rows(tmp_path):
    cfg = small_cfg(tmp_path, "norms.csv", n_list=(3, 5))
    res = run_error_norm_ensemble(cfg)
    kinds = {r["row_kind"] for r in res.rows}
    assert kinds == {"trial", "cell_summary", "slope"}
    trials = [r for r in res.rows if r["row_kind"] == "trial"]
    # kinds: S toeplitz + H toeplitz, 2 n values, 1 budget, 5 trials
    assert len(trials) == 2 * 2 * 5
    for r in trials:
        assert r["norm"] >= 0
    summaries = [r for r in res.rows if r["row_kind"] == "cell_summary"]
    assert all(0.0 <= r["frac_under"] <= 1.0 for r in summaries)
    slopes = [r for r in res.rows if r["row_kind"] == "slope"]
    assert {(r["kind"], r["construction"]) for r in slopes} == {
        ("S", "toeplitz"),
        ("H", "toeplitz"),
    }


def test_error_norm_driver_infeasible(tmp_path):
    cfg = small_cfg(tmp_path, "norms.csv", m_list=(4,))
    with pytest.raises(InfeasibleBudgetError):
        run_error_norm_ensemble(cfg)


def test_error_norm_driver_skips_partial(tmp_path):
    # nontoeplitz n=5 needs 25 shots; 20 is enough for the toeplitz kinds only
    cfg = small_cfg(
        tmp_path, "norms.csv", n_list=(5,), m_list=(20,),
        constructions=("nontoeplitz",), trials=2,
    )
    res = run_error_norm_ensemble(cfg)
    skipped = [r for r in res.rows if r["row_kind"] == "skipped"]
    assert len(skipped) == 1
    assert "25" in skipped[0]["note"]


def test_singular_spectrum_driver(tmp_path):
    cfg = small_cfg(tmp_path, "spec.csv", m_list=(10_000, 40_000), trials=20)
    res = run_singular_spectrum(cfg)
    assert len(res.rows) == 2 * 3  # budgets x indices
    for r in res.rows:
        assert 1 <= r["index"] <= 3
        assert 0.0 <= r["weyl_fraction"] <= 1.0
        assert r["std_value"] >= 0
    # exact values descending per budget
    first = [r["exact_value"] for r in res.rows if r["m_budget"] == 10_000]
    assert first == sorted(first, reverse=True)


def test_threshold_sweep_driver(tmp_path):
    cfg = small_cfg(tmp_path, "sweep.csv", trials=8, m_list=(100_000,))
    res = run_threshold_sweep(cfg)
    sweep = [r for r in res.rows if r["row_kind"] == "sweep"]
    assert [r["k"] for r in sweep] == [1, 2, 3]
    eps_rows = [r for r in res.rows if r["row_kind"] == "epsilon_rule"]
    assert len(eps_rows) == 1
    assert eps_rows[0]["mean_n_eps"] >= 1.0
    assert eps_rows[0]["epsilon"] > 0


def test_optimal_threshold_scan_driver(tmp_path):
    cfg = small_cfg(tmp_path, "scan.csv", n_list=(3, 5), m_list=(50_000,), trials=6)
    res = run_optimal_threshold_scan(cfg)
    assert len(res.rows) == 2
    for r in res.rows:
        assert r["trials_used"] == 6
        assert r["rms_rel_error"] >= r["mean_rel_error"] * 0  # both present
        assert r["m_h"] + r["m_s"] == 50_000


def test_perturbation_driver_rows(tmp_path):
    cfg = small_cfg(tmp_path, "pert.csv", trials=6, m_list=(200_000,))
    res = run_perturbation_vs_bound(cfg)
    trials = [r for r in res.rows if r["row_kind"] == "trial"]
    assert len(trials) == 6
    for r in trials:
        assert r["eta"] >= max(r["dh_norm"], r["ds_norm"])
        assert r["chi_small"] in ("holds", "violated", "unknown")
        if r["qualifies"]:
            assert r["satisfied"] in (True, False)
        else:
            assert r["satisfied"] is None
    summary = [r for r in res.rows if r["row_kind"] == "cell_summary"]
    assert len(summary) == 1
    assert summary[0]["qualifying_trials"] <= 6


def test_driver_output_worker_invariant(tmp_path):
    out = {}
    for workers in (1, 3):
        cfg = small_cfg(
            tmp_path, f"w{workers}.csv", trials=7, workers=workers, n_list=(3,)
        )
        run_error_norm_ensemble(cfg)
        out[workers] = (tmp_path / f"w{workers}.csv").read_bytes()
    # header hash excludes worker count, rows are trial-keyed: bytes match
    assert out[1] == out[3]


def test_driver_rows_match_written_file(tmp_path):
    cfg = small_cfg(tmp_path, "again.csv", trials=3)
    res = run_error_norm_ensemble(cfg)
    text = (tmp_path / "again.csv").read_bytes().decode()
    lines = text.split("\r\n")
    assert lines[1].split(",")[0] == "row_kind"
    # one line per row plus comment, header, and trailing newline
    assert len(lines) == len(res.rows) + 3
