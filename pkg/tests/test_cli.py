import json

import numpy as np
import pytest

from nilspec.cli import ConfigError, canonical_json, main, parse_config


def run_cli(args):
    return main(args)


def test_canonical_json_deterministic_floats():
    text = canonical_json({"a": 1.0 / 3.0, "b": [1, 2.5]})
    assert "0.33333333333333331" in text
    assert canonical_json({"a": 1.0 / 3.0, "b": [1, 2.5]}) == text


def test_parse_config_sections(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("[group]\nl = 3\na = 1\nb = 0\n\n[domain]\nbc = \"dirichlet\"\nR2 = 16.0\n")
    parsed = parse_config(cfg)
    assert parsed["group"] == {"l": 3, "a": 1, "b": 0}
    assert parsed["domain"]["bc"] == "dirichlet"


def test_parse_config_json(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"group": {"l": 1, "a": 2, "b": 0}}))
    assert parse_config(cfg)["group"]["a"] == 2


def test_parse_config_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[group]\nthis line has no equals\n")
    with pytest.raises(ConfigError):
        parse_config(cfg)


def test_build_group_command(tmp_path):
    cfg = tmp_path / "g.cfg"
    cfg.write_text("[group]\nl = 3\na = 1\nb = 0\n")
    out = tmp_path / "out"
    assert run_cli(["build-group", "--config", str(cfg), "--out", str(out)]) == 0
    payload = json.loads((out / "group.json").read_text())
    assert payload["k"] == 4 and payload["l"] == 3 and payload["h_type"]


def test_build_group_heisenberg(tmp_path):
    cfg = tmp_path / "g.cfg"
    cfg.write_text("[group]\nl = 1\na = 1\nb = 0\n")
    out = tmp_path / "out"
    assert run_cli(["build-group", "--config", str(cfg), "--out", str(out)]) == 0
    assert json.loads((out / "group.json").read_text())["k"] == 2


def test_build_group_rejects_non_skew(tmp_path):
    gen = tmp_path / "gen.json"
    gen.write_text(json.dumps([[[0.0, 1.0], [1.0, 0.0]]]))  # symmetric, invalid
    cfg = tmp_path / "g.json"
    cfg.write_text(json.dumps({"group": {"generator_file": str(gen)}}))
    code = run_cli(["build-group", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert code == 2


def test_missing_config_is_config_error(tmp_path):
    code = run_cli(["build-group", "--config", str(tmp_path / "nope.cfg"), "--out", str(tmp_path)])
    assert code == 2


def test_spectrum_explicit_and_cache(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(
        "[group]\nl = 1\na = 1\nb = 0\n[operator]\nmode = \"explicit\"\nmu = 1.0\nr_max = 3\np_max = 2\n"
    )
    out = tmp_path / "out"
    assert run_cli(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0
    first = (out / "spectrum.json").read_bytes()
    payload = json.loads(first)
    assert len(payload["rows"]) == 12
    values = {(row["r"], row["p"]): row["value"] for row in payload["rows"]}
    assert values[(0, 0)] == -6.0 and values[(1, 0)] == -10.0
    # repeated run hits the cache and reproduces identical bytes
    assert run_cli(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0
    assert (out / "spectrum.json").read_bytes() == first


def test_spectrum_compact_mode(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(
        "[group]\nl = 1\na = 1\nb = 0\n"
        "[operator]\nmode = \"compact\"\nmu = 1.0\nstrata = [[0, 0]]\n"
        "[domain]\nR2 = 40.0\nbc = \"dirichlet\"\ncount = 3\nN = 150\n"
    )
    out = tmp_path / "out"
    assert run_cli(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0
    payload = json.loads((out / "spectrum.json").read_text())
    assert payload["provenance"] == "discretized"
    vals = payload["strata"][0]["values"]
    assert abs(vals[0] + 6.0) < 1e-5
    assert (out / "spectrum.csv").exists()


def test_curvature_command(tmp_path):
    cfg = tmp_path / "g.cfg"
    cfg.write_text("[group]\nl = 3\na = 1\nb = 0\n")
    out = tmp_path / "out"
    assert run_cli(["curvature", "--config", str(cfg), "--out", str(out)]) == 0
    payload = json.loads((out / "curvature.json").read_text())
    assert payload["solvable_scalar"] == -32.0
    assert payload["residuals"]["ricci_closed_vs_trace"] < 1e-12
    assert all(payload["within_tol"].values())


def test_verify_command_and_only(tmp_path):
    out = tmp_path / "out"
    assert run_cli(["verify", "--only", "clifford", "--out", str(out)]) == 0
    payload = json.loads((out / "verify.json").read_text())
    assert payload["failed"] == 0


def test_verify_unknown_suite(tmp_path):
    assert run_cli(["verify", "--only", "nope", "--out", str(tmp_path)]) == 2


def test_verify_perturbed_fails(tmp_path):
    cfg = tmp_path / "p.json"
    cfg.write_text(json.dumps({"perturb": True}))
    code = run_cli(["verify", "--only", "curvature", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert code == 1


def test_waves_command(tmp_path):
    out = tmp_path / "out"
    assert run_cli(["waves", "--out", str(out)]) == 0
    payload = json.loads((out / "waves.json").read_text())
    assert payload["residual_norms"]["static_split"] == 0.0


def test_isospec_command(tmp_path):
    cfg = tmp_path / "i.json"
    cfg.write_text(json.dumps({
        "pair": {"l": 3, "a_left": 2, "b_left": 0, "a_right": 1, "b_right": 1},
        "domain": {"R2": 9.0, "count": 3, "N": 100},
        "operator": {"mu": 1.0, "n_max": 1},
    }))
    out = tmp_path / "out"
    assert run_cli(["isospec", "--config", str(cfg), "--out", str(out)]) == 0
    payload = json.loads((out / "isospec.json").read_text())
    assert payload["isospectral"]


def test_report_command(tmp_path):
    cfg = tmp_path / "g.cfg"
    cfg.write_text("[group]\nl = 1\na = 1\nb = 0\n")
    out = tmp_path / "out"
    run_cli(["build-group", "--config", str(cfg), "--out", str(out)])
    run_cli(["waves", "--out", str(out)])
    assert run_cli(["report", "--out", str(out)]) == 0
    text = (out / "report.md").read_text()
    assert "## group" in text and "## waves" in text


def test_report_recomputes_missing_sections(tmp_path):
    cfg = tmp_path / "r.json"
    cfg.write_text(json.dumps({"group": {"l": 1, "a": 1, "b": 0}, "ensure": ["waves", "curvature"]}))
    out = tmp_path / "out"
    assert run_cli(["report", "--config", str(cfg), "--out", str(out)]) == 0
    assert (out / "waves.json").exists() and (out / "curvature.json").exists()
    text = (out / "report.md").read_text()
    assert "## waves" in text and "## curvature" in text


def test_env_output_dir(tmp_path, monkeypatch):
    cfg = tmp_path / "g.cfg"
    cfg.write_text("[group]\nl = 1\na = 1\nb = 0\n")
    target = tmp_path / "env-out"
    monkeypatch.setenv("NILSPEC_OUT", str(target))
    assert run_cli(["build-group", "--config", str(cfg)]) == 0
    assert (target / "group.json").exists()


def test_determinism_same_seed_same_bytes(tmp_path):
    cfg = tmp_path / "g.cfg"
    cfg.write_text("[group]\nl = 3\na = 1\nb = 0\n")
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    run_cli(["build-group", "--config", str(cfg), "--out", str(out1), "--seed", "7"])
    run_cli(["build-group", "--config", str(cfg), "--out", str(out2), "--seed", "7"])
    assert (out1 / "group.json").read_bytes() == (out2 / "group.json").read_bytes()
