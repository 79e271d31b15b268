import json

import pytest

from retrobohm import __version__
from retrobohm.cli import main
from retrobohm.const import EXIT_CONFIG_INVALID, EXIT_FAILED, EXIT_OK


def read_summary(directory) -> dict:
    return json.loads((directory / "summary.json").read_text(encoding="utf-8"))


def write_config(directory, name: str, data: dict):
    path = directory / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_version(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == EXIT_OK
    assert __version__ in result.output


def test_weak_value_defaults(runner, tmp_path):
    out = tmp_path / "weak"
    result = runner.invoke(main, ["--out", str(out), "--seed", "42", "weak-value"])
    assert result.exit_code == EXIT_OK, result.output
    summary = read_summary(out)
    assert summary["kind"] == "weak-value"
    assert summary["pass"] is True
    assert summary["seed"] == 42
    assert summary["vector"] == pytest.approx([0.5, 0.0, 0.5], abs=1e-12)
    components = summary["components"]
    assert [entry["real_value"] for entry in components] == pytest.approx([0.5, 0.0, 0.5], abs=1e-12)
    assert components[1]["complex_value"] == pytest.approx({"re": 0.0, "im": 0.5}, abs=1e-12)
    assert components[0]["inputs"]["direction"] == [1.0, 0.0, 0.0]
    up = components[0]["inputs"]["pre"][0]
    assert abs(complex(up["re"], up["im"])) == pytest.approx(1.0)
    assert summary["config_echo"]["seed"] == 42
    assert summary["config_echo"]["output"] == out.as_posix()
    assert (out / "resolved_config.json").exists()
    assert (out / "components.csv").read_text().startswith("nx,ny,nz,value,imaginary,expectation\n")
    assert "PASS" in result.output


def test_weak_value_flags(runner, tmp_path):
    out = tmp_path / "flags"
    result = runner.invoke(
        main, ["-q", "-o", str(out), "weak-value", "--pre", "x", "--post", "0,1,1", "--h", "y"]
    )
    assert result.exit_code == EXIT_OK, result.output
    echo = read_summary(out)["config_echo"]["params"]
    assert echo["pre"]["axis"]["vector"] == [1.0, 0.0, 0.0]
    assert echo["post"]["axis"]["vector"] == [0.0, 1.0, 1.0]
    assert echo["components"] == [{"vector": [0.0, 1.0, 0.0]}]


def test_quiet_skips_the_console_summary(runner, tmp_path):
    result = runner.invoke(main, ["--quiet", "--out", str(tmp_path), "weak-value"])
    assert result.exit_code == EXIT_OK
    assert "PASS" not in result.output


def test_seed_is_drawn_and_recorded(runner, tmp_path):
    result = runner.invoke(main, ["-q", "-o", str(tmp_path), "weak-value"])
    assert result.exit_code == EXIT_OK
    seed = read_summary(tmp_path)["seed"]
    assert isinstance(seed, int)
    assert 0 <= seed < 2**64


def test_orthogonal_outcome_fails(runner, tmp_path):
    result = runner.invoke(
        main, ["-q", "-o", str(tmp_path), "weak-value", "--pre", "z", "--post", "-z"]
    )
    assert result.exit_code == EXIT_FAILED
    assert not (tmp_path / "summary.json").exists()


def test_aborted_run_is_logged_with_its_prefix(runner, tmp_path, caplog):
    result = runner.invoke(
        main,
        ["-q", "-s", "7", "-o", str(tmp_path), "weak-value", "--pre", "z", "--post", "-z"],
    )
    assert result.exit_code == EXIT_FAILED
    assert "weak-value | seed 7 | Aborted by ZeroOverlap" in caplog.text


def test_entangled_value(runner, tmp_path):
    result = runner.invoke(
        main,
        ["-q", "-o", str(tmp_path), "entangled-value", "--axis1", "z", "--axis2", "x", "--h", "z"],
    )
    assert result.exit_code == EXIT_OK, result.output
    summary = read_summary(tmp_path)
    assert summary["joint_probability"] == pytest.approx(0.25)
    assert summary["max_reduction_deviation"] <= 1e-10
    (entry,) = summary["components"]
    assert set(entry) == {"inputs", "complex_value", "real_value", "reduced"}
    assert entry["real_value"] == pytest.approx(entry["reduced"], abs=1e-10)
    assert entry["inputs"]["axis2"] == [1.0, 0.0, 0.0]


def test_impossible_entangled_outcomes_fail(runner, tmp_path):
    result = runner.invoke(
        main,
        [
            "-q",
            "-o",
            str(tmp_path),
            "entangled-value",
            "--axis1",
            "z",
            "--axis2",
            "z",
            "--outcome1",
            "+",
            "--outcome2",
            "+",
        ],
    )
    assert result.exit_code == EXIT_FAILED


def test_bad_axis_flag(runner, tmp_path):
    result = runner.invoke(main, ["-o", str(tmp_path), "weak-value", "--pre", "1,a,0"])
    assert result.exit_code == 2
    assert "neither an axis name" in result.output


def test_unknown_key_is_a_config_error(runner, tmp_path):
    config = write_config(tmp_path, "bad.json", {"kind": "weak-value", "shots": 3})
    result = runner.invoke(main, ["-o", str(tmp_path / "out"), "run", "--config", str(config)])
    assert result.exit_code == EXIT_CONFIG_INVALID


def test_kind_mismatch_is_a_config_error(runner, tmp_path):
    config = write_config(tmp_path, "weak.json", {"kind": "weak-value"})
    result = runner.invoke(main, ["-o", str(tmp_path / "out"), "evolve", "--config", str(config)])
    assert result.exit_code == EXIT_CONFIG_INVALID


def test_spin_map(runner, tmp_path):
    config = write_config(
        tmp_path,
        "map.json",
        {
            "kind": "spin-map",
            "params": {"f_axis": {"polar": 120.0, "azimuth": 45.0}, "resolution_deg": 30.0},
        },
    )
    result = runner.invoke(main, ["-q", "-o", str(tmp_path / "out"), "run", "-c", str(config)])
    assert result.exit_code == EXIT_OK, result.output
    summary = read_summary(tmp_path / "out")
    assert summary["max_value"] == pytest.approx(1.0, abs=1e-9)
    assert summary["omega_deg"] == pytest.approx(120.0)
    rows = (tmp_path / "out" / "spin_map.csv").read_text().splitlines()
    assert rows[0] == "polar_deg,azimuth_deg,value"
    assert len(rows) == 1 + 7 * 12


def test_evolve_writes_tables_and_snapshots(runner, tmp_path):
    config = write_config(
        tmp_path, "evolve.json", {"kind": "evolve", "params": {"steps": 20, "stride": 10}}
    )
    result = runner.invoke(main, ["-q", "-o", str(tmp_path / "out"), "evolve", "-c", str(config)])
    assert result.exit_code == EXIT_OK, result.output
    out = tmp_path / "out"
    rows = (out / "evolve.csv").read_text().splitlines()
    assert rows[0] == "t,x,density,current"
    assert len(rows) == 1 + 3 * 1024
    final = json.loads((out / "snapshots" / "final.json").read_text())
    assert final["time"] == pytest.approx(0.2)
    assert len(final["amplitudes"]) == 2 * 1024


def test_born_check_with_no_sigma_budget_fails(runner, tmp_path):
    config = write_config(
        tmp_path,
        "born.json",
        {
            "kind": "born-check",
            "seed": 1,
            "params": {"n_particles": 200},
            "tolerances": {"born_n_sigma": 0.0},
        },
    )
    result = runner.invoke(main, ["-o", str(tmp_path / "out"), "run", "-c", str(config)])
    assert result.exit_code == EXIT_FAILED
    summary = read_summary(tmp_path / "out")
    assert summary["pass"] is False
    assert sum(summary["counts"].values()) == 200
    assert set(summary["expected"]) == {"1", "2"}
    assert "FAIL" in result.output


def test_resolved_config_reproduces_the_outputs(runner, tmp_path):
    out = tmp_path / "first"
    config = write_config(
        tmp_path,
        "equivariance.json",
        {"kind": "equivariance", "params": {"t_check": 0.2, "n_particles": 300}},
    )
    first = runner.invoke(main, ["-q", "-o", str(out), "run", "-c", str(config)])
    assert first.exit_code in (EXIT_OK, EXIT_FAILED), first.output
    summary = (out / "summary.json").read_bytes()

    copy = tmp_path / "resolved.json"
    copy.write_bytes((out / "resolved_config.json").read_bytes())
    (out / "summary.json").unlink()
    second = runner.invoke(main, ["-q", "run", "-c", str(copy)])
    assert second.exit_code == first.exit_code
    assert (out / "summary.json").read_bytes() == summary
