"""CLI contract: exit codes, determinism, config echo, custom profiles."""

import json

import pytest

from virial_forge.cli import RunConfig, main
from virial_forge.solvers import solve_corehalo_alpha

COREHALO = ["--family", "core-halo", "--r1", "0.2", "--r2", "1", "--r3", "2",
            "--p", "1", "--a", "-0.8"]
MONOTONIC = ["--family", "monotonic", "--r1", "0.01", "--r2", "0.0909090909090909",
             "--r3", "0.1", "--n", "3", "--a", "-0.95"]


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def kv_parse(text):
    out = {}
    for line in text.splitlines():
        if line and "=" in line:
            key, _, value = line.partition("=")
            out[key] = value
    return out


class TestCertify:
    def test_corehalo_passes(self, capsys):
        code, out, _ = run_cli(capsys, ["certify", *COREHALO, "--format", "kv"])
        assert code == 0
        doc = kv_parse(out)
        assert doc["verdict"] == "pass"
        assert float(doc["virial"]) == pytest.approx(-0.5007, abs=2e-4)
        assert float(doc["alpha"]) == pytest.approx(
            solve_corehalo_alpha(0.2, 1.0, 2.0, 1.0), rel=1e-15
        )
        assert -0.81 <= float(doc["a_star"]) <= -0.79

    def test_uniform_fails_on_virial(self, capsys):
        code, out, _ = run_cli(
            capsys, ["certify", "--family", "uniform", "--p", "1", "--a", "-0.99",
                     "--format", "kv"]
        )
        assert code == 1
        doc = kv_parse(out)
        assert doc["verdict"] == "fail"
        assert float(doc["virial_margin"]) < 0.0

    def test_monotonic_passes(self, capsys):
        code, out, _ = run_cli(capsys, ["certify", *MONOTONIC, "--format", "kv"])
        assert code == 0
        doc = kv_parse(out)
        assert doc["verdict"] == "pass"
        assert float(doc["P"]) == pytest.approx(19.69, abs=0.05)

    def test_fixed_keys_present(self, capsys):
        _, out, _ = run_cli(capsys, ["certify", *COREHALO, "--format", "kv"])
        doc = kv_parse(out)
        for key in ("family", "alpha", "energy_residual", "virial", "virial_margin",
                    "l32_norm", "norm_margin", "verdict"):
            assert key in doc

    def test_config_echo(self, capsys):
        _, out, _ = run_cli(capsys, ["certify", *COREHALO, "--format", "kv"])
        doc = kv_parse(out)
        assert doc["config.family"] == "core-halo"
        assert doc["config.command"] == "certify"
        assert float(doc["config.tol_energy"]) == 1e-9

    def test_alpha_override(self, capsys):
        code, out, _ = run_cli(
            capsys, ["certify", *COREHALO, "--alpha", "0.1", "--format", "kv"]
        )
        doc = kv_parse(out)
        assert code == 1  # wrong halo level breaks zero energy
        assert float(doc["energy_residual"]) > 1e-9


class TestExitCodes:
    def test_missing_parameter_is_config_error(self, capsys):
        code, _, err = run_cli(capsys, ["certify", "--family", "uniform", "--a", "-0.5"])
        assert code == 3
        assert "--p" in err

    def test_bad_ordering_is_config_error(self, capsys):
        code, _, err = run_cli(
            capsys, ["certify", "--family", "core-halo", "--r1", "2", "--r2", "1",
                     "--r3", "3", "--p", "1", "--a", "-0.8"]
        )
        assert code == 3
        assert "r1" in err

    def test_unknown_flag_is_config_error(self, capsys):
        code, _, _ = run_cli(capsys, ["certify", "--nonsense", "1"])
        assert code == 3

    def test_csv_not_valid_for_certify(self, capsys):
        code, _, _ = run_cli(capsys, ["certify", *COREHALO, "--format", "csv"])
        assert code == 3

    def test_solver_failure_is_exit_2(self, capsys):
        code, _, err = run_cli(
            capsys, ["certify", "--family", "core-halo", "--r1", "2", "--r2", "2",
                     "--r3", "2.5", "--p", "1", "--a", "-0.8"]
        )
        assert code == 2
        assert "positive" in err

    def test_report_always_exits_zero(self, capsys):
        code, out, _ = run_cli(
            capsys, ["report", "--family", "uniform", "--p", "1", "--a", "-0.99",
                     "--format", "kv"]
        )
        assert code == 0
        assert "virial" in kv_parse(out)


class TestDeterminism:
    def test_certify_bytes_identical(self, capsys):
        _, first, _ = run_cli(capsys, ["certify", *COREHALO, "--format", "kv"])
        _, second, _ = run_cli(capsys, ["certify", *COREHALO, "--format", "kv"])
        assert first == second

    def test_scan_bytes_identical(self, capsys):
        argv = ["scan", "--p-points", "30", "--a-points", "6", "--format", "csv"]
        _, first, _ = run_cli(capsys, argv)
        _, second, _ = run_cli(capsys, argv)
        assert first == second
        assert first.splitlines()[-2] == "# min_virial > -0.45: OK"

    def test_scan_kv_summary(self, capsys):
        code, out, _ = run_cli(
            capsys, ["scan", "--p-points", "20", "--a-points", "5", "--format", "kv"]
        )
        assert code == 0
        doc = kv_parse(out)
        assert float(doc["min_virial"]) > -0.45
        assert doc["floor_ok"] == "true"


class TestAsymptotics:
    def test_kv_summary_slopes(self, capsys):
        code, out, _ = run_cli(
            capsys, ["asymptotics", "--p-points", "8", "--format", "kv"]
        )
        assert code == 0
        doc = kv_parse(out)
        assert float(doc["alpha_slope"]) == pytest.approx(-11.5, abs=0.1)
        assert float(doc["virial_slope"]) == pytest.approx(3.0, abs=0.05)

    def test_csv_has_summary_comments(self, capsys):
        code, out, _ = run_cli(
            capsys, ["asymptotics", "--p-points", "6", "--format", "csv"]
        )
        assert code == 0
        assert any(line.startswith("# alpha_slope=") for line in out.splitlines())


class TestMollify:
    def test_corehalo_mollified_passes(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["mollify", "--family", "core-halo", "--r1", "0.2", "--r2", "1",
             "--r3", "2", "--p", "1", "--a", "-0.85", "--delta", "0.001",
             "--format", "kv"],
        )
        assert code == 0
        doc = kv_parse(out)
        assert doc["verdict"] == "pass"
        assert float(doc["alpha"]) > 0.0
        assert float(doc["seam_smoothness"]) < 1e-4
        assert float(doc["drift.kinetic"]) < 1e-3

    def test_ramp_overlap_exits_2(self, capsys):
        code, _, err = run_cli(
            capsys,
            ["mollify", "--family", "core-halo", "--r1", "0.2", "--r2", "1",
             "--r3", "1.05", "--p", "1", "--a", "-0.85", "--delta", "0.04"],
        )
        assert code == 2
        assert "overlap" in err or "cross" in err

    def test_drift_table_shrinks_with_delta(self, capsys):
        values = {}
        for delta in ("0.01", "0.0001"):
            _, out, _ = run_cli(
                capsys,
                ["mollify", "--family", "core-halo", "--r1", "0.2", "--r2", "1",
                 "--r3", "2", "--p", "1", "--a", "-0.85", "--delta", delta,
                 "--format", "kv"],
            )
            doc = kv_parse(out)
            values[delta] = {k: float(v) for k, v in doc.items() if k.startswith("drift.")}
        for key in ("drift.kinetic", "drift.potential", "drift.virial", "drift.l32_norm"):
            assert values["0.0001"][key] < values["0.01"][key]

    def test_custom_family_rejected(self, capsys):
        code, _, _ = run_cli(
            capsys, ["mollify", "--family", "custom", "--profiles", "x.json"]
        )
        assert code == 3


class TestCustomFamily:
    def make_profiles_file(self, tmp_path):
        alpha = solve_corehalo_alpha(0.2, 1.0, 2.0, 1.0)
        doc = {
            "spatial": {"pieces": [
                {"kind": "constant", "lo": 0.0, "hi": 0.2, "value": 1.0},
                {"kind": "constant", "lo": 0.2, "hi": 1.0, "value": 0.0},
                {"kind": "constant", "lo": 1.0, "hi": 2.0, "value": alpha},
            ]},
            "momentum": {"pieces": [
                {"kind": "constant", "lo": 0.0, "hi": 1.0, "value": 1.0},
            ]},
            "angular": {"cutoff": -0.8},
        }
        path = tmp_path / "profiles.json"
        path.write_text(json.dumps(doc))
        return path

    def test_certify_custom(self, capsys, tmp_path):
        path = self.make_profiles_file(tmp_path)
        code, out, _ = run_cli(
            capsys, ["certify", "--family", "custom", "--profiles", str(path),
                     "--format", "kv"]
        )
        assert code == 0
        assert kv_parse(out)["verdict"] == "pass"

    def test_missing_file_is_config_error(self, capsys):
        code, _, _ = run_cli(
            capsys, ["certify", "--family", "custom", "--profiles", "/no/such.json"]
        )
        assert code == 3

    def test_bad_piece_is_config_error(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({
            "spatial": {"pieces": [{"kind": "warp", "lo": 0, "hi": 1}]},
            "momentum": {"pieces": [{"kind": "constant", "lo": 0, "hi": 1, "value": 1}]},
            "angular": {"cutoff": 0.0},
        }))
        code, _, _ = run_cli(
            capsys, ["certify", "--family", "custom", "--profiles", str(path)]
        )
        assert code == 3


class TestOutputFile:
    def test_out_matches_stdout(self, capsys, tmp_path):
        _, stdout_text, _ = run_cli(capsys, ["certify", *COREHALO, "--format", "kv"])
        target = tmp_path / "cert.kv"
        code = main(["certify", *COREHALO, "--format", "kv", "--out", str(target)])
        capsys.readouterr()
        assert code == 0
        written = target.read_text()
        # Only the config.out echo differs between the two runs.
        diff = [
            (a, b)
            for a, b in zip(stdout_text.splitlines(), written.splitlines())
            if a != b
        ]
        assert all(a.startswith("config.out") for a, _ in diff)


def test_runconfig_round_trip():
    cfg = RunConfig(command="certify", family="core-halo", r1=0.2, r2=1.0,
                    r3=2.0, p=1.0, a=-0.8, format="kv")
    assert RunConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(Exception):
        RunConfig.from_dict({"command": "certify", "bogus": 1})
