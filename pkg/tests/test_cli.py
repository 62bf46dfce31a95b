import csv
import json
from pathlib import Path

import pytest

from twistrank.cli import main
from twistrank.markov import DEFAULT_R


@pytest.fixture
def in_tmp(tmp_path, monkeypatch):
    """Run each test from a scratch directory so default manifests land there."""
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


# --------------------------------------------------------------------------
# argument plumbing
# --------------------------------------------------------------------------


def test_no_subcommand_is_a_usage_error(in_tmp, capsys):
    assert main([]) == 2
    assert "subcommand" in capsys.readouterr().err


def test_replay_excludes_subcommand(in_tmp, capsys):
    assert main(["--replay", "whatever.json", "table1"]) == 2
    assert "no subcommand" in capsys.readouterr().err


def test_version_flag_prints_and_exits(in_tmp, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "twistrank" in capsys.readouterr().out


def test_unknown_choice_is_an_argparse_error(in_tmp):
    with pytest.raises(SystemExit):
        main(["table1", "--format", "xml"])


def test_domain_errors_map_to_exit_2(in_tmp, capsys):
    assert main(["constants", "--ell", "4", "--p", "7"]) == 2
    assert main(["s3-check", "--ell", "9"]) == 2
    assert main(["omega-dist", "--q", "6", "--degree", "3"]) == 2
    assert "error:" in capsys.readouterr().err


# --------------------------------------------------------------------------
# curve-free commands
# --------------------------------------------------------------------------


def test_table1_stdout_and_default_manifest(in_tmp, capsys):
    code, payload = run_json(capsys, ["table1"])
    assert code == 0
    assert payload["all_match"] is True
    assert payload["mismatches"] == []
    assert len(payload["rows"]) == 5
    manifest = json.loads(Path("twistrank-table1.manifest.json").read_text())
    assert manifest["command"] == "table1"
    assert manifest["argv"] == ["table1"]
    assert manifest["exit_code"] == 0
    assert len(manifest["digest"]) == 64


def test_table1_csv_to_file(in_tmp, capsys):
    out = Path("table.csv")
    code = main(["table1", "--format", "csv", "--out", str(out)])
    assert code == 0
    assert capsys.readouterr().out == ""
    with out.open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 5
    assert rows[0]["E_p5"] == "x"
    assert rows[0]["E_p7"] == "11.07690"
    assert Path("table.csv.manifest.json").is_file()


def test_constants_payload(in_tmp, capsys):
    code, payload = run_json(capsys, ["constants", "--ell", "5", "--p", "7"])
    assert code == 0
    assert payload["S"] == 3**4 * 7**12 * 30 * 24
    assert abs(payload["E"] - 11.07690) < 5e-5
    assert not payload["moment_bound"]["overflowed"]


def test_stationary_parity_control(in_tmp, capsys):
    code, plain = run_json(capsys, ["stationary", "--ell", "5"])
    assert code == 0
    assert len(plain["probs"]) == DEFAULT_R + 1
    assert abs(plain["parity"] - 0.5) < 1e-9
    code, mixed = run_json(capsys, ["stationary", "--ell", "5", "--rho0", "0.25"])
    assert code == 0
    assert abs(mixed["parity"] - 0.25) < 1e-9


def test_omega_dist_counts(in_tmp, capsys):
    code, payload = run_json(capsys, ["omega-dist", "--q", "11", "--degree", "3"])
    assert code == 0
    assert payload["counts"] == {"1": 451, "2": 715, "3": 165}
    assert payload["matches_monic_count"] is True


def test_claims_pass(in_tmp, capsys):
    code, payload = run_json(capsys, ["claims", "--ell", "5", "--p", "7", "--kmax", "2"])
    assert code == 0
    assert payload["all_passed"] is True
    assert [r["claim"] for r in payload["rows"][:2]] == [
        "threshold_consistency",
        "density_99",
    ]


def test_s3_check_csv_rows(in_tmp):
    out = Path("s3.csv")
    assert main(["s3-check", "--ell", "7", "--format", "csv", "--out", str(out)]) == 0
    with out.open() as fh:
        rows = {r["check"]: r["value"] for r in csv.DictReader(fh)}
    assert rows["passed"] == "True"
    assert rows["fixed_dim_123"] == "2"
    assert rows["fixed_dim_231"] == "0"


def test_dtable_diff_exact_strings(in_tmp, capsys):
    code, payload = run_json(capsys, ["dtable-diff", "--ell", "5", "--rmax", "3"])
    assert code == 0
    assert len(payload["rows"]) == 4
    r0 = payload["rows"][0]
    assert r0["printed_sum"] == "1" and r0["two_step_sum"] == "1"
    assert r0["diff"]["0"] == "-4/5"  # exact rationals survive as strings


# --------------------------------------------------------------------------
# curve files
# --------------------------------------------------------------------------


def test_classify_accepts_json_curve(in_tmp, capsys, curve_file):
    path = curve_file("audit.json", "json")
    code = main(["classify", "--curve", str(path), "--degree", "2"])
    captured = capsys.readouterr()
    payload = json.loads(captured.out)
    assert code == 0
    assert "warning:" in captured.err
    assert payload["per_degree"]["1"]["Ramified"] == 2
    assert payload["warnings"]
    assert sum(payload["per_degree"]["2"].values()) == 55


def test_classify_accepts_toml_curve(in_tmp, capsys, curve_file):
    path = curve_file("audit.toml", "toml")
    code, payload = run_json(capsys, ["classify", "--curve", str(path), "--degree", "1"])
    assert code == 0
    assert payload["q"] == 11 and payload["ell"] == 5


def test_chebotarev_within_bounds(in_tmp, capsys, curve_file):
    path = curve_file()
    code, payload = run_json(capsys, ["chebotarev", "--curve", str(path), "--degree", "2"])
    assert code == 0
    assert payload["all_within_bound"] is True
    assert payload["violations"] == 0


def test_missing_curve_file(in_tmp, capsys):
    assert main(["classify", "--curve", "nope.json", "--degree", "1"]) == 2
    assert "not found" in capsys.readouterr().err


def test_unparseable_curve_file(in_tmp, capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{{{")
    assert main(["classify", "--curve", str(bad), "--degree", "1"]) == 2
    assert "could not parse" in capsys.readouterr().err


def test_invalid_curve_parameters(in_tmp, capsys, curve_file):
    path = curve_file("bad.json", "json", ell=4)
    assert main(["classify", "--curve", str(path), "--degree", "1"]) == 2
    short = curve_file("short.json", "json", coeffs=[[0, 1], [0, 1]])
    assert main(["classify", "--curve", str(short), "--degree", "1"]) == 2


def test_uncertified_curve_is_rejected(in_tmp, capsys, curve_file):
    # x^3 - 1 has the rational root x = 1
    path = curve_file("root.json", "json", coeffs=[[10], [], []])
    assert main(["classify", "--curve", str(path), "--degree", "1"]) == 2
    assert "not certified" in capsys.readouterr().err


# --------------------------------------------------------------------------
# simulation and replay
# --------------------------------------------------------------------------


def test_simulate_requires_seed(in_tmp, capsys, curve_file):
    path = curve_file()
    code = main(["simulate", "--curve", str(path), "--degree", "6", "--samples", "10"])
    assert code == 2
    assert "--seed" in capsys.readouterr().err


def test_simulate_small_run(in_tmp, capsys, curve_file):
    path = curve_file()
    argv = [
        "simulate", "--curve", str(path),
        "--degree", "8", "--samples", "50", "--seed", "1",
    ]
    code = main(argv)
    captured = capsys.readouterr()
    assert code == 0
    payload = json.loads(captured.out)
    assert sum(payload["rank_counts"].values()) == 50
    assert payload["engine"] == "batch"
    assert payload["config"]["seed"] == 1
    assert "warning:" in captured.err
    manifest = json.loads(Path("twistrank-simulate.manifest.json").read_text())
    assert manifest["argv"] == argv


def test_simulate_stationary_start(in_tmp, capsys, curve_file):
    path = curve_file()
    code, payload = run_json(
        capsys,
        [
            "simulate", "--curve", str(path), "--degree", "6",
            "--samples", "20", "--seed", "2", "--mu", "stationary",
            "--rho0", "0.3", "--engine", "scalar",
        ],
    )
    assert code == 0
    assert abs(payload["config"]["mu_star_parity"] - 0.3) < 1e-9
    assert payload["engine"] == "scalar"


def test_simulate_digest_ignores_wall_clock(in_tmp, capsys, curve_file):
    path = curve_file()
    argv = [
        "simulate", "--curve", str(path),
        "--degree", "6", "--samples", "30", "--seed", "9",
        "--manifest", "a.json",
    ]
    assert main(argv) == 0
    argv[-1] = "b.json"
    assert main(argv) == 0
    capsys.readouterr()
    a = json.loads(Path("a.json").read_text())
    b = json.loads(Path("b.json").read_text())
    assert a["digest"] == b["digest"]


def test_replay_roundtrip_and_tamper_detection(in_tmp, capsys, curve_file):
    path = curve_file()
    argv = [
        "simulate", "--curve", str(path),
        "--degree", "6", "--samples", "25", "--seed", "3",
    ]
    assert main(argv) == 0
    capsys.readouterr()
    manifest = Path("twistrank-simulate.manifest.json")

    code = main(["--replay", str(manifest)])
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["match"] is True
    assert report["recomputed_digest"] == report["expected_digest"]

    data = json.loads(manifest.read_text())
    data["digest"] = "0" * 64
    manifest.write_text(json.dumps(data))
    code = main(["--replay", str(manifest)])
    report = json.loads(capsys.readouterr().out)
    assert code == 1
    assert report["match"] is False


def test_replay_missing_and_malformed_manifest(in_tmp, capsys, tmp_path):
    assert main(["--replay", "ghost.json"]) == 2
    broken = tmp_path / "broken.json"
    broken.write_text("not json")
    assert main(["--replay", str(broken)]) == 2
    assert "bad manifest" in capsys.readouterr().err
