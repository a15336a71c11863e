"""Command-line interface: exit codes, file round trips, determinism."""

import json

from forge.cli import main


def test_build_verify_round_trip(tmp_path):
    datum = tmp_path / "e6.json"
    report = tmp_path / "report.json"
    code = main(
        [
            "build",
            "--type",
            "E6",
            "--p",
            "13",
            "--n",
            "1",
            "--ramified",
            "-o",
            str(datum),
        ]
    )
    assert code == 0
    data = json.loads(datum.read_text())
    assert data["case"] == "E6-ram"
    assert data["depth"] == "4/3"
    code = main(["verify", str(datum), "--report", str(report)])
    assert code == 0
    assert json.loads(report.read_text())["verdict"] == "pass"


def test_verify_tampered_exits_one(tmp_path, capsys):
    datum = tmp_path / "b2.json"
    assert main(["build", "--type", "B2", "--p", "5", "-o", str(datum)]) == 0
    data = json.loads(datum.read_text())
    data["coords"][0]["residue"] = [0, 0]
    bad = tmp_path / "tampered.json"
    bad.write_text(json.dumps(data, sort_keys=True))
    code = main(["verify", str(bad)])
    captured = capsys.readouterr()
    assert code == 1
    assert "fail at coroot" in captured.err


def test_unknown_flag_exits_two(capsys):
    assert main(["build", "--nonsense"]) == 2
    assert main(["frobnicate"]) == 2
    capsys.readouterr()


def test_invalid_inputs_exit_two(tmp_path, capsys):
    assert main(["build", "--type", "Q9", "--p", "5"]) == 2
    assert main(["build", "--type", "B2", "--p", "3"]) == 2  # p <= Cox
    missing = tmp_path / "missing.json"
    assert main(["verify", str(missing)]) == 2
    capsys.readouterr()


def test_sweep_deterministic_across_jobs(tmp_path, capsys, monkeypatch):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    args = ["sweep", "--types", "B2,A2,G2", "--n-values", "1", "--no-twist"]
    assert main(args + ["--jobs", "1", "-o", str(out1)]) == 0
    assert main(args + ["--jobs", "6", "-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    monkeypatch.setenv("FORGE_JOBS", "3")
    out3 = tmp_path / "r3.json"
    assert main(args + ["-o", str(out3)]) == 0
    assert out1.read_bytes() == out3.read_bytes()
    report = json.loads(out1.read_text())
    assert {r["case"] for r in report["rows"]} == {"Case1-unram", "A"}
    capsys.readouterr()


def test_sweep_empty_grid_exits_two(capsys):
    assert main(["sweep", "--types", "G2", "--primes", "5"]) == 2
    capsys.readouterr()


def test_congruence_battery_cli(tmp_path):
    out = tmp_path / "congruence.json"
    assert main(["congruence", "--p", "3", "--m", "1", "--N", "1", "-o", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["passed"]


def test_cusp_cli_small(tmp_path):
    out = tmp_path / "cusp.json"
    code = main(
        ["cusp", "--p", "5", "--n", "3", "--m", "1", "--x", "1", "--samples", "6", "-o", str(out)]
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["passed"] and report["x_classes"] == 1


def test_depth_cli(tmp_path):
    out = tmp_path / "depth.json"
    assert main(["depth", "--max-m", "3", "-o", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["passed"]
    assert report["level_map"]["surjective"]
    assert report["torus_filtration"]["surjective"]
