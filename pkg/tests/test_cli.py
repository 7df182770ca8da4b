"""Command-line behavior: output formats, determinism, config and env handling."""

from __future__ import annotations

import json
import math

import pytest

from qetsim import analysis, cli
from qetsim.model import ModelParams


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text: str):
    lines = text.splitlines()
    meta = [ln for ln in lines if ln.startswith("# ")]
    body = [ln for ln in lines if not ln.startswith("# ")]
    return meta, body[0], body[1:]


def test_efficiency_point(capsys):
    code, out, err = run_cli(capsys, "efficiency", "--n", "3", "--m", "1", "--ratio", "1")
    assert code == 0 and err == ""
    meta, header, rows = parse_csv(out)
    assert header == cli.SWEEP_HEADER
    assert len(rows) == 1
    fields = rows[0].split(",")
    assert fields[:3] == ["3", "1", "1"]
    assert float(fields[3]) == pytest.approx(1.6641005886756874, rel=1e-15)
    assert float(fields[4]) == pytest.approx(0.29461729071148773, rel=1e-15)
    assert float(fields[5]) == pytest.approx(0.17704295804975825, rel=1e-15)
    assert fields[6] == ""  # bell column exists but is not computed here
    joined = "\n".join(meta)
    assert "theta_opt: 0.25957305712326145" in joined
    assert out.endswith("\n") and not out.endswith("\n\n")


def test_efficiency_json(capsys):
    code, out, _ = run_cli(capsys, "efficiency", "--n", "4", "--m", "1",
                           "--ratio", "1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    row = doc["rows"][0]
    assert row["eta"] == pytest.approx(1.0 / 6.0, rel=1e-15)
    assert row["e_out"] == pytest.approx(1.0 / math.sqrt(5.0), rel=1e-14)
    assert row["theta_opt"] == pytest.approx(0.5 * math.atan2(3.0, 4.0), rel=1e-14)


def test_efficiency_with_shot_estimate(capsys):
    code, out, _ = run_cli(capsys, "efficiency", "--n", "3", "--m", "1",
                           "--ratio", "1", "--shots", "64", "--seed", "5")
    assert code == 0
    meta, _, rows = parse_csv(out)
    sampled = {ln.split(":")[0][2:]: ln.split(": ")[1] for ln in meta}
    assert sampled["shots"] == "64"
    assert sampled["seed"] == "5"
    assert float(sampled["sampled_e_in"]) == pytest.approx(1.6641005886756874, abs=1e-12)
    assert float(sampled["sampled_e_out"]) == pytest.approx(0.29461729071148773, abs=1e-12)


def test_efficiency_rejects_bad_partition(capsys):
    code, _, err = run_cli(capsys, "efficiency", "--n", "3", "--m", "3", "--ratio", "1")
    assert code == 2
    assert err.startswith("error:")


def test_sweep_grid_rows(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--n", "3:5", "--m", "1:3", "--ratio", "1.0")
    assert code == 0
    _, header, rows = parse_csv(out)
    assert header == cli.SWEEP_HEADER
    assert len(rows) == 8
    assert rows[0].startswith("3,1,1,")
    assert all(row.endswith(",") for row in rows)  # empty bell column


def test_sweep_bell_column(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--n", "2,3", "--m", "1",
                           "--ratio", "1.0", "--bell")
    assert code == 0
    _, _, rows = parse_csv(out)
    by_n = {row.split(",")[0]: row for row in rows}
    assert by_n["2"].endswith(",")  # bell undefined below three qubits
    assert float(by_n["3"].rsplit(",", 1)[1]) == pytest.approx(1.1435437497937313, rel=1e-14)


def test_sweep_rejects_bad_ranges(capsys):
    code, _, err = run_cli(capsys, "sweep", "--n", "1:3", "--m", "1", "--ratio", "1.0")
    assert code == 2 and "error:" in err
    with pytest.raises(SystemExit) as exc:
        run_cli(capsys, "sweep", "--n", "5:2", "--m", "1", "--ratio", "1.0")
    assert exc.value.code == 2


def test_int_list_parsing():
    assert cli._int_list("3:6") == [3, 4, 5, 6]
    assert cli._int_list("2,5,7") == [2, 5, 7]
    assert cli._int_list("1:9:3") == [1, 4, 7]
    assert cli._int_list("4") == [4]
    assert cli._int_list("3:4,10") == [3, 4, 10]
    import argparse
    for bad in ("5:2", "1:5:0", "1:2:3:4"):
        with pytest.raises(argparse.ArgumentTypeError):
            cli._int_list(bad)


def test_figure_output_is_deterministic(tmp_path, capsys):
    paths = [tmp_path / name for name in ("a.csv", "b.csv", "c.csv")]
    for path, threads in zip(paths, ("1", "1", "4")):
        code, _, _ = run_cli(capsys, "figure", "fig7", "--threads", threads,
                             "--out", str(path))
        assert code == 0
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]
    text = blobs[0].decode()
    _, header, rows = parse_csv(text)
    assert header == cli.SWEEP_HEADER
    assert len(rows) == 602


def test_figure_stdout_matches_file_output(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "figure", "fig2a")
    assert code == 0
    path = tmp_path / "fig.csv"
    run_cli(capsys, "figure", "fig2a", "--out", str(path))
    assert path.read_text() == out
    _, _, rows = parse_csv(out)
    assert len(rows) == 45


def test_figure_json_round_trip(capsys):
    code, out, _ = run_cli(capsys, "figure", "fig2a", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["rows"]) == 45
    assert doc["rows"][0]["n"] == 10
    assert any("fig2a" in m for m in doc["meta"])


def test_figure_unknown_name_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli(capsys, "figure", "fig9")
    assert exc.value.code == 2


def test_bell_subcommand(capsys):
    code, out, _ = run_cli(capsys, "bell", "--n", "8", "--ratio", "0.5")
    assert code == 0
    _, header, rows = parse_csv(out)
    assert header == "n,ratio,b_value,violates,saturation"
    fields = rows[0].split(",")
    assert fields[0] == "8"
    assert float(fields[2]) == pytest.approx(1.403292830891247, rel=1e-14)
    assert fields[3] == "true"
    assert float(fields[4]) == 8.0

    code, _, err = run_cli(capsys, "bell", "--n", "2", "--ratio", "1.0")
    assert code == 2 and "error:" in err


def test_nopt_subcommand_with_scan(capsys):
    code, out, _ = run_cli(capsys, "nopt", "--x", "10", "--scan", "--n-max", "500")
    assert code == 0
    _, header, rows = parse_csv(out)
    assert header == "x,n_opt_real,n_opt_int,eta_at_opt,c_aux,scan_n,scan_eta"
    fields = rows[0].split(",")
    assert fields[2] == "10" and fields[5] == "10"
    assert float(fields[3]) == pytest.approx(0.4196918171640247, rel=1e-13)
    assert float(fields[6]) == pytest.approx(0.4196918171640247, rel=1e-13)

    code, _, err = run_cli(capsys, "nopt", "--x", "0")
    assert code == 2 and "error:" in err


def test_fixtures_subcommand(capsys):
    code, out, _ = run_cli(capsys, "fixtures")
    assert code == 0  # variants misbehaving would flip the exit code
    _, header, rows = parse_csv(out)
    assert len(rows) == 15
    assert header.split(",")[5:7] == ["expected_mismatch", "agrees"]
    variant_rows = [r for r in rows if r.split(",")[5] == "true"]
    assert len(variant_rows) == 2
    for row in variant_rows:
        assert row.split(",")[6] == "false"  # expected mismatch, and it did


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("h = 2.0\nbell = true\n# trailing comment line\n")
    code, out, _ = run_cli(capsys, "sweep", "--n", "3", "--m", "1",
                           "--ratio", "1.0", "--config", str(cfg))
    assert code == 0
    meta, _, rows = parse_csv(out)
    assert "# h: 2" in meta
    assert rows[0].split(",")[-1] != ""  # bell came from the config flag

    # Explicit flags win over config values.
    code, out, _ = run_cli(capsys, "sweep", "--n", "3", "--m", "1",
                           "--ratio", "1.0", "--config", str(cfg), "--h", "3.0")
    assert code == 0
    meta, _, _ = parse_csv(out)
    assert "# h: 3" in meta


def test_config_file_errors(tmp_path, capsys):
    missing = tmp_path / "nope.cfg"
    code, _, err = run_cli(capsys, "sweep", "--n", "3", "--m", "1",
                           "--ratio", "1.0", "--config", str(missing))
    assert code == 2 and "error:" in err

    bad = tmp_path / "bad.cfg"
    bad.write_text("just a line with no equals\n")
    code, _, err = run_cli(capsys, "sweep", "--n", "3", "--m", "1",
                           "--ratio", "1.0", "--config", str(bad))
    assert code == 2 and "key=value" in err

    badbool = tmp_path / "badbool.cfg"
    badbool.write_text("bell = maybe\n")
    code, _, err = run_cli(capsys, "sweep", "--n", "3", "--m", "1",
                           "--ratio", "1.0", "--config", str(badbool))
    assert code == 2 and "true/false" in err


def test_oracle_cap_env(monkeypatch, capsys):
    monkeypatch.setenv("QET_ORACLE_CAP", "2")
    # The closed-form path never touches the brute-force engine.
    code, _, _ = run_cli(capsys, "efficiency", "--n", "3", "--m", "1", "--ratio", "1")
    assert code == 0
    # The shot estimate does, and N=3 now exceeds the cap.
    code, _, err = run_cli(capsys, "efficiency", "--n", "3", "--m", "1",
                           "--ratio", "1", "--shots", "8")
    assert code == 2 and "error:" in err
    # An explicit flag beats the environment.
    code, _, _ = run_cli(capsys, "efficiency", "--n", "3", "--m", "1",
                         "--ratio", "1", "--shots", "8", "--oracle-cap", "12")
    assert code == 0

    monkeypatch.setenv("QET_ORACLE_CAP", "twelve")
    code, _, err = run_cli(capsys, "efficiency", "--n", "3", "--m", "1", "--ratio", "1")
    assert code == 2 and "QET_ORACLE_CAP" in err


def test_render_sweep_matches_library_values():
    text = cli.render_sweep([3], [1], [1.0])
    _, _, rows = parse_csv(text)
    row = analysis.sweep_row((3, 1, 1.0, False))
    expected = ",".join(
        ["3", "1", "1"] + ["%.17g" % v for v in (row.e_in, row.e_out, row.eta)]
    ) + ","
    assert rows[0] == expected


def test_float_formatting_is_full_precision():
    # 17 significant digits: not the shortest spelling, but every float
    # value round-trips exactly and the byte layout is fixed.
    assert cli._fmt(1.6641005886756874) == "1.6641005886756874"
    assert cli._fmt(0.1) == "0.10000000000000001"
    assert float(cli._fmt(0.1)) == 0.1
    assert cli._fmt(True) == "true"
    assert cli._fmt(None) == ""
    assert cli._fmt(12) == "12"
    assert cli._fmt("note text") == "note text"
    assert float(cli._fmt(math.pi)) == math.pi
