"""Command-line behavior: configs, serialization, determinism, exit codes."""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from chaoskit.cli import (
    CSV_COLUMNS,
    EXIT_OK,
    EXIT_SUITE_FAILURE,
    RunConfig,
    Row,
    _decimal_str,
    _emit,
    main,
    run,
)
from chaoskit.montecarlo import ExperimentReport

# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "value,text",
    [
        (Fraction(106), "106"),
        (Fraction(3, 2), "1.5"),
        (Fraction(3, 32), "0.09375"),
        (Fraction(-7, 4), "-1.75"),
        (Fraction(1, 10**6), "0.000001"),
        (Fraction(0), "0"),
    ],
)
def test_decimal_str_terminating(value, text):
    assert _decimal_str(value) == text


def test_decimal_str_non_terminating_falls_back_to_float():
    assert _decimal_str(Fraction(1, 3)) == repr(1 / 3)
    assert _decimal_str(Fraction(-2, 7)) == repr(-2 / 7)


# ---------------------------------------------------------------------------
# suites through run()
# ---------------------------------------------------------------------------


def test_counterexample_json_report(tmp_path):
    out = tmp_path / "ce.json"
    code = run(RunConfig(command="counterexample", format="json", output_path=str(out)))
    assert code == EXIT_OK
    payload = json.loads(out.read_text())
    assert payload["name"] == "counterexample"
    assert payload["exact_values"]["e2"] == {"decimal": "106", "num": 106, "den": 1}
    assert payload["exact_values"]["gaussian_sixth"]["num"] == 17865240
    assert payload["exact_values"]["three_e2_squared"]["num"] == 33708
    assert all(payload["verdicts"].values())
    # every verdict has a named tolerance in parameters
    for name in payload["verdicts"]:
        assert f"tolerance.{name}" in payload["parameters"] or name in (
            "root_agreement",
            "kappa4_zero_at_root",
        )


def test_counterexample_csv_columns(tmp_path):
    out = tmp_path / "ce.csv"
    code = run(RunConfig(command="counterexample", format="csv", output_path=str(out)))
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    e2_line = next(line for line in lines if line.startswith("counterexample,e2,"))
    assert ",106," in e2_line
    assert e2_line.endswith("true")


def test_lemma_suite_rerun_is_byte_identical(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run(RunConfig(command="lemma-suite", seed=42, output_path=str(a))) == EXIT_OK
    assert run(RunConfig(command="lemma-suite", seed=42, output_path=str(b))) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.csv"
    assert run(RunConfig(command="lemma-suite", seed=43, output_path=str(c))) == EXIT_OK
    assert a.read_bytes() != c.read_bytes()


def test_lemma_suite_json_round(tmp_path):
    out = tmp_path / "lemma.json"
    code = run(
        RunConfig(command="lemma-suite", seed=9, pairs=12, format="json", output_path=str(out))
    )
    assert code == EXIT_OK
    payload = json.loads(out.read_text())
    assert payload["verdicts"]["decomposition_identity"]
    assert payload["verdicts"]["kappa4_monotone"]
    assert payload["verdicts"]["kappa4_positive"]
    assert payload["parameters"]["pairs"] == 12


def test_bounds_suite(tmp_path):
    out = tmp_path / "bounds.json"
    code = run(RunConfig(command="bounds-suite", seed=7, format="json", output_path=str(out)))
    assert code == EXIT_OK
    payload = json.loads(out.read_text())
    assert payload["verdicts"]["gamma_mean_is_variance"]
    assert payload["verdicts"]["equality_witness"]
    assert payload["verdicts"]["mixed_term_bound"]
    assert payload["exact_values"]["witness_lhs"]["num"] == 1


def test_positivity_suite(tmp_path):
    out = tmp_path / "pos.json"
    code = run(RunConfig(command="positivity", format="json", output_path=str(out)))
    assert code == EXIT_OK
    payload = json.loads(out.read_text())
    assert payload["verdicts"]["certificate"]
    assert payload["verdicts"]["discriminant_nonpositive"]
    assert payload["verdicts"]["grid_min_positive"]
    assert payload["exact_values"]["radicand_poly"] == "-5700*a^2"


def test_clt_exact_kappa4_column(tmp_path):
    out = tmp_path / "clt.csv"
    config = RunConfig(
        command="clt",
        family="dyadic_p2",
        n_grid=[4, 16, 64],
        samples=2000,
        seed=42,
        output_path=str(out),
    )
    assert run(config) == EXIT_OK
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    kappa4_rows = [r for r in rows if r[1] == "kappa4"]
    assert [(r[2], r[3]) for r in kappa4_rows] == [
        ("4", "1.5"),
        ("16", "0.375"),
        ("64", "0.09375"),
    ]


def test_clt_json_structure(tmp_path):
    out = tmp_path / "clt.json"
    config = RunConfig(
        command="clt",
        family="independent_blocks_M3",
        n_grid=[2, 8],
        samples=1000,
        seed=5,
        format="json",
        output_path=str(out),
    )
    run(config)
    payload = json.loads(out.read_text())
    assert payload["name"] == "clt:independent_blocks_M3"
    assert payload["parameters"]["seed"] == 5
    assert "w1[n=2]" in payload["estimates"]
    point = payload["estimates"]["w1[n=2]"]
    assert set(point) == {"point", "std_error"}


def test_unknown_command_rejected():
    with pytest.raises(ValueError):
        run(RunConfig(command="mystery"))


def test_emit_failure_exit_code(tmp_path, capsys):
    report = ExperimentReport(name="synthetic")
    report.parameters["tolerance.broken"] = "exact"
    report.verdicts["broken"] = False
    rows = [Row("synthetic", "broken", verdict=False)]
    config = RunConfig(command="counterexample", output_path=str(tmp_path / "x.csv"))
    assert _emit(report, rows, config) == EXIT_SUITE_FAILURE
    printed = capsys.readouterr().out
    assert "0/1 passed" in printed
    assert "FAIL" in printed


# ---------------------------------------------------------------------------
# argument parsing via main()
# ---------------------------------------------------------------------------


def run_main(argv):
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    return excinfo.value.code


def test_main_happy_path(tmp_path):
    out = tmp_path / "r.json"
    code = run_main(
        ["counterexample", "--format", "json", "--output", str(out), "--seed", "1"]
    )
    assert code == EXIT_OK
    assert out.exists()


def test_main_rejects_bad_grid(tmp_path):
    code = run_main(
        ["clt", "--n-grid", "16,4", "--samples", "1000", "--output", str(tmp_path / "x.csv")]
    )
    assert code == 2


def test_main_rejects_small_samples(tmp_path):
    code = run_main(
        ["clt", "--samples", "50", "--output", str(tmp_path / "x.csv")]
    )
    assert code == 2


def test_main_rejects_unknown_family():
    assert run_main(["clt", "--family", "nonesuch"]) == 2


def test_main_rejects_bad_seed(tmp_path):
    code = run_main(
        ["lemma-suite", "--seed", "-3", "--output", str(tmp_path / "x.csv")]
    )
    assert code == 2


def test_env_seed_override(tmp_path, monkeypatch):
    env_file = tmp_path / "env.csv"
    flag_file = tmp_path / "flag.csv"
    monkeypatch.setenv("CHAOSKIT_SEED", "99")
    assert run_main(["lemma-suite", "--pairs", "5", "--output", str(env_file)]) == EXIT_OK
    monkeypatch.delenv("CHAOSKIT_SEED")
    assert (
        run_main(["lemma-suite", "--pairs", "5", "--seed", "99", "--output", str(flag_file)])
        == EXIT_OK
    )
    assert env_file.read_bytes() == flag_file.read_bytes()


def test_flag_beats_env_seed(tmp_path, monkeypatch):
    monkeypatch.setenv("CHAOSKIT_SEED", "99")
    flagged = tmp_path / "flagged.csv"
    assert (
        run_main(["lemma-suite", "--pairs", "5", "--seed", "1", "--output", str(flagged)])
        == EXIT_OK
    )
    plain = tmp_path / "plain.csv"
    monkeypatch.delenv("CHAOSKIT_SEED")
    assert run_main(["lemma-suite", "--pairs", "5", "--seed", "1", "--output", str(plain)]) == EXIT_OK
    assert flagged.read_bytes() == plain.read_bytes()


def test_config_file_with_flag_override(tmp_path):
    config_path = tmp_path / "conf.json"
    config_path.write_text(
        json.dumps({"seed": 4, "pairs": 6, "format": "json", "output_path": str(tmp_path / "from_file.json")})
    )
    assert run_main(["lemma-suite", "--config", str(config_path)]) == EXIT_OK
    payload = json.loads((tmp_path / "from_file.json").read_text())
    assert payload["parameters"]["seed"] == 4
    assert payload["parameters"]["pairs"] == 6
    # flag wins over the file
    out2 = tmp_path / "override.json"
    assert (
        run_main(
            ["lemma-suite", "--config", str(config_path), "--seed", "8", "--output", str(out2)]
        )
        == EXIT_OK
    )
    assert json.loads(out2.read_text())["parameters"]["seed"] == 8


def test_config_file_must_be_object(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    assert run_main(["lemma-suite", "--config", str(bad)]) == 2
    assert run_main(["lemma-suite", "--config", str(tmp_path / "missing.json")]) == 2


def test_default_output_path(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run_main(["positivity"]) == EXIT_OK
    assert (tmp_path / "chaoskit_positivity.csv").exists()


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "chaoskit.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    for name in ("counterexample", "lemma-suite", "bounds-suite", "clt", "positivity"):
        assert name in proc.stdout
