import json

import pytest

from circalg import cli
from circalg.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_INTERNAL, main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_json(capsys, data_dir):
    code, out, _ = run(capsys, "analyze", data_dir / "netlists/rc_lowpass.cir", "--no-meta")
    assert code == 0
    rep = json.loads(out)
    assert rep["transfer_function"]["denominator"] == ["1", "C*R"]
    assert rep["normalized_denominator"][0] == "1"


def test_analyze_with_substitution(capsys, data_dir):
    code, out, _ = run(capsys, "analyze", data_dir / "netlists/rc_lowpass.cir", "--subst", "R=1k", "--subst", "C=1u",
                       "--no-meta")
    assert code == 0
    rep = json.loads(out)
    assert rep["transfer_function"]["denominator"] == ["1000", "1"]
    assert rep["poles"] == ["-1000.00000000000000000000000000"]


def test_no_meta_is_byte_identical(capsys, data_dir):
    args = ("size", data_dir / "specs/bjt_poles.json", "--no-meta", "--digits", "12")
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first[0] == 0 and first[1] == second[1]
    rep = json.loads(first[1])
    assert rep["counts"]["solutions"] == 4 and rep["counts"]["admissible"] == 2


def test_out_file(capsys, tmp_path, data_dir):
    target = tmp_path / "z.json"
    code, out, _ = run(capsys, "ladder", "impedance", "1,1,1", "--out", target)
    assert code == 0 and out == ""
    assert json.loads(target.read_text()) == {"numerator": "s^3 + 2*s", "denominator": "s^2 + 1"}


def test_ladder_commands(capsys):
    code, out, _ = run(capsys, "ladder", "impedance", "1,1,1", "--text")
    assert code == 0 and "(s^3 + 2*s)/(s^2 + 1)" in out
    code, out, _ = run(capsys, "ladder", "expand", "(2*s^2+1)/s", "--no-meta")
    assert code == 0 and json.loads(out)["ladder"] == {"L1": "2", "C1": "1"}
    code, _, err = run(capsys, "ladder", "expand", "(s^2-1)/s")
    assert code == EXIT_INPUT and "error" in err
    code, out, _ = run(capsys, "ladder", "synth", "--no-meta")
    assert code == 0 and "A6" in out


def test_reduce(capsys, data_dir):
    code, _, _ = run(capsys, "reduce", data_dir / "networks/k4.net", "--no-delta-wye", "--text")
    assert code == EXIT_INPUT
    code, out, _ = run(capsys, "reduce", data_dir / "networks/bridge.net", "--check", "--text")
    assert code == 0 and "Z =" in out


def test_bode_csv(capsys, data_dir):
    code, out, _ = run(capsys, "bode", data_dir / "netlists/rc_lowpass.cir", "--subst", "R=1k", "--subst", "C=1u",
                       "--f-lo", 10, "--f-hi", 1000, "--ppd", 2)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("freq_hz,mag_db,phase_deg")
    assert len(lines) == 6


def test_groebner_certify(capsys, data_dir):
    code, out, _ = run(capsys, "groebner", data_dir / "systems/lex_small.txt", "--certify", "--no-meta")
    rep = json.loads(out)
    assert code == 0 and rep["certified"] and rep["basis"] == ["2*y^2 - 1", "x - y"]


def test_budget_exit_code(capsys, data_dir):
    code, _, err = run(capsys, "groebner", data_dir / "systems/bjt_eq15.txt", "--budget-pairs", 3)
    assert code == EXIT_BUDGET and "budget" in err


def test_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", tmp_path / "missing.cir")
    assert code == EXIT_INPUT and "cannot read" in err
    bad = tmp_path / "bad.cir"
    bad.write_text("V1 in 0 input\nR1 in out\n.out out\n")
    code, _, err = run(capsys, "analyze", bad)
    assert code == EXIT_INPUT and "line 2" in err
    code, _, _ = run(capsys, "analyze", bad, "--digits", 3)
    assert code == EXIT_INPUT


def test_internal_error_exit_code(capsys, monkeypatch, data_dir):
    def boom(cfg, args):
        raise RuntimeError("invariant")

    monkeypatch.setitem(cli.COMMANDS, "analyze", boom)
    code, _, err = run(capsys, "analyze", data_dir / "netlists/rc_lowpass.cir")
    assert code == EXIT_INTERNAL and "internal error" in err


@pytest.mark.parametrize("argv", [["analyze"], ["nonsense"]])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
