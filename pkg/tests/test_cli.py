import json
import subprocess
import sys

import pytest

from cmnorms import cli, engine


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_field_info(capsys):
    code, out, _ = run(capsys, "field-info")
    assert code == 0
    assert "degree     3" in out and "disc       49" in out
    assert "p = 2    inert" in out
    assert "p = 7    totally ramified" in out
    assert "p = 13   split (3 primes)" in out


def test_field_info_rational_field(tmp_path, capsys):
    spec = tmp_path / "q.field"
    spec.write_text("poly = 0,1\ndelta = 1\nlabel = Q\n")
    code, out, _ = run(capsys, "field-info", "--field", str(spec))
    assert code == 0
    assert "degenerate" in out


def test_config_error_has_line_number(tmp_path, capsys):
    spec = tmp_path / "bad.field"
    spec.write_text("# comment\npoly = -1,-2,1,1\ncolour = blue\n")
    code, _, err = run(capsys, "field-info", "--field", str(spec))
    assert code == cli.EXIT_CONFIG
    assert "bad.field:3:" in err


def test_pp_file_errors(tmp_path, capsys):
    pp = tmp_path / "bad.pp"
    pp.write_text("4,-4,1 2\n1/x 3\n")
    code, _, err = run(capsys, "cmvalue", "--disc=-3", "--pp", str(pp))
    assert code == cli.EXIT_CONFIG and "bad.pp:2:" in err


def test_cmvalue_minus_11(capsys):
    code, out, _ = run(capsys, "cmvalue", "--disc=-11")
    assert code == 0
    assert out.strip() == engine.CM_TABLE_GOLDEN["-11"]


@pytest.mark.parametrize("disc, code, text", [
    ("-4", 10, "0"), ("a-2", 11, "infinity"),
])
def test_degenerate_exit_codes(capsys, disc, code, text):
    got, out, _ = run(capsys, "cmvalue", "--disc", disc)
    assert got == code and out.strip() == text


def test_indeterminate_exit_and_json(capsys):
    code, out, _ = run(capsys, "cmvalue", "--disc=-8", "--json", "--constant", "2^6*3^3")
    assert code == 12
    obj = json.loads(out)
    assert list(obj) == ["status", "factors", "indeterminate", "bound", "calibration"]
    assert obj["indeterminate"] == [2] and isinstance(obj["bound"], int)
    assert obj["calibration"]["constant"] == "1728"
    assert {f["p"]: f["exp"] for f in obj["factors"]}[13] == "-21/1"


def test_bad_discriminant_exit(capsys):
    code, _, err = run(capsys, "cmvalue", "--disc=5")
    assert code == cli.EXIT_DISC and err.startswith("error:")


def test_pp_file_matches_builtin(tmp_path, capsys):
    pp = tmp_path / "elkies.pp"
    # 1/delta and (2 - a)/(4 delta) in the power basis
    pp.write_text("# Elkies\n3/7,5/7,2/7 2 auto\n1/7,3/28,1/28 -7\n")
    code, out, _ = run(capsys, "cmvalue", "--disc=-3", "--pp", str(pp))
    assert code == 0 and out.strip() == "2^6 * 3^3"


def test_table_golden_and_mismatch(tmp_path, capsys):
    code, out, _ = run(capsys, "table", "--disc=-3", "--disc=-4", "--golden", "builtin")
    assert code == 0 and out.count("PASS") == 2
    gold = tmp_path / "g.json"
    gold.write_text(json.dumps({"-3": "2^6 * 3^4"}))
    code, out, _ = run(capsys, "table", "--disc=-3", "--golden", str(gold))
    assert code == 1
    assert "FAIL" in out and "3: 3 != 4" in out


def test_empty_table(capsys):
    code, out, _ = run(capsys, "table", "--none")
    assert code == 0 and out == ""


def test_cache_dir_round_trip(tmp_path, capsys):
    args = ("cmvalue", "--disc=-11", "--json", "--cache-dir", str(tmp_path))
    _, first, _ = run(capsys, *args)
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    _, second, _ = run(capsys, *args)
    assert first == second


def test_threads_give_identical_output(capsys):
    rows = ("--disc=-3", "--disc=-4", "--disc=-11")
    _, one, _ = run(capsys, "table", *rows)
    _, two, _ = run(capsys, "table", "--threads", "2", *rows)
    assert one == two and one.count("\n") == 3


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "cmnorms", "cmvalue", "--disc=-3"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0
    assert res.stdout.strip() == "2^6 * 3^3"
