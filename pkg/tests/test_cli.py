import csv
import io
import json
import subprocess
import sys

import pytest

from kloos.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_moments_json_q3(capsys):
    payload = run_json(capsys, "moments", "--r", "1", "--hmax", "4")
    assert payload["q"] == 3
    assert payload["SK"] == [-1, 1, -1, 1]
    assert payload["MK"] == [1, 5, 7, 17]


def test_kloosterman_table_q3(capsys):
    payload = run_json(capsys, "kloosterman", "--r", "1", "--hmax", "4")
    assert payload["K"] == {"1": -1, "2": 2}
    assert payload["SK"] == [-1, 1, -1, 1]


def test_field_summary_custom_modulus(capsys):
    payload = run_json(capsys, "field", "--r", "2", "--modulus", "1,0,1")
    assert payload["q"] == 9
    assert payload["modulus"] == [1, 0, 1]
    assert payload["trace_fibers"] == [3, 3, 3]


def test_constants_csv_reference_rows(capsys):
    code, out, _ = run_cli(capsys, "constants", "--r", "1", "--nmax", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["family", "n", "q", "A", "B", "N"]
    table = {(r[0], int(r[1])): tuple(int(x) for x in r[3:]) for r in rows[1:]}
    assert table[("DC1-", 1)] == (1, 4, 4)
    assert table[("DC1+", 2)] == (54, 12, 648)
    assert table[("DC2+", 2)] == (9, 8, 72)
    assert table[("DC3+", 2)] == (36, 2, 72)
    assert table[("DC4-", 3)] == (2916, 16, 46656)


def test_weights_dc1_minus(capsys):
    payload = run_json(capsys, "weights", "--r", "1", "--family", "DC1-", "--n", "1")
    assert payload["N"] == 4
    assert payload["profile"] == {"0": 2, "1": 1, "2": 1}
    assert payload["dual_weights"] == {"1": 2, "2": 2}
    assert payload["C_prefix"] == [1, 4, 6, 8, 8]


def test_group_q4_histogram(capsys):
    payload = run_json(capsys, "group", "--r", "1", "--set", "q", "--n", "2")
    assert payload["order"] == 72
    assert payload["histogram"] == {"0": 18, "1": 27, "2": 27}


def test_group_so2_order(capsys):
    payload = run_json(capsys, "group", "--r", "1", "--set", "so2")
    assert payload["order"] == 4
    assert payload["histogram"] == {"0": 2, "1": 1, "2": 1}


def test_group_double_coset(capsys):
    payload = run_json(capsys, "group", "--r", "1", "--family", "DC1+", "--n", "2")
    assert payload["order"] == 648


def test_recursion_match(capsys):
    payload = run_json(capsys, "recursion", "--r", "1", "--family", "DC2+", "--n", "2", "--hmax", "8")
    assert payload["match"] is True
    assert payload["orders"] == [2, 4, 6, 8]
    assert payload["SK"] == payload["SK_printed"] == payload["SK_oracle"]


def test_verify_passes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--r", "1", "--nmax", "2", "--hmax", "8")
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True
    assert len(payload["instances"]) == 4


def test_json_byte_deterministic(capsys):
    _, out1, _ = run_cli(capsys, "verify", "--r", "1", "--nmax", "2", "--hmax", "6")
    _, out2, _ = run_cli(capsys, "verify", "--r", "1", "--nmax", "2", "--hmax", "6")
    assert out1 == out2
    _, out3, _ = run_cli(capsys, "verify", "--r", "1", "--nmax", "2", "--hmax", "6", "--jobs", "2")
    assert out1 == out3


def test_env_jobs_fallback(capsys, monkeypatch):
    monkeypatch.setenv("KLOOS_JOBS", "2")
    _, out_env, _ = run_cli(capsys, "verify", "--r", "1", "--nmax", "2", "--hmax", "6")
    monkeypatch.delenv("KLOOS_JOBS")
    _, out_one, _ = run_cli(capsys, "verify", "--r", "1", "--nmax", "2", "--hmax", "6")
    assert out_env == out_one


def test_guard_violation_exits_2(capsys):
    code, _, err = run_cli(capsys, "moments", "--r", "99", "--hmax", "4")
    assert code == 2
    assert "error" in err


def test_invalid_family_n_exits_2(capsys):
    code, _, _ = run_cli(capsys, "constants", "--r", "1", "--family", "DC4+", "--n", "2")
    assert code == 2
    code, _, _ = run_cli(capsys, "weights", "--r", "1", "--family", "DC1+", "--n", "3")
    assert code == 2


def test_bad_modulus_exits_2(capsys):
    code, _, _ = run_cli(capsys, "moments", "--r", "2", "--modulus", "1,x,1")
    assert code == 2
    # reducible modulus: x^2 has no inverse table
    code, _, _ = run_cli(capsys, "moments", "--r", "2", "--modulus", "0,0,1")
    assert code == 2


def test_unknown_subcommand_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = run_cli(capsys, "moments", "--r", "1", "--hmax", "2", "--output", str(target))
    assert code == 0
    assert out == ""
    payload = json.loads(target.read_text())
    assert payload["SK"] == [-1, 1]


def test_csv_moments_parses(capsys):
    code, out, _ = run_cli(capsys, "moments", "--r", "1", "--hmax", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["q", "h", "SK", "MK"]
    assert [int(x) for x in rows[1]] == [3, 1, -1, 1]


def test_text_format_renders(capsys):
    code, out, _ = run_cli(capsys, "recursion", "--r", "1", "--family", "DC1-", "--n", "1", "--format", "text")
    assert code == 0
    assert "match: True" in out


def test_installed_entrypoint():
    proc = subprocess.run(
        [sys.executable, "-m", "kloos.cli", "moments", "--r", "1", "--hmax", "4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["SK"] == [-1, 1, -1, 1]
