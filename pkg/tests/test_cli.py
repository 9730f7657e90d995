import csv
import io
import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from borwein_ap.cli import OUTPUT_DIR_ENV, main, parse_int_list

from oracles import naive_borwein, naive_residue_sums

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_int_list():
    assert parse_int_list("3,5") == [3, 5]
    assert parse_int_list("1-4") == [1, 2, 3, 4]
    assert parse_int_list("2..3,7") == [2, 3, 7]


def test_expand_rows(capsys):
    code, out, _ = run(capsys, "expand", "--p", "3", "--s", "1", "--n", "1")
    assert code == 0
    assert out.splitlines() == ["i,a_i", "0,1", "1,-1", "2,-1", "3,1"]


def test_expand_rejects_n_zero(capsys):
    code, _, err = run(capsys, "expand", "--p", "3", "--s", "1", "--n", "0")
    assert code == 2
    assert "error" in err


def test_expand_degree_cap(capsys):
    code, out, err = run(capsys, "expand", "--p", "3", "--s", "1", "--n", "5", "--max-degree", "10")
    assert code == 2 and out == "" and "cap" in err


def test_bad_prime_rejected_before_work(capsys):
    code, out, _ = run(capsys, "verify", "--p", "3,9", "--s", "1", "--n", "1")
    assert code == 2 and out == ""


def test_unknown_command_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_verify_columns_and_pass(capsys):
    code, out, _ = run(capsys, "verify", "--p", "3,5", "--s", "1,2", "--n-max", "2")
    assert code == 0
    table = rows(out)
    assert list(table[0])[:8] == ["p", "s", "n", "b", "S", "main_num", "main_den", "within_bound"]
    assert len(table) == sum(2 * p * n for p in (3, 5) for _ in (1, 2) for n in (1, 2))
    assert all(r["within_bound"] == "true" for r in table)
    assert all(r[c] == "pass" for r in table for c in ("dense_check", "char_check", "enum_check"))


def test_verify_empty_grid(capsys):
    code, out, _ = run(capsys, "verify", "--p", "3", "--s", "1", "--n", "")
    assert code == 0
    assert out.splitlines() == [
        "p,s,n,b,S,main_num,main_den,within_bound,dense_check,char_check,enum_check"
    ]


def test_verify_skips_beyond_guards(capsys):
    code, out, _ = run(capsys, "verify", "--p", "7", "--s", "2", "--n", "4", "--b", "3")
    assert code == 0
    (row,) = rows(out)
    assert row["b"] == "3"
    assert row["enum_check"] == "skip"
    assert row["dense_check"] == "pass"


def test_sum_matches_oracle(capsys):
    code, out, _ = run(capsys, "sum", "--p", "5", "--s", "2", "--n", "2", "--d", "7")
    assert code == 0
    expected = naive_residue_sums(naive_borwein(5, 2, 2), 7)
    assert [int(r["S"]) for r in rows(out)] == expected


def test_decompose_sign_pattern(capsys):
    code, out, _ = run(capsys, "decompose", "--p", "3", "--s", "1", "--n", "1")
    assert code == 0
    assert out.splitlines() == ["t,j,coeff", "0,0,1", "0,1,1", "1,0,1", "2,0,1"]


def test_sweep_sorted_and_fractions(capsys):
    code, out, _ = run(capsys, "sweep", "--p", "5,3", "--s", "1", "--n", "3,1,2")
    assert code == 0
    table = rows(out)
    assert [(r["p"], r["n"]) for r in table] == [
        ("3", "1"), ("3", "2"), ("3", "3"), ("5", "1"), ("5", "2"), ("5", "3")
    ]
    for r in table:
        num, den = r["max_dev_2pn"].split("/")
        assert int(den) > 0
        dev = Fraction(int(num), int(den))
        assert dev * dev <= int(r["p"]) ** int(r["n"])
    assert all(r["li_bound"] == "" for r in table if r["p"] == "5")


def test_sweep_li_column_within_two_to_the_n(capsys):
    code, out, _ = run(capsys, "sweep", "--p", "3", "--s", "1", "--n-max", "10")
    assert code == 0
    for r in rows(out):
        assert r["within_li"] == "true" and r["within_main"] == "true"
        assert Fraction(r["max_dev_pn"]) <= 2 ** int(r["n"])


def test_sieve_test_is_deterministic(capsys):
    _, first, _ = run(capsys, "sieve-test", "--seed", "11", "--trials", "20")
    code, second, _ = run(capsys, "sieve-test", "--seed", "11", "--trials", "20")
    assert code == 0 and first == second
    table = rows(first)
    assert sum(r["suite"] == "li-wan" for r in table) == 20
    assert all(r["result"] == "pass" for r in table)


def test_sieve_test_default_runs_hundred_trials(capsys):
    code, out, _ = run(capsys, "sieve-test")
    assert code == 0
    assert sum(r["suite"] == "li-wan" for r in rows(out)) >= 100


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# grid\np = 3\ns = 2\nn = 1\nformat = jsonl\n")
    code, out, _ = run(capsys, "sum", "--config", str(cfg))
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert [r["S"] for r in records] == [2, -2, -1, 4, -1, -2]
    code, out, _ = run(capsys, "sum", "--config", str(cfg), "--s", "1", "--format", "csv")
    assert out.splitlines()[1] == "3,1,1,6,0,1"


def test_config_errors(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert run(capsys, "sum", "--config", str(bad))[0] == 2
    assert run(capsys, "sum", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_output_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    code, out, _ = run(capsys, "expand", "--p", "3", "--s", "1", "--n", "1", "--format", "jsonl")
    assert code == 0 and out == ""
    lines = (tmp_path / "expand.jsonl").read_text().splitlines()
    assert json.loads(lines[0]) == {"i": 0, "a_i": 1}
    explicit = tmp_path / "x" / "mine.csv"
    run(capsys, "expand", "--p", "3", "--s", "1", "--n", "1", "--out", str(explicit))
    assert explicit.read_text().startswith("i,a_i\n")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "borwein_ap", "expand", "--p", "3", "--s", "1", "--n", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("i,a_i\n0,1\n")


# -- goldens ------------------------------------------------------------------

GOLDEN_RUNS = {
    "expand_3_1_2.csv": ["expand", "--p", "3", "--s", "1", "--n", "2"],
    "sum_3_2_2_d12.csv": ["sum", "--p", "3", "--s", "2", "--n", "2", "--d", "12"],
    "verify_35_1_12.csv": ["verify", "--p", "3,5", "--s", "1", "--n", "1-2"],
    "sweep_3_1_16_q2.csv": ["sweep", "--p", "3", "--s", "1", "--n", "1-6", "--q", "2"],
    "sweep_3_1_13.jsonl": ["sweep", "--p", "3", "--s", "1", "--n", "1-3", "--format", "jsonl"],
}


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_output_matches_golden(capsys, name):
    code, out, _ = run(capsys, *GOLDEN_RUNS[name])
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_golden_expand_agrees_with_oracle():
    table = rows((GOLDEN / "expand_3_1_2.csv").read_text())
    assert {int(r["i"]): int(r["a_i"]) for r in table} == naive_borwein(3, 1, 2)


def test_golden_sum_agrees_with_oracle():
    table = rows((GOLDEN / "sum_3_2_2_d12.csv").read_text())
    assert [int(r["S"]) for r in table] == naive_residue_sums(naive_borwein(3, 2, 2), 12)


def test_golden_verify_agrees_with_oracle():
    table = rows((GOLDEN / "verify_35_1_12.csv").read_text())
    for p in (3, 5):
        for n in (1, 2):
            got = [int(r["S"]) for r in table if (r["p"], r["n"]) == (str(p), str(n))]
            assert got == naive_residue_sums(naive_borwein(p, 1, n), 2 * p * n)
    for r in table:
        p, n, b = int(r["p"]), int(r["n"]), int(r["b"])
        weight = p - 1 if b % p == 0 else -1
        assert Fraction(int(r["main_num"]), int(r["main_den"])) == Fraction(weight * p**n, 2 * p * n)


def test_golden_sweep_agrees_with_oracle():
    table = rows((GOLDEN / "sweep_3_1_16_q2.csv").read_text())
    for r in table:
        n = int(r["n"])
        sums = naive_residue_sums(naive_borwein(3, 1, n), 6 * n)
        dev = max(abs(S - Fraction((2 if b % 3 == 0 else -1) * 3**n, 6 * n)) for b, S in enumerate(sums))
        assert Fraction(r["max_dev_2pn"]) == dev
