import csv
import json

from fractions import Fraction

import pytest

from SwitchLab.core.codec import decode_indep
from SwitchLab.core.formula import Restriction
from SwitchLab.main import EXIT_FAILED, EXIT_INPUT, EXIT_OK, run


@pytest.fixture
def or_dnf(tmp_path):
    path = tmp_path / "or.dnf"
    path.write_text("dnf 2 1\n1\n2\n", encoding="utf-8")

    return path


@pytest.fixture
def php_dnf(tmp_path):
    # p00 and p11 over two holes
    path = tmp_path / "pair.php"
    path.write_text("php 2\ndnf 6 2\n1 4\n", encoding="utf-8")

    return path


def read_rows(path):
    with path.open(encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))


def test_check_writes_a_passing_report(or_dnf, tmp_path):
    output = tmp_path / "report.json"

    code = run(["check", "--lemma", "1", "--dnf", str(or_dnf), "--p", "1/10", "--s", "2", "--output", str(output)])
    report = json.loads(output.read_text(encoding="utf-8"))

    assert code == EXIT_OK
    assert report == {
        "lemma": 1,
        "params": {"n": 2, "r": 1, "p": "1/10", "s": 2},
        "exact_weight": "1/100",
        "bound_loose": "81/100",
        "bound_tight": "64/81",
        "pass": True,
    }


def test_check_fails_outside_the_parameter_range(or_dnf, tmp_path):
    output = tmp_path / "report.json"

    code = run(["check", "--lemma", "1", "--dnf", str(or_dnf), "--p", "1/2", "--s", "1", "--output", str(output)])

    assert code == EXIT_FAILED
    assert json.loads(output.read_text(encoding="utf-8"))["pass"] is False


def test_check_of_a_pigeonhole_file(php_dnf, tmp_path):
    output = tmp_path / "report.json"

    code = run(["check", "--lemma", "3", "--dnf", str(php_dnf), "--q", "1/4", "--s", "1", "--output", str(output)])
    report = json.loads(output.read_text(encoding="utf-8"))

    # 128 r^2 n^3 q^4 = 16, so the regime is violated
    assert code == EXIT_FAILED
    assert report["params"]["n"] == 2
    assert "exception_mass" in report


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "--lemma", "1", "--dnf", "missing.dnf"],
        ["check", "--lemma", "1"],
        ["check", "--lemma", "1", "--dnf", "{dnf}", "--p", "1/16,1/10"],
        ["sample", "--lemma", "2"],
    ],
)
def test_input_errors(or_dnf, tmp_path, argv):
    argv = [arg.replace("{dnf}", str(or_dnf)) for arg in argv]

    assert run(argv + ["--output", str(tmp_path / "out")]) == EXIT_INPUT


def test_malformed_arguments_exit_with_two(or_dnf):
    with pytest.raises(SystemExit) as error:
        run(["check", "--lemma", "1", "--dnf", str(or_dnf), "--p", "0.1"])

    assert error.value.code == 2


def test_malformed_dnf_exits_with_two(tmp_path):
    path = tmp_path / "bad.dnf"
    path.write_text("dnf 2 1\n1 x\n", encoding="utf-8")

    assert run(["check", "--lemma", "1", "--dnf", str(path), "--output", str(tmp_path / "out")]) == EXIT_INPUT


def test_sweep_is_monotone_in_s(or_dnf, tmp_path):
    output = tmp_path / "sweep.csv"

    code = run(["sweep", "--lemma", "1", "--dnf", str(or_dnf), "--p", "1/10", "--s", "3,1,2", "--output", str(output)])
    rows = read_rows(output)
    weights = [Fraction(row["exact_weight"]) for row in rows]

    assert code == EXIT_OK
    assert [row["s"] for row in rows] == ["1", "2", "3"]
    assert weights == [Fraction(29, 200), Fraction(1, 100), Fraction(0)]
    assert all(row["pass"] == "true" and row["q"] == "" for row in rows)


def test_sweep_over_an_empty_grid(or_dnf, tmp_path):
    output = tmp_path / "sweep.csv"

    code = run(["sweep", "--lemma", "1", "--dnf", str(or_dnf), "--s", "", "--output", str(output)])

    assert code == EXIT_OK
    assert output.read_text(encoding="utf-8").splitlines() == [
        "lemma,n,r,p,q,s,exact_weight,estimate,half_width,bound_loose,bound_tight,pass"
    ]


def test_sweep_in_sample_mode(or_dnf, tmp_path):
    output = tmp_path / "sweep.csv"

    code = run(
        [
            "sweep",
            "--lemma",
            "1",
            "--dnf",
            str(or_dnf),
            "--p",
            "1/16,1/10",
            "--s",
            "1",
            "--mode",
            "sample",
            "--trials",
            "3000",
            "--seed",
            "12",
            "--output",
            str(output),
        ]
    )
    rows = read_rows(output)

    assert code == EXIT_OK
    assert [row["p"] for row in rows] == ["1/16", "1/10"]
    assert all(row["exact_weight"] == "" and float(row["half_width"]) > 0 for row in rows)


def test_roundtrip_of_one_file(php_dnf, tmp_path):
    output = tmp_path / "roundtrip.txt"

    code = run(["roundtrip", "--lemma", "3", "--dnf", str(php_dnf), "--s", "1,2", "--output", str(output)])

    assert code == EXIT_OK
    assert "0 violations" in output.read_text(encoding="utf-8")


def test_roundtrip_over_the_corpus(tmp_path):
    output = tmp_path / "roundtrip.txt"

    code = run(["roundtrip", "--lemma", "2", "--n", "3", "--r", "2", "--terms", "1", "--s", "1,2", "--output", str(output)])

    assert code == EXIT_OK
    assert output.read_text(encoding="utf-8").startswith("lemma 2: ")


def test_roundtrip_fails_on_a_corrupted_codec(or_dnf, tmp_path, monkeypatch):
    def reversed_decoder(formula, witness, s):
        return Restriction(decode_indep(formula, witness, s).values[::-1])

    monkeypatch.setattr("SwitchLab.core.verify.decode_indep", reversed_decoder)
    output = tmp_path / "roundtrip.txt"

    code = run(["roundtrip", "--lemma", "1", "--dnf", str(or_dnf), "--p", "1/10", "--s", "1", "--output", str(output)])
    text = output.read_text(encoding="utf-8")

    assert code == EXIT_FAILED
    assert "3 violations" in text
    assert "first counterexample: roundtrip: *0: decoded to 0*" in text


def test_roundtrip_over_a_corrupted_corpus(tmp_path, monkeypatch):
    monkeypatch.setattr(
        "SwitchLab.core.verify.decode_indep",
        lambda formula, witness, s: Restriction(decode_indep(formula, witness, s).values[::-1]),
    )
    output = tmp_path / "roundtrip.txt"

    code = run(["roundtrip", "--lemma", "1", "--n", "2", "--r", "1", "--s", "1", "--output", str(output)])

    assert code == EXIT_FAILED
    assert "first counterexample: roundtrip" in output.read_text(encoding="utf-8")


@pytest.mark.slow
def test_roundtrip_over_the_pigeonhole_corpus(tmp_path):
    output = tmp_path / "roundtrip.txt"

    assert run(["roundtrip", "--lemma", "3", "--n", "3", "--r", "2", "--s", "1,2,3", "--output", str(output)]) == EXIT_OK


def test_sample_is_seeded(tmp_path):
    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    argv = ["sample", "--lemma", "1", "--n", "4", "--p", "1/3", "--count", "25", "--seed", "99"]

    assert run(argv + ["--output", str(first)]) == EXIT_OK
    assert run(argv + ["--output", str(second)]) == EXIT_OK
    assert first.read_text(encoding="utf-8") == second.read_text(encoding="utf-8")

    rows = read_rows(first)

    assert len(rows) == 25
    assert all(len(row["outcome"]) == 4 for row in rows)


def test_enumerate_marks_failing_outcomes(or_dnf, tmp_path):
    output = tmp_path / "outcomes.csv"

    code = run(["enumerate", "--lemma", "1", "--dnf", str(or_dnf), "--p", "1/10", "--s", "1", "--output", str(output)])
    rows = read_rows(output)

    assert code == EXIT_OK
    assert len(rows) == 9
    assert sum(Fraction(row["weight"]) for row in rows) == 1
    assert sorted(row["outcome"] for row in rows if row["in_s"] == "1") == ["**", "*0", "*1", "0*"]


def test_enumerate_pigeonhole_outcomes(tmp_path):
    output = tmp_path / "outcomes.csv"

    code = run(["enumerate", "--lemma", "3", "--n", "1", "--q", "1/2", "--output", str(output)])
    rows = read_rows(output)

    assert code == EXIT_OK
    assert [row["outcome"] for row in rows] == ["{}", "{0:0}", "{1:0}"]
    assert sum(Fraction(row["weight"]) for row in rows) == 1
