import json

import pytest

from liftcocycle.cli import main


def test_generate_prints_schemas(capsys):
    assert main(["generate", "--n", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 5
    assert lines[0] == "1 * D1[A1] D2[A2] D3[A3] D4[A4] A5"


def test_eval_psi3(capsys):
    assert main(["eval", "psi3", "--args", "+ 1|+ 1 x1|+ 1 d1"]) == 0
    out = capsys.readouterr().out
    assert "value: -3" in out
    assert "floor:" in out


def test_eval_psi0(capsys):
    assert main(["eval", "psi0", "--n", "1", "--args", "1,p1,q1"]) == 0
    assert "value: 1" in capsys.readouterr().out


def test_eval_from_file(tmp_path, capsys):
    f = tmp_path / "args.txt"
    f.write_text("+ 1\n+ 1 x1\n+ 1 x1\n+ 1 d1\n+ 1 d2\n")
    assert main(["eval", "psi5", "--args", str(f)]) == 0
    assert "value: 0" in capsys.readouterr().out


def test_eval_arity_mismatch(capsys):
    assert main(["eval", "psi3", "--args", "1|x1"]) == 2


def test_unknown_suite_and_formula(capsys):
    assert main(["verify", "no-such-suite"]) == 2
    assert main(["eval", "psi4", "--args", "1"]) == 2
    err = capsys.readouterr().err
    assert "unknown suite" in err and "unknown formula" in err


def test_verify_json_is_reproducible(capsys):
    assert main(["verify", "generator", "--format", "json", "--no-timing"]) == 0
    first = capsys.readouterr().out
    assert main(["verify", "generator", "--format", "json", "--no-timing"]) == 0
    assert capsys.readouterr().out == first
    records = [json.loads(ln) for ln in first.splitlines()]
    assert records[0]["config"]["suite"] == "generator"
    assert {"check", "status", "seed", "field", "floor", "witness"} <= set(records[1])


def test_suites_listing(capsys):
    assert main(["suites"]) == 0
    out = capsys.readouterr().out
    assert "conjecture-n3  (opt-in)" in out
    assert "lemma-1.1" in out
