import json

import pytest
from click.testing import CliRunner

from ateb_lab.cli import main


def run(*args, input=None):
    return CliRunner().invoke(main, list(args), input=input)


@pytest.mark.parametrize("args,out", [
    (["reduce", "lx", "x[y/x]"], "y"),
    (["reduce", "ls", "--sigma", "(\\i.1)[id]"], "\\i.1"),
    (["reduce", "lu", "--rule", "B", "(\\i.1) 2"], "1[2/]"),
    (["ateb", "lx", "x[y/x]"], "(\\x. x) y"),
    (["typecheck", "lx", "--env", "y:i", "x[y/x]"], "i"),
    (["sn", "lx", "(\\x:i. x) y"], "SN depth=2"),
    (["print", "lx", "x[y/x]"], "x[y/x]"),
    (["print", "lu", "1[^(!)]"], "1[^(!)]"),
])
def test_examples(args, out):
    r = run(*args)
    assert r.exit_code == 0, r.output
    assert r.output.strip() == out


def test_stdin_and_file(tmp_path):
    assert run("print", "lx", input="x[y/x]\n").output.strip() == "x[y/x]"
    f = tmp_path / "t.lx"
    f.write_text("x[y/x]")
    assert run("reduce", "lx", "--file", str(f)).output.strip() == "y"


def test_text_trace():
    r = run("reduce", "lu", "--trace", "(\\.1) 2")
    assert r.output.splitlines() == ["B @ ε : 1[2/]", "FVar @ ε : 2", "2"]


def test_jsonl_trace():
    r = run("reduce", "lx", "--trace", "--format", "jsonl", "x[y/x]")
    recs = [json.loads(x) for x in r.output.splitlines()]
    assert recs[0] == {"index": 0, "rule": None, "path": None, "term": "x[y/x]"}
    assert recs[-1]["term"] == "y" and [r["index"] for r in recs] == list(range(len(recs)))


@pytest.mark.parametrize("args,code", [
    (["print", "lx", "x[y/"], 2),
    (["reduce", "lx", "--rule", "Nope", "x"], 2),
    (["typecheck", "lx", "(\\x:i. x x)"], 3),
    (["reduce", "lx", "--fuel", "5", "(\\x. x x) (\\x. x x)"], 4),
    (["sn", "lx", "(\\x. x x) (\\x. x x)"], 4),
    (["sn", "lx", "--budget", "3", "(\\x. x) ((\\x. x) ((\\x. x) y))"], 4),
    (["check", "bogus:id"], 2),
])
def test_exit_codes(args, code):
    assert run(*args).exit_code == code


def test_parse_error_position():
    r = run("print", "lx", "x[y/")
    assert "column 5" in r.output


def test_loop_witness_is_printed():
    r = run("sn", "lx", "(\\x. x x) (\\x. x x)")
    assert r.output.startswith("LOOP")


def test_unknown_lemma_lists_ids():
    r = run("check", "bogus:id")
    assert "lx:expansion" in r.output and "mmt:expansion" in r.output


def test_check_and_lemmas():
    r = run("check", "lu:commute-ol-fls", "--size", "4")
    assert r.exit_code == 0 and "PASS" in r.output
    assert "kernel:omega" in run("lemmas").output


def test_expand():
    r = run("expand", "lx", "x[y/x]")
    assert r.output.splitlines() == ["Beta @ ε : x[y/x]"]
