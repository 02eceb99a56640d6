"""Frozen traces for the rule examples; each one is re-derived by the CLI
and replayed step by step through the kernel."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from ateb_lab import registry
from ateb_lab.cli import main
from ateb_lab.kernel import apply_at
from ateb_lab.syntax import parse

GOLDEN = Path(__file__).parent / "golden"
MANIFEST = json.loads((GOLDEN / "manifest.json").read_text())


def _args(args):
    extra = ["--trace", "--format", "jsonl"] if args[0] == "reduce" else ["--format", "jsonl"]
    return args[:2] + extra + args[2:]


@pytest.mark.parametrize("name,args", MANIFEST, ids=[m[0] for m in MANIFEST])
def test_cli_reproduces_golden(name, args):
    r = CliRunner().invoke(main, _args(args))
    assert r.exit_code == 0, r.output
    assert r.output == (GOLDEN / f"{name}.jsonl").read_text(encoding="utf-8")


@pytest.mark.parametrize("name,args", MANIFEST, ids=[m[0] for m in MANIFEST])
def test_golden_replays(name, args):
    calc = args[1]
    sys = registry.get(calc).sys
    recs = [json.loads(l) for l in (GOLDEN / f"{name}.jsonl").read_text(encoding="utf-8").splitlines()]
    assert recs[0]["index"] == 0 and recs[0]["rule"] is None
    cur = parse(calc, recs[0]["term"])
    for k, rec in enumerate(recs[1:], 1):
        assert rec["index"] == k
        nxt = parse(calc, rec["term"])
        results = apply_at(sys, cur, tuple(rec["path"]), rec["rule"])
        assert any(sys.equal(nxt, r) for r in results)
        cur = nxt


def test_golden_files_all_listed():
    names = {m[0] for m in MANIFEST}
    assert {p.stem for p in GOLDEN.glob("*.jsonl")} == names
