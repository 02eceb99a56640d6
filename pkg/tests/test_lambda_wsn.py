import pytest

from ateb_lab import checks
from ateb_lab.kernel import reachable
from ateb_lab.lambda_wsn import LWSN, c_overlaps, lwsn_ateb, lwsn_typecheck
from ateb_lab.simple_types import IOTA, TypingError
from ateb_lab.syntax import parse

P = lambda s: parse("lwsn", s)


def test_weakening_typing():
    assert lwsn_typecheck({"x": IOTA, "y": IOTA}, P("{y} x")) == IOTA
    with pytest.raises(TypingError):
        lwsn_typecheck({"x": IOTA}, P("{y} x"))


def test_ateb_expansion_example():
    t = P("x[x, y, {}, {}]")
    a = lwsn_ateb(t)
    assert a == P("{} (\\x. x) {} y")
    tr = reachable(LWSN, a, t, {"b", "∅", "d"}, 3)
    assert tr is not None and tr.end == t


def test_c_rules_never_overlap_on_examples():
    assert c_overlaps(P("x[x, y, {}, {}]")) == []


def test_suites_small():
    for lemma in ("lwsn:expansion", "lwsn:typability", "lwsn:c-overlap"):
        assert checks.run(lemma, 3).passed, lemma
