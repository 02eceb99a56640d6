import pytest
from hypothesis import given, settings, strategies as st

from ateb_lab import checks, registry
from ateb_lab.kernel import is_sn, ProvedSN, normalize
from ateb_lab.lambda_pure import PURE_DB
from ateb_lab.lambda_sigma import (LS, SIGMA, ls_ateb, ls_init_witness, ls_lessdot, ls_overline_sub, ls_pr,
                                   WitnessGap, search_init_witness, sigma_normalize,
                                   upshift)
from ateb_lab.nodes import SHIFT, Clo, Idx, contains
from ateb_lab.syntax import parse

P = lambda s: parse("ls", s)
LS4 = list(registry.terms("ls", 4))


def test_sigma_normal_forms():
    assert sigma_normalize(P("1[!]")) == Idx(2)
    assert sigma_normalize(P("3[2 . !]")) == Idx(3)
    assert sigma_normalize(P("(\\.2)[5 . id]")) == P("\\.6")


def test_upshift_leaves_bound_indices():
    assert upshift(0, 1, P("\\i.1")) == P("\\i.1")
    assert upshift(0, 1, Idx(3)) == Idx(4)


def test_pr_and_overline():
    assert not ls_pr(P("1[1 . (! o !)]").sub)
    assert ls_overline_sub(SHIFT) == (1, None)
    assert ls_lessdot(P("\\.1"), P("(\\.1)[id]"))


def test_ateb_example():
    t = P("1[2 . id] 4[! o (1 . id)]")
    a = ls_ateb(t)
    assert a == P("(\\.1) 2 ((\\.5) 1)") and not contains(a, Clo)
    # both sides agree once every redex is gone
    assert normalize(PURE_DB, a)[0] == sigma_normalize(t)


def test_init_witness_examples():
    u, tr = ls_init_witness(P("1[2 . id]"))
    assert u == P("1[2 . id]") and tr.rules() == ["B"]


def test_init_gap_is_closed_by_search():
    # the recursive construction has no witness here; bounded search finds one
    t = P("1[2 . 3 . id]")
    with pytest.raises(WitnessGap):
        ls_init_witness(t)
    tr = search_init_witness(t)
    assert tr is not None and ls_lessdot(tr.end, t)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(LS4))
def test_sigma_is_terminating(t):
    assert isinstance(is_sn(LS, t, 20_000, SIGMA), ProvedSN)


def test_suites_small():
    for lemma, size in (("ls:sigma-terminates", 4), ("ls:init-id", 4), ("ls:init-shift", 4),
                        ("ls:comp-up", 4), ("ls:commute-ol-ups", 4), ("ls:egal-sigma", 3),
                        ("ls:fct", 4), ("ls:typability", 4), ("ls:init", 4), ("ls:simulate", 3),
                        ("ls:sn-transfer", 3)):
        assert checks.run(lemma, size).passed, lemma
