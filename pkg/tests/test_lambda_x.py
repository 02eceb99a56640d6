from hypothesis import given, settings, strategies as st

from ateb_lab import checks, registry
from ateb_lab.kernel import normalize, reachable, redexes
from ateb_lab.lambda_pure import alpha_eq, typecheck_pure
from ateb_lab.lambda_x import LX, count_subst, free_vars, lx_ateb, lx_typecheck
from ateb_lab.nodes import Subst, Var, contains
from ateb_lab.simple_types import IOTA
from ateb_lab.syntax import parse

LX5 = list(registry.terms("lx", 5))


def test_rules():
    assert normalize(LX, parse("lx", "(t u)[v/x]"), {"App"})[0] == parse("lx", "t[v/x] u[v/x]")
    assert normalize(LX, parse("lx", "y[t/x]"))[0] == Var("y")


def test_lambda_renames_before_propagating():
    nf, tr = normalize(LX, parse("lx", "(\\x. x)[y/x]"))
    assert tr.rules()[0] == "Lambda"
    assert alpha_eq(nf, parse("lx", "\\z. z"))


def test_lambda_avoids_capture():
    nf, _ = normalize(LX, parse("lx", "(\\y. x)[y/x]"))
    assert nf.name != "y" and nf.body == Var("y")


def test_typing_and_ateb():
    assert lx_typecheck({"y": IOTA}, parse("lx", "x[y/x]")) == IOTA
    assert lx_ateb(Var("x")) == Var("x")
    assert lx_ateb(parse("lx", "(x[y/x])[z/y]")) == parse("lx", "(\\y. (\\x. x) y) z")


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(LX5))
def test_expansion_property(t):
    a = lx_ateb(t)
    assert not contains(a, Subst)
    tr = reachable(LX, a, t, {"Beta"}, count_subst(t))
    assert tr is not None and len(tr) == count_subst(t)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(LX5), st.data())
def test_ateb_preserves_typing(t, data):
    inst = list(registry.typed_instances("lx", t))
    if inst:
        env, t2, ty = data.draw(st.sampled_from(inst))
        assert typecheck_pure(env, lx_ateb(t2, env)) == ty


def test_free_vars_do_not_grow_under_reduction():
    for t in LX5[:2000]:
        for _, _, t2 in redexes(LX, t):
            assert free_vars(t2) <= free_vars(t)


def test_suites_small():
    for lemma, size in (("lx:expansion", 5), ("lx:typability", 4), ("lx:sn", 4)):
        assert checks.run(lemma, size).passed, lemma
