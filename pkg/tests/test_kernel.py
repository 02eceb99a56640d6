import pytest

from ateb_lab import checks, registry
from ateb_lab.kernel import (BudgetExhausted, FuelExhausted, ProvedSN, ReductionStep, Trace, TraceError,
                             apply_at, enumerate_terms, is_sn, normalize, reachable, redexes, replay,
                             shift_trace, valid)
from ateb_lab.lambda_x import LX
from ateb_lab.mu_mutilde import MMT
from ateb_lab.nodes import App, Lam, Subst, Var, replace_at
from ateb_lab.syntax import parse

x, y = Var("x"), Var("y")
ID_Y = App(Lam("x", None, x), y)


def test_beta_redex_at_root():
    assert redexes(LX, ID_Y) == [("Beta", (), Subst(x, y, "x"))]


def test_redex_order_is_preorder_then_rule_order():
    t = parse("lx", "(\\x. x) ((\\y. y) z)")
    assert [p for _, p, _ in redexes(LX, t)] == [(), (1,)]


def test_critical_pair_gives_both_reducts():
    t = parse("mmt", "< mu a. < x | a > | mut y. < y | b > >")
    assert [l for l, p, _ in redexes(MMT, t) if p == ()] == ["μ", "μ̃"]


def test_apply_at_and_restricted_normalize():
    assert apply_at(LX, ID_Y, (), "Beta") == [Subst(x, y, "x")]
    assert apply_at(LX, ID_Y, (), "App") == []
    nf, tr = normalize(LX, Subst(x, y, "x"), fuel=10)
    assert nf == y and tr.rules() == ["Var1"]


def test_fuel_exhaustion_carries_the_partial_trace():
    with pytest.raises(FuelExhausted) as e:
        normalize(LX, checks.OMEGA, fuel=5)
    assert len(e.value.trace) == 5 and valid(LX, e.value.trace)


def test_reachable_beta_only():
    tr = reachable(LX, ID_Y, Subst(x, y, "x"), {"Beta"}, 3)
    assert tr is not None and tr.rules() == ["Beta"]
    assert reachable(LX, ID_Y, x, {"Beta"}, 3) is None


def test_is_sn_examples():
    v = is_sn(LX, ID_Y)
    assert v == ProvedSN(2, v.visited)
    w = is_sn(LX, checks.OMEGA, budget=50)
    assert isinstance(w, BudgetExhausted) and w.loop is not None
    assert LX.equal(w.loop.start, w.loop.end) and valid(LX, w.loop)


def test_proved_sn_bounds_normalization():
    for t in registry.terms("lx", 4):
        v = is_sn(LX, t, 10_000)
        if isinstance(v, ProvedSN):
            normalize(LX, t, fuel=v.max_depth)


def test_replay_rejects_corruption():
    tr = Trace(ID_Y, (ReductionStep("Beta", (), ID_Y, Subst(x, y, "x")),))
    replay(LX, tr)
    for bad in (ReductionStep("Var1", (), ID_Y, Subst(x, y, "x")),
                ReductionStep("Beta", (0,), ID_Y, Subst(x, y, "x")),
                ReductionStep("Beta", (), ID_Y, ID_Y)):
        with pytest.raises(TraceError):
            replay(LX, Trace(ID_Y, (bad,)))


def test_shift_trace_into_context():
    _, tr = normalize(LX, Subst(x, y, "x"))
    ctx = lambda t: App(Var("z"), t)
    moved = shift_trace(tr, (1,), ctx)
    assert valid(LX, moved) and moved.end == App(Var("z"), y)
    assert replace_at(moved.start, (1,), y) == moved.end


def test_enumeration_size_two():
    # size 1: three variables; size 2: λ over a variable, 3 x 3
    terms = list(enumerate_terms("lx", 2))
    assert len(terms) == 3 + 9 and Lam("x", None, x) in terms


@pytest.mark.parametrize("size", [1, 2, 3, 4])
def test_enumeration_matches_naive_oracle(size):
    assert checks.run("kernel:enumeration", size).passed
