import pytest
from hypothesis import given, strategies as st

from ateb_lab import checks
from ateb_lab.lambda_pure import PURE_DB, beta_step_all
from ateb_lab.lambda_upsilon import (LU, flift_cons, flift_cons_literal, flift_shift, fshift, lu_ateb,
                                     lu_init_witness, lu_lessdot, lu_overline, lu_preceq,
                                     lu_simulate_step, lu_sub_typecheck, lu_typecheck)
from ateb_lab.kernel import ReductionStep, normalize
from ateb_lab.nodes import Abs, App, Idx
from ateb_lab.simple_types import IOTA, Arrow, TypingError
from ateb_lab.syntax import parse

P = lambda s: parse("lu", s)


def test_rules():
    assert normalize(LU, P("1[^(!)]"), {"FVarLift"})[0] == Idx(1)
    assert normalize(LU, P("2[^(!)]"), {"RVarLift"})[0] == P("1[!][!]")
    assert normalize(LU, P("3[!]"))[0] == Idx(4)
    assert normalize(LU, P("(\\.1) 2"), {"B"})[0] == P("1[2/]")


def test_substitution_typing():
    assert lu_sub_typecheck((IOTA,), P("1[!]").sub) == ()
    s = P("1[(\\i.1)/]").sub
    assert lu_sub_typecheck((), s) == (Arrow(IOTA, IOTA),)
    with pytest.raises(TypingError):
        lu_typecheck((), P("1[!]"))


def test_reindexing_tables():
    assert flift_shift(2, Idx(3)) == Idx(4) and flift_shift(2, Idx(2)) == Idx(2)
    assert flift_shift(0, Abs(None, Idx(1))) == Abs(None, Idx(1))
    assert fshift(3, Idx(2)) == Idx(5)
    assert fshift(1, Abs(None, Idx(2))) == Abs(None, Idx(3))
    assert [flift_cons(2, Idx(n)).n for n in (3, 5, 1)] == [1, 5, 2]


def test_literal_lift_cons_is_not_the_identity_under_a_binder():
    # the corrected version keeps λ1 fixed; the literal table moves it
    assert flift_cons(0, Abs(None, Idx(1))) == Abs(None, Idx(1))
    assert flift_cons_literal(0, Abs(None, Idx(1))) == Abs(None, Idx(2))


@given(st.integers(1, 30), st.integers(0, 10))
def test_lift_cons_zero_is_identity_on_indices(n, depth):
    t = Idx(n)
    for _ in range(depth):
        t = Abs(None, t)
    assert flift_cons(0, t) == t


def _naive_ateb_example(t, u, v, w):
    # direct index arithmetic for Ateb((t[u/] v[⇑³(w/)])[⇑²(↑)]) on atoms
    def ls(i, n):  # F⇑↑_i
        return n + 1 if n > i else n

    def lc(i, n):  # F⇑/_i on a top-level index
        return n if n > i + 1 else (1 if n == i + 1 else n + 1)

    inner = ((ls(3, t), ls(2, u)), (ls(3, lc(3, v)), ls(2, w + 3)))
    return inner


def test_ateb_example_against_naive_oracle():
    (a, b), (c, d) = _naive_ateb_example(1, 1, 4, 1)
    got = lu_ateb(P("(1[1/] 4[^(^(^(1/)))])[^(^(!))]"))
    want = App(App(Abs(None, Idx(a)), Idx(b)), App(Abs(None, Idx(c)), Idx(d)))
    assert got == want == P("(\\.1) 1 ((\\.1) 5)")


def test_overline_and_lessdot():
    assert lu_overline(Idx(3)) == Idx(3)
    assert lu_overline(P("3[!]")) == Idx(4)
    assert lu_overline(P("1[^(2/)]")) == P("2[3/]")
    assert lu_preceq(Idx(1), Idx(7))
    assert lu_preceq(P("1[^(2/)]"), P("1[!][^(^(^(2/)))]"))
    assert lu_lessdot(Idx(4), P("3[!]")) and not lu_lessdot(Idx(5), P("3[!]"))
    assert lu_lessdot(P("1[2/]"), P("1[2/]"))


def test_init_witness_examples():
    assert lu_init_witness(Idx(3)) == (Idx(3), lu_init_witness(Idx(3))[1])
    u, tr = lu_init_witness(P("1[2/]"))
    assert u == P("1[2/]") and tr.rules() == ["B"] and tr.start == P("(\\.1) 2")
    u, tr = lu_init_witness(P("3[!]"))
    assert u == Idx(4) and len(tr) == 0


def test_simulation_examples():
    t = P("3[!]")
    u2, tr = lu_simulate_step(t, ReductionStep("VarShift", (), t, Idx(4)), Idx(4))
    assert u2 == Idx(4) and len(tr) == 0
    t = P("2[^(!)]")
    t2 = P("1[!][!]")
    u2, tr = lu_simulate_step(t, ReductionStep("RVarLift", (), t, t2), t)
    assert u2 == t2 and tr.rules() == ["RVarLift"]


def test_suites_small():
    for lemma, size in (("lu:fun-props", 3), ("lu:commute", 4), ("lu:typability", 4), ("lu:fct", 4),
                        ("lu:init", 4), ("lu:simulate", 3)):
        assert checks.run(lemma, size).passed, lemma
