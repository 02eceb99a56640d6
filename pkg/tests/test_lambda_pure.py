from hypothesis import given, settings, strategies as st

from ateb_lab import checks, registry
from ateb_lab.lambda_pure import (alpha_eq, beta_step_all, free_vars, subst_meta, to_db,
                                  typecheck_pure)
from ateb_lab.nodes import Abs, App, Idx, Lam, Var
from ateb_lab.simple_types import IOTA, Arrow
from ateb_lab.syntax import parse

PURE5 = list(registry.terms("pure", 5))


def test_capture_avoiding_meta_substitution():
    r = subst_meta(Lam("y", None, Var("x")), "x", Var("y"))
    assert isinstance(r, Lam) and r.name != "y" and r.body == Var("y")


def test_db_beta_shifts():
    # the argument keeps its index; a free index under the λ drops by one
    assert beta_step_all(App(Abs(None, Idx(1)), Idx(2))) == [Idx(2)]
    assert beta_step_all(App(Abs(None, Idx(2)), Idx(5))) == [Idx(1)]


def test_hand_typed_term():
    t = parse("pure", "\\x:i -> i. \\y:i. x y")
    assert typecheck_pure({}, t) == Arrow(Arrow(IOTA, IOTA), Arrow(IOTA, IOTA))


def test_alpha_equivalence():
    assert alpha_eq(parse("pure", "\\x. x"), parse("pure", "\\y. y"))
    assert not alpha_eq(parse("pure", "\\x. y"), parse("pure", "\\y. y"))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PURE5))
def test_to_db_respects_alpha(t):
    free = tuple(sorted(free_vars(t)))
    assert all(alpha_eq(t, u) == (to_db(t, (), free) == to_db(u, (), free))
               for u in PURE5[:60] if free_vars(u) == free_vars(t))


def test_suites():
    for lemma, size in (("pure:subject-reduction", 4), ("pure:sn", 5), ("pure:named-db", 5)):
        assert checks.run(lemma, size).passed, lemma
