from ateb_lab import checks
from ateb_lab.kernel import normalize
from ateb_lab.lambda_sigma_n import (LSN, alpha_eq, audit_step, free_vars, lsn_ateb, lsn_init_witness,
                                     lsn_lessdot, lsn_sigma_normalize)
from ateb_lab.nodes import Var
from ateb_lab.syntax import parse

P = lambda s: parse("lsn", s)


def test_var_rules():
    assert normalize(LSN, P("x[(y/x) . id]"))[0] == Var("y")
    assert normalize(LSN, P("z[(y/x) . id]"))[0] == Var("z")


def test_lambda_renames():
    nf = lsn_sigma_normalize(P("(\\x. x)[id]"))
    assert alpha_eq(nf, P("\\z. z"))
    nf = lsn_sigma_normalize(P("(\\y. x)[(y/x) . id]"))
    assert nf.name != "y" and free_vars(nf) == {"y"}


def test_every_step_is_fresh():
    _, tr = normalize(LSN, P("((\\y. x y)[(y/x) . id]) z"))
    assert all(audit_step(s) is None for s in tr.steps)


def test_ateb_and_init():
    assert lsn_ateb(P("x[(y/x) . id]")) == P("(\\x. x) y")
    u, tr = lsn_init_witness(P("x[(y/x) . id]"))
    assert lsn_lessdot(u, P("x[(y/x) . id]")) and tr.rules() == ["B"]


def test_suites_small():
    for lemma, size in (("lsn:egal-sigma", 3), ("lsn:init", 4), ("lsn:simulate", 3),
                        ("lsn:freshness", 4), ("lsn:typability", 4)):
        assert checks.run(lemma, size).passed, lemma
