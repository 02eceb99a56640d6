from ateb_lab import checks
from ateb_lab.kernel import redexes, replay
from ateb_lab.mu_mutilde import MMT, VALID, free_vars, mmt_ateb, mmt_expansion_trace, mmt_typecheck
from ateb_lab.syntax import parse, parse_environment

P = lambda s: parse("mmt", s)


def test_typing():
    env = parse_environment("mmt", "y:i | a:i -> i")
    assert mmt_typecheck(env, P("< \\x:i. x | a >")) is VALID


def test_critical_pair_has_both_sides():
    t = P("< mu a. < y | a > | mut x:i. < x | b > >")
    assert [(r, p) for r, p, _ in redexes(MMT, t)][:2] == [("μ", ()), ("μ̃", ())]


def test_reducts_do_not_invent_free_names():
    t = P("< mu a. < y | a > | mut x:i. < x | b > >")
    assert all(free_vars(u) <= free_vars(t) for _, _, u in redexes(MMT, t))


def test_expansion_trace_replays():
    for s in ("< y | mut x:i. < x | a > >", "< \\x:i. x | y * a >"):
        t = P(s)
        tr = mmt_expansion_trace(t)
        replay(MMT, tr)
        assert tr.start == mmt_ateb(t)


def test_suites_small():
    for lemma in ("mmt:expansion", "mmt:typability", "mmt:critical-pair", "mmt:side-conditions"):
        assert checks.run(lemma, 3).passed, lemma
