import pytest

from ateb_lab import checks
from ateb_lab.checks import TraceAudit
from ateb_lab.kernel import ReductionStep, Trace, normalize
from ateb_lab.lambda_x import LX
from ateb_lab.syntax import parse

# cheap sizes; the acceptance module runs the stated bounds
SMALL = {"lwsn:expansion": 3, "lwsn:typability": 3, "lwsn:c-overlap": 3, "ls:egal-sigma": 3,
         "lsn:egal-sigma": 3, "ls:sn-transfer": 3, "mmt:critical-pair": 3}


@pytest.mark.parametrize("lemma", list(checks.LEMMAS))
def test_every_lemma_passes_small(lemma):
    d = checks.LEMMAS[lemma].size
    r = checks.run(lemma, SMALL.get(lemma, min(d, 3)) if d else None)
    assert r.passed, r.counterexamples


def test_audit_detects_every_mutant():
    a = TraceAudit()
    _, tr = normalize(LX, parse("lx", "((\\x. x) y)[z/y]"))
    a.add(LX, tr, "test")
    assert a.ok and a.mutants > 0 and not a.undetected


def test_audit_flags_a_bad_trace():
    a = TraceAudit(mutate=False)
    t = parse("lx", "x[y/x]")
    a.add(LX, Trace(t, (ReductionStep("Var1", (), t, parse("lx", "z")),)), "test")
    assert not a.ok and len(a.invalid) == 1


def test_unknown_lemma():
    with pytest.raises(KeyError):
        checks.run("bogus:id")


def test_sample_is_seeded(monkeypatch):
    monkeypatch.setenv("ATEB_LAB_SEED", "7")
    a = checks.run("lx:expansion", 4, sample=0.3).checked
    b = checks.run("lx:expansion", 4, sample=0.3).checked
    assert a == b < checks.run("lx:expansion", 4).checked
