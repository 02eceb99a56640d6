import pytest
from hypothesis import given, settings, strategies as st

from ateb_lab import registry
from ateb_lab.syntax import CALCULI, ParseError, parse, parse_environment, show

# lwsn has 3.4M terms at size 5, so its samples stop at 4
SAMPLES = {c: list(registry.terms(c, 4 if c == "lwsn" else 5)) for c in CALCULI}


@pytest.mark.parametrize("calc", CALCULI)
def test_round_trip_exhaustive(calc):
    # streamed, the lwsn case takes a few minutes
    for t in registry.terms(calc, 5):
        assert parse(calc, show(t, calc)) == t


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(CALCULI), st.data())
def test_print_is_a_fixed_point(calc, data):
    t = data.draw(st.sampled_from(SAMPLES[calc]))
    s = show(t, calc)
    assert show(parse(calc, s), calc) == s


def test_canonical_examples():
    assert show(parse("lx", "x[y/x]"), "lx") == "x[y/x]"
    assert show(parse("lu", "1[^(!)]"), "lu") == "1[^(!)]"


def test_error_position():
    with pytest.raises(ParseError) as e:
        parse("lx", "x[y/")
    assert "column 5" in str(e.value)


@pytest.mark.parametrize("calc,text", [("lx", "1"), ("lu", "x"), ("ls", "1[2/]"), ("pure", "x[y/x]"),
                                       ("mmt", "x y"), ("lx", "\\x x")])
def test_rejects_foreign_syntax(calc, text):
    with pytest.raises(ParseError):
        parse(calc, text)


def test_environments():
    assert parse_environment("lu", "i, i -> i")[1] is not None
    assert set(parse_environment("lx", "x:i, y:i")) == {"x", "y"}
