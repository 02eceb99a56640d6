import pytest
from hypothesis import given, strategies as st

from ateb_lab.simple_types import (IOTA, TYPE_POOL, Arrow, Sub, TwoSidedEnv, TypeSyntaxError, env_split_db,
                                   parse_env, parse_type)

types = st.recursive(st.just(IOTA), lambda k: st.builds(Arrow, k, k) | st.builds(Sub, k, k), max_leaves=6)


@given(st.lists(st.sampled_from(TYPE_POOL), max_size=8), st.data())
def test_env_split_round_trip(env, data):
    i = data.draw(st.integers(0, len(env)))
    a, b = env_split_db(env, i)
    assert len(a) == i and a + b == tuple(env)


@given(types)
def test_type_print_parse_round_trip(ty):
    assert parse_type(str(ty)) == ty


def test_arrow_is_right_associative():
    assert parse_type("i -> i -> i") == Arrow(IOTA, Arrow(IOTA, IOTA))
    assert parse_type("(i -> i) -> i") == TYPE_POOL[2]


def test_env_and_errors():
    assert parse_env("x:i, f:i -> i") == {"x": IOTA, "f": Arrow(IOTA, IOTA)}
    with pytest.raises(TypeSyntaxError):
        parse_type("i ->")
    with pytest.raises(ValueError):
        env_split_db((IOTA,), 2)
    with pytest.raises(ValueError):
        TwoSidedEnv({"x": IOTA}, {"x": IOTA})
