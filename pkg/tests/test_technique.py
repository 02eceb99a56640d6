import dataclasses

import pytest

from ateb_lab import registry
from ateb_lab.kernel import Trace
from ateb_lab.nodes import Var
from ateb_lab.syntax import parse
from ateb_lab.technique import check_direct, check_simulation


def test_direct_pipeline_lx():
    rep = check_direct(registry.bundle("lx"), registry.typed_universe("lx", 5))
    assert rep.records and rep.passed
    assert rep.traces


def test_empty_stream_passes():
    assert check_direct(registry.bundle("lx"), []).passed
    assert check_simulation(registry.bundle("lu"), []).passed


def test_fault_injected_ateb_is_caught():
    bad = dataclasses.replace(registry.bundle("lx"), ateb=lambda t, env=None: Var("x"))
    inst = [(env, t, ty) for env, t, ty in registry.typed_universe("lx", 3)]
    rep = check_direct(bad, inst, sn=False)
    assert not rep.passed
    assert {k for r in rep.failures for k, v in r.checks.items() if not v} >= {"expansion"}


def test_fault_injected_simulation_is_caught():
    b = registry.bundle("lu")
    lying = dataclasses.replace(b, simulate_step=lambda t, step, u, **kw: (u, Trace(u)))
    rep = check_simulation(lying, [parse("lu", "(\\.1) 2")], path_len=1)
    assert not rep.passed


@pytest.mark.parametrize("calc", ["lu", "ls", "lsn"])
def test_simulation_pipeline(calc):
    rep = check_simulation(registry.bundle(calc), registry.typed_terms(calc, 3), path_len=3)
    assert rep.records and rep.passed


def test_rule_split_is_validated():
    b = registry.bundle("lu")
    with pytest.raises(ValueError):
        dataclasses.replace(b, lax_rules=b.lax_rules | {"B"})
    with pytest.raises(ValueError):
        dataclasses.replace(b, lax_rules=frozenset())
    with pytest.raises(ValueError):
        check_simulation(registry.bundle("lx"), [])
