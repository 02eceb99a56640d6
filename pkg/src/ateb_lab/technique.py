"""The two generic pipelines: direct (typability + expansion of Ateb) and
simulation (initialization witness + step-by-step simulation under ⋖).

Both run over a stream of terms and produce a TechniqueReport; nothing here
raises on a failed check, failures are recorded with their witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional

from .kernel import (BudgetExhausted, ProvedSN, ReductionStep, RewriteSystem, SearchExhausted,
                     Trace, is_sn, iter_redexes, reachable)
from .simple_types import TypingError


@dataclass(frozen=True)
class CalculusBundle:
    """What the pipelines need to know about a calculus.

    `strict_rules` must be simulated by exactly one step, `lax_rules` by zero
    or more; the two sets partition the rule table when present.
    """

    name: str
    sys: RewriteSystem
    typecheck: Callable  # (env, t) -> type
    ateb: Callable  # (t, env=None) -> term
    beta_rules: frozenset
    pure_sys: Optional[RewriteSystem] = None
    pure_typecheck: Optional[Callable] = None
    lessdot: Optional[Callable] = None  # (u, t) -> bool
    init_witness: Optional[Callable] = None  # (t, env=None) -> (u, trace)
    simulate_step: Optional[Callable] = None  # (t, step, u) -> (u', trace)
    strict_rules: frozenset = frozenset()
    lax_rules: frozenset = frozenset()
    expansion_rules: Optional[frozenset] = None

    def __post_init__(self):
        if self.strict_rules or self.lax_rules:
            if self.strict_rules & self.lax_rules:
                raise ValueError("strict and lax rule sets overlap")
            if self.strict_rules | self.lax_rules != frozenset(self.sys.rules):
                raise ValueError("strict and lax rule sets do not cover the rule table")

    @property
    def simulates(self) -> bool:
        return None not in (self.lessdot, self.init_witness, self.simulate_step)


@dataclass
class Record:
    term: Any
    checks: dict = field(default_factory=dict)
    verdict: Any = None
    witness: Any = None  # a Trace, a term or a message for the first failure

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def fail(self, check: str, witness=None):
        self.checks[check] = False
        if self.witness is None:
            self.witness = witness


@dataclass
class TechniqueReport:
    records: list = field(default_factory=list)
    traces: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.records)

    @property
    def failures(self) -> list:
        return [r for r in self.records if not r.ok]

    def merge(self, other: "TechniqueReport") -> "TechniqueReport":
        return TechniqueReport(self.records + other.records, self.traces + other.traces)

    def lines(self, show=str) -> Iterable[str]:
        for r in self.records:
            checks = " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in r.checks.items())
            verdict = "" if r.verdict is None else f" sn={_verdict(r.verdict)}"
            yield f"{show(r.term)}\t{checks}{verdict}"


def _verdict(v) -> str:
    if isinstance(v, ProvedSN):
        return f"proved(depth={v.max_depth})"
    if isinstance(v, BudgetExhausted):
        return "loop" if v.loop is not None else "budget"
    return str(v)


def check_direct(bundle: CalculusBundle, instances: Iterable, depth: int = 10,
                 budget: int = 100_000, sn: bool = True) -> TechniqueReport:
    """Direct pipeline over (env, t, A) instances.

    Checks that Ateb(t) has type A in env, that Ateb(t) reduces to t, and,
    with `sn`, that t is strongly normalizing within the budget whenever its
    expansion is.
    """
    rep = TechniqueReport()
    for env, t, ty in instances:
        rec = Record(t)
        a = bundle.ateb(t, env)
        try:
            tc = bundle.pure_typecheck or bundle.typecheck
            got = tc(env, a)
            rec.checks["typable"] = got == ty
            if got != ty:
                rec.fail("typable", a)
        except TypingError as e:
            rec.fail("typable", f"{a!r}: {e}")
        tr = reachable(bundle.sys, a, t, bundle.expansion_rules, depth)
        rec.checks["expansion"] = tr is not None
        if tr is None:
            rec.fail("expansion", a)
        else:
            rep.traces.append((bundle.sys, tr))
        if sn:
            v = is_sn(bundle.sys, t, budget)
            rec.verdict = v
            ok = isinstance(v, ProvedSN)
            if not ok and bundle.pure_sys is not None:
                # only a red flag when the pure expansion itself is SN
                ok = not isinstance(is_sn(bundle.pure_sys, a, budget), ProvedSN)
            rec.checks["sn"] = ok
            if not ok:
                rec.fail("sn", v.loop if isinstance(v, BudgetExhausted) else v)
            elif isinstance(v, BudgetExhausted) and v.loop is not None:
                rep.traces.append((bundle.sys, v.loop))
        rep.records.append(rec)
    return rep


def check_simulation(bundle: CalculusBundle, terms: Iterable, path_len: int = 4,
                     depth: Optional[int] = None) -> TechniqueReport:
    """Simulation pipeline over terms (or (env, t) pairs).

    Builds the initialization witness u for t, then follows every reduction
    path of t up to path_len steps, carrying u along with simulate_step.
    Steps with a strict rule must be matched by exactly one step of the same
    rules, the others by any number of steps; ⋖ is re-checked every time.
    """
    if not bundle.simulates:
        raise ValueError(f"{bundle.name} has no simulation machinery")
    rep = TechniqueReport()
    for item in terms:
        env, t = item if isinstance(item, tuple) else (None, item)
        rec = Record(t)
        try:
            u, tr = bundle.init_witness(t, env)
        except SearchExhausted as e:
            rec.fail("init", str(e))
            rep.records.append(rec)
            continue
        init_ok = (tr.start == bundle.ateb(t, env) and set(tr.rules()) <= bundle.strict_rules
                   and bundle.lessdot(u, t))
        rec.checks["init"] = init_ok
        if not init_ok:
            rec.fail("init", tr)
        else:
            rep.traces.append((bundle.sys, tr))
            rec.checks["simulation"] = True
            _drive(bundle, t, u, path_len, depth, rec, rep)
        rep.records.append(rec)
    return rep


def _drive(bundle, t, u, left, depth, rec, rep):
    if left == 0:
        return
    for label, path, t2 in list(iter_redexes(bundle.sys, t)):
        step = ReductionStep(label, path, t, t2)
        try:
            kw = {} if depth is None else {"depth": depth}
            u2, tr = bundle.simulate_step(t, step, u, **kw)
        except SearchExhausted as e:
            rec.fail("simulation", (t, step, u, str(e)))
            return
        strict = label in bundle.strict_rules
        shape_ok = (len(tr) == 1 and set(tr.rules()) <= bundle.strict_rules) if strict else True
        if not (shape_ok and tr.start == u and tr.end == u2 and bundle.lessdot(u2, t2)):
            rec.fail("simulation", (t, step, u, tr))
            return
        if len(tr):
            rep.traces.append((bundle.sys, tr))
        _drive(bundle, t2, u2, left - 1, depth, rec, rep)
        if not rec.ok:
            return
