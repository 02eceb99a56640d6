"""Lemma suites keyed by id, run exhaustively over enumerated terms.

Every suite returns a CheckResult holding the number of cases it examined
and the first few counterexamples in canonical syntax.  Traces produced
along the way can be sent to a TraceAudit, which replays them and checks
that corrupting any single step is detected.
"""

from __future__ import annotations

import os
import random
import time
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Optional

from . import lambda_pure as lp
from . import lambda_sigma as ls
from . import lambda_sigma_n as lsn
from . import lambda_upsilon as lu
from . import lambda_wsn as lw
from . import lambda_x as lx
from . import mu_mutilde as mm
from . import registry
from .kernel import (BudgetExhausted, FuelExhausted, ProvedSN, ReductionStep, SearchExhausted, Trace,
                     TraceError, apply_at, is_sn, iter_redexes, normalize, reachable, replay)
from .nodes import (ID, SHIFT, Abs, App, Clo, Comp, Cons, Idx, Lam, NCons, Subst, Var, WSub,
                    children, contains, count_nodes, size, subterm_at)
from .simple_types import TYPE_POOL, TypingError
from .syntax import show
from .technique import check_simulation

MAX_SHOWN = 5


@dataclass
class CheckResult:
    lemma: str
    checked: int = 0
    failures: int = 0
    counterexamples: list = field(default_factory=list)
    exhausted: int = 0  # failures that are budget or fuel exhaustion
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, msg: str, exhausted: bool = False):
        self.failures += 1
        self.exhausted += exhausted
        if len(self.counterexamples) < MAX_SHOWN:
            self.counterexamples.append(msg)

    def absorb(self, other: "CheckResult"):
        self.checked += other.checked
        for msg in other.counterexamples:
            if len(self.counterexamples) < MAX_SHOWN:
                self.counterexamples.append(f"[{other.lemma}] {msg}")
        self.failures += other.failures
        self.exhausted += other.exhausted

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = "" if self.passed else f", {self.failures} failing"
        return f"{self.lemma}: {verdict} ({self.checked} cases{extra}, {self.seconds:.1f}s)"


class TraceAudit:
    """Replays every trace it is given and runs the single-step mutations.

    Mutations: an unknown rule label, a path that leads nowhere, and an
    `after` term replaced by `before` (skipped when the step really is a
    self-loop).  A mutant that replays cleanly is an undetected corruption.
    """

    def __init__(self, mutate: bool = True):
        self.mutate = mutate
        self.traces = 0
        self.steps = 0
        self.mutants = 0
        self.invalid: list = []
        self.undetected: list = []

    def add(self, sys, tr: Trace, origin: str = ""):
        self.traces += 1
        self.steps += len(tr)
        try:
            replay(sys, tr)
        except TraceError as e:
            self.invalid.append(f"{origin}: {e}")
            return
        if self.mutate:
            for st in tr.steps:
                self._mutants(sys, st, origin)

    def _mutants(self, sys, st: ReductionStep, origin):
        bad_path = st.at + (len(children(subterm_at(st.before, st.at))) + 1,)
        muts = [ReductionStep("no-such-rule", st.at, st.before, st.after),
                ReductionStep(st.rule, bad_path, st.before, st.after)]
        if st.before not in apply_at(sys, st.before, st.at, st.rule):
            muts.append(ReductionStep(st.rule, st.at, st.before, st.before))
        for m in muts:
            self.mutants += 1
            try:
                replay(sys, Trace(st.before, (m,)))
            except TraceError:
                continue
            self.undetected.append(f"{origin}: {m.rule} at {m.at}")

    @property
    def ok(self) -> bool:
        return not self.invalid and not self.undetected

    def summary(self) -> str:
        return (f"{self.traces} traces, {self.steps} steps, {self.mutants} mutants, "
                f"{len(self.invalid)} invalid, {len(self.undetected)} undetected")


@dataclass
class Ctx:
    size: int
    budget: int = 100_000
    audit: Optional[TraceAudit] = None
    sample: Optional[float] = None  # keep each case with this probability
    rng: random.Random = field(default_factory=lambda: random.Random(_seed()))

    def record(self, sys, tr, origin):
        if self.audit is not None:
            self.audit.add(sys, tr, origin)

    def cases(self, stream: Iterable) -> Iterable:
        if self.sample is None:
            return stream
        return (x for x in stream if self.rng.random() < self.sample)


def _seed() -> int:
    return int(os.environ.get("ATEB_LAB_SEED", "0"))


def erase(t):
    """Drop every binder annotation."""
    vals = [getattr(t, f) for f in t.__slots__]
    for k in t._kids:
        vals[k] = erase(vals[k])
    if "annot" in t.__slots__:
        vals[t.__slots__.index("annot")] = None
    return type(t)(*vals)


def _sh(t, calc):
    try:
        return show(t, calc)
    except Exception:
        return repr(t)


# ---- kernel ----------------------------------------------------------------

OMEGA = App(Lam("x", None, App(Var("x"), Var("x"))), Lam("x", None, App(Var("x"), Var("x"))))


def kernel_omega(ctx: Ctx, r: CheckResult):
    for budget in sorted({10, 1000, ctx.budget}):
        r.checked += 1
        v = is_sn(lx.LX, OMEGA, budget)
        if isinstance(v, ProvedSN):
            r.fail(f"Ω proved SN with budget {budget}")
        elif v.loop is None:
            r.fail(f"budget {budget} exhausted without a loop witness")
        else:
            if not lx.LX.equal(v.loop.start, v.loop.end) or not len(v.loop):
                r.fail("the loop witness does not close")
            ctx.record(lx.LX, v.loop, "kernel:omega")


def _naive(g, sort, n):
    # unmemoized unfolding, one node per production
    out = []
    for prod in g.sorts[sort]:
        if not prod.kids:
            if n == prod.cost:
                out += [prod.build(p) for p in prod.params]
            continue
        for sizes in product(range(1, n), repeat=len(prod.kids)):
            if sum(sizes) + prod.cost != n:
                continue
            for kids in product(*[_naive(g, s, k) for s, k in zip(prod.kids, sizes)]):
                out += [prod.build(p, *kids) for p in prod.params]
    return out


def kernel_enumeration(ctx: Ctx, r: CheckResult):
    for calc in registry.CALCULI:
        g = registry.grammar_for(calc, ctx.size)
        sorts = ("c", "v", "e") if calc == "mmt" else (g.start,)
        for s in sorts:
            got = list(g.up_to(ctx.size, s))
            want = [t for n in range(1, ctx.size + 1) for t in _naive(g, s, n)]
            r.checked += len(got)
            if len(set(got)) != len(got):
                r.fail(f"{calc}/{s}: duplicates in the enumeration")
            if set(got) != set(want) or len(got) != len(want):
                r.fail(f"{calc}/{s}: {len(got)} enumerated against {len(want)} from the oracle")
            if any(size(t) > ctx.size for t in got):
                r.fail(f"{calc}/{s}: a term exceeds the size bound")


# ---- pure ------------------------------------------------------------------

def pure_subject_reduction(ctx: Ctx, r: CheckResult):
    for calc, sys in (("pure", lp.PURE_NAMED), ("pure-db", lp.PURE_DB)):
        for env, t, ty in ctx.cases(registry.typed_universe(calc, ctx.size)):
            r.checked += 1
            for label, path, t2 in iter_redexes(sys, t):
                try:
                    ty2 = lp.typecheck_pure(env, t2)
                except TypingError as e:
                    ty2 = e
                if ty2 != ty:
                    r.fail(f"{_sh(t, calc)} → {_sh(t2, calc)}: {ty} became {ty2}")


def pure_sn(ctx: Ctx, r: CheckResult):
    seen = {}
    for env, t, ty in ctx.cases(registry.typed_universe("pure", ctx.size)):
        r.checked += 1
        e = erase(t)
        if e not in seen:
            seen[e] = is_sn(lp.PURE_NAMED, e, ctx.budget)
        if not isinstance(seen[e], ProvedSN):
            r.fail(f"{_sh(t, 'pure')}: no SN proof", exhausted=True)


def pure_named_db(ctx: Ctx, r: CheckResult):
    """to_db commutes with β: the De Bruijn reducts are the images of the named ones."""
    for t in ctx.cases(registry.terms("pure", ctx.size)):
        r.checked += 1
        free = tuple(sorted(lp.free_vars(t)))
        d = lp.to_db(t, (), free)
        named = {lp.to_db(t2, (), free) for _, _, t2 in iter_redexes(lp.PURE_NAMED, t)}
        db = {t2 for _, _, t2 in iter_redexes(lp.PURE_DB, d)}
        if named != db:
            r.fail(f"{_sh(t, 'pure')}: reducts disagree")


# ---- λx --------------------------------------------------------------------

def lx_expansion(ctx: Ctx, r: CheckResult):
    for t in ctx.cases(registry.terms("lx", ctx.size)):
        r.checked += 1
        k = lx.count_subst(t)
        a = lx.lx_ateb(t)
        if contains(a, Subst):
            r.fail(f"{_sh(t, 'lx')}: Ateb left a substitution")
            continue
        tr = reachable(lx.LX, a, t, {"Beta"}, k)
        if tr is None or len(tr) != k:
            r.fail(f"{_sh(t, 'lx')}: no Beta trace of length {k} from {_sh(a, 'lx')}")
        else:
            ctx.record(lx.LX, tr, "lx:expansion")


def lx_typability(ctx: Ctx, r: CheckResult):
    for env, t, ty in ctx.cases(registry.typed_universe("lx", ctx.size)):
        r.checked += 1
        a = lx.lx_ateb(t, env)
        try:
            got = lp.typecheck_pure(env, a)
        except TypingError as e:
            got = e
        if got != ty:
            r.fail(f"{_sh(t, 'lx')} : {ty} but Ateb gives {got}")


def lx_sn(ctx: Ctx, r: CheckResult):
    # annotations do not influence reduction, so one verdict per erased term
    seen = {}
    for env, t, ty in ctx.cases(registry.typed_universe("lx", ctx.size)):
        r.checked += 1
        e = erase(t)
        v = seen.get(e)
        if v is None:
            v = seen[e] = is_sn(lx.LX, e, ctx.budget)
        if not isinstance(v, ProvedSN):
            r.fail(f"{_sh(t, 'lx')}: {v}", exhausted=v.loop is None)


# ---- λυ --------------------------------------------------------------------

FUN_N, FUN_I = 12, 8


def lu_funshift_plus1(ctx: Ctx, r: CheckResult):
    """fshift(i,t) = fshift(j,u) implies fshift(i+1,t) = fshift(j+1,u)."""
    buckets = defaultdict(set)
    for t in registry.grammar_for("pure-db", 0, max_index=FUN_I).up_to(ctx.size):
        for i in range(FUN_I + 1):
            buckets[lu.fshift(i, t)].add(lu.fshift(i + 1, t))
            r.checked += 1
    for key, nexts in buckets.items():
        if len(nexts) > 1:
            r.fail(f"{_sh(key, 'lu')} has successors {sorted(_sh(x, 'lu') for x in nexts)}")


def lu_funshift_comp(ctx: Ctx, r: CheckResult):
    for n in range(2, FUN_N + 1):
        for i in range(FUN_I + 1):
            r.checked += 1
            lhs = lu.flift_shift(i + 1, Idx(n))
            rhs = lu.fshift(1, lu.flift_shift(i, Idx(n - 1)))
            if lhs != rhs:
                r.fail(f"n={n} i={i}: {lhs.n} against {rhs.n}")


def lu_funcons_comp(ctx: Ctx, r: CheckResult):
    for n in range(2, FUN_N + 1):
        for i in range(FUN_I + 1):
            r.checked += 1
            lhs = lu.flift_cons(i + 1, Idx(n))
            rhs = lu.flift_shift(1, lu.flift_cons(i, Idx(n - 1)))
            if lhs != rhs:
                r.fail(f"n={n} i={i}: {lhs.n} against {rhs.n}")


def _lu_commute(f):
    def run(ctx: Ctx, r: CheckResult):
        for t in ctx.cases(lu.grammar(ctx.size + 1, simple_only=True).up_to(ctx.size)):
            for i in range(4):
                r.checked += 1
                if lu.lu_overline(f(i, t)) != f(i, lu.lu_overline(t)):
                    r.fail(f"i={i} t={_sh(t, 'lu')}")
    return run


def lu_typability(ctx: Ctx, r: CheckResult):
    for env, t, ty in ctx.cases(registry.typed_universe("lu", ctx.size)):
        r.checked += 1
        a = lu.lu_ateb(t, env)
        try:
            got = lp.typecheck_pure(tuple(env), a)
        except TypingError as e:
            got = e
        if got != ty or contains(a, Clo):
            r.fail(f"{_sh(t, 'lu')} : {ty} but Ateb gives {got}")


def lu_fct(ctx: Ctx, r: CheckResult):
    """The three re-indexing clauses on typed substitution-free terms, |Δ| ≤ 2."""
    tc = lp.typecheck_pure

    def same(env, t, ty, what):
        try:
            got = tc(env, t)
        except TypingError as e:
            got = e
        if got != ty:
            r.fail(f"{what}: {_sh(t, 'lu')} in {len(env)} entries gave {got}")

    for env in registry.db_envs(3):
        for t0 in lp.db_grammar(4).up_to(ctx.size):
            for t, ty in lp.typings_db(env, t0):
                for delta in registry.db_envs(2):
                    r.checked += 1
                    same(delta + env, lu.fshift(len(delta), t), ty, "shift")
                for k in range(min(2, len(env) - 1) + 1):
                    if k < len(env):
                        d, b, g = env[:k], env[k], env[k + 1:]
                        r.checked += 1
                        same((b,) + d + g, lu.flift_cons(k, t), ty, "lift-cons")
                    for b in TYPE_POOL:
                        r.checked += 1
                        same(env[:k] + (b,) + env[k:], lu.flift_shift(k, t), ty, "lift-shift")


def _init_suite(calc, witness, ateb, lessdot, sys, strict, lemma):
    def run(ctx: Ctx, r: CheckResult):
        for t in ctx.cases(registry.terms(calc, ctx.size)):
            r.checked += 1
            try:
                u, tr = witness(t)
            except SearchExhausted as e:
                r.fail(f"{_sh(t, calc)}: {e}")
                continue
            if tr.start != ateb(t) or not set(tr.rules()) <= strict or not lessdot(u, t):
                r.fail(f"{_sh(t, calc)}: witness {_sh(u, calc)} does not qualify")
            ctx.record(sys, tr, lemma)
    return run


def _sim_suite(calc, lemma):
    def run(ctx: Ctx, r: CheckResult):
        b = registry.bundle(calc)
        rep = check_simulation(b, ctx.cases(registry.typed_terms(calc, ctx.size)), path_len=4)
        r.checked += len(rep.records)
        for rec in rep.failures:
            r.fail(f"{_sh(rec.term, calc)}: {_describe(rec.witness, calc)}")
        for sys, tr in rep.traces:
            ctx.record(sys, tr, lemma)
    return run


def _describe(w, calc):
    if isinstance(w, tuple) and len(w) == 4:
        t, step, u, why = w
        why = why if isinstance(why, str) else f"trace of {len(why)} steps"
        return f"{step.rule} at {step.at} from u={_sh(u, calc)}: {why}"
    if isinstance(w, Trace):
        return f"bad witness trace ending in {_sh(w.end, calc)}"
    return str(w)


# ---- λσ --------------------------------------------------------------------

def ls_sigma_terminates(ctx: Ctx, r: CheckResult):
    for t in ctx.cases(registry.terms("ls", ctx.size)):
        r.checked += 1
        try:
            nf, tr = normalize(ls.LS, t, ls.SIGMA, ls.sigma_fuel(t))
        except FuelExhausted:
            r.fail(f"{_sh(t, 'ls')}: fuel exhausted", exhausted=True)
            continue
        ctx.record(ls.LS, tr, "ls:sigma-terminates")


def ls_init_id(ctx: Ctx, r: CheckResult):
    for t in ctx.cases(registry.terms("ls", ctx.size)):
        r.checked += 1
        if ls.sigma_normalize(t) != ls.sigma_normalize(Clo(t, ID)):
            r.fail(_sh(t, "ls"))


def lifted_shift(i: int):
    """⇑^i(↑) spelled with cons and composition: 1·(⇑^{i-1}(↑)∘↑)."""
    s = SHIFT
    for _ in range(i):
        s = Cons(Idx(1), Comp(s, SHIFT))
    return s


def ls_init_shift(ctx: Ctx, r: CheckResult):
    for t in ctx.cases(lp.db_grammar(ctx.size + 1).up_to(ctx.size)):
        for i in range(3):
            r.checked += 1
            if ls.sigma_normalize(ls.upshift(i, 1, t)) != ls.sigma_normalize(Clo(t, lifted_shift(i))):
                r.fail(f"i={i} t={_sh(t, 'ls')}")


def ls_comp_up(ctx: Ctx, r: CheckResult):
    for t in ctx.cases(ls.grammar(ctx.size + 1, shift=False).up_to(ctx.size)):
        for i, j, l in product(range(4), repeat=3):
            r.checked += 1
            if ls.upshift(i, j, ls.upshift(i, l, t)) != ls.upshift(i, j + l, t):
                r.fail(f"i={i} j={j} l={l} t={_sh(t, 'ls')}")


def ls_commute_ol_ups(ctx: Ctx, r: CheckResult):
    for t in ctx.cases(ls.grammar(ctx.size + 1, shift=False).up_to(ctx.size)):
        for i, j in product(range(4), repeat=2):
            r.checked += 1
            if ls.ls_overline(ls.upshift(i, j, t)) != ls.upshift(i, j, ls.ls_overline(t)):
                r.fail(f"i={i} j={j} t={_sh(t, 'ls')}")


def _sigma_normal(sys, x, rules):
    return next(iter_redexes(sys, x, rules), None) is None


LS_SAMPLES = (Idx(1), Abs(None, Idx(1)), App(Idx(2), Idx(1)))


def ls_egal_sigma(ctx: Ctx, r: CheckResult):
    g = ls.grammar(ctx.size + 1)
    ts = [t for t in g.up_to(ctx.size) if _sigma_normal(ls.LS, t, ls.SIGMA)]
    ss = [s for s in g.up_to(ctx.size, "s") if _sigma_normal(ls.LS, s, ls.SIGMA)]
    groups = defaultdict(list)
    for t, s in product(ts, ss):
        groups[ls.sigma_normalize(Clo(t, Cons(Idx(1), Comp(s, SHIFT))))].append((t, s))
    for members in groups.values():
        for u in LS_SAMPLES:
            r.checked += len(members)
            outs = {ls.sigma_normalize(Clo(t, Cons(u, s))) for t, s in members}
            if len(outs) > 1:
                t, s = members[0]
                r.fail(f"u={_sh(u, 'ls')}: {len(members)} pairs agree on the premise, "
                       f"{len(outs)} results, e.g. {_sh(Clo(t, s), 'ls')}")


def ls_fct(ctx: Ctx, r: CheckResult):
    for env, t, ty in ctx.cases(registry.typed_universe("pure-db", ctx.size)):
        for b in TYPE_POOL:
            r.checked += 1
            try:
                got = lp.typecheck_pure((b,) + tuple(env), ls.upshift(0, 1, t))
            except TypingError as e:
                got = e
            if got != ty:
                r.fail(f"{_sh(t, 'ls')} under {b}: {got}")


def ls_typability(ctx: Ctx, r: CheckResult):
    for env, t, ty in ctx.cases(registry.typed_universe("ls", ctx.size)):
        r.checked += 1
        a = ls.ls_ateb(t, env)
        try:
            got = lp.typecheck_pure(tuple(env), a)
        except TypingError as e:
            got = e
        if got != ty or contains(a, Clo):
            r.fail(f"{_sh(t, 'ls')} : {ty} but Ateb gives {got}")


def _reach_set(sys, u, limit):
    seen, todo = {u}, [u]
    while todo:
        x = todo.pop()
        for _, _, y in iter_redexes(sys, x):
            if y not in seen:
                seen.add(y)
                if len(seen) > limit:
                    return None
                todo.append(y)
    return seen


def ls_sn_transfer(ctx: Ctx, r: CheckResult):
    """Every path of t is shadowed inside the reduction graph of its witness u,
    so the B steps along any path of t are bounded by u's longest path."""
    b = registry.bundle("ls")
    for env, t in ctx.cases(registry.typed_terms("ls", ctx.size)):
        r.checked += 1
        try:
            u, _ = b.init_witness(t, env)
        except SearchExhausted as e:
            r.fail(f"{_sh(t, 'ls')}: {e}")
            continue
        v = is_sn(ls.LS, u, ctx.budget)
        graph = _reach_set(ls.LS, u, ctx.budget) if isinstance(v, ProvedSN) else None
        if graph is None:
            r.fail(f"{_sh(t, 'ls')}: witness {_sh(u, 'ls')} has no SN proof", exhausted=True)
            continue
        memo = {}

        def most_b(t1, u1, stack):
            # the largest number of B steps on a path from t1
            if (t1, u1) in memo:
                return memo[(t1, u1)]
            if (t1, u1) in stack or len(memo) > ctx.budget:
                raise SearchExhausted("cycle or budget while driving the paths of t")
            stack.add((t1, u1))
            best = 0
            for label, path, t2 in iter_redexes(ls.LS, t1):
                u2, _ = b.simulate_step(t1, ReductionStep(label, path, t1, t2), u1)
                if u2 not in graph:
                    raise SearchExhausted(f"{_sh(u2, 'ls')} left the graph of u")
                best = max(best, most_b(t2, u2, stack) + (label == "B"))
            stack.discard((t1, u1))
            memo[(t1, u1)] = best
            return best

        try:
            nb = most_b(t, u, set())
        except SearchExhausted as e:
            r.fail(f"{_sh(t, 'ls')}: {e}")
            continue
        if nb > v.max_depth:
            r.fail(f"{_sh(t, 'ls')}: {nb} B steps but u's longest path is {v.max_depth}")


# ---- λσn -------------------------------------------------------------------

LSN_SAMPLES = (Var("z"), Lam("y", None, Var("y")), App(Var("x"), Var("y")))
FRESH = "w"  # outside the enumeration names, hence fresh for every case


def lsn_egal_sigma(ctx: Ctx, r: CheckResult):
    g = lsn.grammar()
    ts = [t for t in g.up_to(ctx.size) if _sigma_normal(lsn.LSN, t, lsn.SIGMA)]
    ss = [s for s in g.up_to(ctx.size, "s") if _sigma_normal(lsn.LSN, s, lsn.SIGMA)]
    for x in lp.NAMES:
        groups = defaultdict(list)
        for t, s in product(ts, ss):
            groups[lsn.sigma_key(Clo(t, NCons(Var(FRESH), x, s)))].append((t, s))
        for members in groups.values():
            for u in LSN_SAMPLES:
                r.checked += len(members)
                outs = {lsn.sigma_key(Clo(t, NCons(u, x, s))) for t, s in members}
                if len(outs) > 1:
                    t, s = members[0]
                    r.fail(f"x={x} u={_sh(u, 'lsn')}: {len(outs)} results, "
                           f"e.g. {_sh(Clo(t, s), 'lsn')}")


def lsn_freshness(ctx: Ctx, r: CheckResult):
    for t in ctx.cases(registry.terms("lsn", ctx.size)):
        steps = [ReductionStep(l, p, t, t2) for l, p, t2 in iter_redexes(lsn.LSN, t)]
        try:
            steps += normalize(lsn.LSN, t, lsn.SIGMA, lsn.sigma_fuel(t))[1].steps
        except FuelExhausted as e:
            r.fail(f"{_sh(t, 'lsn')}: fuel exhausted", exhausted=True)
            steps += e.trace.steps
        for st in steps:
            r.checked += 1
            why = lsn.audit_step(st)
            if why:
                r.fail(f"{_sh(st.before, 'lsn')}: {why}")


def lsn_typability(ctx: Ctx, r: CheckResult):
    for env, t, ty in ctx.cases(registry.typed_universe("lsn", ctx.size)):
        r.checked += 1
        a = lsn.lsn_ateb(t, env)
        try:
            got = lp.typecheck_pure(env, a)
        except TypingError as e:
            got = e
        if got != ty or contains(a, Clo):
            r.fail(f"{_sh(t, 'lsn')} : {ty} but Ateb gives {got}")


# ---- λwsn ------------------------------------------------------------------

LWSN_EXPANSION = frozenset({"b", "∅", "d"})


def lwsn_expansion(ctx: Ctx, r: CheckResult):
    for t in ctx.cases(registry.terms("lwsn", ctx.size)):
        r.checked += 1
        a = lw.lwsn_ateb(t)
        tr = reachable(lw.LWSN, a, t, LWSN_EXPANSION, 3 * count_nodes(t, WSub))
        if tr is None or contains(a, WSub):
            r.fail(f"{_sh(t, 'lwsn')}: not reached from {_sh(a, 'lwsn')}")
        else:
            ctx.record(lw.LWSN, tr, "lwsn:expansion")


def lwsn_typability(ctx: Ctx, r: CheckResult):
    for env, t, ty in ctx.cases(registry.typed_universe("lwsn", ctx.size)):
        r.checked += 1
        try:
            got = lw.lwsn_typecheck(env, lw.lwsn_ateb(t, env), allow_sub=False)
        except TypingError as e:
            got = e
        if got != ty:
            r.fail(f"{_sh(t, 'lwsn')} : {ty} but Ateb gives {got}")


def lwsn_c_overlap(ctx: Ctx, r: CheckResult):
    for t in ctx.cases(registry.terms("lwsn", ctx.size)):
        r.checked += 1
        for path, labels in lw.c_overlaps(t):
            r.fail(f"{_sh(t, 'lwsn')}: {'/'.join(labels)} at {path}")


# ---- λ̄μμ̃ -------------------------------------------------------------------

def mmt_expansion(ctx: Ctx, r: CheckResult):
    for t in ctx.cases(registry.terms("mmt", ctx.size)):
        r.checked += 1
        try:
            tr = mm.mmt_expansion_trace(t)
        except TraceError as e:
            r.fail(f"{_sh(t, 'mmt')}: {e}")
            continue
        ctx.record(mm.MMT, tr, "mmt:expansion")
        if reachable(mm.MMT, tr.start, t, set(tr.rules()) or None, len(tr)) is None:
            r.fail(f"{_sh(t, 'mmt')}: the search does not confirm the chain")


def mmt_typability(ctx: Ctx, r: CheckResult):
    subs = (mm.CSub, mm.VSub, mm.ESub)
    for env, t, ty in ctx.cases(registry.typed_universe("mmt", ctx.size)):
        r.checked += 1
        a = mm.mmt_ateb(t, env)
        try:
            got = mm.mmt_typecheck(env, a)
        except TypingError as e:
            got = e
        if got != ty or contains(a, subs):
            r.fail(f"{_sh(t, 'mmt')} : {ty} but Ateb gives {got}")


def mmt_critical_pair(ctx: Ctx, r: CheckResult):
    """Every ⟨μα.c | μ̃x.c'⟩ with c, c' commands of at most `size` nodes."""
    cmds = list(mm.grammar().up_to(ctx.size, "c"))
    for c1, c2 in ctx.cases(product(cmds, cmds)):
        for a, x in product(mm.CTX_NAMES, mm.TERM_NAMES):
            t = mm.Cut(mm.Mu(a, None, c1), mm.MuTilde(x, None, c2))
            r.checked += 1
            labels = [l for l, p, _ in iter_redexes(mm.MMT, t) if p == ()]
            if not {"μ", "μ̃"} <= set(labels):
                r.fail(f"{_sh(t, 'mmt')}: root rules {labels}")
    if r.checked == 0 and ctx.sample is None:
        r.fail("no critical pair within the size bound")


def mmt_side_conditions(ctx: Ctx, r: CheckResult):
    """No step makes a name free that was not free in its redex."""
    for t in ctx.cases(registry.terms("mmt", ctx.size)):
        for label, path, t2 in iter_redexes(mm.MMT, t):
            r.checked += 1
            before, after = subterm_at(t, path), subterm_at(t2, path)
            extra = mm.free_vars(after) - mm.free_vars(before)
            if extra:
                r.fail(f"{_sh(t, 'mmt')}: {label} at {path} frees {sorted(extra)}")


# ---- registry --------------------------------------------------------------

@dataclass(frozen=True)
class Lemma:
    id: str
    run: Callable
    size: int
    doc: str
    parts: tuple = ()


_LEMMAS = [
    Lemma("kernel:omega", kernel_omega, 0, "Ω has a loop witness and no SN proof"),
    Lemma("kernel:enumeration", kernel_enumeration, 4, "enumeration is complete and duplicate-free"),
    Lemma("kernel:traces", None, 3, "traces of the acceptance suites replay; single-step corruption is caught"),
    Lemma("pure:subject-reduction", pure_subject_reduction, 5, "β preserves types"),
    Lemma("pure:sn", pure_sn, 6, "typed pure terms are SN"),
    Lemma("pure:named-db", pure_named_db, 5, "named to De Bruijn commutes with β"),
    Lemma("lx:expansion", lx_expansion, 7, "Ateb(t) reaches t with #Subst Beta steps"),
    Lemma("lx:typability", lx_typability, 6, "Ateb preserves typing"),
    Lemma("lx:sn", lx_sn, 6, "typed λx terms are SN"),
    Lemma("lu:funshift+1", lu_funshift_plus1, 4, "equal shifts stay equal one level up"),
    Lemma("lu:funshift-comp", lu_funshift_comp, 0, "F⇑↑(i+1, n) = F↑(1, F⇑↑(i, n-1))"),
    Lemma("lu:funcons-comp", lu_funcons_comp, 0, "F⇑/(i+1, n) = F⇑↑(1, F⇑/(i, n-1))"),
    Lemma("lu:fun-props", None, 4, "the three re-indexing properties",
          ("lu:funshift+1", "lu:funshift-comp", "lu:funcons-comp")),
    Lemma("lu:commute-ol-fls", _lu_commute(lu.flift_shift), 6, "overline commutes with F⇑↑"),
    Lemma("lu:commute-ol-flc", _lu_commute(lu.flift_cons), 6, "overline commutes with F⇑/"),
    Lemma("lu:commute-ol-fs", _lu_commute(lu.fshift), 6, "overline commutes with F↑"),
    Lemma("lu:commute", None, 6, "overline commutes with the re-indexing functions",
          ("lu:commute-ol-fls", "lu:commute-ol-flc", "lu:commute-ol-fs")),
    Lemma("lu:typability", lu_typability, 5, "Ateb preserves typing"),
    Lemma("lu:fct", lu_fct, 5, "re-indexing functions respect typing"),
    Lemma("lu:init", _init_suite("lu", lu.lu_init_witness, lu.lu_ateb, lu.lu_lessdot, lu.LU,
                                 frozenset({"B"}), "lu:init"), 5, "B-only initialization witness"),
    Lemma("lu:simulate", _sim_suite("lu", "lu:simulate"), 4, "simulation chains on typed terms"),
    Lemma("ls:sigma-terminates", ls_sigma_terminates, 6, "σ-normalization stays within fuel"),
    Lemma("ls:init-id", ls_init_id, 5, "σ(t) = σ(t[id])"),
    Lemma("ls:init-shift", ls_init_shift, 6, "σ(Up(i,1,t)) = σ(t[⇑^i(↑)]) for i ≤ 2"),
    Lemma("ls:comp-up", ls_comp_up, 6, "Up(i,j,Up(i,l,t)) = Up(i,j+l,t)"),
    Lemma("ls:commute-ol-ups", ls_commute_ol_ups, 5, "overline commutes with Up"),
    Lemma("ls:egal-sigma", ls_egal_sigma, 4, "σ-equal with 1 implies σ-equal with any u"),
    Lemma("ls:fct", ls_fct, 5, "Up(0,1) respects typing"),
    Lemma("ls:typability", ls_typability, 5, "Ateb preserves typing"),
    Lemma("ls:init", _init_suite("ls", ls.ls_init_witness, ls.ls_ateb, ls.ls_lessdot, ls.LS,
                                 frozenset({"B"}), "ls:init"), 4, "B-only initialization witness"),
    Lemma("ls:simulate", _sim_suite("ls", "ls:simulate"), 4, "simulation chains on typed terms"),
    Lemma("ls:sn-transfer", ls_sn_transfer, 4, "paths of t live in the graph of its witness"),
    Lemma("lsn:egal-sigma", lsn_egal_sigma, 4, "σ-equal with a fresh name implies σ-equal with any u"),
    Lemma("lsn:init", _init_suite("lsn", lsn.lsn_init_witness, lsn.lsn_ateb, lsn.lsn_lessdot, lsn.LSN,
                                  frozenset({"B"}), "lsn:init"), 5, "B-only initialization witness"),
    Lemma("lsn:simulate", _sim_suite("lsn", "lsn:simulate"), 4, "simulation chains on typed terms"),
    Lemma("lsn:freshness", lsn_freshness, 5, "no step captures a free name"),
    Lemma("lsn:typability", lsn_typability, 5, "Ateb preserves typing"),
    Lemma("lwsn:expansion", lwsn_expansion, 5, "Ateb(t) reaches t with b, ∅ and d"),
    Lemma("lwsn:typability", lwsn_typability, 5, "Ateb preserves typing"),
    Lemma("lwsn:c-overlap", lwsn_c_overlap, 5, "no two c-rules fire at one position"),
    Lemma("mmt:expansion", mmt_expansion, 5, "the rule chains turn Ateb(t) back into t"),
    Lemma("mmt:typability", mmt_typability, 5, "Ateb preserves the judgment"),
    Lemma("mmt:critical-pair", mmt_critical_pair, 4, "⟨μα.c | μ̃x.c'⟩ has both μ and μ̃ redexes"),
    Lemma("mmt:side-conditions", mmt_side_conditions, 5, "no step frees a bound name"),
]
LEMMAS = {l.id: l for l in _LEMMAS}

# the suites whose traces kernel:traces audits, in acceptance order
AUDITED = ("lx:expansion", "lx:typability", "lx:sn", "lu:fun-props", "lu:commute", "lu:init",
           "lu:simulate", "ls:sigma-terminates", "ls:init-id", "ls:init-shift", "ls:comp-up",
           "ls:init", "ls:simulate", "lsn:init", "lsn:simulate", "lwsn:expansion",
           "lwsn:typability", "mmt:expansion", "mmt:typability")


def run(lemma_id: str, size: Optional[int] = None, budget: int = 100_000,
        audit: Optional[TraceAudit] = None, sample: Optional[float] = None) -> CheckResult:
    """Run one suite.  `size` defaults to the bound stated for the lemma."""
    if lemma_id not in LEMMAS:
        raise KeyError(lemma_id)
    lem = LEMMAS[lemma_id]
    t0 = time.time()
    r = CheckResult(lemma_id)
    if lemma_id == "kernel:traces":
        own = TraceAudit()
        n = lem.size if size is None else size
        for sub in AUDITED:
            default = _default_size(sub)
            r.absorb(run(sub, min(n, default) if default else None, budget, own, sample))
        audit_into(own, r)
    elif lem.parts:
        for sub in lem.parts:
            r.absorb(run(sub, size if LEMMAS[sub].size else None, budget, audit, sample))
    else:
        ctx = Ctx(lem.size if size is None else size, budget, audit, sample)
        lem.run(ctx, r)
    r.seconds = time.time() - t0
    return r


def _default_size(lemma_id: str) -> int:
    return LEMMAS[lemma_id].size


def audit_into(audit: TraceAudit, r: CheckResult):
    r.checked += audit.traces + audit.mutants
    for msg in audit.invalid:
        r.fail(f"trace does not replay: {msg}")
    for msg in audit.undetected:
        r.fail(f"corruption not detected: {msg}")
    if audit.traces == 0:
        r.fail("no traces were produced")
