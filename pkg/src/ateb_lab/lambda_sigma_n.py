"""λσn: the named variant of λσ, without ↑.

Terms are Var, App, Lam and Clo; substitutions are Id, NCons (t/x)·s and
Comp.  The Lambda rule always renames the bound variable to a name that does
not occur in the redex, so σ-normal forms are only meaningful up to α.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from itertools import count

from .kernel import (Grammar, Prod, ReductionStep, RewriteSystem, SearchExhausted,
                     Trace, iter_redexes, normalize, shift_trace)
from .lambda_pure import NAMES
from .lambda_sigma import WitnessGap
from .nodes import ID, App, Clo, Comp, Id, Lam, NCons, Var, contains, fresh_name, names_in, size
from .simple_types import TYPE_POOL, Arrow, TypingError

RULES = ("B", "App", "Lambda", "VarId", "VarCons1", "VarCons2", "Clos", "IdL", "Map", "Ass")
SIGMA = frozenset(RULES) - {"B"}


# ---- binding structure -----------------------------------------------------

def free_vars(t) -> frozenset:
    match t:
        case Var(x):
            return frozenset((x,))
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Lam(x, _, b):
            return free_vars(b) - {x}
        case Clo(b, s):
            return _through(s, free_vars(b))
    raise TypeError(f"not a λσn term: {t!r}")


def _through(s, names: frozenset) -> frozenset:
    """Free names of t[s] given the free names of t."""
    match s:
        case Id():
            return names
        case NCons(u, x, s1):
            return free_vars(u) | _through(s1, names - {x})
        case Comp(s1, s2):
            return _through(s2, _through(s1, names))
    raise TypeError(f"not a λσn substitution: {s!r}")


def sub_free_vars(s) -> frozenset:
    return _through(s, frozenset())


def alpha_key(t):
    """Canonical form up to renaming of λ and cons binders."""
    ids = count()
    return _key(t, lambda x: ("f", x), ids)


def _key(t, env, ids):
    match t:
        case Var(x):
            return env(x)
        case App(f, a):
            return ("@", _key(f, env, ids), _key(a, env, ids))
        case Lam(x, ann, b):
            k = next(ids)
            return ("λ", k, ann, _key(b, _bind(env, x, k), ids))
        case Clo(b, s):
            ks, inner = _sub_key(s, env, ids)
            return ("[]", _key(b, inner, ids), ks)
    raise TypeError(f"not a λσn term: {t!r}")


def _bind(env, x, k):
    return lambda y: ("b", k) if y == x else env(y)


def _sub_key(s, env, ids):
    """(key, resolver for names of the body under s)."""
    match s:
        case Id():
            return ("id",), env
        case NCons(u, x, s1):
            ku = _key(u, env, ids)
            k = next(ids)
            ks, inner = _sub_key(s1, env, ids)
            return ("·", k, ku, ks), _bind(inner, x, k)
        case Comp(s1, s2):
            k2, mid = _sub_key(s2, env, ids)
            k1, inner = _sub_key(s1, mid, ids)
            return ("∘", k1, k2), inner
    raise TypeError(f"not a λσn substitution: {s!r}")


def alpha_eq(a, b) -> bool:
    return alpha_key(a) == alpha_key(b)


# ---- rules -----------------------------------------------------------------

def root_rules(t):
    match t:
        case App(Lam(x, _, b), u):
            return [("B", Clo(b, NCons(u, x, ID)))]
        case Clo(App(f, a), s):
            return [("App", App(Clo(f, s), Clo(a, s)))]
        case Clo(Lam(x, ann, b), s):
            y = fresh_name(x, names_in(t))
            return [("Lambda", Lam(y, ann, Clo(b, NCons(Var(y), x, s))))]
        case Clo(Var(_), Id()):
            return [("VarId", t.body)]
        case Clo(Var(x), NCons(u, y, s)):
            return [("VarCons1", u)] if x == y else [("VarCons2", Clo(t.body, s))]
        case Clo(Clo(b, s), s2):
            return [("Clos", Clo(b, Comp(s, s2)))]
        case Comp(Id(), s):
            return [("IdL", s)]
        case Comp(NCons(u, x, s), s2):
            return [("Map", NCons(Clo(u, s2), x, Comp(s, s2)))]
        case Comp(Comp(s1, s2), s3):
            return [("Ass", Comp(s1, Comp(s2, s3)))]
    return []


def _system_key(t):
    if isinstance(t, (Id, NCons, Comp)):
        return ("sub", alpha_key(Clo(Var("_"), t)))
    return alpha_key(t)


LSN = RewriteSystem("lsn", RULES, root_rules, _system_key)


def lsn_rules() -> RewriteSystem:
    return LSN


def sigma_fuel(t) -> int:
    return 10 * size(t) ** 2 + 100


@lru_cache(maxsize=100_000)
def lsn_sigma_normalize(t):
    """A σ-normal form of t; compare results with alpha_eq."""
    nf, _ = normalize(LSN, t, SIGMA, sigma_fuel(t))
    return nf


@lru_cache(maxsize=100_000)
def sigma_key(t):
    return alpha_key(lsn_sigma_normalize(t))


# ---- typing ----------------------------------------------------------------

def lsn_typecheck(env: dict, t):
    match t:
        case Var(x):
            if x not in env:
                raise TypingError(f"unbound variable {x}")
            return env[x]
        case App(f, a):
            tf, ta = lsn_typecheck(env, f), lsn_typecheck(env, a)
            if not isinstance(tf, Arrow):
                raise TypingError(f"applying a term of type {tf}")
            if tf.dom != ta:
                raise TypingError(f"argument of type {ta} where {tf.dom} was expected")
            return tf.cod
        case Lam(x, ann, b):
            if ann is None:
                raise TypingError(f"binder {x} lacks an annotation")
            return Arrow(ann, lsn_typecheck({**env, x: ann}, b))
        case Clo(b, s):
            return lsn_typecheck(lsn_sub_typecheck(env, s), b)
    raise TypeError(f"not a λσn term: {t!r}")


def lsn_sub_typecheck(env: dict, s) -> dict:
    match s:
        case Id():
            return dict(env)
        case NCons(u, x, s1):
            return {**lsn_sub_typecheck(env, s1), x: lsn_typecheck(env, u)}
        case Comp(s1, s2):
            return lsn_sub_typecheck(lsn_sub_typecheck(env, s2), s1)
    raise TypeError(f"not a λσn substitution: {s!r}")


# ---- Ateb ------------------------------------------------------------------

def lsn_ateb(t, env=None):
    match t:
        case Var(_):
            return t
        case App(f, a):
            return App(lsn_ateb(f, env), lsn_ateb(a, env))
        case Lam(x, ann, b):
            return Lam(x, ann, lsn_ateb(b, None if env is None else {**env, x: ann}))
        case Clo(b, Id()):
            return lsn_ateb(b, env)
        case Clo(b, Comp(s1, s2)):
            return lsn_ateb(Clo(Clo(b, s1), s2), env)
        case Clo(b, NCons(u, x, s)):
            ann = _annot(env, u)
            return App(lsn_ateb(Clo(Lam(x, ann, b), s), env), lsn_ateb(u, env))
    raise TypeError(f"not a λσn term: {t!r}")


def _annot(env, u):
    if env is None:
        return None
    try:
        return lsn_typecheck(env, u)
    except TypingError:
        return None


# ---- PR, ≼ and ⋖ -----------------------------------------------------------

def lsn_pr(x) -> bool:
    return contains(x, (App, Lam))


@lru_cache(maxsize=200_000)
def lsn_preceq(u, t) -> bool:
    if isinstance(t, Clo) and not lsn_pr(t.sub) and lsn_preceq(u, t.body):
        return True
    match u, t:
        case Var(), Var():
            return True
        case App(f, a), App(f2, a2):
            return lsn_preceq(f, f2) and lsn_preceq(a, a2)
        case Lam(_, _, b), Lam(_, _, b2):
            return lsn_preceq(b, b2)
        case Clo(b, s), Clo(b2, s2):
            return lsn_preceq(b, b2) and lsn_sub_preceq(s, s2)
    return False


@lru_cache(maxsize=200_000)
def lsn_sub_preceq(s, t) -> bool:
    if isinstance(t, Comp):
        if not lsn_pr(t.right) and lsn_sub_preceq(s, t.left):
            return True
        if not lsn_pr(t.left) and lsn_sub_preceq(s, t.right):
            return True
    if isinstance(s, Id) and not lsn_pr(t):
        return True
    match s, t:
        case Id(), Id():
            return True
        case NCons(a, _, s1), NCons(b, _, s2):
            return lsn_preceq(a, b) and lsn_sub_preceq(s1, s2)
        case Comp(a1, a2), Comp(b1, b2):
            return lsn_sub_preceq(a1, b1) and lsn_sub_preceq(a2, b2)
    return False


def lsn_lessdot(u, t) -> bool:
    return lsn_preceq(u, t) and sigma_key(u) == sigma_key(t)


def egal_sigma_holds(t, t2, s, s2, x: str, u, y: str | None = None) -> bool:
    """The named substitution-swap property for one instance.

    With y fresh: if σ(t[(y/x)·s]) =α σ(t2[(y/x)·s2]) then
    σ(t[(u/x)·s]) =α σ(t2[(u/x)·s2]).  Vacuously true when the premise fails.
    """
    if y is None:
        avoid = set().union(*(names_in(z) for z in (t, t2, s, s2, u))) | {x}
        y = fresh_name("y", avoid)
    pre = sigma_key(Clo(t, NCons(Var(y), x, s))) == sigma_key(Clo(t2, NCons(Var(y), x, s2)))
    if not pre:
        return True
    return sigma_key(Clo(t, NCons(u, x, s))) == sigma_key(Clo(t2, NCons(u, x, s2)))


# ---- initialization --------------------------------------------------------

def lsn_init_witness(t, env=None) -> tuple:
    """(u, trace) with Ateb(t) →B* u, following the induction on t."""
    a, u, tr = _init(t, None if env is None else dict(env))
    assert tr.start == a and tr.end == u
    return u, tr


def _init(t, env):
    match t:
        case Var(_):
            return t, t, Trace(t)
        case App(f, x):
            a1, u1, tr1 = _init(f, env)
            a2, u2, tr2 = _init(x, env)
            s1 = shift_trace(tr1, (0,), lambda v: App(v, a2))
            s2 = shift_trace(tr2, (1,), lambda v: App(u1, v))
            return App(a1, a2), App(u1, u2), s1.then(s2)
        case Lam(x, ann, b):
            a1, u1, tr1 = _init(b, None if env is None else {**env, x: ann})
            return Lam(x, ann, a1), Lam(x, ann, u1), shift_trace(tr1, (0,), lambda v: Lam(x, ann, v))
        case Clo(b, Id()):
            return _init(b, env)
        case Clo(b, Comp(s1, s2)):
            return _init(Clo(Clo(b, s1), s2), env)
        case Clo(b, NCons(x, name, s)):
            a1, u1, tr1 = _init(Clo(Lam(name, _annot(env, x), b), s), env)
            a2, u2, tr2 = _init(x, env)
            if not isinstance(u1, Lam):
                raise WitnessGap(f"witness of the abstraction part is not a λ: {u1!r}")
            s1 = shift_trace(tr1, (0,), lambda v: App(v, a2))
            s2 = shift_trace(tr2, (1,), lambda v: App(u1, v))
            mid = App(u1, u2)
            u = Clo(u1.body, NCons(u2, u1.name, ID))
            last = Trace(mid, (ReductionStep("B", (), mid, u),))
            return App(a1, a2), u, s1.then(s2).then(last)
    raise TypeError(f"not a λσn term: {t!r}")


def search_init_witness(t, depth: int = 6, env=None):
    start = lsn_ateb(t, env)
    return _bfs(start, lambda r: lsn_lessdot(r, t), None, depth)


# ---- simulation ------------------------------------------------------------

def lsn_simulate_step(t, step: ReductionStep, u, depth: int = 4):
    t2 = step.after
    if step.rule == "B":
        for label, path, r in iter_redexes(LSN, u, {"B"}):
            if lsn_lessdot(r, t2):
                return r, Trace(u, (ReductionStep(label, path, u, r),))
        raise SearchExhausted(f"no single B step from {u!r} is ⋖ the reduct")
    found = _bfs(u, lambda r: lsn_lessdot(r, t2), SIGMA, depth)
    if found is None:
        raise SearchExhausted(f"no σ-reduct of {u!r} within {depth} steps is ⋖ the reduct")
    return found.end, found


def _bfs(u, goal, rules, depth):
    if goal(u):
        return Trace(u)
    seen = {u: None}
    q = deque([(u, 0)])
    while q:
        x, d = q.popleft()
        if d >= depth:
            continue
        for label, path, r in iter_redexes(LSN, x, rules):
            if r in seen:
                continue
            seen[r] = (x, ReductionStep(label, path, x, r))
            if goal(r):
                steps, k = [], r
                while seen[k] is not None:
                    k, st = seen[k]
                    steps.append(st)
                return Trace(u, tuple(reversed(steps)))
            q.append((r, d + 1))
    return None


# ---- freshness audit -------------------------------------------------------

def audit_step(step: ReductionStep) -> str | None:
    """None if the step captures nothing, else a description of the problem.

    Free names may disappear (VarCons2 erases) but never appear, and a
    Lambda step must bind a name absent from its redex.
    """
    from .nodes import subterm_at
    before, after = subterm_at(step.before, step.at), subterm_at(step.after, step.at)
    extra = _fv_any(after) - _fv_any(before)
    if extra:
        return f"{step.rule} introduced free names {sorted(extra)}"
    if step.rule == "Lambda" and after.name in names_in(before):
        return f"Lambda reused the name {after.name}"
    return None


def _fv_any(x):
    return sub_free_vars(x) if isinstance(x, (Id, NCons, Comp)) else free_vars(x)


# ---- enumeration -----------------------------------------------------------

def grammar(names=NAMES, subs: bool = True) -> Grammar:
    terms = [
        Prod(lambda x: Var(x), (), tuple(names)),
        Prod(lambda _, f, a: App(f, a), ("t", "t")),
        Prod(lambda x, b: Lam(x, None, b), ("t",), tuple(names)),
    ]
    sorts = {"t": terms}
    if subs:
        terms.append(Prod(lambda _, b, s: Clo(b, s), ("t", "s")))
        sorts["s"] = [Prod(lambda _: ID),
                      Prod(lambda x, u, s: NCons(u, x, s), ("t", "s"), tuple(names)),
                      Prod(lambda _, a, b: Comp(a, b), ("s", "s"))]
    return Grammar(sorts, "t")


def typings(env: dict, t, pool=TYPE_POOL):
    match t:
        case Var(x):
            if x in env:
                yield t, env[x]
        case App(f, a):
            for f2, tf in typings(env, f, pool):
                if isinstance(tf, Arrow):
                    for a2, ta in typings(env, a, pool):
                        if ta == tf.dom:
                            yield App(f2, a2), tf.cod
        case Lam(x, _, b):
            for ann in pool:
                for b2, tb in typings({**env, x: ann}, b, pool):
                    yield Lam(x, ann, b2), Arrow(ann, tb)
        case Clo(b, s):
            for s2, env2 in sub_typings(env, s, pool):
                for b2, tb in typings(env2, b, pool):
                    yield Clo(b2, s2), tb


def sub_typings(env: dict, s, pool=TYPE_POOL):
    match s:
        case Id():
            yield s, dict(env)
        case NCons(u, x, s1):
            for u2, tu in typings(env, u, pool):
                for s2, target in sub_typings(env, s1, pool):
                    yield NCons(u2, x, s2), {**target, x: tu}
        case Comp(s1, s2):
            for s2b, mid in sub_typings(env, s2, pool):
                for s1b, target in sub_typings(mid, s1, pool):
                    yield Comp(s1b, s2b), target
