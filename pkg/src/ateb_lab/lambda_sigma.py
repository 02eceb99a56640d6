"""λσ: De Bruijn terms with id, ↑, cons and composition.

Numerals n > 1 are atomic constants standing for 1[↑∘...∘↑].  The rule
`Num` unfolds n[s] into (n-1)[↑][s] so that σ-rules can reach them; the
reverse direction is a canonicalization inside sigma_normalize, not a rule.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache

from .kernel import (FuelExhausted, Grammar, Prod, ReductionStep, RewriteSystem,
                     SearchExhausted, Trace, iter_redexes, normalize, shift_trace)
from .nodes import ID, SHIFT, Abs, App, Clo, Comp, Cons, Id, Idx, Shift, contains, size
from .simple_types import TYPE_POOL, Arrow, TypingError

RULES = ("B", "App", "Lambda", "VarId", "VarCons", "Clos", "IdL", "ShiftId",
         "ShiftCons", "Map", "Ass", "Num")
SIGMA = frozenset(RULES) - {"B"}


def root_rules(t):
    match t:
        case App(Abs(_, b), u):
            return [("B", Clo(b, Cons(u, ID)))]
        case Clo(App(f, a), s):
            return [("App", App(Clo(f, s), Clo(a, s)))]
        case Clo(Abs(ann, b), s):
            return [("Lambda", Abs(ann, Clo(b, Cons(Idx(1), Comp(s, SHIFT)))))]
        case Clo(Idx(1), Id()):
            return [("VarId", Idx(1))]
        case Clo(Idx(1), Cons(u, _)):
            return [("VarCons", u)]
        case Clo(Idx(n), s) if n > 1:
            return [("Num", Clo(Clo(Idx(n - 1), SHIFT), s))]
        case Clo(Clo(b, s), s2):
            return [("Clos", Clo(b, Comp(s, s2)))]
        case Comp(Id(), s):
            return [("IdL", s)]
        case Comp(Shift(), Id()):
            return [("ShiftId", SHIFT)]
        case Comp(Shift(), Cons(_, s)):
            return [("ShiftCons", s)]
        case Comp(Cons(u, s), s2):
            return [("Map", Cons(Clo(u, s2), Comp(s, s2)))]
        case Comp(Comp(s1, s2), s3):
            return [("Ass", Comp(s1, Comp(s2, s3)))]
    return []


LS = RewriteSystem("ls", RULES, root_rules)


def ls_rules() -> RewriteSystem:
    return LS


def sigma_fuel(t) -> int:
    return 10 * size(t) ** 2 + 100


def canonicalize(t):
    """Fold 1[↑∘(↑∘...)] (k shifts) into the numeral k+1, bottom-up."""
    match t:
        case Clo(Idx(1), s):
            k = _shift_chain(s)
            if k:
                return Idx(k + 1)
            return Clo(Idx(1), canonicalize(s))
        case Clo(b, s):
            return Clo(canonicalize(b), canonicalize(s))
        case App(f, a):
            return App(canonicalize(f), canonicalize(a))
        case Abs(ann, b):
            return Abs(ann, canonicalize(b))
        case Cons(u, s):
            return Cons(canonicalize(u), canonicalize(s))
        case Comp(a, b):
            return Comp(canonicalize(a), canonicalize(b))
    return t


def _shift_chain(s) -> int:
    k = 0
    while isinstance(s, Comp) and isinstance(s.left, Shift):
        s, k = s.right, k + 1
    return k + 1 if isinstance(s, Shift) else 0


@lru_cache(maxsize=100_000)
def sigma_normalize(t):
    """σ-normal form (all rules but B), numeral-canonicalized."""
    nf, _ = normalize(LS, t, SIGMA, sigma_fuel(t))
    return canonicalize(nf)


# ---- typing ----------------------------------------------------------------

def ls_typecheck(env, t):
    env = tuple(env)
    match t:
        case Idx(n):
            if not 1 <= n <= len(env):
                raise TypingError(f"index {n} out of range for an environment of length {len(env)}")
            return env[n - 1]
        case App(f, a):
            tf, ta = ls_typecheck(env, f), ls_typecheck(env, a)
            if not isinstance(tf, Arrow):
                raise TypingError(f"applying a term of type {tf}")
            if tf.dom != ta:
                raise TypingError(f"argument of type {ta} where {tf.dom} was expected")
            return tf.cod
        case Abs(ann, b):
            if ann is None:
                raise TypingError("binder lacks an annotation")
            return Arrow(ann, ls_typecheck((ann,) + env, b))
        case Clo(b, s):
            return ls_typecheck(ls_sub_typecheck(env, s), b)
    raise TypeError(f"not a λσ term: {t!r}")


def ls_sub_typecheck(env, s) -> tuple:
    env = tuple(env)
    match s:
        case Id():
            return env
        case Shift():
            if not env:
                raise TypingError("↑ needs a non-empty environment")
            return env[1:]
        case Cons(u, s1):
            return (ls_typecheck(env, u),) + ls_sub_typecheck(env, s1)
        case Comp(s1, s2):
            return ls_sub_typecheck(ls_sub_typecheck(env, s2), s1)
    raise TypeError(f"not a λσ substitution: {s!r}")


# ---- Upshift ---------------------------------------------------------------

def upshift(i: int, j: int, x):
    """Up_{i,j}: a term for a term, a pair (i', s') for a substitution."""
    match x:
        case Idx(n):
            return Idx(n + j) if n > i else x
        case App(f, a):
            return App(upshift(i, j, f), upshift(i, j, a))
        case Abs(ann, b):
            return Abs(ann, upshift(i + 1, j, b))
        case Clo(b, s):
            i2, s2 = upshift(i, j, s)
            return Clo(upshift(i2, j, b), s2)
        case Id():
            return i, x
        case Cons(u, s):
            i2, s2 = upshift(i, j, s)
            return i2 + 1, Cons(upshift(i, j, u), s2)
        case Comp(s1, s2):
            i2, s2b = upshift(i, j, s2)
            i1, s1b = upshift(i2, j, s1)
            return i1, Comp(s1b, s2b)
        case Shift():
            raise ValueError("Upshift is not defined on ↑")
    raise TypeError(f"not a λσ term or substitution: {x!r}")


# ---- Ateb and overline -----------------------------------------------------

def ls_ateb(t, env=None):
    env = None if env is None else tuple(env)
    match t:
        case Idx():
            return t
        case App(f, a):
            return App(ls_ateb(f, env), ls_ateb(a, env))
        case Abs(ann, b):
            return Abs(ann, ls_ateb(b, None if env is None else (ann,) + env))
        case Clo(b, Id()):
            return ls_ateb(b, env)
        case Clo(b, Shift()):
            return upshift(0, 1, ls_ateb(b, env[1:] if env else None))
        case Clo(b, Comp(s1, s2)):
            return ls_ateb(Clo(Clo(b, s1), s2), env)
        case Clo(b, Cons(u, s)):
            ann = None
            if env is not None:
                try:
                    ann = ls_typecheck(env, u)
                except TypingError:
                    pass
            return App(ls_ateb(Clo(Abs(ann, b), s), env), ls_ateb(u, env))
    raise TypeError(f"not a λσ term: {t!r}")


def ls_overline(t):
    match t:
        case Idx():
            return t
        case App(f, a):
            return App(ls_overline(f), ls_overline(a))
        case Abs(ann, b):
            return Abs(ann, ls_overline(b))
        case Clo(b, s):
            n, rest = ls_overline_sub(s)
            body = upshift(0, n, ls_overline(b))
            return body if rest is None else Clo(body, rest)
    raise TypeError(f"not a λσ term: {t!r}")


def ls_overline_sub(s) -> tuple:
    """(n, rest) with rest None standing for the empty substitution."""
    match s:
        case Shift():
            return 1, None
        case Id():
            return 0, None
        case Cons(u, s1):
            n, rest = ls_overline_sub(s1)
            return n, Cons(ls_overline(u), ID if rest is None else rest)
        case Comp(s1, s2):
            n1, r1 = ls_overline_sub(s1)
            n2, r2 = ls_overline_sub(s2)
            if r1 is None and r2 is None:
                return n1 + n2, None
            if r2 is None:
                return n1 + n2, upshift(0, n2, r1)[1]
            if r1 is None:
                return n1 + n2, r2
            return n1 + n2, Comp(upshift(0, n2, r1)[1], r2)
    raise TypeError(f"not a λσ substitution: {s!r}")


# ---- PR, ≼ and ⋖ -----------------------------------------------------------

def ls_pr(x) -> bool:
    """Potentially redexable: contains an application or an abstraction."""
    return contains(x, (App, Abs))


@lru_cache(maxsize=200_000)
def ls_preceq(u, t) -> bool:
    if isinstance(t, Clo) and not ls_pr(t.sub) and ls_preceq(u, t.body):
        return True
    match u, t:
        case Idx(), Idx():
            return True
        case App(f, a), App(f2, a2):
            return ls_preceq(f, f2) and ls_preceq(a, a2)
        case Abs(_, b), Abs(_, b2):
            return ls_preceq(b, b2)
        case Clo(b, s), Clo(b2, s2):
            return ls_preceq(b, b2) and ls_sub_preceq(s, s2)
    return False


@lru_cache(maxsize=200_000)
def ls_sub_preceq(s, t) -> bool:
    if isinstance(t, Comp):
        if not ls_pr(t.right) and ls_sub_preceq(s, t.left):
            return True
        if not ls_pr(t.left) and ls_sub_preceq(s, t.right):
            return True
    if isinstance(s, Id) and not ls_pr(t):
        return True
    match s, t:
        case Shift(), Shift():
            return True
        case Id(), Id():
            return True
        case Cons(a, s1), Cons(b, s2):
            return ls_preceq(a, b) and ls_sub_preceq(s1, s2)
        case Comp(a1, a2), Comp(b1, b2):
            return ls_sub_preceq(a1, b1) and ls_sub_preceq(a2, b2)
    return False


def ls_lessdot(u, t) -> bool:
    return ls_preceq(u, t) and sigma_normalize(u) == sigma_normalize(t)


# ---- initialization --------------------------------------------------------

class WitnessGap(SearchExhausted):
    """The constructive initialization cannot continue with B steps alone."""


def ls_init_witness(t, env=None) -> tuple:
    """(u, trace) with Ateb(t) →B* u, following the induction on t.

    Raises WitnessGap in the t1[t2·s] case when the witness for (λt1)[s]
    is not an abstraction: the B-step alone cannot then build t1[u2·s1].
    """
    a, u, tr = _init(t, None if env is None else tuple(env))
    assert tr.start == a and tr.end == u
    return u, tr


def _init(t, env):
    match t:
        case Idx():
            return t, t, Trace(t)
        case App(f, x):
            a1, u1, tr1 = _init(f, env)
            a2, u2, tr2 = _init(x, env)
            s1 = shift_trace(tr1, (0,), lambda v: App(v, a2))
            s2 = shift_trace(tr2, (1,), lambda v: App(u1, v))
            return App(a1, a2), App(u1, u2), s1.then(s2)
        case Abs(ann, b):
            a1, u1, tr1 = _init(b, None if env is None else (ann,) + env)
            return Abs(ann, a1), Abs(ann, u1), shift_trace(tr1, (0,), lambda v: Abs(ann, v))
        case Clo(b, Id()):
            return _init(b, env)
        case Clo(b, Shift()):
            a1, u1, tr1 = _init(b, env[1:] if env else None)
            from .kernel import map_trace
            tr = map_trace(LS, tr1, lambda v: upshift(0, 1, v))
            return upshift(0, 1, a1), upshift(0, 1, u1), tr
        case Clo(b, Comp(s1, s2)):
            return _init(Clo(Clo(b, s1), s2), env)
        case Clo(b, Cons(x, s)):
            ann = None
            if env is not None:
                try:
                    ann = ls_typecheck(env, x)
                except TypingError:
                    pass
            a1, u1, tr1 = _init(Clo(Abs(ann, b), s), env)
            a2, u2, tr2 = _init(x, env)
            if not isinstance(u1, Abs):
                raise WitnessGap(f"witness of the abstraction part is not a λ: {u1!r}")
            s1 = shift_trace(tr1, (0,), lambda v: App(v, a2))
            s2 = shift_trace(tr2, (1,), lambda v: App(u1, v))
            mid = App(u1, u2)
            u = Clo(u1.body, Cons(u2, ID))
            last = Trace(mid, (ReductionStep("B", (), mid, u),))
            return App(a1, a2), u, s1.then(s2).then(last)
    raise TypeError(f"not a λσ term: {t!r}")


def search_init_witness(t, depth: int = 6, env=None):
    """Breadth-first search, over all rules, for u with Ateb(t) →* u and u ⋖ t."""
    start = ls_ateb(t, env)
    return _bfs(start, lambda r: ls_lessdot(r, t), None, depth)


# ---- simulation ------------------------------------------------------------

def ls_simulate_step(t, step: ReductionStep, u, depth: int = 4):
    t2 = step.after
    if step.rule == "B":
        for label, path, r in iter_redexes(LS, u, {"B"}):
            if ls_lessdot(r, t2):
                return r, Trace(u, (ReductionStep(label, path, u, r),))
        raise SearchExhausted(f"no single B step from {u!r} is ⋖ the reduct")
    found = _bfs(u, lambda r: ls_lessdot(r, t2), SIGMA, depth)
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
        for label, path, r in iter_redexes(LS, x, rules):
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


# ---- enumeration -----------------------------------------------------------

def grammar(max_index: int, shift: bool = True, subs: bool = True) -> Grammar:
    terms = [
        Prod(lambda n: Idx(n), (), tuple(range(1, max_index + 1))),
        Prod(lambda _, f, a: App(f, a), ("t", "t")),
        Prod(lambda _, b: Abs(None, b), ("t",)),
    ]
    sorts = {"t": terms}
    if subs:
        terms.append(Prod(lambda _, b, s: Clo(b, s), ("t", "s")))
        sp = [Prod(lambda _: ID),
              Prod(lambda _, u, s: Cons(u, s), ("t", "s")),
              Prod(lambda _, a, b: Comp(a, b), ("s", "s"))]
        if shift:
            sp.append(Prod(lambda _: SHIFT))
        sorts["s"] = sp
    return Grammar(sorts, "t")


def typings(env, t, pool=TYPE_POOL):
    env = tuple(env)
    match t:
        case Idx(n):
            if 1 <= n <= len(env):
                yield t, env[n - 1]
        case App(f, a):
            for f2, tf in typings(env, f, pool):
                if isinstance(tf, Arrow):
                    for a2, ta in typings(env, a, pool):
                        if ta == tf.dom:
                            yield App(f2, a2), tf.cod
        case Abs(_, b):
            for ann in pool:
                for b2, tb in typings((ann,) + env, b, pool):
                    yield Abs(ann, b2), Arrow(ann, tb)
        case Clo(b, s):
            for s2, env2 in sub_typings(env, s, pool):
                for b2, tb in typings(env2, b, pool):
                    yield Clo(b2, s2), tb


def sub_typings(env, s, pool=TYPE_POOL):
    match s:
        case Id():
            yield s, env
        case Shift():
            if env:
                yield s, env[1:]
        case Cons(u, s1):
            for u2, tu in typings(env, u, pool):
                for s2, target in sub_typings(env, s1, pool):
                    yield Cons(u2, s2), (tu,) + target
        case Comp(s1, s2):
            for s2b, mid in sub_typings(env, s2, pool):
                for s1b, target in sub_typings(mid, s1, pool):
                    yield Comp(s1b, s2b), target
