"""λυ: De Bruijn terms with substitutions u/, ⇑(s) and ↑."""

from __future__ import annotations

from functools import lru_cache

from .kernel import (Grammar, Prod, ReductionStep, RewriteSystem, SearchExhausted, Trace,
                     map_trace, reachable, shift_trace)
from .nodes import SHIFT, Abs, App, Clo, Idx, Lift, Shift, Slash, contains
from .simple_types import TYPE_POOL, Arrow, TypingError

RULES = ("B", "App", "Lambda", "FVar", "RVar", "FVarLift", "RVarLift", "VarShift")
R1 = frozenset({"B"})
R2 = frozenset(RULES) - R1


def root_rules(t):
    match t:
        case App(Abs(_, b), u):
            return [("B", Clo(b, Slash(u)))]
        case Clo(App(f, a), s):
            return [("App", App(Clo(f, s), Clo(a, s)))]
        case Clo(Abs(ann, b), s):
            return [("Lambda", Abs(ann, Clo(b, Lift(s))))]
        case Clo(Idx(n), Slash(u)):
            return [("FVar", u)] if n == 1 else [("RVar", Idx(n - 1))]
        case Clo(Idx(n), Lift(s)):
            return [("FVarLift", Idx(1))] if n == 1 else [("RVarLift", Clo(Clo(Idx(n - 1), s), SHIFT))]
        case Clo(Idx(n), Shift()):
            return [("VarShift", Idx(n + 1))]
    return []


LU = RewriteSystem("lu", RULES, root_rules)


def lu_rules() -> RewriteSystem:
    return LU


def split_lifts(s):
    """Decompose s as ⇑^i(base) with base a Slash or Shift."""
    i = 0
    while isinstance(s, Lift):
        s, i = s.sub, i + 1
    return i, s


def lifts(i: int, s):
    for _ in range(i):
        s = Lift(s)
    return s


# ---- typing ----------------------------------------------------------------

def lu_typecheck(env, t, lift_rule: str = "general"):
    """Type of t in the De Bruijn environment env (index 1 first).

    lift_rule="literal" enforces the premise Γ ⊢ s ▷ B,Γ of the ⇑ rule as
    printed; "general" accepts any target A,Γ' for Γ ⊢ s ▷ Γ', which is what
    the derivations for ⇑^i(u/) and ⇑^i(↑) require.
    """
    env = tuple(env)
    match t:
        case Idx(n):
            if not 1 <= n <= len(env):
                raise TypingError(f"index {n} out of range for an environment of length {len(env)}")
            return env[n - 1]
        case App(f, a):
            tf, ta = lu_typecheck(env, f, lift_rule), lu_typecheck(env, a, lift_rule)
            if not isinstance(tf, Arrow):
                raise TypingError(f"applying a term of type {tf}")
            if tf.dom != ta:
                raise TypingError(f"argument of type {ta} where {tf.dom} was expected")
            return tf.cod
        case Abs(ann, b):
            if ann is None:
                raise TypingError("binder lacks an annotation")
            return Arrow(ann, lu_typecheck((ann,) + env, b, lift_rule))
        case Clo(b, s):
            return lu_typecheck(lu_sub_typecheck(env, s, lift_rule), b, lift_rule)
    raise TypeError(f"not a λυ term: {t!r}")


def lu_sub_typecheck(env, s, lift_rule: str = "general") -> tuple:
    env = tuple(env)
    match s:
        case Slash(u):
            return (lu_typecheck(env, u, lift_rule),) + env
        case Shift():
            if not env:
                raise TypingError("↑ needs a non-empty environment")
            return env[1:]
        case Lift(s1):
            if not env:
                raise TypingError("⇑ needs a non-empty environment")
            target = lu_sub_typecheck(env[1:], s1, lift_rule)
            if lift_rule == "literal" and (not target or target[1:] != env[1:]):
                raise TypingError("⇑(s) requires s to push exactly one entry")
            return (env[0],) + target
    raise TypeError(f"not a λυ substitution: {s!r}")


# ---- re-indexing functions --------------------------------------------------

def _simple(t, what):
    raise ValueError(f"{what} is only defined on terms without ⇑ and ↑: {t!r}")


def flift_shift(i: int, t):
    """F⇑↑_i: indices above i are incremented."""
    match t:
        case Idx(n):
            return Idx(n + 1) if n > i else t
        case App(f, a):
            return App(flift_shift(i, f), flift_shift(i, a))
        case Abs(ann, b):
            return Abs(ann, flift_shift(i + 1, b))
        case Clo(b, Slash(u)):
            return Clo(flift_shift(i + 1, b), Slash(flift_shift(i, u)))
    return _simple(t, "F⇑↑")


def fshift(i: int, t):
    """F↑_i: i-fold F⇑↑_0."""
    for _ in range(i):
        t = flift_shift(0, t)
    return t


def _flift_cons(k: int, i: int, t):
    match t:
        case Idx(n):
            if n <= k or n > k + i + 1:
                return t
            return Idx(k + 1) if n == k + i + 1 else Idx(n + 1)
        case App(f, a):
            return App(_flift_cons(k, i, f), _flift_cons(k, i, a))
        case Abs(ann, b):
            return Abs(ann, _flift_cons(k + 1, i, b))
        case Clo(b, Slash(u)):
            return Clo(_flift_cons(k + 1, i, b), Slash(_flift_cons(k, i, u)))
    return _simple(t, "F⇑/")


def flift_cons(i: int, t):
    """F⇑/_i: index i+1 moves to 1 and indices 1..i move up by one.

    Binders crossed on the way are respected: under k binders the moved
    window is k+1..k+i+1 and indices ≤ k are untouched.  On an index at the
    top level this is exactly the three-case table (n>i+1 ↦ n, n=i+1 ↦ 1,
    n≤i ↦ n+1).
    """
    return _flift_cons(0, i, t)


def flift_cons_literal(i: int, t):
    """The three-case table applied with i incremented under λ and nothing else.

    Kept to document why it cannot be used: it is not the identity for i=0
    under a binder (λ1 becomes λ2).
    """
    match t:
        case Idx(n):
            if n > i + 1:
                return t
            return Idx(1) if n == i + 1 else Idx(n + 1)
        case App(f, a):
            return App(flift_cons_literal(i, f), flift_cons_literal(i, a))
        case Abs(ann, b):
            return Abs(ann, flift_cons_literal(i + 1, b))
        case Clo(b, Slash(u)):
            return Clo(flift_cons_literal(i + 1, b), Slash(flift_cons_literal(i, u)))
    return _simple(t, "F⇑/")


# ---- Ateb and overline -----------------------------------------------------

def lu_ateb(t, env=None):
    """Expand to a pure De Bruijn term.

    With an environment, binders created for t[⇑^i(u/)] are annotated with
    the type of u (general ⇑ rule); otherwise they are unannotated.
    """
    env = None if env is None else tuple(env)
    match t:
        case Idx():
            return t
        case App(f, a):
            return App(lu_ateb(f, env), lu_ateb(a, env))
        case Abs(ann, b):
            return Abs(ann, lu_ateb(b, None if env is None else (ann,) + env))
        case Clo(b, s):
            i, base = split_lifts(s)
            inner = None
            if env is not None:
                try:
                    inner = lu_sub_typecheck(env, s)
                except TypingError:
                    inner = None
            if isinstance(base, Shift):
                return flift_shift(i, lu_ateb(b, inner))
            u = base.term
            uenv = env[i:] if env is not None and inner is not None else None
            ann = inner[i] if inner is not None else None
            return App(Abs(ann, flift_cons(i, lu_ateb(b, inner))), fshift(i, lu_ateb(u, uenv)))
    raise TypeError(f"not a λυ term: {t!r}")


def lu_overline(t):
    match t:
        case Idx():
            return t
        case App(f, a):
            return App(lu_overline(f), lu_overline(a))
        case Abs(ann, b):
            return Abs(ann, lu_overline(b))
        case Clo(b, s):
            i, base = split_lifts(s)
            if isinstance(base, Shift):
                return flift_shift(i, lu_overline(b))
            return Clo(flift_cons(i, lu_overline(b)), Slash(fshift(i, lu_overline(base.term))))
    raise TypeError(f"not a λυ term: {t!r}")


# ---- skeleton order --------------------------------------------------------

@lru_cache(maxsize=200_000)
def lu_preceq(u, t) -> bool:
    """u ≼ t: u carries ↑ and ⇑ only where t does."""
    if isinstance(u, Idx) and isinstance(t, Idx):
        return True
    if isinstance(t, Clo):
        i, base = split_lifts(t.sub)
        # t' ≼ t'[⇑^i(↑)]; the printed clause only has i = 0
        if isinstance(base, Shift) and lu_preceq(u, t.body):
            return True
    match u, t:
        case App(f, a), App(f2, a2):
            return lu_preceq(f, f2) and lu_preceq(a, a2)
        case Abs(_, b), Abs(_, b2):
            return lu_preceq(b, b2)
        case Clo(b, s), Clo(b2, s2):
            return lu_preceq(b, b2) and lu_sub_preceq(s, s2)
    return False


@lru_cache(maxsize=200_000)
def lu_sub_preceq(s, s2) -> bool:
    if isinstance(s2, Lift) and lu_sub_preceq(s, s2.sub):
        return True
    match s, s2:
        case Shift(), Shift():
            return True
        case Slash(a), Slash(b):
            return lu_preceq(a, b)
        case Lift(a), Lift(b):
            return lu_sub_preceq(a, b)
    return False


def lu_lessdot(u, t) -> bool:
    return lu_overline(u) == lu_overline(t) and lu_preceq(u, t)


# ---- initialization and simulation -----------------------------------------

def lu_init_witness(t, env=None) -> tuple:
    """(u, trace) with Ateb(t) →B* u along trace and u ⋖ t.

    Follows the induction on t: one B step per ⇑^i(u/) node, the other
    cases transport the traces of their subterms.
    """
    a, u, tr = _init(t, None if env is None else tuple(env))
    assert tr.start == a == lu_ateb(t, env) and tr.end == u
    return u, tr


def _init(t, env):
    # returns (Ateb(t), u, trace from Ateb(t) to u)
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
        case Clo(b, s):
            i, base = split_lifts(s)
            inner = None
            if env is not None:
                try:
                    inner = lu_sub_typecheck(env, s)
                except TypingError:
                    pass
            if isinstance(base, Shift):
                a1, u1, tr1 = _init(b, inner)
                tr = map_trace(LU, tr1, lambda v: flift_shift(i, v))
                return flift_shift(i, a1), flift_shift(i, u1), tr
            ann = inner[i] if inner is not None else None
            a1, u1, tr1 = _init(b, inner)
            a2, u2, tr2 = _init(base.term, env[i:] if inner is not None else None)
            m1 = map_trace(LU, tr1, lambda v: flift_cons(i, v))
            m2 = map_trace(LU, tr2, lambda v: fshift(i, v))
            fa2, fu1, fu2 = fshift(i, a2), flift_cons(i, u1), fshift(i, u2)
            s1 = shift_trace(m1, (0, 0), lambda v: App(Abs(ann, v), fa2))
            s2 = shift_trace(m2, (1,), lambda v: App(Abs(ann, fu1), v))
            mid = App(Abs(ann, fu1), fu2)
            u = Clo(fu1, Slash(fu2))
            last = Trace(mid, (ReductionStep("B", (), mid, u),))
            a = App(Abs(ann, flift_cons(i, a1)), fa2)
            return a, u, s1.then(s2).then(last)
    raise TypeError(f"not a λυ term: {t!r}")


def lu_simulate_step(t, step: ReductionStep, u, depth: int = 3):
    """Find u' with u →* u' (exactly one B step when step is B) and u' ⋖ t'."""
    t2 = step.after
    if step.rule in R1:
        for label, path, r in _all(u):
            if label == "B" and lu_lessdot(r, t2):
                return r, Trace(u, (ReductionStep(label, path, u, r),))
        raise SearchExhausted(f"no B step from {u!r} matches")
    found = _search(u, t2, R2, depth)
    if found is None:
        raise SearchExhausted(f"no λυ reduct of {u!r} within {depth} steps is ⋖ {t2!r}")
    return found.end, found


def _all(u):
    from .kernel import redexes
    return redexes(LU, u)


def _search(u, target, rules, depth):
    from collections import deque
    from .kernel import iter_redexes

    if lu_lessdot(u, target):
        return Trace(u)
    seen = {u: None}
    q = deque([(u, 0)])
    while q:
        x, d = q.popleft()
        if d >= depth:
            continue
        for label, path, r in iter_redexes(LU, x, rules):
            if r in seen:
                continue
            seen[r] = (x, ReductionStep(label, path, x, r))
            if lu_lessdot(r, target):
                steps, k = [], r
                while seen[k] is not None:
                    k, st = seen[k]
                    steps.append(st)
                return Trace(u, tuple(reversed(steps)))
            q.append((r, d + 1))
    return None


# ---- enumeration -----------------------------------------------------------

def grammar(max_index: int, simple_only: bool = False) -> Grammar:
    terms = [
        Prod(lambda n: Idx(n), (), tuple(range(1, max_index + 1))),
        Prod(lambda _, f, a: App(f, a), ("t", "t")),
        Prod(lambda _, b: Abs(None, b), ("t",)),
        Prod(lambda _, b, s: Clo(b, s), ("t", "s")),
    ]
    subs = [Prod(lambda _, u: Slash(u), ("t",))]
    if not simple_only:
        subs += [Prod(lambda _, s: Lift(s), ("s",)), Prod(lambda _: SHIFT)]
    return Grammar({"t": terms, "s": subs}, "t")


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
        case Slash(u):
            for u2, tu in typings(env, u, pool):
                yield Slash(u2), (tu,) + env
        case Shift():
            if env:
                yield s, env[1:]
        case Lift(s1):
            if env:
                for s2, target in sub_typings(env[1:], s1, pool):
                    yield Lift(s2), (env[0],) + target


def is_simple(t) -> bool:
    return not contains(t, (Lift, Shift))
