"""Pure λ-calculus, named and De Bruijn: meta substitution, β, simple typing."""

from __future__ import annotations

from .kernel import Grammar, Prod, RewriteSystem
from .nodes import Abs, App, Idx, Lam, Var, fresh_name, names_in
from .simple_types import Arrow, TYPE_POOL, TypingError

NAMES = ("x", "y", "z")


# ---- named terms -----------------------------------------------------------

def free_vars(t) -> frozenset:
    match t:
        case Var(x):
            return frozenset((x,))
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Lam(x, _, b):
            return free_vars(b) - {x}
    raise TypeError(f"not a pure named term: {t!r}")


def rename_free(t, x: str, y: str):
    """Replace free occurrences of x by y, where y occurs nowhere in t."""
    match t:
        case Var(z):
            return Var(y) if z == x else t
        case App(f, a):
            return App(rename_free(f, x, y), rename_free(a, x, y))
        case Lam(z, ann, b):
            return t if z == x else Lam(z, ann, rename_free(b, x, y))
    raise TypeError(f"not a pure named term: {t!r}")


def subst_meta(t, x: str, u):
    """Capture-avoiding t{x := u}; binders are renamed from a fresh supply."""
    fv_u = free_vars(u)
    avoid = names_in(t) | names_in(u) | {x}

    def go(t):
        match t:
            case Var(z):
                return u if z == x else t
            case App(f, a):
                return App(go(f), go(a))
            case Lam(z, ann, b):
                if z == x:
                    return t
                if z in fv_u and x in free_vars(b):
                    z2 = fresh_name(z, avoid)
                    avoid.add(z2)
                    return Lam(z2, ann, go(rename_free(b, z, z2)))
                return Lam(z, ann, go(b))
        raise TypeError(f"not a pure named term: {t!r}")

    return go(t)


def alpha_key(t, env=()):
    """Nameless canonical form: equal keys iff α-equivalent."""
    match t:
        case Var(x):
            for k, y in enumerate(env):
                if y == x:
                    return ("b", k)
            return ("f", x)
        case App(f, a):
            return ("@", alpha_key(f, env), alpha_key(a, env))
        case Lam(x, ann, b):
            return ("λ", ann, alpha_key(b, (x,) + env))
    raise TypeError(f"not a pure named term: {t!r}")


def alpha_eq(a, b) -> bool:
    return alpha_key(a) == alpha_key(b)


def beta_root_named(t):
    if isinstance(t, App) and isinstance(t.fun, Lam):
        return [("Beta", subst_meta(t.fun.body, t.fun.name, t.arg))]
    return []


PURE_NAMED = RewriteSystem("pure", ("Beta",), beta_root_named, alpha_key)


# ---- De Bruijn terms -------------------------------------------------------

def db_shift(t, d: int, cutoff: int = 0):
    """Add d to every index above cutoff."""
    match t:
        case Idx(n):
            return Idx(n + d) if n > cutoff else t
        case App(f, a):
            return App(db_shift(f, d, cutoff), db_shift(a, d, cutoff))
        case Abs(ann, b):
            return Abs(ann, db_shift(b, d, cutoff + 1))
    raise TypeError(f"not a pure De Bruijn term: {t!r}")


def db_subst(t, j: int, u):
    """t{j := u} with the usual index adjustment under binders."""
    match t:
        case Idx(n):
            return u if n == j else t
        case App(f, a):
            return App(db_subst(f, j, u), db_subst(a, j, u))
        case Abs(ann, b):
            return Abs(ann, db_subst(b, j + 1, db_shift(u, 1)))
    raise TypeError(f"not a pure De Bruijn term: {t!r}")


def db_beta(body, arg):
    """Contract (λ body) arg."""
    return db_shift(db_subst(body, 1, db_shift(arg, 1)), -1)


def beta_root_db(t):
    if isinstance(t, App) and isinstance(t.fun, Abs):
        return [("Beta", db_beta(t.fun.body, t.arg))]
    return []


PURE_DB = RewriteSystem("pure-db", ("Beta",), beta_root_db)


def beta_step_all(t) -> list:
    """All single β-contractions of a named or De Bruijn pure term."""
    from .kernel import redexes

    sys = PURE_DB if _is_db(t) else PURE_NAMED
    return [r for _, _, r in redexes(sys, t)]


def _is_db(t) -> bool:
    while isinstance(t, App):
        t = t.fun
    return isinstance(t, (Idx, Abs))


def to_db(t, env=(), free=()):
    """Named to De Bruijn; free variables are numbered after the binders in `free` order."""
    match t:
        case Var(x):
            if x in env:
                return Idx(env.index(x) + 1)
            if x not in free:
                raise ValueError(f"free variable {x} missing from the free list")
            return Idx(len(env) + free.index(x) + 1)
        case App(f, a):
            return App(to_db(f, env, free), to_db(a, env, free))
        case Lam(x, ann, b):
            return Abs(ann, to_db(b, (x,) + env, free))
    raise TypeError(f"not a pure named term: {t!r}")


# ---- typing ----------------------------------------------------------------

def typecheck_pure(env, t):
    """Synthesize the type of a fully annotated pure term.

    `env` is a dict for named terms and a sequence (index 1 first) for
    De Bruijn terms.
    """
    match t:
        case Var(x):
            if x not in env:
                raise TypingError(f"unbound variable {x}")
            return env[x]
        case Idx(n):
            if not 1 <= n <= len(env):
                raise TypingError(f"index {n} out of range")
            return env[n - 1]
        case App(f, a):
            tf = typecheck_pure(env, f)
            ta = typecheck_pure(env, a)
            if not isinstance(tf, Arrow):
                raise TypingError(f"applying a term of type {tf}")
            if tf.dom != ta:
                raise TypingError(f"argument of type {ta} where {tf.dom} was expected")
            return tf.cod
        case Lam(x, ann, b):
            if ann is None:
                raise TypingError(f"binder {x} lacks an annotation")
            return Arrow(ann, typecheck_pure({**env, x: ann}, b))
        case Abs(ann, b):
            if ann is None:
                raise TypingError("binder lacks an annotation")
            return Arrow(ann, typecheck_pure((ann,) + tuple(env), b))
    raise TypeError(f"not a pure term: {t!r}")


# ---- enumeration -----------------------------------------------------------

def named_grammar(names=NAMES) -> Grammar:
    return Grammar({"t": [
        Prod(lambda x: Var(x), (), tuple(names)),
        Prod(lambda _, f, a: App(f, a), ("t", "t")),
        Prod(lambda x, b: Lam(x, None, b), ("t",), tuple(names)),
    ]}, "t")


def db_grammar(max_index: int) -> Grammar:
    return Grammar({"t": [
        Prod(lambda n: Idx(n), (), tuple(range(1, max_index + 1))),
        Prod(lambda _, f, a: App(f, a), ("t", "t")),
        Prod(lambda _, b: Abs(None, b), ("t",)),
    ]}, "t")


def typings_named(env, t, pool=TYPE_POOL):
    """All annotations of the unannotated binders of t that typecheck in env,
    as (annotated term, type) pairs."""
    match t:
        case Var(x):
            if x in env:
                yield t, env[x]
        case App(f, a):
            for f2, tf in typings_named(env, f, pool):
                if isinstance(tf, Arrow):
                    for a2, ta in typings_named(env, a, pool):
                        if ta == tf.dom:
                            yield App(f2, a2), tf.cod
        case Lam(x, _, b):
            for ann in pool:
                for b2, tb in typings_named({**env, x: ann}, b, pool):
                    yield Lam(x, ann, b2), Arrow(ann, tb)


def typings_db(env, t, pool=TYPE_POOL):
    match t:
        case Idx(n):
            if 1 <= n <= len(env):
                yield t, env[n - 1]
        case App(f, a):
            for f2, tf in typings_db(env, f, pool):
                if isinstance(tf, Arrow):
                    for a2, ta in typings_db(env, a, pool):
                        if ta == tf.dom:
                            yield App(f2, a2), tf.cod
        case Abs(_, b):
            for ann in pool:
                for b2, tb in typings_db((ann,) + tuple(env), b, pool):
                    yield Abs(ann, b2), Arrow(ann, tb)
