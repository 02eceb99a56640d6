"""λx: named explicit substitutions t[u/x] with the rules Beta, App, Lambda,
Var1 and Var2."""

from __future__ import annotations

from .kernel import Grammar, Prod, RewriteSystem
from .lambda_pure import NAMES, typecheck_pure
from .nodes import App, Lam, Subst, Var, fresh_name, names_in
from .simple_types import TYPE_POOL, Arrow, TypingError

RULES = ("Beta", "App", "Lambda", "Var1", "Var2")


def free_vars(t) -> frozenset:
    match t:
        case Var(x):
            return frozenset((x,))
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Lam(x, _, b):
            return free_vars(b) - {x}
        case Subst(b, u, x):
            return (free_vars(b) - {x}) | free_vars(u)
    raise TypeError(f"not a λx term: {t!r}")


def rename_free(t, x: str, y: str):
    """Rename free x to y; y must not occur in t."""
    match t:
        case Var(z):
            return Var(y) if z == x else t
        case App(f, a):
            return App(rename_free(f, x, y), rename_free(a, x, y))
        case Lam(z, ann, b):
            return t if z == x else Lam(z, ann, rename_free(b, x, y))
        case Subst(b, u, z):
            b2 = b if z == x else rename_free(b, x, y)
            return Subst(b2, rename_free(u, x, y), z)
    raise TypeError(f"not a λx term: {t!r}")


def alpha_key(t, env=()):
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
        case Subst(b, u, x):
            return ("[]", alpha_key(b, (x,) + env), alpha_key(u, env))
    raise TypeError(f"not a λx term: {t!r}")


def root_rules(t):
    match t:
        case App(Lam(x, _, b), u):
            return [("Beta", Subst(b, u, x))]
        case Subst(App(f, a), v, x):
            return [("App", App(Subst(f, v, x), Subst(a, v, x)))]
        case Subst(Lam(y, ann, b), u, x):
            if y == x or y in free_vars(u):
                # α-convert the bound name before pushing the substitution in
                y2 = fresh_name(y, names_in(t))
                b = rename_free(b, y, y2)
                y = y2
            return [("Lambda", Lam(y, ann, Subst(b, u, x)))]
        case Subst(Var(y), u, x):
            return [("Var1", u)] if y == x else [("Var2", Var(y))]
    return []


LX = RewriteSystem("lx", RULES, root_rules, alpha_key)


def lx_rules() -> RewriteSystem:
    return LX


def lx_typecheck(env: dict, t):
    match t:
        case Subst(b, u, x):
            tu = lx_typecheck(env, u)
            return lx_typecheck({**env, x: tu}, b)
        case Var(_):
            return typecheck_pure(env, t)
        case App(f, a):
            tf, ta = lx_typecheck(env, f), lx_typecheck(env, a)
            if not isinstance(tf, Arrow):
                raise TypingError(f"applying a term of type {tf}")
            if tf.dom != ta:
                raise TypingError(f"argument of type {ta} where {tf.dom} was expected")
            return tf.cod
        case Lam(x, ann, b):
            if ann is None:
                raise TypingError(f"binder {x} lacks an annotation")
            return Arrow(ann, lx_typecheck({**env, x: ann}, b))
    raise TypeError(f"not a λx term: {t!r}")


def lx_ateb(t, env=None):
    """Replace every t[u/x] by (λx.t) u, innermost first.

    With a typing environment the new binders are annotated with the type
    synthesized for u; otherwise they are left unannotated.
    """
    match t:
        case Var(_):
            return t
        case App(f, a):
            return App(lx_ateb(f, env), lx_ateb(a, env))
        case Lam(x, ann, b):
            return Lam(x, ann, lx_ateb(b, None if env is None else {**env, x: ann}))
        case Subst(b, u, x):
            ann = inner = None
            if env is not None:
                try:
                    ann = lx_typecheck(env, u)
                    inner = {**env, x: ann}
                except TypingError:
                    pass
            return App(Lam(x, ann, lx_ateb(b, inner)), lx_ateb(u, env))
    raise TypeError(f"not a λx term: {t!r}")


def count_subst(t) -> int:
    from .nodes import count_nodes
    return count_nodes(t, Subst)


def grammar(names=NAMES) -> Grammar:
    return Grammar({"t": [
        Prod(lambda x: Var(x), (), tuple(names)),
        Prod(lambda _, f, a: App(f, a), ("t", "t")),
        Prod(lambda x, b: Lam(x, None, b), ("t",), tuple(names)),
        Prod(lambda x, b, u: Subst(b, u, x), ("t", "t"), tuple(names)),
    ]}, "t")


def typings(env, t, pool=TYPE_POOL):
    """Annotated versions of t typable in env, with their types."""
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
        case Subst(b, u, x):
            for u2, tu in typings(env, u, pool):
                for b2, tb in typings({**env, x: tu}, b, pool):
                    yield Subst(b2, u2, x), tb
