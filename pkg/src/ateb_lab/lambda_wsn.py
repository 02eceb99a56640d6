"""λwsn: named explicit substitutions t[x,u,Γ,Δ] with explicit weakening Γt.

Name sets are frozensets.  Typing environments are exact: Ax only types x
in the environment {x:A}, so every variable in the environment is used or
explicitly weakened.  The rules marked as equivalences are oriented left to
right.
"""

from __future__ import annotations

from itertools import combinations, product

from .kernel import Grammar, Prod, RewriteSystem, iter_redexes
from .lambda_pure import NAMES
from .nodes import App, Lam, Var, Weak, WSub
from .simple_types import TYPE_POOL, Arrow, TypingError

RULES = ("b", "a", "e1", "n1", "n2", "c1", "c2", "c3", "f", "e2", "d", "∅", "c4")
C_RULES = ("c1", "c2", "c3", "c4")
EMPTY = frozenset()


def free_vars(t) -> frozenset:
    match t:
        case Var(x):
            return frozenset((x,))
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Lam(x, _, b):
            return free_vars(b) - {x}
        case Weak(names, b):
            return names | free_vars(b)
        case WSub(b, x, u, g, d):
            return (free_vars(b) - {x}) | free_vars(u) | g | d
    raise TypeError(f"not a λwsn term: {t!r}")


def alpha_key(t, env=()):
    def ref(x):
        for k, y in enumerate(env):
            if y == x:
                return ("b", k)
        return ("f", x)

    def refs(names):
        return frozenset(map(ref, names))

    match t:
        case Var(x):
            return ref(x)
        case App(f, a):
            return ("@", alpha_key(f, env), alpha_key(a, env))
        case Lam(x, ann, b):
            return ("λ", ann, alpha_key(b, (x,) + env))
        case Weak(names, b):
            return ("w", refs(names), alpha_key(b, env))
        case WSub(b, x, u, g, d):
            return ("[]", alpha_key(b, (x,) + env), alpha_key(u, env), refs(g), refs(d))
    raise TypeError(f"not a λwsn term: {t!r}")


# ---- rules -----------------------------------------------------------------

def _unweak(t):
    """Maximal match of Γt: (Γ, t), with Γ empty when t is not a weakening."""
    return (t.names, t.body) if isinstance(t, Weak) else (EMPTY, t)


def _c_rules(b, x, v, g, d):
    t, y, u, lam, phi = b.body, b.name, b.repl, b.gamma, b.delta
    p, l = x in phi - g, x in lam - g
    inner_u = WSub(u, x, v, g - lam, d | (lam - g))
    out = []
    if p and not l:
        out.append(("c1", WSub(t, y, inner_u, lam & g, d | (phi - {x}))))
    if not p and not l:
        out.append(("c2", WSub(WSub(t, x, v, (g - phi) | {y}, d | (phi - g)),
                               y, inner_u, lam & g, g & phi)))
    if p and l:
        out.append(("c3", WSub(t, y, u, (lam - {x}) | d, (phi - {x}) | d)))
    if l and not p:
        out.append(("c4", WSub(WSub(t, x, v, (g - phi) | {y}, d | (phi - g)),
                               y, u, d | (lam - {x}), g & phi)))
    return out


def root_rules(t):
    out = []
    match t:
        case App(f, a):
            dl, fn = _unweak(f)
            if isinstance(fn, Lam):
                gm, u = _unweak(a)
                out.append(("b", WSub(fn.body, fn.name, u, gm, dl)))
        case WSub(b, x, v, g, d):
            match b:
                case App(f, a):
                    out.append(("a", App(WSub(f, x, v, g, d), WSub(a, x, v, g, d))))
                case Weak(lam, body):
                    if x in lam - g:
                        out.append(("e1", Weak(d | (lam - {x}), body)))
                    else:
                        out.append(("e2", Weak(g & lam, WSub(body, x, v, g - lam, d | (lam - g)))))
                case Var(y):
                    if x != y or y in g:
                        out.append(("n1", Weak(d, b)))
                    if x == y:
                        out.append(("n2", Weak(g, v)))
                case WSub():
                    out.extend(_c_rules(b, x, v, g, d))
                case Lam(y, ann, body):
                    out.append(("f", Lam(y, ann, WSub(body, x, v, g | {y}, d))))
        case Weak(g, b):
            if isinstance(b, Weak):
                out.append(("d", Weak(g | b.names, b.body)))
            if not g:
                out.append(("∅", b))
    order = {r: i for i, r in enumerate(RULES)}
    return sorted(out, key=lambda p: order[p[0]])


LWSN = RewriteSystem("lwsn", RULES, root_rules, alpha_key)


def lwsn_rules() -> RewriteSystem:
    return LWSN


def c_overlaps(t) -> list:
    """Positions where two of the c-rules fire at once (diagnostics)."""
    seen = {}
    for label, path, _ in iter_redexes(LWSN, t, set(C_RULES)):
        seen.setdefault(path, []).append(label)
    return [(p, ls) for p, ls in seen.items() if len(ls) > 1]


# ---- typing ----------------------------------------------------------------

def _side(msg):
    return TypingError(msg, kind="side-condition")


def _minus(env: dict, names) -> dict:
    return {k: v for k, v in env.items() if k not in names}


def _extend(env: dict, x: str, ty) -> dict:
    if x in env:
        raise _side(f"{x} is already in the environment")
    return {**env, x: ty}


def lwsn_typecheck(env: dict, t, allow_sub: bool = True):
    """Type of t in exactly the environment env.

    Side-condition failures (set inclusions, exactness of Ax, duplicate
    bindings) raise TypingError with kind "side-condition"; clashes between
    types raise kind "mismatch".
    """
    match t:
        case Var(x):
            if set(env) != {x}:
                raise _side(f"Ax needs exactly {{{x}}} but the environment is {{{', '.join(sorted(env))}}}")
            return env[x]
        case App(f, a):
            tf = lwsn_typecheck(env, f, allow_sub)
            ta = lwsn_typecheck(env, a, allow_sub)
            if not isinstance(tf, Arrow):
                raise TypingError(f"applying a term of type {tf}")
            if tf.dom != ta:
                raise TypingError(f"argument of type {ta} where {tf.dom} was expected")
            return tf.cod
        case Lam(x, ann, b):
            if ann is None:
                raise TypingError(f"binder {x} lacks an annotation")
            return Arrow(ann, lwsn_typecheck(_extend(env, x, ann), b, allow_sub))
        case Weak(names, b):
            if not names <= set(env):
                raise _side(f"weakening {{{', '.join(sorted(names - set(env)))}}} not in the environment")
            return lwsn_typecheck(_minus(env, names), b, allow_sub)
        case WSub(b, x, u, g, d):
            if not allow_sub:
                raise TypingError("substitution outside the pure fragment")
            if not (g | d) <= set(env):
                raise _side("substitution sets are not included in the environment")
            tu = lwsn_typecheck(_minus(env, g), u, allow_sub)
            return lwsn_typecheck(_extend(_minus(env, d), x, tu), b, allow_sub)
    raise TypeError(f"not a λwsn term: {t!r}")


def domain(t):
    """The only environment domain in which t can be typed, or None."""
    match t:
        case Var(x):
            return frozenset((x,))
        case App(f, a):
            df, da = domain(f), domain(a)
            return df if df is not None and df == da else None
        case Lam(x, _, b):
            db = domain(b)
            return db - {x} if db is not None and x in db else None
        case Weak(names, b):
            db = domain(b)
            return db | names if db is not None and not db & names else None
        case WSub(b, x, u, g, d):
            db, du = domain(b), domain(u)
            if db is None or du is None or x not in db or du & g or (db - {x}) & d:
                return None
            pi = du | g
            return pi if pi == (db - {x}) | d else None
    raise TypeError(f"not a λwsn term: {t!r}")


# ---- Ateb ------------------------------------------------------------------

def lwsn_ateb(t, env=None):
    match t:
        case Var(_):
            return t
        case App(f, a):
            return App(lwsn_ateb(f, env), lwsn_ateb(a, env))
        case Lam(x, ann, b):
            inner = None if env is None else {**env, x: ann}
            return Lam(x, ann, lwsn_ateb(b, inner))
        case Weak(names, b):
            return Weak(names, lwsn_ateb(b, None if env is None else _minus(env, names)))
        case WSub(b, x, u, g, d):
            ann = inner = None
            if env is not None:
                try:
                    ann = lwsn_typecheck(_minus(env, g), u)
                    inner = {**_minus(env, d), x: ann}
                except TypingError:
                    pass
            outer_u = None if env is None else _minus(env, g)
            return App(Weak(d, Lam(x, ann, lwsn_ateb(b, inner))), Weak(g, lwsn_ateb(u, outer_u)))
    raise TypeError(f"not a λwsn term: {t!r}")


# ---- enumeration -----------------------------------------------------------

def name_sets(names=NAMES) -> tuple:
    return tuple(frozenset(c) for k in range(len(names) + 1) for c in combinations(names, k))


def grammar(names=NAMES, subs: bool = True) -> Grammar:
    sets = name_sets(names)
    terms = [
        Prod(lambda x: Var(x), (), tuple(names)),
        Prod(lambda _, f, a: App(f, a), ("t", "t")),
        Prod(lambda x, b: Lam(x, None, b), ("t",), tuple(names)),
        Prod(lambda g, b: Weak(g, b), ("t",), sets),
    ]
    if subs:
        terms.append(Prod(lambda p, b, u: WSub(b, p[0], u, p[1], p[2]), ("t", "t"),
                          tuple(product(names, sets, sets))))
    return Grammar({"t": terms}, "t")


def typings(env: dict, t, pool=TYPE_POOL):
    """Annotated versions of t typable in exactly env, with their types."""
    match t:
        case Var(x):
            if set(env) == {x}:
                yield t, env[x]
        case App(f, a):
            for f2, tf in typings(env, f, pool):
                if isinstance(tf, Arrow):
                    for a2, ta in typings(env, a, pool):
                        if ta == tf.dom:
                            yield App(f2, a2), tf.cod
        case Lam(x, _, b):
            if x not in env:
                for ann in pool:
                    for b2, tb in typings({**env, x: ann}, b, pool):
                        yield Lam(x, ann, b2), Arrow(ann, tb)
        case Weak(names, b):
            if names <= set(env):
                for b2, tb in typings(_minus(env, names), b, pool):
                    yield Weak(names, b2), tb
        case WSub(b, x, u, g, d):
            if (g | d) <= set(env):
                inner = _minus(env, d)
                if x not in inner:
                    for u2, tu in typings(_minus(env, g), u, pool):
                        for b2, tb in typings({**inner, x: tu}, b, pool):
                            yield WSub(b2, x, u2, g, d), tb


def typed_instances(t, pool=TYPE_POOL):
    """Every (env, annotated t, type) with env ranging over its exact domain."""
    dom = domain(t)
    if dom is None:
        return
    names = sorted(dom)
    for tys in product(pool, repeat=len(names)):
        env = dict(zip(names, tys))
        for t2, ty in typings(env, t, pool):
            yield env, t2, ty
