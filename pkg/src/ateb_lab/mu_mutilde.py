"""λ̄μμ̃ with unary explicit substitutions τ = [x←v] | [α←e].

Four sorts: commands, terms, contexts and substitutions.  Term variables
use nodes.Var and nodes.Lam; everything else is defined here.  Context
variable names are kept apart from term variable names by convention (the
surface syntax reserves names starting with a-d for contexts).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Any, Optional

from .kernel import Grammar, Prod, ReductionStep, RewriteSystem, Trace, TraceError, apply_at
from .nodes import Lam, Var, fresh_name, names_in, subterm_at
from .simple_types import TYPE_POOL, Arrow, Sub, TwoSidedEnv, TypingError


@dataclass(frozen=True, slots=True)
class Cut:
    term: Any
    ctx: Any
    _kids = (0, 1)


@dataclass(frozen=True, slots=True)
class CSub:
    cmd: Any
    tau: Any
    _kids = (0, 1)


@dataclass(frozen=True, slots=True)
class ConsEV:
    """The term e·v."""

    ctx: Any
    term: Any
    _kids = (0, 1)


@dataclass(frozen=True, slots=True)
class Mu:
    name: str
    annot: Optional[Any]
    cmd: Any
    _kids = (2,)


@dataclass(frozen=True, slots=True)
class VSub:
    term: Any
    tau: Any
    _kids = (0, 1)


@dataclass(frozen=True, slots=True)
class CoVar:
    name: str
    _kids = ()


@dataclass(frozen=True, slots=True)
class CoLam:
    """The context αλ.e."""

    name: str
    annot: Optional[Any]
    ctx: Any
    _kids = (2,)


@dataclass(frozen=True, slots=True)
class ConsVE:
    """The context v·e."""

    term: Any
    ctx: Any
    _kids = (0, 1)


@dataclass(frozen=True, slots=True)
class MuTilde:
    name: str
    annot: Optional[Any]
    cmd: Any
    _kids = (2,)


@dataclass(frozen=True, slots=True)
class ESub:
    ctx: Any
    tau: Any
    _kids = (0, 1)


@dataclass(frozen=True, slots=True)
class TermBind:
    """[x←v]"""

    name: str
    term: Any
    _kids = (1,)


@dataclass(frozen=True, slots=True)
class CtxBind:
    """[α←e]"""

    name: str
    ctx: Any
    _kids = (1,)


@dataclass(frozen=True, slots=True)
class Valid:
    """Result of typechecking a well-typed command."""

    def __str__(self) -> str:
        return "valid"


VALID = Valid()

TERMS = (Var, Lam, ConsEV, Mu, VSub)
CONTEXTS = (CoVar, CoLam, ConsVE, MuTilde, ESub)
COMMANDS = (Cut, CSub)
TAUS = (TermBind, CtxBind)
MM_NODES = (Cut, CSub, ConsEV, Mu, VSub, CoVar, CoLam, ConsVE, MuTilde, ESub, TermBind, CtxBind)

RULES = ("β", "β̃", "μ", "μ̃", "cτ", "xτ1", "xτ2", "ατ1", "ατ2", "·τ", "·̃τ",
         "λτ", "λ̃τ", "μτ", "μ̃τ", "sv", "se")


def sort_of(t) -> str:
    for cls, s in ((TERMS, "v"), (CONTEXTS, "e"), (COMMANDS, "c"), (TAUS, "τ")):
        if isinstance(t, cls):
            return s
    raise TypeError(f"not a λ̄μμ̃ subject: {t!r}")


def dom(tau) -> str:
    """The source Dom(τ): x for [x←v], α for [α←e]."""
    return tau.name


def substituend(tau):
    return tau.term if isinstance(tau, TermBind) else tau.ctx


def free_vars(t) -> frozenset:
    """Free variables of both sorts (the namespaces never overlap)."""
    match t:
        case Var(x) | CoVar(x):
            return frozenset((x,))
        case Lam(x, _, b) | Mu(x, _, b) | MuTilde(x, _, b) | CoLam(x, _, b):
            return free_vars(b) - {x}
        case Cut(a, b) | ConsEV(a, b) | ConsVE(a, b):
            return free_vars(a) | free_vars(b)
        case CSub(b, tau) | VSub(b, tau) | ESub(b, tau):
            return (free_vars(b) - {dom(tau)}) | free_vars(substituend(tau))
        case TermBind(_, b) | CtxBind(_, b):
            return free_vars(b)
    raise TypeError(f"not a λ̄μμ̃ subject: {t!r}")


def rename_free(t, x: str, y: str):
    """Rename free x to y; y must not occur in t."""
    match t:
        case Var(z):
            return Var(y) if z == x else t
        case CoVar(z):
            return CoVar(y) if z == x else t
        case Lam(z, ann, b) | Mu(z, ann, b) | MuTilde(z, ann, b) | CoLam(z, ann, b):
            return t if z == x else type(t)(z, ann, rename_free(b, x, y))
        case Cut(a, b) | ConsEV(a, b) | ConsVE(a, b):
            return type(t)(rename_free(a, x, y), rename_free(b, x, y))
        case CSub(b, tau) | VSub(b, tau) | ESub(b, tau):
            b2 = b if dom(tau) == x else rename_free(b, x, y)
            return type(t)(b2, rename_free(tau, x, y))
        case TermBind(z, b) | CtxBind(z, b):
            return type(t)(z, rename_free(b, x, y))
    raise TypeError(f"not a λ̄μμ̃ subject: {t!r}")


def alpha_key(t, env=()):
    def ref(x):
        for k, y in enumerate(env):
            if y == x:
                return ("b", k)
        return ("f", x)

    match t:
        case Var(x) | CoVar(x):
            return (type(t).__name__, ref(x))
        case Lam(x, ann, b) | Mu(x, ann, b) | MuTilde(x, ann, b) | CoLam(x, ann, b):
            return (type(t).__name__, ann, alpha_key(b, (x,) + env))
        case Cut(a, b) | ConsEV(a, b) | ConsVE(a, b):
            return (type(t).__name__, alpha_key(a, env), alpha_key(b, env))
        case CSub(b, tau) | VSub(b, tau) | ESub(b, tau):
            return (type(t).__name__, alpha_key(b, (dom(tau),) + env),
                    type(tau).__name__, alpha_key(substituend(tau), env))
        case TermBind(x, b) | CtxBind(x, b):
            return (type(t).__name__, x, alpha_key(b, env))
    raise TypeError(f"not a λ̄μμ̃ subject: {t!r}")


# ---- rules -----------------------------------------------------------------

def _push(t, tau, label):
    """Push τ under the binder of t, α-renaming the binder when needed."""
    x, ann, b = t.name, t.annot, subterm_at(t, (0,))
    if x == dom(tau) or x in free_vars(substituend(tau)):
        y = fresh_name(x, names_in(t) | names_in(tau))
        b, x = rename_free(b, x, y), y
    wrap = {Lam: VSub, Mu: CSub, MuTilde: CSub, CoLam: ESub}[type(t)]
    return label, type(t)(x, ann, wrap(b, tau))


def root_rules(t):
    match t:
        case Cut(v, e):
            out = []
            if isinstance(v, Lam) and isinstance(e, ConsVE):
                out.append(("β", Cut(e.term, MuTilde(v.name, v.annot, Cut(v.body, e.ctx)))))
            if isinstance(v, ConsEV) and isinstance(e, CoLam):
                out.append(("β̃", Cut(Mu(e.name, e.annot, Cut(v.term, e.ctx)), v.ctx)))
            if isinstance(v, Mu):
                out.append(("μ", CSub(v.cmd, CtxBind(v.name, e))))
            if isinstance(e, MuTilde):
                out.append(("μ̃", CSub(e.cmd, TermBind(e.name, v))))
            return out
        case CSub(Cut(v, e), tau):
            return [("cτ", Cut(VSub(v, tau), ESub(e, tau)))]
        case VSub(Var(x), tau):
            if isinstance(tau, TermBind) and tau.name == x:
                return [("xτ1", tau.term)]
            return [("xτ2", Var(x))]
        case ESub(CoVar(a), tau):
            if isinstance(tau, CtxBind) and tau.name == a:
                return [("ατ1", tau.ctx)]
            return [("ατ2", CoVar(a))]
        case ESub(ConsVE(v, e), tau):
            return [("·τ", ConsVE(VSub(v, tau), ESub(e, tau)))]
        case VSub(ConsEV(e, v), tau):
            return [("·̃τ", ConsEV(ESub(e, tau), VSub(v, tau)))]
        case VSub(Lam() as b, tau):
            return [_push(b, tau, "λτ")]
        case ESub(CoLam() as b, tau):
            return [_push(b, tau, "λ̃τ")]
        case VSub(Mu() as b, tau):
            return [_push(b, tau, "μτ")]
        case ESub(MuTilde() as b, tau):
            return [_push(b, tau, "μ̃τ")]
        case Mu(a, _, Cut(v, CoVar(b))) if a == b and a not in free_vars(v):
            return [("sv", v)]
        case MuTilde(x, _, Cut(Var(y), e)) if x == y and x not in free_vars(e):
            return [("se", e)]
    return []


MMT = RewriteSystem("mmt", RULES, root_rules, alpha_key)


def mmt_rules() -> RewriteSystem:
    return MMT


# ---- typing ----------------------------------------------------------------

def mmt_typecheck(env: TwoSidedEnv, t):
    """Type of a term or context, VALID for a command.

    Terms: Γ ⊢ v : A | Δ.  Contexts: Γ | e : A ⊢ Δ.  Commands: c : (Γ ⊢ Δ).
    """
    g, d = env.left, env.right
    match t:
        case Var(x):
            if x not in g:
                raise TypingError(f"unbound term variable {x}")
            return g[x]
        case CoVar(a):
            if a not in d:
                raise TypingError(f"unbound context variable {a}")
            return d[a]
        case Lam(x, ann, b):
            _need(ann, x)
            return Arrow(ann, mmt_typecheck(_left(env, x, ann), b))
        case CoLam(a, ann, e):
            _need(ann, a)
            return Sub(ann, mmt_typecheck(_right(env, a, ann), e))
        case ConsVE(v, e):
            return Arrow(mmt_typecheck(env, v), mmt_typecheck(env, e))
        case ConsEV(e, v):
            return Sub(mmt_typecheck(env, e), mmt_typecheck(env, v))
        case MuTilde(x, ann, c):
            _need(ann, x)
            mmt_typecheck(_left(env, x, ann), c)
            return ann
        case Mu(a, ann, c):
            _need(ann, a)
            mmt_typecheck(_right(env, a, ann), c)
            return ann
        case Cut(v, e):
            tv, te = mmt_typecheck(env, v), mmt_typecheck(env, e)
            if tv != te:
                raise TypingError(f"cut between a term of type {tv} and a context of type {te}")
            return VALID
        case CSub(b, tau) | VSub(b, tau) | ESub(b, tau):
            return mmt_typecheck(tau_source_env(env, tau), b)
    raise TypeError(f"not a typable λ̄μμ̃ subject: {t!r}")


def tau_source_env(env: TwoSidedEnv, tau) -> TwoSidedEnv:
    """The environment (Γ,x:A ⊢ Δ) or (Γ ⊢ α:A,Δ) that τ maps onto env."""
    ty = mmt_typecheck(env, substituend(tau))
    if isinstance(tau, TermBind):
        return _left(env, tau.name, ty)
    return _right(env, tau.name, ty)


def _need(ann, x):
    if ann is None:
        raise TypingError(f"binder {x} lacks an annotation")


def _left(env, x, ty):
    return TwoSidedEnv({**env.left, x: ty}, env.right)


def _right(env, a, ty):
    return TwoSidedEnv(env.left, {**env.right, a: ty})


# ---- Ateb ------------------------------------------------------------------

class _Fresh:
    """Deterministic fresh names, avoiding every name of the subject."""

    def __init__(self, avoid):
        self.used = set(avoid)

    def __call__(self, base: str) -> str:
        n = fresh_name(base, self.used)
        self.used.add(n)
        return n


def mmt_ateb(t, env: Optional[TwoSidedEnv] = None):
    return _ateb(t, env, _Fresh(names_in(t)))


def _ty(env, t):
    if env is None:
        return None
    try:
        return mmt_typecheck(env, t)
    except TypingError:
        return None


def _ateb(t, env, fresh):
    def kid(x, e=env):
        return _ateb(x, e, fresh)

    match t:
        case Var() | CoVar():
            return t
        case Lam(x, ann, b):
            return Lam(x, ann, kid(b, env and _left(env, x, ann)))
        case CoLam(a, ann, e):
            return CoLam(a, ann, kid(e, env and _right(env, a, ann)))
        case MuTilde(x, ann, c):
            return MuTilde(x, ann, kid(c, env and _left(env, x, ann)))
        case Mu(a, ann, c):
            return Mu(a, ann, kid(c, env and _right(env, a, ann)))
        case Cut(a, b) | ConsEV(a, b) | ConsVE(a, b):
            return type(t)(kid(a), kid(b))
        case CSub(c, TermBind(x, v)):
            tv = _ty(env, v)
            return Cut(kid(v), MuTilde(x, tv, kid(c, _ext(env, tv, _left, x))))
        case CSub(c, CtxBind(a, e)):
            te = _ty(env, e)
            return Cut(Mu(a, te, kid(c, _ext(env, te, _right, a))), kid(e))
        case VSub(v, TermBind(x, v2)):
            tb = _ty(env, v2)
            inner = _ext(env, tb, _left, x)
            ta = _ty(inner, v)
            al = fresh("a")
            return Mu(al, ta, Cut(Lam(x, tb, kid(v, inner)), ConsVE(kid(v2), CoVar(al))))
        case VSub(v, CtxBind(a, e)):
            tb = _ty(env, e)
            inner = _ext(env, tb, _right, a)
            ta = _ty(inner, v)
            be = fresh("b")
            return Mu(be, ta, Cut(Mu(a, tb, Cut(kid(v, inner), CoVar(be))), kid(e)))
        case ESub(e, TermBind(x, v)):
            tb = _ty(env, v)
            inner = _ext(env, tb, _left, x)
            ta = _ty(inner, e)
            y = fresh("y")
            return MuTilde(y, ta, Cut(kid(v), MuTilde(x, tb, Cut(Var(y), kid(e, inner)))))
        case ESub(e, CtxBind(a, e2)):
            tb = _ty(env, e2)
            inner = _ext(env, tb, _right, a)
            ta = _ty(inner, e)
            x = fresh("x")
            return MuTilde(x, ta, Cut(ConsEV(kid(e2), Var(x)), CoLam(a, tb, kid(e, inner))))
        case TermBind(x, v):
            return TermBind(x, kid(v))
        case CtxBind(a, e):
            return CtxBind(a, kid(e))
    raise TypeError(f"not a λ̄μμ̃ subject: {t!r}")


def _ext(env, ty, side, name):
    if env is None or ty is None:
        return None
    return side(env, name, ty)


# ---- expansion -------------------------------------------------------------

# the rule chain, with paths relative to the substitution's position,
# turning Ateb of each substitution form back into Ateb(body)τ
CHAINS = {
    (CSub, TermBind): (("μ̃", ()),),
    (CSub, CtxBind): (("μ", ()),),
    (VSub, TermBind): (("β", (0,)), ("μ̃", (0,)), ("cτ", (0,)), ("ατ2", (0, 1)), ("sv", ())),
    (VSub, CtxBind): (("μ", (0,)), ("cτ", (0,)), ("ατ2", (0, 1)), ("sv", ())),
    (ESub, TermBind): (("μ̃", (0,)), ("cτ", (0,)), ("xτ2", (0, 0)), ("se", ())),
    (ESub, CtxBind): (("β̃", (0,)), ("μ", (0,)), ("cτ", (0,)), ("xτ2", (0, 0)), ("se", ())),
}


def mmt_expansion_trace(t) -> Trace:
    """The trace Ateb(t) →* t built from the rule chains, replayed as it goes.

    Raises TraceError if a prescribed step does not apply or the end is not
    α-equivalent to t.
    """
    start = mmt_ateb(t)
    steps = []
    cur = start

    def fire(rule, path):
        nonlocal cur
        res = apply_at(MMT, cur, path, rule) if _has_path(cur, path) else []
        if len(res) != 1:
            raise TraceError(f"{rule} does not apply at {path} in {cur!r}")
        steps.append(ReductionStep(rule, path, cur, res[0]))
        cur = res[0]

    def go(x, path):
        key = (type(x), type(x.tau)) if hasattr(x, "tau") else None
        if key in CHAINS:
            for rule, rel in CHAINS[key]:
                fire(rule, path + rel)
            go(subterm_at(x, (0,)), path + (0,))
            go(substituend(x.tau), path + (1, 0))
            return
        for i in range(len(x._kids)):
            go(subterm_at(x, (i,)), path + (i,))

    go(t, ())
    if alpha_key(cur) != alpha_key(t):
        raise TraceError("expansion does not end on the original subject")
    return Trace(start, tuple(steps))


def _has_path(t, path) -> bool:
    try:
        subterm_at(t, path)
        return True
    except (AttributeError, IndexError):
        return False


# ---- enumeration -----------------------------------------------------------

TERM_NAMES = ("x", "y", "z")
CTX_NAMES = ("a", "b", "c")


def grammar(term_names=TERM_NAMES, ctx_names=CTX_NAMES, subs: bool = True) -> Grammar:
    tn, cn = tuple(term_names), tuple(ctx_names)
    sorts = {
        "v": [Prod(lambda x: Var(x), (), tn),
              Prod(lambda x, b: Lam(x, None, b), ("v",), tn),
              Prod(lambda _, e, v: ConsEV(e, v), ("e", "v")),
              Prod(lambda a, c: Mu(a, None, c), ("c",), cn)],
        "e": [Prod(lambda a: CoVar(a), (), cn),
              Prod(lambda a, e: CoLam(a, None, e), ("e",), cn),
              Prod(lambda _, v, e: ConsVE(v, e), ("v", "e")),
              Prod(lambda x, c: MuTilde(x, None, c), ("c",), tn)],
        "c": [Prod(lambda _, v, e: Cut(v, e), ("v", "e"))],
    }
    if subs:
        sorts["τ"] = [Prod(lambda x, v: TermBind(x, v), ("v",), tn),
                      Prod(lambda a, e: CtxBind(a, e), ("e",), cn)]
        sorts["v"].append(Prod(lambda _, v, s: VSub(v, s), ("v", "τ")))
        sorts["e"].append(Prod(lambda _, e, s: ESub(e, s), ("e", "τ")))
        sorts["c"].append(Prod(lambda _, c, s: CSub(c, s), ("c", "τ")))
    return Grammar(sorts, "c")


def enumerate_subjects(max_size: int, **opts):
    """Commands, terms and contexts of at most max_size nodes."""
    g = grammar(**opts)
    for s in ("c", "v", "e"):
        yield from g.up_to(max_size, s)


def typings(env: TwoSidedEnv, t, pool=TYPE_POOL):
    """(annotated t, type or VALID) pairs for every annotation choice."""
    match t:
        case Var(x):
            if x in env.left:
                yield t, env.left[x]
        case CoVar(a):
            if a in env.right:
                yield t, env.right[a]
        case Lam(x, _, b):
            for ann in pool:
                for b2, tb in typings(_left(env, x, ann), b, pool):
                    yield Lam(x, ann, b2), Arrow(ann, tb)
        case CoLam(a, _, e):
            for ann in pool:
                for e2, te in typings(_right(env, a, ann), e, pool):
                    yield CoLam(a, ann, e2), Sub(ann, te)
        case ConsVE(v, e):
            for v2, tv in typings(env, v, pool):
                for e2, te in typings(env, e, pool):
                    yield ConsVE(v2, e2), Arrow(tv, te)
        case ConsEV(e, v):
            for e2, te in typings(env, e, pool):
                for v2, tv in typings(env, v, pool):
                    yield ConsEV(e2, v2), Sub(te, tv)
        case MuTilde(x, _, c):
            for ann in pool:
                for c2, _ in typings(_left(env, x, ann), c, pool):
                    yield MuTilde(x, ann, c2), ann
        case Mu(a, _, c):
            for ann in pool:
                for c2, _ in typings(_right(env, a, ann), c, pool):
                    yield Mu(a, ann, c2), ann
        case Cut(v, e):
            for v2, tv in typings(env, v, pool):
                for e2, te in typings(env, e, pool):
                    if tv == te:
                        yield Cut(v2, e2), VALID
        case CSub(b, tau) | VSub(b, tau) | ESub(b, tau):
            side = _left if isinstance(tau, TermBind) else _right
            for s2, ts in typings(env, substituend(tau), pool):
                tau2 = type(tau)(tau.name, s2)
                for b2, tb in typings(side(env, tau.name, ts), b, pool):
                    yield type(t)(b2, tau2), tb


def typed_instances(t, pool=TYPE_POOL):
    """Every (env, annotated t, type) with env ranging over assignments of FV(t)."""
    fv = sorted(free_vars(t))
    ctx = [n for n in fv if n[0] in "abcd"]
    terms = [n for n in fv if n[0] not in "abcd"]
    for tys in product(pool, repeat=len(fv)):
        assign = dict(zip(terms + ctx, tys))
        env = TwoSidedEnv({k: assign[k] for k in terms}, {k: assign[k] for k in ctx})
        for t2, ty in typings(env, t, pool):
            yield env, t2, ty
