"""One descriptor per calculus, plus grammars, typed universes and the
technique bundles built from the modules."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator, Optional

from . import lambda_pure as lp
from . import lambda_sigma as ls
from . import lambda_sigma_n as lsn
from . import lambda_upsilon as lu
from . import lambda_wsn as lw
from . import lambda_x as lx
from . import mu_mutilde as mm
from .kernel import Grammar, RewriteSystem
from .simple_types import TYPE_POOL
from .technique import CalculusBundle


@dataclass(frozen=True)
class Calculus:
    id: str
    title: str
    sys: RewriteSystem
    typecheck: Callable  # (env, t)
    ateb: Callable  # (t, env=None)
    grammar: Callable  # max_size -> Grammar
    de_bruijn: bool = False
    sigma: Optional[frozenset] = None  # rules used by `reduce --sigma`
    expansion_rules: Optional[frozenset] = None


def _identity(t, env=None):
    return t


def _db_max_index(max_size: int) -> int:
    return max_size + 1


CALCULI = {
    "pure": Calculus("pure", "pure λ (named)", lp.PURE_NAMED, lp.typecheck_pure, _identity,
                     lambda n: lp.named_grammar()),
    "pure-db": Calculus("pure-db", "pure λ (De Bruijn)", lp.PURE_DB, lp.typecheck_pure, _identity,
                        lambda n: lp.db_grammar(_db_max_index(n)), de_bruijn=True),
    "lx": Calculus("lx", "λx", lx.LX, lx.lx_typecheck, lx.lx_ateb, lambda n: lx.grammar(),
                   expansion_rules=frozenset({"Beta"})),
    "lu": Calculus("lu", "λυ", lu.LU, lu.lu_typecheck, lu.lu_ateb,
                   lambda n: lu.grammar(_db_max_index(n)), de_bruijn=True,
                   sigma=frozenset(lu.RULES) - {"B"}),
    "ls": Calculus("ls", "λσ", ls.LS, ls.ls_typecheck, ls.ls_ateb,
                   lambda n: ls.grammar(_db_max_index(n)), de_bruijn=True, sigma=ls.SIGMA),
    "lsn": Calculus("lsn", "λσn", lsn.LSN, lsn.lsn_typecheck, lsn.lsn_ateb,
                    lambda n: lsn.grammar(), sigma=lsn.SIGMA),
    "lwsn": Calculus("lwsn", "λwsn", lw.LWSN, lw.lwsn_typecheck, lw.lwsn_ateb,
                     lambda n: lw.grammar(), expansion_rules=frozenset({"b", "∅", "d"})),
    "mmt": Calculus("mmt", "λ̄μμ̃", mm.MMT, mm.mmt_typecheck, mm.mmt_ateb, lambda n: mm.grammar()),
}


def get(calc: str) -> Calculus:
    try:
        return CALCULI[calc]
    except KeyError:
        raise ValueError(f"unknown calculus {calc!r}; expected one of {', '.join(CALCULI)}") from None


def grammar_for(calc: str, max_size: int, **opts) -> Grammar:
    if opts:
        builders = {"lx": lx.grammar, "lsn": lsn.grammar, "lwsn": lw.grammar, "mmt": mm.grammar,
                    "lu": lu.grammar, "ls": ls.grammar, "pure": lp.named_grammar,
                    "pure-db": lp.db_grammar}
        return builders[calc](**opts)
    return get(calc).grammar(max_size)


def terms(calc: str, max_size: int, **opts) -> Iterator:
    """Every term of at most max_size nodes (all subject sorts for mmt)."""
    if calc == "mmt":
        return mm.enumerate_subjects(max_size, **opts)
    return grammar_for(calc, max_size, **opts).up_to(max_size)


# ---- typed universes -------------------------------------------------------

def db_envs(max_len: int = 2, pool=TYPE_POOL):
    for n in range(max_len + 1):
        yield from product(pool, repeat=n)


def _named_instances(t, free_vars, typings, pool=TYPE_POOL):
    fv = sorted(free_vars(t))
    for tys in product(pool, repeat=len(fv)):
        env = dict(zip(fv, tys))
        for t2, ty in typings(env, t, pool):
            yield env, t2, ty


def _db_instances(t, typings, max_len=2, pool=TYPE_POOL):
    for env in db_envs(max_len, pool):
        for t2, ty in typings(env, t, pool):
            yield env, t2, ty


def typed_instances(calc: str, t, pool=TYPE_POOL) -> Iterator:
    """(env, annotated t, type) for every annotation of the erased term t.

    Named calculi range over assignments of the free variables; De Bruijn
    calculi over environments of length at most 2.
    """
    if calc == "pure":
        return _named_instances(t, lp.free_vars, lp.typings_named, pool)
    if calc == "pure-db":
        return _db_instances(t, lp.typings_db, pool=pool)
    if calc == "lx":
        return _named_instances(t, lx.free_vars, lx.typings, pool)
    if calc == "lu":
        return _db_instances(t, lu.typings, pool=pool)
    if calc == "ls":
        return _db_instances(t, ls.typings, pool=pool)
    if calc == "lsn":
        return _named_instances(t, lsn.free_vars, lsn.typings, pool)
    if calc == "lwsn":
        return lw.typed_instances(t, pool)
    if calc == "mmt":
        return mm.typed_instances(t, pool)
    raise ValueError(f"unknown calculus {calc!r}")


def typed_universe(calc: str, max_size: int, **opts) -> Iterator:
    for t in terms(calc, max_size, **opts):
        yield from typed_instances(calc, t)


def typed_terms(calc: str, max_size: int) -> Iterator:
    """One (env, annotated t) per distinct annotated term."""
    seen = set()
    for env, t, _ in typed_universe(calc, max_size):
        if t not in seen:
            seen.add(t)
            yield env, t


# ---- technique bundles -----------------------------------------------------

def _db_pure_typecheck(env, t):
    return lp.typecheck_pure(tuple(env), t)


def bundle(calc: str) -> CalculusBundle:
    if calc == "lx":
        return CalculusBundle("lx", lx.LX, lx.lx_typecheck, lx.lx_ateb, frozenset({"Beta"}),
                              pure_sys=lp.PURE_NAMED, pure_typecheck=lp.typecheck_pure,
                              expansion_rules=frozenset({"Beta"}))
    if calc == "lu":
        return CalculusBundle("lu", lu.LU, lu.lu_typecheck, lu.lu_ateb, frozenset({"B"}),
                              pure_sys=lp.PURE_DB, pure_typecheck=_db_pure_typecheck,
                              lessdot=lu.lu_lessdot, init_witness=lu.lu_init_witness,
                              simulate_step=lu.lu_simulate_step,
                              strict_rules=frozenset({"B"}),
                              lax_rules=frozenset(lu.RULES) - {"B"})
    if calc == "ls":
        return CalculusBundle("ls", ls.LS, ls.ls_typecheck, ls.ls_ateb, frozenset({"B"}),
                              pure_sys=lp.PURE_DB, pure_typecheck=_db_pure_typecheck,
                              lessdot=ls.ls_lessdot, init_witness=ls.ls_init_witness,
                              simulate_step=ls.ls_simulate_step,
                              strict_rules=frozenset({"B"}), lax_rules=ls.SIGMA)
    if calc == "lsn":
        return CalculusBundle("lsn", lsn.LSN, lsn.lsn_typecheck, lsn.lsn_ateb, frozenset({"B"}),
                              pure_sys=lp.PURE_NAMED, pure_typecheck=lp.typecheck_pure,
                              lessdot=lsn.lsn_lessdot, init_witness=lsn.lsn_init_witness,
                              simulate_step=lsn.lsn_simulate_step,
                              strict_rules=frozenset({"B"}), lax_rules=lsn.SIGMA)
    if calc == "lwsn":
        return CalculusBundle("lwsn", lw.LWSN, lw.lwsn_typecheck, lw.lwsn_ateb, frozenset({"b"}),
                              pure_typecheck=lambda env, t: lw.lwsn_typecheck(env, t, allow_sub=False),
                              expansion_rules=frozenset({"b", "∅", "d"}))
    if calc == "mmt":
        return CalculusBundle("mmt", mm.MMT, mm.mmt_typecheck, mm.mmt_ateb,
                              frozenset({"μ", "μ̃"}))
    raise ValueError(f"no technique bundle for {calc!r}")
