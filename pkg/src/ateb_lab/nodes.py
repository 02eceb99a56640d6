"""Abstract syntax shared by the λ-calculi with explicit substitutions.

Every node is an immutable dataclass.  `_kids` lists the positions (indices
into the dataclass fields) that hold rewritable subterms; paths used by the
kernel are sequences of indices into `_kids`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    _kids = ()


@dataclass(frozen=True, slots=True)
class App:
    fun: Any
    arg: Any
    _kids = (0, 1)


@dataclass(frozen=True, slots=True)
class Lam:
    """Named abstraction λx:A.t (annot may be None)."""

    name: str
    annot: Optional[Any]
    body: Any
    _kids = (2,)


@dataclass(frozen=True, slots=True)
class Idx:
    """De Bruijn index (also the numeral constants of λσ)."""

    n: int
    _kids = ()


@dataclass(frozen=True, slots=True)
class Abs:
    """De Bruijn abstraction λ^A t."""

    annot: Optional[Any]
    body: Any
    _kids = (1,)


@dataclass(frozen=True, slots=True)
class Subst:
    """λx closure t[u/x]."""

    body: Any
    repl: Any
    name: str
    _kids = (0, 1)


@dataclass(frozen=True, slots=True)
class Clo:
    """Closure t[s] of λυ, λσ and λσn."""

    body: Any
    sub: Any
    _kids = (0, 1)


# λυ substitutions


@dataclass(frozen=True, slots=True)
class Slash:
    term: Any
    _kids = (0,)


@dataclass(frozen=True, slots=True)
class Lift:
    sub: Any
    _kids = (0,)


@dataclass(frozen=True, slots=True)
class Shift:
    _kids = ()


# λσ / λσn substitutions


@dataclass(frozen=True, slots=True)
class Id:
    _kids = ()


@dataclass(frozen=True, slots=True)
class Cons:
    term: Any
    sub: Any
    _kids = (0, 1)


@dataclass(frozen=True, slots=True)
class NCons:
    """Named cons (t/x)·s."""

    term: Any
    name: str
    sub: Any
    _kids = (0, 2)


@dataclass(frozen=True, slots=True)
class Comp:
    left: Any
    right: Any
    _kids = (0, 1)


# λwsn


@dataclass(frozen=True, slots=True)
class Weak:
    names: frozenset
    body: Any
    _kids = (1,)


@dataclass(frozen=True, slots=True)
class WSub:
    """λwsn substitution t[x,u,Γ,Δ]."""

    body: Any
    name: str
    repl: Any
    gamma: frozenset
    delta: frozenset
    _kids = (0, 2)


SHIFT = Shift()
ID = Id()


def children(t) -> tuple:
    return tuple(getattr(t, t.__slots__[k]) for k in t._kids)


def with_child(t, i: int, new):
    vals = [getattr(t, f) for f in t.__slots__]
    vals[t._kids[i]] = new
    return type(t)(*vals)


def subterm_at(t, path):
    for i in path:
        t = getattr(t, t.__slots__[t._kids[i]])
    return t


def replace_at(t, path, new):
    if not path:
        return new
    i = path[0]
    return with_child(t, i, replace_at(children(t)[i], path[1:], new))


def size(t) -> int:
    """Node count; name sets and type annotations are not nodes."""
    return 1 + sum(size(c) for c in children(t))


def count_nodes(t, cls) -> int:
    return (1 if isinstance(t, cls) else 0) + sum(count_nodes(c, cls) for c in children(t))


def contains(t, classes) -> bool:
    if isinstance(t, classes):
        return True
    return any(contains(c, classes) for c in children(t))


def names_in(t, acc=None) -> set:
    """Every variable name occurring anywhere in t (free, bound or in name sets)."""
    if acc is None:
        acc = set()
    for f in t.__slots__:
        v = getattr(t, f)
        if f == "name":
            acc.add(v)
        elif isinstance(v, frozenset):
            acc |= v
    for c in children(t):
        names_in(c, acc)
    return acc


def fresh_name(base: str, avoid) -> str:
    """First of base, base1, base2, ... not in avoid (trailing digits stripped)."""
    stem = base.rstrip("0123456789") or base
    if stem not in avoid:
        return stem
    k = 1
    while f"{stem}{k}" in avoid:
        k += 1
    return f"{stem}{k}"
