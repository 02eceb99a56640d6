"""Simple types and typing environments shared by every calculus."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True, slots=True)
class Base:
    name: str = "i"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Arrow:
    dom: "SimpleType"
    cod: "SimpleType"

    def __str__(self) -> str:
        return f"{_wrap(self.dom)} -> {self.cod}"


@dataclass(frozen=True, slots=True)
class Sub:
    """Subtraction type A - B, only used by the sequent calculus."""

    left: "SimpleType"
    right: "SimpleType"

    def __str__(self) -> str:
        return f"{_wrap(self.left)} - {_wrap(self.right)}"


SimpleType = Union[Base, Arrow, Sub]

IOTA = Base("i")
# the annotation pool used by typed enumerations
TYPE_POOL: tuple[SimpleType, ...] = (IOTA, Arrow(IOTA, IOTA), Arrow(Arrow(IOTA, IOTA), IOTA))


def _wrap(t: SimpleType) -> str:
    return str(t) if isinstance(t, Base) else f"({t})"


class TypingError(Exception):
    """A typing failure. `kind` separates side conditions from mismatches."""

    def __init__(self, message: str, kind: str = "mismatch"):
        super().__init__(message)
        self.kind = kind


def types_equal(a: SimpleType, b: SimpleType) -> bool:
    return a == b


def env_split_db(env, i: int):
    """Split a De Bruijn environment after its first i entries."""
    env = tuple(env)
    if i < 0 or i > len(env):
        raise ValueError(f"cannot split an environment of length {len(env)} at {i}")
    return env[:i], env[i:]


@dataclass(frozen=True)
class TwoSidedEnv:
    left: dict
    right: dict

    def __post_init__(self):
        clash = set(self.left) & set(self.right)
        if clash:
            raise ValueError(f"names used on both sides: {sorted(clash)}")


# ---- parsing ---------------------------------------------------------------

_TOK = re.compile(r"\s*(->|-|\(|\)|[A-Za-z_][A-Za-z0-9_']*)")


class TypeSyntaxError(ValueError):
    def __init__(self, message: str, col: int):
        super().__init__(f"{message} at column {col}")
        self.col = col


def tokenize_type(text: str, offset: int = 0):
    toks, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOK.match(text, pos)
        if not m:
            raise TypeSyntaxError(f"unexpected {text[pos:].strip()[0]!r}", offset + pos + 1)
        toks.append((m.group(1), offset + m.start(1) + 1))
        pos = m.end()
    return toks


class _TypeParser:
    # arrow is right-associative and binds looser than subtraction
    def __init__(self, toks):
        self.toks, self.k = toks, 0

    def peek(self):
        return self.toks[self.k][0] if self.k < len(self.toks) else None

    def col(self):
        return self.toks[self.k][1] if self.k < len(self.toks) else (self.toks[-1][1] + 1 if self.toks else 1)

    def arrow(self):
        left = self.minus()
        if self.peek() == "->":
            self.k += 1
            return Arrow(left, self.arrow())
        return left

    def minus(self):
        left = self.atom()
        while self.peek() == "-":
            self.k += 1
            left = Sub(left, self.atom())
        return left

    def atom(self):
        tok = self.peek()
        if tok == "(":
            self.k += 1
            t = self.arrow()
            if self.peek() != ")":
                raise TypeSyntaxError("expected ')'", self.col())
            self.k += 1
            return t
        if tok is None or not (tok[0].isalpha() or tok[0] == "_"):
            raise TypeSyntaxError("expected a type", self.col())
        self.k += 1
        return Base(tok)


def parse_type(text: str) -> SimpleType:
    p = _TypeParser(tokenize_type(text))
    t = p.arrow()
    if p.peek() is not None:
        raise TypeSyntaxError(f"unexpected {p.peek()!r}", p.col())
    return t


def parse_env(text: str) -> dict:
    """Parse `x:i, y:i -> i` into a name-keyed environment."""
    env = {}
    text = text.strip()
    if not text:
        return env
    for item in _split_top(text):
        name, sep, ty = item.partition(":")
        if not sep:
            raise ValueError(f"environment entry {item!r} lacks ':'")
        env[name.strip()] = parse_type(ty)
    return env


def parse_db_env(text: str) -> tuple:
    """Parse `i, i -> i` into a De Bruijn environment (leftmost is index 1)."""
    text = text.strip()
    return tuple(parse_type(x) for x in _split_top(text)) if text else ()


def _split_top(text: str):
    depth, cur, out = 0, [], []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [x for x in (s.strip() for s in out) if x]
