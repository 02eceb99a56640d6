"""ASCII surface syntax for every calculus: one parser and one printer each.

Precedence, loosest first: binders (extend as far right as possible),
application (left associative), weakening prefix `{x,y} t`, postfix
closures `t[...]`, atoms.  The printers only parenthesize where this order
requires it, so parse(show(t)) == t for every term.
"""

from __future__ import annotations

import re

from . import mu_mutilde as mm
from .nodes import (ID, SHIFT, Abs, App, Clo, Comp, Cons, Id, Idx, Lam, Lift, NCons, Shift,
                    Slash, Subst, Var, Weak, WSub, contains)
from .simple_types import Arrow, Base, Sub, TwoSidedEnv, parse_db_env, parse_env, parse_type

CALCULI = ("pure", "pure-db", "lx", "lu", "ls", "lsn", "lwsn", "mmt")
DB_CALCULI = frozenset({"pure-db", "lu", "ls"})

_TOK = re.compile(r"->|<-|\d+|[A-Za-z_][A-Za-z0-9_']*|[\\.()\[\]/^!,{}<>|*:\-]")
KEYWORDS = {"id", "o", "mu", "mut", "colam"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.message, self.line, self.col = message, line, col


def tokenize(text: str) -> list:
    toks = []
    for ln, line in enumerate(text.split("\n"), 1):
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOK.match(line, pos)
            if not m:
                raise ParseError(f"unexpected character {line[pos]!r}", ln, pos + 1)
            toks.append((m.group(), ln, pos + 1))
            pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, calc: str):
        self.toks = tokenize(text)
        self.k = 0
        self.calc = calc
        self.db = calc in DB_CALCULI

    # -- token helpers

    def peek(self, off: int = 0):
        j = self.k + off
        return self.toks[j][0] if j < len(self.toks) else None

    def where(self):
        if self.k < len(self.toks):
            return self.toks[self.k][1:]
        if self.toks:
            ln, col = self.toks[-1][1:]
            return ln, col + len(self.toks[-1][0])
        return 1, 1

    def error(self, msg):
        return ParseError(msg, *self.where())

    def expect(self, tok):
        if self.peek() != tok:
            found = "end of input" if self.peek() is None else repr(self.peek())
            raise self.error(f"expected {tok!r} but found {found}")
        self.k += 1

    def accept(self, tok) -> bool:
        if self.peek() == tok:
            self.k += 1
            return True
        return False

    def name(self) -> str:
        tok = self.peek()
        if tok is None or not _is_name(tok) or tok in KEYWORDS:
            raise self.error("expected a variable name")
        self.k += 1
        return tok

    def done(self):
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek()!r}")

    # -- types

    def type_(self):
        left = self.type_minus()
        if self.accept("->"):
            return Arrow(left, self.type_())
        return left

    def type_minus(self):
        left = self.type_atom()
        while self.accept("-"):
            left = Sub(left, self.type_atom())
        return left

    def type_atom(self):
        if self.accept("("):
            t = self.type_()
            self.expect(")")
            return t
        tok = self.peek()
        if tok is None or not _is_name(tok):
            raise self.error("expected a type")
        self.k += 1
        return Base(tok)

    # -- λ-style terms

    def term(self):
        if self.accept("\\"):
            if self.db:
                ann = None if self.peek() == "." else self.type_()
                self.expect(".")
                return Abs(ann, self.term())
            x = self.name()
            ann = self.type_() if self.accept(":") else None
            self.expect(".")
            return Lam(x, ann, self.term())
        t = self.prefix()
        while self.starts_atom():
            t = App(t, self.prefix())
        return t

    def starts_atom(self) -> bool:
        tok = self.peek()
        if tok is None:
            return False
        if tok == "(" or tok.isdigit():
            return True
        if tok == "{" and self.calc == "lwsn":
            return True
        return _is_name(tok) and tok not in KEYWORDS

    def prefix(self):
        if self.calc == "lwsn" and self.peek() == "{":
            names = self.name_set()
            return Weak(names, self.prefix())
        return self.postfix()

    def postfix(self):
        t = self.atom()
        while self.accept("["):
            t = self.closure(t)
            self.expect("]")
        return t

    def atom(self):
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        tok = self.peek()
        if tok is not None and tok.isdigit():
            if not self.db:
                raise self.error("numerals are only allowed in De Bruijn calculi")
            self.k += 1
            if int(tok) < 1:
                raise ParseError("indices start at 1", *self.toks[self.k - 1][1:])
            return Idx(int(tok))
        if self.db:
            raise self.error("expected a term")
        return Var(self.name())

    def name_set(self) -> frozenset:
        self.expect("{")
        names = []
        if self.peek() != "}":
            names.append(self.name())
            while self.accept(","):
                names.append(self.name())
        self.expect("}")
        return frozenset(names)

    def closure(self, body):
        c = self.calc
        if c in ("pure", "pure-db"):
            raise self.error("the pure calculus has no substitutions")
        if c == "lx":
            u = self.term()
            self.expect("/")
            return Subst(body, u, self.name())
        if c == "lu":
            return Clo(body, self.lu_sub())
        if c in ("ls", "lsn"):
            return Clo(body, self.sigma_sub())
        if c == "lwsn":
            x = self.name()
            self.expect(",")
            u = self.term()
            self.expect(",")
            g = self.name_set()
            self.expect(",")
            d = self.name_set()
            return WSub(body, x, u, g, d)
        raise self.error(f"no substitutions in {c}")

    def lu_sub(self):
        if self.accept("!"):
            return SHIFT
        if self.accept("^"):
            self.expect("(")
            s = self.lu_sub()
            self.expect(")")
            return Lift(s)
        u = self.term()
        self.expect("/")
        return Slash(u)

    def sigma_sub(self):
        left = self.sigma_cons()
        if self.accept("o"):
            return Comp(left, self.sigma_sub())
        return left

    def sigma_cons(self):
        if self.accept("id"):
            return ID
        if self.calc == "ls" and self.accept("!"):
            return SHIFT
        save = self.k
        head = self._try_cons_head()
        if head is not None:
            self.expect(".")
            if self.calc == "lsn":
                u, x = head
                return NCons(u, x, self.sigma_cons())
            return Cons(head, self.sigma_cons())
        self.k = save
        if self.accept("("):
            s = self.sigma_sub()
            self.expect(")")
            return s
        raise self.error("expected a substitution")

    def _try_cons_head(self):
        save = self.k
        try:
            if self.calc == "lsn":
                self.expect("(")
                u = self.term()
                self.expect("/")
                x = self.name()
                self.expect(")")
                head = (u, x)
            else:
                head = self.term()
            if self.peek() == ".":
                return head
        except ParseError:
            pass
        self.k = save
        return None

    # -- λ̄μμ̃

    def subject(self):
        """Any λ̄μμ̃ subject; returns (sort, node)."""
        tok = self.peek()
        if tok == "\\":
            self.k += 1
            x = self._term_var()
            ann = self.type_() if self.accept(":") else None
            self.expect(".")
            return "v", Lam(x, ann, self.sorted_subject("v"))
        if tok in ("mu", "mut", "colam"):
            self.k += 1
            x = self._ctx_var() if tok != "mut" else self._term_var()
            ann = self.type_() if self.accept(":") else None
            self.expect(".")
            if tok == "mu":
                return "v", mm.Mu(x, ann, self.sorted_subject("c"))
            if tok == "mut":
                return "e", mm.MuTilde(x, ann, self.sorted_subject("c"))
            return "e", mm.CoLam(x, ann, self.sorted_subject("e"))
        pos = self.where()
        sort, left = self.mm_postfix()
        if self.accept("*"):
            if sort == "v":
                return "e", mm.ConsVE(left, self.sorted_subject("e"))
            if sort == "e":
                return "v", mm.ConsEV(left, self.sorted_subject("v"))
            raise ParseError("a command cannot be consed", *pos)
        return sort, left

    def sorted_subject(self, want: str):
        pos = self.where()
        sort, t = self.subject()
        if sort != want:
            names = {"v": "term", "e": "context", "c": "command"}
            raise ParseError(f"expected a {names[want]} but found a {names[sort]}", *pos)
        return t

    def mm_postfix(self):
        sort, t = self.mm_atom()
        while self.accept("{"):
            if _is_ctx(self.peek() or ""):
                a = self._ctx_var()
                self.expect("<-")
                tau = mm.CtxBind(a, self.sorted_subject("e"))
            else:
                x = self._term_var()
                self.expect("<-")
                tau = mm.TermBind(x, self.sorted_subject("v"))
            self.expect("}")
            t = {"v": mm.VSub, "e": mm.ESub, "c": mm.CSub}[sort](t, tau)
        return sort, t

    def mm_atom(self):
        if self.accept("("):
            r = self.subject()
            self.expect(")")
            return r
        if self.accept("<"):
            v = self.sorted_subject("v")
            self.expect("|")
            e = self.sorted_subject("e")
            self.expect(">")
            return "c", mm.Cut(v, e)
        x = self.name()
        return ("e", mm.CoVar(x)) if _is_ctx(x) else ("v", Var(x))

    def _term_var(self):
        pos = self.where()
        x = self.name()
        if _is_ctx(x):
            raise ParseError(f"{x} is a context variable name", *pos)
        return x

    def _ctx_var(self):
        pos = self.where()
        x = self.name()
        if not _is_ctx(x):
            raise ParseError(f"{x} is a term variable name", *pos)
        return x


def _is_name(tok: str) -> bool:
    return tok[0].isalpha() or tok[0] == "_"


def _is_ctx(name: str) -> bool:
    return name[:1] in ("a", "b", "c", "d") and name not in KEYWORDS


def parse(calc: str, text: str):
    """Parse text as a term of calc (any subject for mmt)."""
    if calc not in CALCULI:
        raise ValueError(f"unknown calculus {calc!r}; expected one of {', '.join(CALCULI)}")
    p = _Parser(text, calc)
    if calc == "mmt":
        _, t = p.subject()
    else:
        t = p.term()
    p.done()
    return t


def parse_environment(calc: str, text: str):
    """Typing environment syntax: `x:i, y:i -> i` (named), `i, i -> i` (De
    Bruijn, leftmost is index 1), `x:i | a:i` (two-sided, λ̄μμ̃)."""
    if calc in DB_CALCULI:
        return parse_db_env(text)
    if calc == "mmt":
        left, _, right = text.partition("|")
        return TwoSidedEnv(parse_env(left), parse_env(right))
    return parse_env(text)


# ---- printing --------------------------------------------------------------

# levels: 0 binder, 1 application, 2 weakening prefix, 3 postfix, 4 atom


def show(t, calc: str | None = None) -> str:
    if calc == "mmt" or contains(t, mm.MM_NODES):
        return _show_mm(t, 0)
    return _show(t, 0)


def _paren(s: str, cond: bool) -> str:
    return f"({s})" if cond else s


def _ann(a) -> str:
    return "" if a is None else f":{a}"


def _show(t, lvl: int) -> str:
    match t:
        case Var(x):
            return x
        case Idx(n):
            return str(n)
        case Lam(x, a, b):
            return _paren(f"\\{x}{_ann(a)}. {_show(b, 0)}", lvl > 0)
        case Abs(a, b):
            return _paren(f"\\{'' if a is None else a}.{_show(b, 0)}", lvl > 0)
        case App(f, a):
            return _paren(f"{_show(f, 1)} {_show(a, 2)}", lvl > 1)
        case Weak(names, b):
            return _paren(f"{_names(names)} {_show(b, 2)}", lvl > 2)
        case Subst(b, u, x):
            return _paren(f"{_show(b, 3)}[{_show(u, 0)}/{x}]", lvl > 3)
        case Clo(b, s):
            return _paren(f"{_show(b, 3)}[{_show_sub(s, 0)}]", lvl > 3)
        case WSub(b, x, u, g, d):
            return _paren(f"{_show(b, 3)}[{x}, {_show(u, 0)}, {_names(g)}, {_names(d)}]", lvl > 3)
        case Slash() | Lift() | Shift() | Id() | Cons() | NCons() | Comp():
            return _show_sub(t, 0)
    raise TypeError(f"cannot print {t!r}")


def _names(names) -> str:
    return "{" + ",".join(sorted(names)) + "}"


def _show_sub(s, lvl: int) -> str:
    """lvl 0: composition allowed; 1: cons position (composition parenthesized)."""
    match s:
        case Shift():
            return "!"
        case Id():
            return "id"
        case Lift(s1):
            return f"^({_show_sub(s1, 0)})"
        case Slash(u):
            return f"{_show(u, 0)}/"
        case Cons(u, s1):
            return f"{_show(u, 2)} . {_show_sub(s1, 1)}"
        case NCons(u, x, s1):
            return f"({_show(u, 0)}/{x}) . {_show_sub(s1, 1)}"
        case Comp(a, b):
            left = f"({_show_sub(a, 0)})" if isinstance(a, Comp) else _show_sub(a, 1)
            return _paren(f"{left} o {_show_sub(b, 0)}", lvl > 0)
    raise TypeError(f"cannot print substitution {s!r}")


# λ̄μμ̃ levels: 0 binder / cons, 1 postfix operand, 2 atom

def _show_mm(t, lvl: int) -> str:
    match t:
        case Var(x) | mm.CoVar(x):
            return x
        case mm.Cut(v, e):
            return f"< {_show_mm(v, 0)} | {_show_mm(e, 0)} >"
        case Lam(x, a, b):
            return _paren(f"\\{x}{_ann(a)}. {_show_mm(b, 0)}", lvl > 0)
        case mm.Mu(x, a, c):
            return _paren(f"mu {x}{_ann(a)}. {_show_mm(c, 0)}", lvl > 0)
        case mm.MuTilde(x, a, c):
            return _paren(f"mut {x}{_ann(a)}. {_show_mm(c, 0)}", lvl > 0)
        case mm.CoLam(x, a, e):
            return _paren(f"colam {x}{_ann(a)}. {_show_mm(e, 0)}", lvl > 0)
        case mm.ConsVE(a, b) | mm.ConsEV(a, b):
            return _paren(f"{_show_mm(a, 1)} * {_show_mm(b, 0)}", lvl > 0)
        case mm.CSub(b, tau) | mm.VSub(b, tau) | mm.ESub(b, tau):
            return _paren(f"{_show_mm(b, 1)}{_show_mm(tau, 0)}", lvl > 1)
        case mm.TermBind(x, b) | mm.CtxBind(x, b):
            return f"{{{x} <- {_show_mm(b, 0)}}}"
    raise TypeError(f"cannot print {t!r}")


def show_type(ty) -> str:
    return str(ty)


def show_env(env) -> str:
    if isinstance(env, TwoSidedEnv):
        return f"{show_env(env.left)} | {show_env(env.right)}"
    if isinstance(env, dict):
        return ", ".join(f"{k}:{v}" for k, v in sorted(env.items()))
    return ", ".join(map(str, env))


__all__ = ["CALCULI", "ParseError", "parse", "parse_environment", "parse_type", "show",
           "show_env", "show_type", "tokenize"]
