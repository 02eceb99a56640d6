"""ateb-lab command line.

Exit codes: 0 success, 1 check failure, 2 parse or usage error, 3 type
error, 4 fuel or budget exhausted.
"""

from __future__ import annotations

import json
import sys

import click

from . import checks, registry
from .kernel import BudgetExhausted, FuelExhausted, ProvedSN, Trace, TraceError, is_sn, normalize, reachable
from .mu_mutilde import VALID, mmt_expansion_trace
from .simple_types import TypeSyntaxError, TypingError
from .syntax import CALCULI, ParseError, parse, parse_environment, show, show_type

EXIT_FAIL, EXIT_PARSE, EXIT_TYPE, EXIT_FUEL = 1, 2, 3, 4


class Exit(click.ClickException):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.exit_code = code


def _read(term, file) -> str:
    if term is not None and file is not None:
        raise click.UsageError("give the term either as an argument or with --file, not both")
    if file is not None:
        return file.read()
    if term is None or term == "-":
        return sys.stdin.read()
    return term


def _parse(calc, term, file):
    try:
        return parse(calc, _read(term, file))
    except ParseError as e:
        raise Exit(f"parse error: {e}", EXIT_PARSE) from None


def _env(calc, text):
    if text is None:
        return None
    try:
        return parse_environment(calc, text)
    except (ParseError, TypeSyntaxError, ValueError) as e:
        raise Exit(f"cannot parse the environment: {e}", EXIT_PARSE) from None


def _default_env(calc):
    # the empty environment of the calculus
    if calc == "mmt":
        return parse_environment("mmt", "|")
    return () if registry.get(calc).de_bruijn else {}


def fmt_path(path) -> str:
    return ".".join(map(str, path)) if path else "ε"


def emit_trace(tr: Trace, calc: str, fmt: str):
    if fmt == "jsonl":
        click.echo(json.dumps({"index": 0, "rule": None, "path": None, "term": show(tr.start, calc)},
                              ensure_ascii=False))
        for k, st in enumerate(tr.steps, 1):
            click.echo(json.dumps({"index": k, "rule": st.rule, "path": list(st.at),
                                   "term": show(st.after, calc)}, ensure_ascii=False))
    else:
        for st in tr.steps:
            click.echo(f"{st.rule} @ {fmt_path(st.at)} : {show(st.after, calc)}")


calc_arg = click.argument("calc", metavar="CALCULUS", type=click.Choice(CALCULI))
term_arg = click.argument("term", required=False)
file_opt = click.option("--file", type=click.File("r"), help="Read the term from a file.")
fmt_opt = click.option("--format", "fmt", type=click.Choice(["text", "jsonl"]), default="text",
                       show_default=True, help="Trace format.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Explicit-substitution calculi: reduction, typing, Ateb and lemma checks."""


@main.command("parse")
@calc_arg
@term_arg
@file_opt
def cmd_parse(calc, term, file):
    """Print the abstract syntax of a term."""
    click.echo(repr(_parse(calc, term, file)))


@main.command("print")
@calc_arg
@term_arg
@file_opt
def cmd_print(calc, term, file):
    """Print a term in canonical syntax."""
    click.echo(show(_parse(calc, term, file), calc))


@main.command("reduce")
@calc_arg
@term_arg
@file_opt
@click.option("--rule", "rules", multiple=True, help="Only use this rule (repeatable).")
@click.option("--sigma", is_flag=True, help="Only use the substitution rules (lu, ls, lsn).")
@click.option("--fuel", default=1000, show_default=True, help="Maximum number of steps.")
@click.option("--trace", is_flag=True, help="Print every step.")
@fmt_opt
def cmd_reduce(calc, term, file, rules, sigma, fuel, trace, fmt):
    """Normalize a term (leftmost-outermost, rule-table order)."""
    c = registry.get(calc)
    t = _parse(calc, term, file)
    restrict = set(rules) or None
    if sigma:
        if c.sigma is None:
            raise click.UsageError(f"{calc} has no substitution-rule subset")
        restrict = (restrict or set(c.sigma)) & c.sigma
    try:
        if restrict is not None:
            c.sys.check_labels(restrict)
    except ValueError as e:
        raise click.UsageError(str(e)) from None
    try:
        nf, tr = normalize(c.sys, t, restrict, fuel)
    except FuelExhausted as e:
        if trace:
            emit_trace(e.trace, calc, fmt)
        raise Exit(f"fuel exhausted after {len(e.trace)} steps at {show(e.trace.end, calc)}",
                   EXIT_FUEL) from None
    if trace:
        emit_trace(tr, calc, fmt)
    if not trace or fmt == "text":
        click.echo(show(nf, calc))


@main.command("typecheck")
@calc_arg
@term_arg
@file_opt
@click.option("--env", help='Typing environment, e.g. "x:i, y:i -> i", "i, i" or "x:i | a:i".')
def cmd_typecheck(calc, term, file, env):
    """Print the type of an annotated term."""
    c = registry.get(calc)
    t = _parse(calc, term, file)
    e = _env(calc, env)
    try:
        ty = c.typecheck(_default_env(calc) if e is None else e, t)
    except TypingError as err:
        raise Exit(f"type error ({err.kind}): {err}", EXIT_TYPE) from None
    click.echo("valid" if ty is VALID else show_type(ty))


@main.command("ateb")
@calc_arg
@term_arg
@file_opt
@click.option("--env", help="Typing environment; annotates the binders Ateb creates.")
def cmd_ateb(calc, term, file, env):
    """Print the substitution-free expansion Ateb(t)."""
    c = registry.get(calc)
    t = _parse(calc, term, file)
    click.echo(show(c.ateb(t, _env(calc, env)), calc))


@main.command("expand")
@calc_arg
@term_arg
@file_opt
@click.option("--depth", default=12, show_default=True, help="Search depth (lx, lwsn).")
@fmt_opt
def cmd_expand(calc, term, file, depth, fmt):
    """Print the trace from Ateb(t) back to t (lx, lwsn, mmt) or the
    initialization trace from Ateb(t) (lu, ls, lsn)."""
    c = registry.get(calc)
    t = _parse(calc, term, file)
    if calc == "mmt":
        try:
            tr = mmt_expansion_trace(t)
        except TraceError as e:
            raise Exit(str(e), EXIT_FAIL) from None
    elif c.expansion_rules is not None:
        tr = reachable(c.sys, c.ateb(t), t, c.expansion_rules, depth)
        if tr is None:
            raise Exit(f"no expansion trace within depth {depth}", EXIT_FUEL)
    elif calc in ("lu", "ls", "lsn"):
        try:
            _, tr = registry.bundle(calc).init_witness(t, None)
        except Exception as e:
            raise Exit(f"no initialization witness: {e}", EXIT_FAIL) from None
    else:
        raise click.UsageError(f"{calc} has no expansion trace")
    emit_trace(tr, calc, fmt)


@main.command("sn")
@calc_arg
@term_arg
@file_opt
@click.option("--budget", default=100_000, show_default=True, help="Maximum number of distinct terms.")
def cmd_sn(calc, term, file, budget):
    """Explore the whole reduction graph of a term."""
    c = registry.get(calc)
    t = _parse(calc, term, file)
    v = is_sn(c.sys, t, budget)
    if isinstance(v, ProvedSN):
        click.echo(f"SN depth={v.max_depth}")
        return
    assert isinstance(v, BudgetExhausted)
    if v.loop is not None:
        click.echo(f"LOOP after {v.visited} terms, {len(v.loop)} steps from {show(v.loop.start, calc)}")
        emit_trace(v.loop, calc, "text")
        raise Exit("not strongly normalizing: the loop above repeats", EXIT_FUEL)
    raise Exit(f"budget exhausted after {v.visited} terms", EXIT_FUEL)


@main.command("lemmas")
def cmd_lemmas():
    """List the lemma ids accepted by `check`."""
    for lem in checks.LEMMAS.values():
        bound = f"size ≤ {lem.size}" if lem.size else "fixed ranges"
        click.echo(f"{lem.id:24} {bound:14} {lem.doc}")


@main.command("check")
@click.argument("lemma")
@click.option("--size", type=int, help="Size bound (defaults to the lemma's stated bound).")
@click.option("--budget", default=100_000, show_default=True, help="SN budget per term.")
@click.option("--sample", type=click.FloatRange(0, 1, min_open=True),
              help="Keep each case with this probability (seeded by ATEB_LAB_SEED).")
def cmd_check(lemma, size, budget, sample):
    """Run a lemma suite; print a verdict and the first counterexamples."""
    if lemma not in checks.LEMMAS:
        raise Exit(f"unknown lemma id {lemma!r}; valid ids:\n  " + "\n  ".join(checks.LEMMAS),
                   EXIT_PARSE)
    r = checks.run(lemma, size, budget, sample=sample)
    click.echo(r.summary())
    for msg in r.counterexamples:
        click.echo(f"  counterexample: {msg}")
    if not r.passed:
        sys.exit(EXIT_FUEL if r.exhausted == r.failures else EXIT_FAIL)


if __name__ == "__main__":
    main()
