"""Calculus-agnostic rewriting: redex search, normalization, reachability,
bounded SN probing, trace replay and size-bounded term enumeration."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Iterable, Iterator, Optional

from .nodes import children, replace_at, size, subterm_at, with_child

Path = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class ReductionStep:
    rule: str
    at: Path
    before: Any
    after: Any


@dataclass(frozen=True)
class Trace:
    start: Any
    steps: tuple = ()

    @property
    def end(self):
        return self.steps[-1].after if self.steps else self.start

    def __len__(self):
        return len(self.steps)

    def rules(self) -> list[str]:
        return [s.rule for s in self.steps]

    def then(self, other: "Trace") -> "Trace":
        if self.end != other.start:
            raise TraceError("traces do not chain")
        return Trace(self.start, self.steps + other.steps)


class TraceError(Exception):
    pass


class FuelExhausted(Exception):
    def __init__(self, trace: Trace):
        super().__init__(f"fuel exhausted after {len(trace)} steps")
        self.trace = trace


class SearchExhausted(Exception):
    pass


@dataclass(frozen=True)
class ProvedSN:
    max_depth: int
    visited: int = 0


@dataclass(frozen=True)
class BudgetExhausted:
    visited: int
    loop: Optional[Trace] = None


SnVerdict = ProvedSN | BudgetExhausted


class RewriteSystem:
    """A calculus: its rule table, a root-rule function and an equality.

    `root(t)` returns the (label, reduct) pairs of rules that apply at the
    root of t, in rule-table order.  `key(t)` maps a term to a hashable
    canonical form; two terms are equal iff their keys are.
    """

    def __init__(self, name: str, rules: Iterable[str], root: Callable,
                 key: Callable = lambda t: t):
        self.name = name
        self.rules = tuple(rules)
        self.root = root
        self.key = key

    def check_labels(self, labels) -> frozenset:
        labels = frozenset(labels)
        unknown = labels - set(self.rules)
        if unknown:
            raise ValueError(f"unknown rules for {self.name}: {sorted(unknown)}")
        return labels

    def equal(self, a, b) -> bool:
        return self.key(a) == self.key(b)

    def restricted(self, labels) -> "RewriteSystem":
        labels = self.check_labels(labels)
        root = self.root

        def sub(t):
            return [(l, r) for l, r in root(t) if l in labels]

        return RewriteSystem(self.name, [r for r in self.rules if r in labels], sub, self.key)

    def __repr__(self):
        return f"RewriteSystem({self.name})"


def _iter(sys: RewriteSystem, t, restrict) -> Iterator[tuple]:
    # yields (label, path, new_subterm_at_this_level) in preorder, rule order
    for label, r in sys.root(t):
        if restrict is None or label in restrict:
            yield label, (), r
    for i, c in enumerate(children(t)):
        for label, p, r in _iter(sys, c, restrict):
            yield label, (i,) + p, with_child(t, i, r)


def iter_redexes(sys: RewriteSystem, t, restrict=None) -> Iterator[tuple]:
    if restrict is not None:
        restrict = sys.check_labels(restrict)
    return _iter(sys, t, restrict)


def redexes(sys: RewriteSystem, t, restrict=None) -> list[tuple]:
    """All one-step reducts as (rule, path, reduct)."""
    return list(iter_redexes(sys, t, restrict))


def apply_at(sys: RewriteSystem, t, path: Path, rule: str) -> list:
    sub = subterm_at(t, path)
    return [replace_at(t, path, r) for l, r in sys.root(sub) if l == rule]


def step_once(sys, t, restrict=None) -> Optional[ReductionStep]:
    for label, path, r in iter_redexes(sys, t, restrict):
        return ReductionStep(label, path, t, r)
    return None


def normalize(sys: RewriteSystem, t, restrict=None, fuel: int = 1000) -> tuple[Any, Trace]:
    """Contract the first redex until none is left; raise FuelExhausted past fuel."""
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    steps = []
    cur = t
    while True:
        st = step_once(sys, cur, restrict)
        if st is None:
            return cur, Trace(t, tuple(steps))
        if len(steps) >= fuel:
            raise FuelExhausted(Trace(t, tuple(steps)))
        steps.append(st)
        cur = st.after


def reachable(sys: RewriteSystem, src, dst, restrict=None, max_depth: int = 10) -> Optional[Trace]:
    """Shortest trace from src to a term equal to dst, by BFS up to max_depth."""
    if restrict is not None:
        restrict = sys.check_labels(restrict)
    goal = sys.key(dst)
    k0 = sys.key(src)
    if k0 == goal:
        return Trace(src)
    parent = {k0: None}
    frontier = deque([(src, k0, 0)])
    while frontier:
        t, k, d = frontier.popleft()
        if d >= max_depth:
            continue
        for label, path, r in _iter(sys, t, restrict):
            kr = sys.key(r)
            if kr in parent:
                continue
            parent[kr] = (k, ReductionStep(label, path, t, r))
            if kr == goal:
                steps = []
                while parent[kr] is not None:
                    kr, st = parent[kr]
                    steps.append(st)
                return Trace(src, tuple(reversed(steps)))
            frontier.append((r, kr, d + 1))
    return None


def is_sn(sys: RewriteSystem, t, budget: int = 100_000, restrict=None) -> SnVerdict:
    """Exhaustive DFS of the reduction graph of t.

    ProvedSN(d) means the whole graph was explored, it is acyclic and its
    longest path has length d.  Exceeding the budget of distinct terms, or
    meeting a term already on the current path, gives BudgetExhausted; the
    latter carries the loop as a trace.
    """
    if restrict is not None:
        restrict = sys.check_labels(restrict)
    depth: dict = {}
    on_path: dict = {}
    visited = 0
    # frame: [term, key, successors, next index, best, incoming step]
    k0 = sys.key(t)
    stack = [[t, k0, None, 0, 0, None]]
    on_path[k0] = 0
    visited = 1
    while stack:
        fr = stack[-1]
        if fr[2] is None:
            # smaller reducts first: loops through contracting steps surface early
            fr[2] = sorted(_iter(sys, fr[0], restrict), key=lambda x: size(x[2]))
        if fr[3] < len(fr[2]):
            label, path, r = fr[2][fr[3]]
            fr[3] += 1
            kr = sys.key(r)
            if kr in depth:
                fr[4] = max(fr[4], depth[kr] + 1)
                continue
            step = ReductionStep(label, path, fr[0], r)
            if kr in on_path:
                pos = on_path[kr]
                steps = [f[5] for f in stack[pos + 1:]] + [step]
                return BudgetExhausted(visited, Trace(stack[pos][0], tuple(steps)))
            visited += 1
            if visited > budget:
                return BudgetExhausted(visited)
            on_path[kr] = len(stack)
            stack.append([r, kr, None, 0, 0, step])
            continue
        stack.pop()
        del on_path[fr[1]]
        depth[fr[1]] = fr[4]
        if stack:
            stack[-1][4] = max(stack[-1][4], fr[4] + 1)
    return ProvedSN(depth[k0], visited)


def replay(sys: RewriteSystem, trace: Trace) -> None:
    """Re-derive every step of a trace; raise TraceError on the first mismatch."""
    cur = trace.start
    for n, st in enumerate(trace.steps):
        if st.before != cur:
            raise TraceError(f"step {n}: before does not continue the trace")
        if st.rule not in sys.rules:
            raise TraceError(f"step {n}: unknown rule {st.rule!r}")
        try:
            results = apply_at(sys, cur, st.at, st.rule)
        except (AttributeError, IndexError, TypeError):
            raise TraceError(f"step {n}: invalid path {st.at}") from None
        if st.after not in results:
            raise TraceError(f"step {n}: {st.rule} at {st.at} does not produce the recorded term")
        cur = st.after


def valid(sys: RewriteSystem, trace: Trace) -> bool:
    try:
        replay(sys, trace)
        return True
    except TraceError:
        return False


def shift_trace(trace: Trace, prefix: Path, context: Callable) -> Trace:
    """Embed a trace into a context: `context(x)` plugs x at `prefix`."""
    steps = tuple(ReductionStep(s.rule, prefix + s.at, context(s.before), context(s.after))
                  for s in trace.steps)
    return Trace(context(trace.start), steps)


def map_trace(sys: RewriteSystem, trace: Trace, f: Callable) -> Trace:
    """Transport a trace through a shape-preserving map f, re-deriving each step."""
    start = f(trace.start)
    cur = start
    steps = []
    for st in trace.steps:
        results = apply_at(sys, cur, st.at, st.rule)
        target = f(st.after)
        if target not in results:
            raise TraceError(f"{st.rule} at {st.at} does not commute with the map")
        steps.append(ReductionStep(st.rule, st.at, cur, target))
        cur = target
    return Trace(start, tuple(steps))


# ---- enumeration -----------------------------------------------------------


@dataclass(frozen=True)
class Prod:
    """A grammar production: `build(param, *kids)`, each kid drawn from a sort."""

    build: Callable
    kids: tuple = ()
    params: tuple = (None,)
    cost: int = 1


@dataclass
class Grammar:
    sorts: dict  # sort -> list[Prod]
    start: str
    _memo: dict = field(default_factory=dict, repr=False)

    def of_size(self, sort: str, n: int) -> list:
        key = (sort, n)
        if key not in self._memo:
            self._memo[key] = list(self.iter_size(sort, n))
        return self._memo[key]

    def iter_size(self, sort: str, n: int) -> Iterator:
        """Terms of exactly n nodes, built lazily from memoized smaller sizes."""
        if (sort, n) in self._memo:
            yield from self._memo[(sort, n)]
            return
        for prod in self.sorts[sort]:
            rest = n - prod.cost
            if rest < len(prod.kids) or (not prod.kids and rest != 0):
                continue
            for split in _compositions(rest, len(prod.kids)):
                pools = [self.of_size(s, k) for s, k in zip(prod.kids, split)]
                if any(not p for p in pools):
                    continue
                for kids in product(*pools):
                    for p in prod.params:
                        yield prod.build(p, *kids)

    def up_to(self, max_size: int, sort: Optional[str] = None) -> Iterator:
        """Sizes below max_size are memoized; the largest is streamed."""
        sort = sort or self.start
        for n in range(1, max_size):
            yield from self.of_size(sort, n)
        if max_size >= 1:
            yield from self.iter_size(sort, max_size)


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_terms(calculus, max_size: int, **opts) -> Iterator:
    """Every term of the calculus with at most max_size nodes, each once.

    `calculus` is a calculus id such as "lx" or a Grammar.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    if isinstance(calculus, Grammar):
        return calculus.up_to(max_size)
    from .registry import grammar_for

    g = grammar_for(calculus, max_size, **opts)
    return g.up_to(max_size)
