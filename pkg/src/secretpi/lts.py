"""Labelled transitions, plain and spied, and bounded LTS graphs.

Inputs are early: a derivation carries an input *capability* (subject,
admissibility test, continuation) that is either consumed by a
communication or instantiated at the top over the names of a budget.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

from .congruence import normalize, state_key
from .parser import pretty
from .syntax import (
    NU, Hide, Input, NameSupply, New, Nil, Output, Par, Process, Repl, Spy, TrustedInput,
    all_names, alpha_canonicalize, contains_spy, free_names, rename_binders, substitute,
)

IN = "in"
OUT = "out"
BOUT = "bout"
TAU = "tau"
SPYQ = "spyq"
COMM = "comm"


class Mode(enum.Enum):
    PLAIN = "plain"
    SPIED = "spied"


class ModeMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Action:
    kind: str
    subject: str = ""
    obj: str = ""

    def __str__(self) -> str:
        if self.kind == IN:
            return f"{self.subject}({self.obj})"
        if self.kind == OUT:
            return f"{self.subject}!<{self.obj}>"
        if self.kind == BOUT:
            return f"({self.obj}){self.subject}!<{self.obj}>"
        if self.kind == SPYQ:
            return f"?{self.subject}"
        if self.kind == COMM:
            return f"!{self.subject}"
        return "tau"

    @property
    def free_names(self) -> frozenset:
        if self.kind in (IN, BOUT):
            return frozenset({self.subject})
        if self.kind == OUT:
            return frozenset({self.subject, self.obj})
        if self.kind in (SPYQ, COMM):
            return frozenset({self.subject})
        return frozenset()

    @property
    def bound_names(self) -> frozenset:
        return frozenset({self.obj}) if self.kind in (IN, BOUT) else frozenset()

    @property
    def subj(self) -> frozenset:
        return frozenset({self.subject}) if self.kind in (IN, OUT, BOUT) else frozenset()

    @property
    def objects(self) -> frozenset:
        return frozenset({self.obj}) if self.kind in (IN, OUT) else frozenset()


TAU_ACTION = Action(TAU)


def In(x, z):
    return Action(IN, x, z)


def Out(x, z):
    return Action(OUT, x, z)


def BoundOut(x, z):
    return Action(BOUT, x, z)


def SpyQuery(x):
    return Action(SPYQ, x)


def CommSignal(x):
    return Action(COMM, x)


def parse_action(text: str) -> Action:
    """Inverse of ``str(Action)``."""
    if text == "tau":
        return TAU_ACTION
    if text.startswith("?"):
        return SpyQuery(text[1:])
    if text.startswith("(") and ")" in text:
        obj, rest = text[1:].split(")", 1)
        return BoundOut(rest.split("!<", 1)[0], obj)
    if text.startswith("!"):
        return CommSignal(text[1:])
    if text.endswith(">") and "!<" in text:
        subj, obj = text[:-1].split("!<", 1)
        return Out(subj, obj)
    if text.endswith(")") and "(" in text:
        subj, obj = text[:-1].split("(", 1)
        return In(subj, obj)
    raise ValueError(f"not an action: {text!r}")


@dataclass(frozen=True)
class NameBudget:
    """Finite set of names tried as objects of input actions."""

    known: frozenset = frozenset()
    fresh_count: int = 1
    extra: tuple = ()

    def __post_init__(self):
        if self.fresh_count < 1:
            raise ValueError("fresh_count must be at least 1")

    def candidates(self) -> list:
        fresh = [f"fresh#{i}" for i in range(1, self.fresh_count + 1)]
        return sorted(set(self.known) | set(fresh) | set(self.extra))


@dataclass(frozen=True)
class _InputCap:
    subject: str
    accepts: Callable
    cont: Callable


def _wrap_in(cap: _InputCap, wrap, accepts=None) -> _InputCap:
    acc = cap.accepts if accepts is None else accepts
    return _InputCap(cap.subject, acc, lambda z, k=cap.cont: wrap(k(z)))


def _communication(mode, x):
    return TAU_ACTION if mode is Mode.PLAIN else CommSignal(x)


def _sync(left, right, lproc, rproc, mode, flip):
    """Com, Close and Spy-Com between transitions of two parallel components."""
    out = []
    for la, lt in left:
        if isinstance(la, _InputCap):
            for ra, rt in right:
                if isinstance(ra, _InputCap) or ra.subject != la.subject:
                    continue
                if ra.kind == OUT and la.accepts(ra.obj):
                    got = la.cont(ra.obj)
                    out.append((_communication(mode, la.subject),
                                Par(rt, got) if flip else Par(got, rt)))
                elif ra.kind == BOUT and la.accepts(ra.obj) and ra.obj not in free_names(lproc):
                    got = la.cont(ra.obj)
                    out.append((_communication(mode, la.subject),
                                New(ra.obj, Par(rt, got) if flip else Par(got, rt))))
        elif la.kind == COMM:
            for ra, rt in right:
                if not isinstance(ra, _InputCap) and ra.kind == SPYQ and ra.subject == la.subject:
                    out.append((TAU_ACTION, Par(rt, lt) if flip else Par(lt, rt)))
    return out


def _trans(p: Process, mode: Mode, supply: NameSupply) -> list:
    if isinstance(p, Nil):
        return []
    if isinstance(p, Input):
        return [(_InputCap(p.subject, lambda z, b=p.blocked: z not in b,
                           lambda z, q=p: substitute(q.body, z, q.param)), None)]
    if isinstance(p, TrustedInput):
        return [(_InputCap(p.subject, lambda z, a=p.accepted: z in a,
                           lambda z, q=p: substitute(q.body, z, q.param)), None)]
    if isinstance(p, Output):
        return [(Out(p.subject, p.obj), p.body)]
    if isinstance(p, Spy):
        (x,) = p.spied if p.spied else (NU,)
        return [(SpyQuery(x), p.body)]
    if isinstance(p, Par):
        L, R = p.left, p.right
        tl, tr = _trans(L, mode, supply), _trans(R, mode, supply)
        out = []
        for a, t in tl:
            if isinstance(a, _InputCap):
                out.append((_wrap_in(a, lambda q: Par(q, R)), None))
            elif not (a.bound_names & free_names(R)) or a.kind == IN:
                out.append((a, Par(t, R)))
        for a, t in tr:
            if isinstance(a, _InputCap):
                out.append((_wrap_in(a, lambda q: Par(L, q)), None))
            elif not (a.bound_names & free_names(L)) or a.kind == IN:
                out.append((a, Par(L, t)))
        out.extend(_sync(tl, tr, L, R, mode, flip=False))
        out.extend(_sync(tr, tl, R, L, mode, flip=True))
        return out
    if isinstance(p, New):
        w = p.name
        out = []
        for a, t in _trans(p.body, mode, supply):
            if isinstance(a, _InputCap):
                if a.subject != w:
                    out.append((_wrap_in(a, lambda q: New(w, q)), None))
            elif a.kind == OUT:
                if a.subject == w:
                    continue
                if a.obj == w:
                    out.append((BoundOut(a.subject, w), t))  # Open
                else:
                    out.append((a, New(w, t)))
            elif a.kind == BOUT:
                if a.subject != w:
                    out.append((a, New(w, t)))
            elif a.kind in (COMM, SPYQ):
                relabeled = Action(a.kind, NU) if a.subject == w else a
                out.append((relabeled, New(w, t)))
            else:
                out.append((a, New(w, t)))
        return out
    if isinstance(p, Hide):
        h = p.name
        out = []
        for a, t in _trans(p.body, mode, supply):
            if isinstance(a, _InputCap):
                if a.subject != h:
                    acc = lambda z, f=a.accepts: z != h and f(z)
                    out.append((_wrap_in(a, lambda q: Hide(h, q), acc), None))
            elif a.kind in (OUT, BOUT):
                if h not in a.subj and h not in a.objects:
                    out.append((a, Hide(h, t)))
            elif a.kind in (COMM, SPYQ):
                out.append((TAU_ACTION if a.subject == h else a, Hide(h, t)))
            else:
                out.append((a, Hide(h, t)))
        return out
    if isinstance(p, Repl):
        copy = rename_binders(p.body, supply.fresh)
        out = []
        for a, t in _trans(copy, mode, supply):
            if isinstance(a, _InputCap):
                out.append((_wrap_in(a, lambda q: Par(q, p)), None))
            else:
                out.append((a, Par(t, p)))
        return out
    raise TypeError(f"not a process: {p!r}")


def transitions(p: Process, mode: Mode = Mode.PLAIN, budget: NameBudget | None = None) -> list:
    """All ``(action, successor)`` pairs derivable for ``p``.

    Input actions are instantiated over ``budget.candidates()``; the object
    of a bound output is the (canonical) restricted name itself.
    """
    mode = Mode(mode)
    if mode is Mode.PLAIN and contains_spy(p):
        raise ModeMismatch("spy terms need the spied semantics")
    if budget is None:
        budget = NameBudget(free_names(p))
    cands = budget.candidates()
    p = alpha_canonicalize(p, avoid=cands)
    supply = NameSupply(all_names(p) | set(cands))
    result = []
    for a, t in _trans(p, mode, supply):
        if isinstance(a, _InputCap):
            for z in cands:
                if a.accepts(z):
                    result.append((In(a.subject, z), a.cont(z)))
        else:
            result.append((a, t))
    return result


# ---------------------------------------------------------------------------
# graphs

@dataclass
class LtsGraph:
    states: list = field(default_factory=list)   # normalized processes
    extruded: list = field(default_factory=list)  # names extruded so far, per state
    edges: list = field(default_factory=list)    # (src, Action, dst)
    unexplored: set = field(default_factory=set)
    bound_hit: bool = False

    def successors(self, i):
        return [(a, d) for s, a, d in self.edges if s == i]

    def to_machine(self) -> str:
        lines = [f"state {i} {pretty(p)}" for i, p in enumerate(self.states)]
        lines += [f"edge {s} {a} {d}" for s, a, d in self.edges]
        lines.append(f"boundhit {int(self.bound_hit)}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        def q(text):
            return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'

        lines = ["digraph lts {", "  node [shape=box];"]
        for i, p in enumerate(self.states):
            style = ", style=dashed" if i in self.unexplored else ""
            lines.append(f"  s{i} [label={q(pretty(p))}{style}];")
        for s, a, d in self.edges:
            lines.append(f"  s{s} -> s{d} [label={q(str(a))}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def parse_machine(text: str) -> LtsGraph:
    """Read back the line format written by ``LtsGraph.to_machine``."""
    from .parser import parse

    g = LtsGraph()
    for line in text.splitlines():
        if not line.strip():
            continue
        tag, rest = line.split(" ", 1)
        if tag == "state":
            _, term = rest.split(" ", 1)
            g.states.append(parse(term))
        elif tag == "edge":
            s, a, d = rest.split(" ")
            g.edges.append((int(s), parse_action(a), int(d)))
        elif tag == "boundhit":
            g.bound_hit = rest.strip() == "1"
        else:
            raise ValueError(f"unknown record {tag!r}")
    return g


def build_graph(p: Process, mode: Mode = Mode.PLAIN, budget: NameBudget | None = None,
                max_states: int = 5000) -> LtsGraph:
    """Explore the LTS of ``p`` breadth-first, up to ``max_states`` states.

    Extruded names are renamed to ``ext#1, ext#2, ...`` in order, so that
    bound outputs of different processes carry comparable labels; they then
    join the input candidates.
    """
    if max_states <= 0:
        raise ValueError("max_states must be positive")
    mode = Mode(mode)
    if budget is None:
        budget = NameBudget(free_names(p))
    g = LtsGraph()
    start = normalize(p)
    index = {(state_key(start), 0): 0}
    g.states.append(start)
    g.extruded.append(0)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        n = g.extruded[i]
        local = NameBudget(budget.known, budget.fresh_count,
                           tuple(budget.extra) + tuple(f"ext#{k}" for k in range(1, n + 1)))
        seen_edges = set()
        for a, t in transitions(g.states[i], mode, local):
            m = n
            if a.kind == BOUT:
                m = n + 1
                name = f"ext#{m}"
                t = substitute(t, name, a.obj)
                a = BoundOut(a.subject, name)
            t = normalize(t)
            key = (state_key(t), m)
            j = index.get(key)
            if j is None:
                if len(g.states) >= max_states:
                    g.bound_hit = True
                    g.unexplored.add(i)
                    continue
                j = index[key] = len(g.states)
                g.states.append(t)
                g.extruded.append(m)
                queue.append(j)
            if (a, j) not in seen_edges:
                seen_edges.add((a, j))
                g.edges.append((i, a, j))
    return g


def weak_closure(p: Process, mode: Mode, budget: NameBudget | None, action: Action,
                 max_states: int = 5000) -> list:
    """Processes reachable by ``τ* α̂ τ*`` (just ``τ*`` when ``α`` is τ)."""
    g = build_graph(p, mode, budget, max_states)

    def tau_star(sources):
        seen = set(sources)
        todo = list(sources)
        while todo:
            s = todo.pop()
            for a, d in g.successors(s):
                if a.kind == TAU and d not in seen:
                    seen.add(d)
                    todo.append(d)
        return seen

    before = tau_star({0})
    if action.kind == TAU:
        reached = before
    else:
        mid = {d for s in before for a, d in g.successors(s) if a == action}
        reached = tau_star(mid)
    return [g.states[i] for i in sorted(reached)]
