"""Barbs, weak barbs and bounded weak bisimilarity (plain and spied)."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import kernels
from .lts import TAU, TAU_ACTION, LtsGraph, Mode, NameBudget, build_graph, parse_action
from .reduction import reach
from .syntax import (
    NU, Hide, Input, New, Output, Par, Process, Repl, TrustedInput,
    alpha_canonicalize, free_names,
)

INPUT = "in"
OUTPUT = "out"


@dataclass(frozen=True, order=True)
class Barb:
    subject: str
    polarity: str = OUTPUT

    def __post_init__(self):
        if self.subject == NU:
            raise ValueError("nu cannot be a barb subject")
        if self.polarity not in (INPUT, OUTPUT):
            raise ValueError(f"bad polarity {self.polarity!r}")

    def __str__(self):
        return f"{self.subject}!" if self.polarity == OUTPUT else self.subject


def barbs(p: Process) -> frozenset:
    """Immediate barbs, judged against enclosing binders only."""
    found = set()

    def walk(q, bound, hidden):
        if isinstance(q, Par):
            walk(q.left, bound, hidden)
            walk(q.right, bound, hidden)
        elif isinstance(q, New):
            walk(q.body, bound | {q.name}, hidden)
        elif isinstance(q, Hide):
            walk(q.body, bound | {q.name}, hidden | {q.name})
        elif isinstance(q, Repl):
            walk(q.body, bound, hidden)
        elif isinstance(q, Output):
            if q.subject not in bound and q.obj not in hidden:
                found.add(Barb(q.subject, OUTPUT))
        elif isinstance(q, Input):
            if q.subject not in bound:
                found.add(Barb(q.subject, INPUT))
        elif isinstance(q, TrustedInput):
            if q.subject not in bound and q.accepted - bound:
                found.add(Barb(q.subject, INPUT))
        # Nil and spy prefixes exhibit nothing

    walk(alpha_canonicalize(p), frozenset(), frozenset())
    return frozenset(found)


@dataclass(frozen=True)
class Bounds:
    max_steps: int = 64
    max_states: int = 5000
    repl_unfold: int = 2
    fresh_count: int = 1

    def __post_init__(self):
        for name in ("max_steps", "max_states", "repl_unfold", "fresh_count"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")


def weak_barbs(p: Process, bounds: Bounds = Bounds()) -> tuple[frozenset, bool]:
    """All barbs of states reachable from ``p``, and whether a bound was hit."""
    states, hit = reach(p, bounds.max_steps, bounds.max_states, bounds.repl_unfold)
    out = set()
    for q in states:
        out |= barbs(q)
    return frozenset(out), hit


def weak_barb(p: Process, b: Barb, bounds: Bounds = Bounds()):
    """``True`` if ``p ⇒ p'`` with ``p'`` exhibiting ``b``; ``None`` when the
    search was truncated without finding it; ``False`` otherwise."""
    found, hit = weak_barbs(p, bounds)
    if b in found:
        return True
    return None if hit else False


# ---------------------------------------------------------------------------
# verdicts

@dataclass(frozen=True)
class TraceStep:
    side: str            # "left" or "right": the process making the move
    action: object       # lts.Action
    attacker: int        # attacker's state after the move (own graph ids)
    defender: int | None  # defender's chosen answer, None when it has none


@dataclass
class Bisimilar:
    relation: frozenset  # pairs (left state id, right state id)
    left: LtsGraph = field(repr=False, default=None)
    right: LtsGraph = field(repr=False, default=None)
    name = "bisimilar"

    def lines(self):
        return [f"verdict {self.name}"] + [f"pair {i} {j}" for i, j in sorted(self.relation)]


@dataclass
class NotBisimilar:
    trace: list
    left: LtsGraph = field(repr=False, default=None)
    right: LtsGraph = field(repr=False, default=None)
    name = "not-bisimilar"

    @property
    def actions(self):
        return [s.action for s in self.trace]

    def lines(self):
        return [f"verdict {self.name}"] + [f"trace {s.action}" for s in self.trace]


@dataclass
class Inconclusive:
    reason: str
    name = "inconclusive"

    def lines(self):
        return [f"verdict {self.name}", f"reason {self.reason}"]


def serialize_verdict(v) -> str:
    return "\n".join(v.lines()) + "\n"


def parse_verdict(text: str):
    """Read the line format back (graphs are not part of it)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split(" ", 1)
    if head[0] != "verdict":
        raise ValueError("missing verdict line")
    kind = head[1]
    if kind == "bisimilar":
        pairs = {tuple(int(t) for t in ln.split()[1:3]) for ln in lines[1:]}
        return Bisimilar(frozenset(pairs))
    if kind == "not-bisimilar":
        steps = [TraceStep("", parse_action(ln.split(" ", 1)[1]), -1, None) for ln in lines[1:]]
        return NotBisimilar(steps)
    if kind == "inconclusive":
        return Inconclusive(lines[1].split(" ", 1)[1] if len(lines) > 1 else "")
    raise ValueError(f"unknown verdict {kind!r}")


# ---------------------------------------------------------------------------
# the check

class _Game:
    """Two graphs glued into one, saturated, and refined."""

    def __init__(self, g1: LtsGraph, g2: LtsGraph):
        self.g1, self.g2 = g1, g2
        self.offset = len(g1.states)
        self.labels = {}
        self.actions = []
        self.tau = self.label_id(None)
        src, lab, dst = [], [], []
        for base, g in ((0, g1), (self.offset, g2)):
            for s, a, d in g.edges:
                src.append(base + s)
                lab.append(self.tau if a.kind == TAU else self.label_id(a))
                dst.append(base + d)
        self.n = self.offset + len(g2.states)
        wsrc, wlab, wdst = kernels.saturate(self.n, src, lab, dst, self.tau)
        self.weak = [[] for _ in range(self.n)]
        for s, a, d in zip(wsrc, wlab, wdst):
            self.weak[s].append((a, d))
        self.rounds = kernels.refine(self.n, wsrc, wlab, wdst)
        self.final = self.rounds[-1]

    def label_id(self, action):
        if action not in self.labels:
            self.labels[action] = len(self.actions)
            self.actions.append(action)
        return self.labels[action]

    def action(self, lab):
        return TAU_ACTION if lab == self.tau else self.actions[lab]

    def split_round(self, s, t):
        for r, blocks in enumerate(self.rounds):
            if blocks[s] != blocks[t]:
                return r
        return None

    def distinguishing_trace(self, s, t):
        """Attacker strategy read off the refinement history."""
        trace = []
        while True:
            r = self.split_round(s, t)
            prev = self.rounds[r - 1]
            move = None
            for att, dfn, side in ((s, t, "left"), (t, s, "right")):
                answers = {}
                for a, d in self.weak[dfn]:
                    answers.setdefault(a, []).append(d)
                for a, d in self.weak[att]:
                    blocks = {prev[e] for e in answers.get(a, ())}
                    if prev[d] not in blocks:
                        move = (side, a, d, answers.get(a, []))
                        break
                if move:
                    break
            side, a, d, options = move
            if not options:
                trace.append(self._step(side, a, d, None))
                return trace
            # every answer lands in a block different from d's; follow the first
            e = options[0]
            trace.append(self._step(side, a, d, e))
            s, t = (d, e) if side == "left" else (e, d)

    def _step(self, side, lab, att, dfn):
        def local(i):
            if i is None:
                return None
            return i - self.offset if i >= self.offset else i
        return TraceStep(side, self.action(lab), local(att), local(dfn))


def bisimilar(p: Process, q: Process, mode: Mode = Mode.PLAIN, bounds: Bounds = Bounds()):
    """Bounded weak bisimilarity of ``p`` and ``q``.

    Both graphs share a name budget made of the free names of either side plus
    ``bounds.fresh_count`` fresh names.  Any truncation gives ``Inconclusive``.
    """
    mode = Mode(mode)
    budget = NameBudget(free_names(p) | free_names(q), bounds.fresh_count)
    g1 = build_graph(p, mode, budget, bounds.max_states)
    g2 = build_graph(q, mode, budget, bounds.max_states)
    if g1.bound_hit or g2.bound_hit:
        return Inconclusive("boundHit")
    game = _Game(g1, g2)
    final, off = game.final, game.offset
    if final[0] == final[off]:
        rel = frozenset((i, j) for i in range(off) for j in range(len(g2.states))
                        if final[i] == final[off + j])
        return Bisimilar(rel, g1, g2)
    return NotBisimilar(game.distinguishing_trace(0, off), g1, g2)


def replay(verdict: NotBisimilar) -> bool:
    """Check a distinguishing trace against the verdict's graphs.

    Every attacker and defender move must be a weak move with the recorded
    label, and the last move must have no weak answer at all.
    """
    game = _Game(verdict.left, verdict.right)
    s, t = 0, game.offset

    def weak_moves(state, action):
        lab = game.tau if action.kind == TAU else game.labels.get(action)
        return {d for a, d in game.weak[state] if a == lab}

    for k, step in enumerate(verdict.trace):
        att, dfn = (s, t) if step.side == "left" else (t, s)
        att_base = 0 if step.side == "left" else game.offset
        dfn_base = game.offset if step.side == "left" else 0
        if att_base + step.attacker not in weak_moves(att, step.action):
            return False
        answers = weak_moves(dfn, step.action)
        if step.defender is None:
            return k == len(verdict.trace) - 1 and not answers
        if dfn_base + step.defender not in answers:
            return False
        na, nd = att_base + step.attacker, dfn_base + step.defender
        s, t = (na, nd) if step.side == "left" else (nd, na)
    return False
