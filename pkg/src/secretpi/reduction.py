"""One-step reduction (plain and spied), multi-step closure and reachability.

Rule Struct is realised by normalizing to a standard form first: every redex
of a term is a redex between threads of its standard form, possibly after
unfolding replicated threads.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .congruence import (
    HIDE, StandardForm, flatten, from_standard_form, normalize, state_key, to_standard_form,
)
from .syntax import (
    Input, NameSupply, Output, Process, Repl, Spy, TrustedInput, all_names, block_names,
    free_names, rename_binders, substitute,
)

COM = "com"
TCOM = "tcom"
SCOM = "scom"
STCOM = "stcom"

DEFAULT_REPL_UNFOLD = 2


@dataclass(frozen=True)
class Redex:
    kind: str
    sender: int
    receiver: int
    obj: str
    spy: int | None = None

    def parties(self) -> tuple:
        return (self.sender, self.receiver) if self.spy is None else (self.sender, self.receiver, self.spy)


def spy_reach(s: StandardForm, t: Spy) -> frozenset:
    """Channels whose communications the spy thread ``t`` may witness.

    A spy can be pulled out of any lifted ``new n`` with ``n`` not free in its
    continuation and pushed back in as ``spy:n``; lifted ``hide`` binders never
    promote it.
    """
    restricted = s.restricted
    fv_body = free_names(t.body)
    movable = frozenset(n for n in restricted if n not in fv_body)
    if not t.spied:
        return movable
    (x,) = t.spied
    if x in restricted and x not in fv_body:
        return movable | {x}
    return frozenset({x})


def enumerate_redexes(s: StandardForm) -> list[Redex]:
    threads = s.threads
    outputs = [(i, t) for i, t in enumerate(threads) if isinstance(t, Output)]
    spies = [(i, spy_reach(s, t)) for i, t in enumerate(threads) if isinstance(t, Spy)]
    found = []
    for j, recv in enumerate(threads):
        if isinstance(recv, Input):
            kind, ok = COM, lambda z, r=recv: z not in r.blocked
        elif isinstance(recv, TrustedInput):
            kind, ok = TCOM, lambda z, r=recv: z in r.accepted
        else:
            continue
        for i, send in outputs:
            if send.subject != recv.subject or not ok(send.obj):
                continue
            found.append(Redex(kind, i, j, send.obj))
            for k, reach in spies:
                if send.subject in reach:
                    found.append(Redex(SCOM if kind == COM else STCOM, i, j, send.obj, k))
    return found


def apply_redex(s: StandardForm, r: Redex) -> Process:
    send = s.threads[r.sender]
    recv = s.threads[r.receiver]
    assert send.subject == recv.subject and send.obj == r.obj
    if isinstance(recv, Input):
        assert r.obj not in recv.blocked, "received a blocked name"
    else:
        assert r.obj in recv.accepted, "received a name outside the accepted set"
    rest = [t for i, t in enumerate(s.threads) if i not in r.parties()]
    new_threads = [substitute(recv.body, r.obj, recv.param), send.body]
    if r.spy is not None:
        new_threads.append(s.threads[r.spy].body)
    return from_standard_form(StandardForm(s.binders, tuple(rest + new_threads)))


def _with_copies(s: StandardForm, combo: tuple) -> tuple[StandardForm, list]:
    """Standard form of ``s`` plus one unfolded copy per entry of ``combo``.

    Returns the form and, per thread, the copy id it came from (None for base).
    """
    supply = NameSupply(all_names(from_standard_form(s)))
    binders = list(s.binders)
    threads = list(s.threads)
    owner: list = [None] * len(threads)
    for cid, idx in enumerate(combo):
        copy = rename_binders(s.threads[idx].body, supply.fresh)
        cb, ct = flatten(copy)
        hides = [n for k, n in cb if k == HIDE]
        if hides:
            threads = [block_names(t, hides) for t in threads]
        binders.extend(cb)
        threads.extend(ct)
        owner.extend([cid] * len(ct))
    return StandardForm(tuple(binders), tuple(threads)), owner


def step(p: Process, repl_unfold: int = DEFAULT_REPL_UNFOLD) -> list[Process]:
    """All one-step reducts of ``p``, deduplicated up to congruence."""
    s = to_standard_form(p)
    results: dict = {}

    def keep(q):
        q = normalize(q)
        results.setdefault(state_key(q), q)

    for r in enumerate_redexes(s):
        keep(apply_redex(s, r))

    repl_idx = [i for i, t in enumerate(s.threads) if isinstance(t, Repl)]
    for k in range(1, repl_unfold + 1):
        for combo in combinations_with_replacement(repl_idx, k):
            v, owner = _with_copies(s, combo)
            for r in enumerate_redexes(v):
                used = {owner[i] for i in r.parties()}
                if used >= set(range(k)):
                    keep(apply_redex(v, r))
    return list(results.values())


@dataclass
class ReachResult:
    states: list = field(default_factory=list)  # normalized processes, BFS order
    edges: list = field(default_factory=list)   # (src index, dst index)
    bound_hit: bool = False

    def __iter__(self):
        yield self.states
        yield self.bound_hit


def reach(p: Process, max_steps: int = 64, max_states: int = 5000,
          repl_unfold: int = DEFAULT_REPL_UNFOLD) -> ReachResult:
    """Breadth-first closure of ``step`` (the relation ``⇒``)."""
    if max_steps <= 0 or max_states <= 0:
        raise ValueError("bounds must be positive")
    start = normalize(p)
    index = {state_key(start): 0}
    out = ReachResult(states=[start])
    frontier = deque([(0, 0)])
    while frontier:
        i, depth = frontier.popleft()
        succs = step(out.states[i], repl_unfold)
        if depth >= max_steps:
            if any(state_key(q) not in index for q in succs):
                out.bound_hit = True
            continue
        for q in succs:
            k = state_key(q)
            j = index.get(k)
            if j is None:
                if len(out.states) >= max_states:
                    out.bound_hit = True
                    continue
                j = index[k] = len(out.states)
                out.states.append(q)
                frontier.append((j, depth + 1))
            out.edges.append((i, j))
    return out


def erase_spies(p: Process) -> Process:
    """Replace every spy prefix by its continuation."""
    from .syntax import Hide, New, Nil, Par

    if isinstance(p, Nil):
        return p
    if isinstance(p, Spy):
        return erase_spies(p.body)
    if isinstance(p, Par):
        return Par(erase_spies(p.left), erase_spies(p.right))
    if isinstance(p, Input):
        return Input(p.subject, p.param, p.blocked, erase_spies(p.body))
    if isinstance(p, TrustedInput):
        return TrustedInput(p.subject, p.param, p.accepted, erase_spies(p.body))
    if isinstance(p, Output):
        return Output(p.subject, p.obj, erase_spies(p.body))
    if isinstance(p, Repl):
        return Repl(erase_spies(p.body))
    if isinstance(p, (New, Hide)):
        return type(p)(p.name, erase_spies(p.body))
    raise TypeError(p)
