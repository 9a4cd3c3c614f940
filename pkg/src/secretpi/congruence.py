"""Structural congruence: standard forms, state keys and a bounded closure search.

Normalization lifts every ``new``/``hide`` binder to the outermost level.  A
thread entering the scope of a lifted ``hide h`` gets ``⊎ h`` applied, so the
result is a flat multiset of prefix-headed (or replicated) threads under one
binder prefix.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .syntax import (
    NIL, Hide, Input, New, Nil, Output, Par, Process, Repl, Spy, TrustedInput,
    all_names, alpha_canonicalize, alpha_eq, alpha_key, block_name, block_names, free_names,
    is_canonical, rename_binders, substitute, NameSupply, par,
)

NEW = "new"
HIDE = "hide"


@dataclass(frozen=True)
class StandardForm:
    binders: tuple  # ((kind, name), ...) with kind in {NEW, HIDE}
    threads: tuple  # prefix-headed, Repl or Spy processes; never Nil or Par

    @property
    def hidden(self) -> frozenset:
        return frozenset(n for k, n in self.binders if k == HIDE)

    @property
    def restricted(self) -> frozenset:
        return frozenset(n for k, n in self.binders if k == NEW)

    def is_nil(self) -> bool:
        return not self.threads and not self.binders


def flatten(p: Process) -> tuple[list, list]:
    """Lift binders out of ``p`` (alpha-canonical) without touching prefixes."""
    if isinstance(p, Nil):
        return [], []
    if isinstance(p, New):
        b, t = flatten(p.body)
        return [(NEW, p.name)] + b, t
    if isinstance(p, Hide):
        b, t = flatten(p.body)
        return [(HIDE, p.name)] + b, t
    if isinstance(p, Par):
        bl, tl = flatten(p.left)
        br, tr = flatten(p.right)
        hl = [n for k, n in bl if k == HIDE]
        hr = [n for k, n in br if k == HIDE]
        tl = [block_names(t, hr) for t in tl] if hr else tl
        tr = [block_names(t, hl) for t in tr] if hl else tr
        return bl + br, tl + tr
    return [], [p]


def _only_blocked_everywhere(threads, h) -> bool:
    """True when ``h`` occurs only in blocked sets and every input blocks it,
    i.e. the threads have the shape ``R ⊎ h`` with ``h`` not free in ``R``."""

    def walk(q) -> bool:
        if isinstance(q, Nil):
            return True
        if isinstance(q, Par):
            return walk(q.left) and walk(q.right)
        if isinstance(q, Input):
            if q.subject == h or h not in q.blocked:
                return False
        elif isinstance(q, TrustedInput):
            if q.subject == h or h in q.accepted:
                return False
        elif isinstance(q, Output):
            if h in (q.subject, q.obj):
                return False
        elif isinstance(q, Spy):
            if h in q.spied:
                return False
        return walk(q.body)

    return all(walk(t) for t in threads)


def unblock(p: Process, h) -> Process:
    """Remove ``h`` from every blocked set (inverse of ``⊎ h`` when applicable)."""
    if isinstance(p, Nil):
        return p
    if isinstance(p, Par):
        return Par(unblock(p.left, h), unblock(p.right, h))
    if isinstance(p, Input):
        return Input(p.subject, p.param, p.blocked - {h}, unblock(p.body, h))
    if isinstance(p, TrustedInput):
        return TrustedInput(p.subject, p.param, p.accepted, unblock(p.body, h))
    if isinstance(p, Output):
        return Output(p.subject, p.obj, unblock(p.body, h))
    if isinstance(p, Spy):
        return Spy(p.spied, unblock(p.body, h))
    if isinstance(p, Repl):
        return Repl(unblock(p.body, h))
    return type(p)(p.name, unblock(p.body, h))


def collect_garbage(binders, threads, strip_blocks=False):
    """Drop binders whose scope no longer mentions them.

    ``(new x) P ≡ P`` and ``(hide h) P ≡ P`` when the name is not free in
    ``P``.  With ``strip_blocks``, ``(hide h)(R ⊎ h) ≡ R`` is used as well.
    """
    fv = frozenset().union(*(free_names(t) for t in threads)) if threads else frozenset()
    kept = []
    threads = list(threads)
    for kind, name in binders:
        if name not in fv:
            continue
        if strip_blocks and kind == HIDE and _only_blocked_everywhere(threads, name):
            threads = [unblock(t, name) for t in threads]
            fv = frozenset().union(*(free_names(t) for t in threads)) if threads else frozenset()
            continue
        kept.append((kind, name))
    return kept, threads


def _binder_order(b):
    kind, name = b
    return (0 if kind == HIDE else 1, name)


def to_standard_form(p: Process, strip_blocks=False) -> StandardForm:
    """Normalize to ``binders . (thread | ... | thread)``; replication stays folded."""
    if not is_canonical(p):
        p = alpha_canonicalize(p)
    binders, threads = flatten(p)
    binders, threads = collect_garbage(binders, threads, strip_blocks)
    return StandardForm(tuple(sorted(binders, key=_binder_order)), tuple(threads))


def from_standard_form(s: StandardForm) -> Process:
    body = par(*s.threads)
    for kind, name in reversed(sorted(s.binders, key=_binder_order)):
        body = New(name, body) if kind == NEW else Hide(name, body)
    return body


def normalize(p: Process) -> Process:
    """Deep normal form: standard form at top level and under every prefix."""
    s = to_standard_form(p, strip_blocks=True)
    threads = [_normalize_thread(t) for t in s.threads]
    return alpha_canonicalize(from_standard_form(StandardForm(s.binders, tuple(threads))))


def _normalize_thread(t: Process) -> Process:
    if isinstance(t, Repl):
        return Repl(normalize(t.body))
    body = normalize(t.body)
    if isinstance(t, Input):
        return Input(t.subject, t.param, t.blocked, body)
    if isinstance(t, TrustedInput):
        return TrustedInput(t.subject, t.param, t.accepted, body)
    if isinstance(t, Output):
        return Output(t.subject, t.obj, body)
    if isinstance(t, Spy):
        return Spy(t.spied, body)
    raise TypeError(f"unexpected thread {t!r}")


def _free_in_order(p: Process, wanted) -> list:
    out = []

    def see(n, bound):
        if n in wanted and n not in bound and n not in out:
            out.append(n)

    def walk(q, bound):
        if isinstance(q, Nil):
            return
        if isinstance(q, Par):
            walk(q.left, bound)
            walk(q.right, bound)
            return
        if isinstance(q, (Input, TrustedInput)):
            see(q.subject, bound)
            for n in sorted(q.blocked if isinstance(q, Input) else q.accepted):
                see(n, bound)
            walk(q.body, bound | {q.param})
        elif isinstance(q, Output):
            see(q.subject, bound)
            see(q.obj, bound)
            walk(q.body, bound)
        elif isinstance(q, Spy):
            for n in q.spied:
                see(n, bound)
            walk(q.body, bound)
        elif isinstance(q, Repl):
            walk(q.body, bound)
        else:
            walk(q.body, bound | {q.name})

    walk(p, frozenset())
    return out


def state_key(p: Process) -> str:
    """Congruence-invariant key (up to thread order and binder renaming).

    Deterministic but not a complete canonical form: highly symmetric terms
    may receive distinct keys for congruent variants, never the converse.
    """
    s = to_standard_form(normalize(p), strip_blocks=True)
    kinds = dict((n, k) for k, n in s.binders)

    def shape(t):
        for n, k in kinds.items():
            t = substitute(t, "@" + k[0].upper(), n)
        return alpha_key(t)

    ordered = sorted(s.threads, key=shape)
    ids: dict = {}
    for t in ordered:
        for n in _free_in_order(t, kinds):
            if n not in ids:
                ids[n] = f"@{kinds[n][0].upper()}{len(ids)}"

    def final(t):
        for n, new in ids.items():
            t = substitute(t, new, n)
        return alpha_key(t)

    head = ",".join(sorted(ids[n] for n in kinds))
    return head + "::" + "|".join(sorted(final(t) for t in s.threads))


def unfold_repl(s: StandardForm, copies: int) -> StandardForm:
    """Put ``copies`` unfolded instances beside every replicated thread."""
    if copies <= 0:
        return s
    extra = []
    for t in s.threads:
        if isinstance(t, Repl):
            extra.extend([t.body] * copies)
    if not extra:
        return s
    # canonicalization freshens the binders of each copy
    return to_standard_form(from_standard_form(StandardForm(s.binders, s.threads + tuple(extra))))


# ---------------------------------------------------------------------------
# bounded closure search

def _root_rewrites(p: Process):
    """All one-step rewrites at the root, in both directions where decidable."""
    if isinstance(p, Par):
        l, r = p.left, p.right
        yield Par(r, l)
        if isinstance(l, Par):
            yield Par(l.left, Par(l.right, r))
        if isinstance(r, Par):
            yield Par(Par(l, r.left), r.right)
        if isinstance(r, Nil):
            yield l
        if isinstance(l, Nil):
            yield r
        if isinstance(r, Repl) and alpha_eq(l, r.body):
            yield r
        for a, b, flip in ((l, r, False), (r, l, True)):
            if isinstance(a, New) and a.name not in free_names(b):
                inner = Par(b, a.body) if flip else Par(a.body, b)
                yield New(a.name, inner)
                if isinstance(b, Spy) and not b.spied:
                    spied = Spy(frozenset({a.name}), b.body)
                    yield New(a.name, Par(spied, a.body) if flip else Par(a.body, spied))
            if isinstance(a, Hide) and a.name not in free_names(b):
                bb = block_name(b, a.name)
                yield Hide(a.name, Par(bb, a.body) if flip else Par(a.body, bb))
    elif isinstance(p, New):
        x, body = p.name, p.body
        if x not in free_names(body):
            yield body
        if isinstance(body, Par):
            for keep, out, flip in ((body.left, body.right, False), (body.right, body.left, True)):
                if x not in free_names(out):
                    yield Par(out, New(x, keep)) if flip else Par(New(x, keep), out)
                if isinstance(out, Spy) and out.spied == {x} and x not in free_names(out.body):
                    bare = Spy(frozenset(), out.body)
                    yield Par(bare, New(x, keep)) if flip else Par(New(x, keep), bare)
        if isinstance(body, (New, Hide)) and body.name != x:
            yield type(body)(body.name, New(x, body.body))
    elif isinstance(p, Hide):
        h, body = p.name, p.body
        if h not in free_names(body):
            # dead hide: nobody can ever send the name, so no input needs blocking
            yield body
        if isinstance(body, Par):
            for keep, out, flip in ((body.left, body.right, False), (body.right, body.left, True)):
                plain = unblock(out, h)
                if h not in free_names(plain) and block_name(plain, h) == out:
                    yield Par(plain, Hide(h, keep)) if flip else Par(Hide(h, keep), plain)
        if isinstance(body, (New, Hide)) and body.name != h:
            yield type(body)(body.name, Hide(h, body.body))
    elif isinstance(p, Repl):
        copy = rename_binders(p.body, NameSupply(all_names(p.body)).fresh)
        yield Par(copy, p)


def _rewrites(p: Process):
    yield from _root_rewrites(p)
    if isinstance(p, Par):
        for l2 in _rewrites(p.left):
            yield Par(l2, p.right)
        for r2 in _rewrites(p.right):
            yield Par(p.left, r2)
    elif isinstance(p, Nil):
        return
    else:
        for b2 in _rewrites(p.body):
            if isinstance(p, Input):
                yield Input(p.subject, p.param, p.blocked, b2)
            elif isinstance(p, TrustedInput):
                yield TrustedInput(p.subject, p.param, p.accepted, b2)
            elif isinstance(p, Output):
                yield Output(p.subject, p.obj, b2)
            elif isinstance(p, Spy):
                yield Spy(p.spied, b2)
            elif isinstance(p, Repl):
                yield Repl(b2)
            else:
                yield type(p)(p.name, b2)


def congruent_bounded(p: Process, q: Process, fuel: int = 2000):
    """Search the ≡-closures of ``p`` and ``q`` for a common term.

    Returns True on a meet, False when both closures are exhausted without
    one, and None when ``fuel`` (terms expanded) runs out first.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    p, q = alpha_canonicalize(p), alpha_canonicalize(q)
    kp, kq = alpha_key(p), alpha_key(q)
    if kp == kq:
        return True
    seen = ({kp: p}, {kq: q})
    queues = (deque([p]), deque([q]))
    spent = 0
    while queues[0] or queues[1]:
        for side in (0, 1):
            queue = queues[side]
            if not queue:
                continue
            term = queue.popleft()
            spent += 1
            for nxt in _rewrites(term):
                nxt = alpha_canonicalize(nxt)
                k = alpha_key(nxt)
                if k in seen[side]:
                    continue
                if k in seen[1 - side]:
                    return True
                seen[side][k] = nxt
                queue.append(nxt)
            if spent >= fuel:
                return None
    return False
