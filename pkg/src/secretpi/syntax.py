"""Process terms of the secret pi-calculus and the name-level operations on them.

Names are plain strings.  Every name the engine invents has the shape
``base#n`` and is chosen to avoid all names already present in the term.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

Name = str

#: Reserved subject used by the spied LTS to signal restricted communications.
NU: Name = "nu"

RESERVED = frozenset({"new", "hide", "spy", NU})


class Process:
    __slots__ = ()

    def __str__(self) -> str:
        from .parser import pretty

        return pretty(self)


@dataclass(frozen=True)
class Nil(Process):
    pass


@dataclass(frozen=True)
class Input(Process):
    subject: Name
    param: Name
    blocked: frozenset
    body: Process


@dataclass(frozen=True)
class TrustedInput(Process):
    subject: Name
    param: Name
    accepted: frozenset
    body: Process


@dataclass(frozen=True)
class Output(Process):
    subject: Name
    obj: Name
    body: Process


@dataclass(frozen=True)
class Par(Process):
    left: Process
    right: Process


@dataclass(frozen=True)
class New(Process):
    name: Name
    body: Process


@dataclass(frozen=True)
class Hide(Process):
    name: Name
    body: Process


@dataclass(frozen=True)
class Repl(Process):
    body: Process


@dataclass(frozen=True)
class Spy(Process):
    spied: frozenset
    body: Process

    def __post_init__(self):
        if len(self.spied) > 1:
            raise ValueError("a spy watches at most one name")


NIL = Nil()

BINDERS = (New, Hide)
INPUTS = (Input, TrustedInput)


def par(*procs: Process) -> Process:
    """Right-nested parallel composition; the empty composition is Nil."""
    procs = [p for p in procs]
    if not procs:
        return NIL
    out = procs[-1]
    for p in reversed(procs[:-1]):
        out = Par(p, out)
    return out


def nameset(names: Iterable[Name]) -> frozenset:
    return frozenset(names)


# ---------------------------------------------------------------------------
# free / bound names

def free_names(p: Process) -> frozenset:
    if isinstance(p, Nil):
        return frozenset()
    if isinstance(p, Input):
        return (free_names(p.body) - {p.param}) | {p.subject} | p.blocked
    if isinstance(p, TrustedInput):
        return (free_names(p.body) - {p.param}) | {p.subject} | p.accepted
    if isinstance(p, Output):
        return free_names(p.body) | {p.subject, p.obj}
    if isinstance(p, Par):
        return free_names(p.left) | free_names(p.right)
    if isinstance(p, BINDERS):
        return free_names(p.body) - {p.name}
    if isinstance(p, Repl):
        return free_names(p.body)
    if isinstance(p, Spy):
        return p.spied | free_names(p.body)
    raise TypeError(f"not a process: {p!r}")


def bound_names(p: Process) -> frozenset:
    if isinstance(p, Nil):
        return frozenset()
    if isinstance(p, INPUTS):
        return {p.param} | bound_names(p.body)
    if isinstance(p, BINDERS):
        return {p.name} | bound_names(p.body)
    if isinstance(p, Par):
        return bound_names(p.left) | bound_names(p.right)
    if isinstance(p, (Output, Repl, Spy)):
        return bound_names(p.body)
    raise TypeError(f"not a process: {p!r}")


def all_names(p: Process) -> frozenset:
    return free_names(p) | bound_names(p)


def binder_of(p: Process) -> Name | None:
    if isinstance(p, INPUTS):
        return p.param
    if isinstance(p, BINDERS):
        return p.name
    return None


def size(p: Process) -> int:
    """Number of AST nodes."""
    if isinstance(p, Nil):
        return 1
    if isinstance(p, Par):
        return 1 + size(p.left) + size(p.right)
    return 1 + size(p.body)


def contains_spy(p: Process) -> bool:
    if isinstance(p, Spy):
        return True
    if isinstance(p, Nil):
        return False
    if isinstance(p, Par):
        return contains_spy(p.left) or contains_spy(p.right)
    return contains_spy(p.body)


def contains_repl(p: Process) -> bool:
    if isinstance(p, Repl):
        return True
    if isinstance(p, Nil):
        return False
    if isinstance(p, Par):
        return contains_repl(p.left) or contains_repl(p.right)
    return contains_repl(p.body)


# ---------------------------------------------------------------------------
# fresh names

def base_of(name: Name) -> Name:
    return name.split("#", 1)[0]


def fresh_name(hint: Name, avoid) -> Name:
    base = base_of(hint)
    n = 1
    while f"{base}#{n}" in avoid:
        n += 1
    return f"{base}#{n}"


class NameSupply:
    """Deterministic generator of ``base#n`` names avoiding a growing set.

    Not thread-safe; confine an instance to a single pass.
    """

    def __init__(self, avoid=()):
        self.used = set(avoid)
        self._next: dict[str, int] = {}

    def fresh(self, hint: Name) -> Name:
        base = base_of(hint)
        n = self._next.get(base, 1)
        while f"{base}#{n}" in self.used:
            n += 1
        self._next[base] = n + 1
        name = f"{base}#{n}"
        self.used.add(name)
        return name


# ---------------------------------------------------------------------------
# structural maps

def _rename_free(name: Name, new: Name, old: Name) -> Name:
    return new if name == old else name


def _rename_set(names: frozenset, new: Name, old: Name) -> frozenset:
    if old not in names:
        return names
    return (names - {old}) | {new}


def substitute(p: Process, new: Name, old: Name) -> Process:
    """Replace the free occurrences of ``old`` by ``new`` (``p{new/old}``).

    Binders that would capture ``new`` are renamed first.  Blocked, accepted
    and spied sets are free positions and are rewritten too.
    """
    if new == old or old not in free_names(p):
        return p
    return _subst(p, new, old)


def _subst(p: Process, new: Name, old: Name) -> Process:
    if isinstance(p, Nil):
        return p
    if isinstance(p, Output):
        return Output(_rename_free(p.subject, new, old), _rename_free(p.obj, new, old),
                      _subst(p.body, new, old))
    if isinstance(p, Par):
        return Par(_subst(p.left, new, old), _subst(p.right, new, old))
    if isinstance(p, Repl):
        return Repl(_subst(p.body, new, old))
    if isinstance(p, Spy):
        return Spy(_rename_set(p.spied, new, old), _subst(p.body, new, old))

    binder = binder_of(p)
    body = p.body
    if binder != old and old in free_names(body):
        if binder == new:
            fresh = fresh_name(binder, all_names(body) | {new, old})
            body = substitute(body, fresh, binder)
            binder = fresh
        body = _subst(body, new, old)
    if isinstance(p, Input):
        return Input(_rename_free(p.subject, new, old), binder,
                     _rename_set(p.blocked, new, old), body)
    if isinstance(p, TrustedInput):
        return TrustedInput(_rename_free(p.subject, new, old), binder,
                            _rename_set(p.accepted, new, old), body)
    return type(p)(binder, body)


def block_name(p: Process, b: Name) -> Process:
    """The blocking operation ``p ⊎ b``: add ``b`` to every input's blocked set.

    Trusted inputs keep their accepted set; binders equal to ``b`` are renamed
    away first so the added name stays free.
    """
    if isinstance(p, Nil):
        return p
    if isinstance(p, Output):
        return Output(p.subject, p.obj, block_name(p.body, b))
    if isinstance(p, Par):
        return Par(block_name(p.left, b), block_name(p.right, b))
    if isinstance(p, Repl):
        return Repl(block_name(p.body, b))
    if isinstance(p, Spy):
        return Spy(p.spied, block_name(p.body, b))

    binder, body = binder_of(p), p.body
    if binder == b:
        fresh = fresh_name(binder, all_names(body) | {b})
        body = substitute(body, fresh, binder)
        binder = fresh
    body = block_name(body, b)
    if isinstance(p, Input):
        return Input(p.subject, binder, p.blocked | {b}, body)
    if isinstance(p, TrustedInput):
        return TrustedInput(p.subject, binder, p.accepted, body)
    return type(p)(binder, body)


def block_names(p: Process, names: Iterable[Name]) -> Process:
    for b in sorted(names):
        p = block_name(p, b)
    return p


# ---------------------------------------------------------------------------
# alpha conversion

def rename_binders(p: Process, namer: Callable[[Name], Name]) -> Process:
    """Rename every binder to ``namer(old)``, rewriting its scope.

    ``namer`` is called once per binder, in preorder (left before right).
    Its results must be distinct from each other and from the free names.
    """
    return _rename_binders(p, namer, {})


def _rename_binders(p, namer, env):
    look = env.get
    if isinstance(p, Nil):
        return p
    if isinstance(p, Output):
        return Output(look(p.subject, p.subject), look(p.obj, p.obj),
                      _rename_binders(p.body, namer, env))
    if isinstance(p, Par):
        left = _rename_binders(p.left, namer, env)
        return Par(left, _rename_binders(p.right, namer, env))
    if isinstance(p, Repl):
        return Repl(_rename_binders(p.body, namer, env))
    if isinstance(p, Spy):
        return Spy(frozenset(look(n, n) for n in p.spied), _rename_binders(p.body, namer, env))
    binder = binder_of(p)
    fresh = namer(binder)
    inner = dict(env)
    inner[binder] = fresh
    body = _rename_binders(p.body, namer, inner)
    if isinstance(p, Input):
        return Input(look(p.subject, p.subject), fresh,
                     frozenset(look(n, n) for n in p.blocked), body)
    if isinstance(p, TrustedInput):
        return TrustedInput(look(p.subject, p.subject), fresh,
                            frozenset(look(n, n) for n in p.accepted), body)
    return type(p)(fresh, body)


def alpha_canonicalize(p: Process, avoid=()) -> Process:
    """Rename all binders to distinct ``base#n`` names, deterministically.

    The result is stable under repeated application and its binders are
    distinct from each other, from the free names and from ``avoid``.
    """
    supply = NameSupply(free_names(p) | set(avoid))
    return rename_binders(p, supply.fresh)


def is_canonical(p: Process) -> bool:
    seen: set = set()
    fv = free_names(p)

    def walk(q):
        if isinstance(q, Nil):
            return True
        if isinstance(q, Par):
            return walk(q.left) and walk(q.right)
        b = binder_of(q)
        if b is not None:
            if b in seen or b in fv:
                return False
            seen.add(b)
        return walk(q.body)

    return walk(p)


def alpha_eq(p: Process, q: Process) -> bool:
    """Equality up to consistent renaming of bound names."""
    return _alpha(p, q, {}, {}, 0)


def _alpha(p, q, env1, env2, depth):
    if type(p) is not type(q):
        return False

    def same(a, b):
        ia, ib = env1.get(a), env2.get(b)
        if ia is None and ib is None:
            return a == b
        return ia == ib

    def same_set(s1, s2):
        return {env1.get(n, n) for n in s1} == {env2.get(n, n) for n in s2}

    if isinstance(p, Nil):
        return True
    if isinstance(p, Par):
        return _alpha(p.left, q.left, env1, env2, depth) and _alpha(p.right, q.right, env1, env2, depth)
    if isinstance(p, Repl):
        return _alpha(p.body, q.body, env1, env2, depth)
    if isinstance(p, Output):
        return same(p.subject, q.subject) and same(p.obj, q.obj) and _alpha(p.body, q.body, env1, env2, depth)
    if isinstance(p, Spy):
        return same_set(p.spied, q.spied) and _alpha(p.body, q.body, env1, env2, depth)
    if isinstance(p, Input):
        if not (same(p.subject, q.subject) and same_set(p.blocked, q.blocked)):
            return False
    elif isinstance(p, TrustedInput):
        if not (same(p.subject, q.subject) and same_set(p.accepted, q.accepted)):
            return False
    # bound positions are tagged with an int so they never equal a free name
    e1 = dict(env1)
    e2 = dict(env2)
    e1[binder_of(p)] = depth
    e2[binder_of(q)] = depth
    return _alpha(p.body, q.body, e1, e2, depth + 1)


def alpha_key(p: Process) -> str:
    """A string that is equal for two terms iff they are alpha-equivalent."""
    counter = iter(range(1 << 30))
    return serialize(rename_binders(p, lambda _old: f"%{next(counter)}"))


def serialize(p: Process) -> str:
    """Compact unambiguous serialization with sorted name sets."""
    out: list[str] = []

    def names(s):
        return "{" + ",".join(sorted(s)) + "}"

    def walk(q):
        if isinstance(q, Nil):
            out.append("0")
        elif isinstance(q, Input):
            out.append(f"I({q.subject},{q.param},{names(q.blocked)},")
            walk(q.body)
            out.append(")")
        elif isinstance(q, TrustedInput):
            out.append(f"T({q.subject},{q.param},{names(q.accepted)},")
            walk(q.body)
            out.append(")")
        elif isinstance(q, Output):
            out.append(f"O({q.subject},{q.obj},")
            walk(q.body)
            out.append(")")
        elif isinstance(q, Par):
            out.append("P(")
            walk(q.left)
            out.append(",")
            walk(q.right)
            out.append(")")
        elif isinstance(q, New):
            out.append(f"N({q.name},")
            walk(q.body)
            out.append(")")
        elif isinstance(q, Hide):
            out.append(f"H({q.name},")
            walk(q.body)
            out.append(")")
        elif isinstance(q, Repl):
            out.append("R(")
            walk(q.body)
            out.append(")")
        elif isinstance(q, Spy):
            out.append(f"S({names(q.spied)},")
            walk(q.body)
            out.append(")")
        else:
            raise TypeError(f"not a process: {q!r}")

    walk(p)
    return "".join(out)
