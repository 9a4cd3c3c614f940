"""Ready-made processes: the matching encoding, two small secrecy scenarios,
a bus-sharing model with its patch, and a credit-card exchange."""
from __future__ import annotations

from dataclasses import dataclass

from .congruence import to_standard_form
from .syntax import (
    NIL, Hide, New, Output, Process, Repl, Input, TrustedInput, all_names, base_of, block_name,
    free_names, par, substitute,
)


def _plain_fresh(hint: str, avoid) -> str:
    """A parser-friendly name (``k``, ``k1``, ``k2`` ...) outside ``avoid``."""
    if hint not in avoid:
        return hint
    n = 1
    while f"{hint}{n}" in avoid:
        n += 1
    return f"{hint}{n}"


@dataclass(frozen=True)
class MatchSpec:
    x: str
    y: str
    then_p: Process
    else_q: Process

    @property
    def free_names(self) -> frozenset:
        return frozenset({self.x, self.y}) | free_names(self.then_p) | free_names(self.else_q)


def encode_match(x: str, y: str, then_p: Process = NIL, else_q: Process = NIL) -> Process:
    """``if x = y then P else Q`` built from hide, a trusted input and blocking.

    A hidden key ``k`` is offered on ``x`` and on every other free name; only
    the trusted input on ``y`` can take it, and whichever branch it unlocks
    runs with ``k`` blocked.
    """
    spec = MatchSpec(x, y, then_p, else_q)
    Z = spec.free_names
    used = Z | all_names(then_p) | all_names(else_q)
    k = _plain_fresh("k", used)
    w = _plain_fresh("w", used | {k})
    p_k = block_name(then_p, k)
    q_k = block_name(else_q, k)
    others = [Output(z, k, q_k) for z in sorted(Z - {x})]
    return Hide(k, par(TrustedInput(y, w, frozenset({k}), NIL), Output(x, k, p_k), *others))


def build_example1(v: str = "v", z: str = "z", x: str = "x", leak: str = "leak"):
    """An internal attacker ``x!<v>`` under ``hide z`` next to a leaking listener.

    Returns ``(P, C[P])`` with ``C[-] = - | x(y).leak!<y>``.
    """
    if x == z:
        raise ValueError("the channel must differ from the hidden name")
    p = Hide(z, Output(x, v, NIL))
    y = _plain_fresh("y", {x, v, z, leak})
    listener = Input(x, y, frozenset(), Output(leak, y, NIL))
    return p, par(p, listener)


def example2_inner(n: int, Z, i: int, body: Process | None = None, x: str = "x") -> tuple:
    """Components of the trusted-exchange process: the hidden names, the input
    parameter, the continuation and the sent name ``z_i``."""
    if not 1 <= i <= n:
        raise ValueError("i must lie in 1..n")
    zs = [f"z{j}" for j in range(1, n + 1)]
    Z = frozenset(Z)
    if not Z <= set(zs):
        raise ValueError(f"Z must be a subset of {{{', '.join(zs)}}}")
    if body is None:
        body = Output("out", "y", NIL)
    return zs, Z, "y", body, zs[i - 1]


def build_example2(n: int, Z, i: int, body: Process | None = None, x: str = "x") -> Process:
    """``hide z1 ... hide zn [ x[y:Z].body | x!<z_i> ]``."""
    zs, Z, y, body, zi = example2_inner(n, Z, i, body, x)
    core = par(TrustedInput(x, y, Z, body), Output(x, zi, NIL))
    for z in reversed(zs):
        core = Hide(z, core)
    return core


def example2_context(p: Process, x: str = "x") -> Process:
    """``p | (new y) !x!<y> | !x(w)``: a context offering a fresh name and
    listening on ``x`` forever."""
    names = all_names(p) | {x}
    y = _plain_fresh("y", names)
    w = _plain_fresh("w", names | {y})
    return par(p, New(y, Repl(Output(x, y, NIL))), Repl(Input(x, w, frozenset(), NIL)))


def example2_after(n: int, Z, i: int, body: Process | None = None, x: str = "x") -> Process:
    """The residual after the internal trusted exchange: ``hide z... [body{z_i/y}]``."""
    zs, Z, y, body, zi = example2_inner(n, Z, i, body, x)
    core = substitute(body, zi, y)
    for z in reversed(zs):
        core = Hide(z, core)
    return core


DEFAULT_DBUS_P = Output("done", "x", NIL)
DEFAULT_DBUS_Q = Output("steal", "ypwd", NIL)


def dbus_user1(patched: bool, p_body: Process = DEFAULT_DBUS_P) -> Process:
    """A user whose two applications swap a password over bus ``c``, with
    malicious code publishing ``c`` on the system bus.  The patch makes ``c``
    hidden instead of merely restricted."""
    bus = par(Repl(Output("sys", "c", NIL)), New("pwd", Output("c", "pwd", NIL)),
              Input("c", "x", frozenset(), p_body))
    return Hide("c", bus) if patched else New("c", bus)


def dbus_user2(q_body: Process = DEFAULT_DBUS_Q) -> Process:
    """Another user listening on the system bus and then on what it receives."""
    return Input("sys", "x", frozenset(), Input("x", "ypwd", frozenset(), q_body))


def build_dbus(patched: bool, p_body: Process = DEFAULT_DBUS_P,
               q_body: Process = DEFAULT_DBUS_Q) -> Process:
    return par(dbus_user1(patched, p_body), dbus_user2(q_body))


def dbus_expected(p_body: Process = DEFAULT_DBUS_P) -> Process:
    """``hide c [(new pwd) P{pwd/x}]``, the behaviour the patched user must show."""
    return Hide("c", New("pwd", substitute(p_body, "pwd", "x")))


def dbus_leaked(state: Process, steal: str = "steal") -> bool:
    """Does some thread output a password (a name based on ``pwd``) on ``steal``?"""
    for t in to_standard_form(state).threads:
        if isinstance(t, Output) and t.subject == steal and base_of(t.obj) == "pwd":
            return True
    return False


def build_credit_card(restricted: bool = True, card: str = "cc", owner: str = "oc") -> Process:
    """``s!<cc> | s(x).if x = oc then (p!<ok> | p!<s>)``, optionally under ``new s``."""
    then = par(Output("p", "ok", NIL), Output("p", "s", NIL))
    check = encode_match("x", owner, then, NIL)
    proto = par(Output("s", card, NIL), Input("s", "x", frozenset(), check))
    return New("s", proto) if restricted else proto
