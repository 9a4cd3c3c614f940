"""Seeded random process terms for corpus-style checks."""
from __future__ import annotations

import os
import random

from .syntax import NIL, Hide, Input, New, Output, Par, Repl, Spy, TrustedInput

DEFAULT_NAMES = ("a", "b", "c", "x")
DEFAULT_SEED = 20240601


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    """The corpus seed: ``SECRETPI_SEED`` when set, else ``default``."""
    value = os.environ.get("SECRETPI_SEED")
    return int(value) if value else default


def random_process(rng: random.Random, max_nodes: int = 8, names=DEFAULT_NAMES,
                   repl: bool = False, spy: bool = False, par_weight: int = 1):
    """A random term with at most ``max_nodes`` constructors (``0`` included).

    Raising ``par_weight`` makes parallel compositions, and so redexes, likelier.
    """
    names = list(names)
    binders = ["u", "v"]

    def pick(scope):
        return rng.choice(names + scope)

    def subset(scope):
        pool = names + scope
        return frozenset(n for n in pool if rng.random() < 0.3)

    def gen(budget, scope):
        if budget <= 1:
            return NIL, 1
        kinds = ["in", "tin", "out", "out", "new", "hide"] + ["par"] * par_weight
        if budget <= 2:
            kinds.append("nil")
        if repl:
            kinds.append("repl")
        if spy:
            kinds.append("spy")
        kind = rng.choice(kinds)
        if kind == "nil":
            return NIL, 1
        if kind == "par":
            if budget < 3:
                return NIL, 1
            low = 2 if budget >= 5 else 1
            left, used = gen(rng.randint(low, budget - 1 - low), scope)
            right, used2 = gen(budget - 1 - used, scope)
            return Par(left, right), 1 + used + used2
        if kind in ("new", "hide"):
            b = rng.choice(binders)
            body, used = gen(budget - 1, scope + [b])
            return (New if kind == "new" else Hide)(b, body), 1 + used
        if kind == "repl":
            body, used = gen(budget - 1, scope)
            return Repl(body), 1 + used
        if kind == "spy":
            spied = frozenset({pick(scope)}) if rng.random() < 0.5 else frozenset()
            body, used = gen(budget - 1, scope)
            return Spy(spied, body), 1 + used
        if kind == "out":
            body, used = gen(budget - 1, scope)
            return Output(pick(scope), pick(scope), body), 1 + used
        param = rng.choice(binders)
        subject = pick(scope)
        inner = scope + [param]
        body, used = gen(budget - 1, inner)
        if kind == "in":
            return Input(subject, param, subset(scope), body), 1 + used
        return TrustedInput(subject, param, subset(scope), body), 1 + used

    return gen(max_nodes, [])[0]


def corpus(count: int, seed: int | None = None, **kwargs) -> list:
    rng = random.Random(seed_from_env() if seed is None else seed)
    return [random_process(rng, **kwargs) for _ in range(count)]


def random_redex_process(rng: random.Random, max_nodes: int = 8, names=DEFAULT_NAMES):
    """A random term built around an output and an input on a shared channel,
    so that most samples have at least one reduction."""
    names = list(names)
    pool = names + ["u"]
    chan = rng.choice(pool)
    obj = rng.choice(pool)
    wrap = "u" in (chan, obj) or rng.random() < 0.5
    # output, input, their two Nil ends and the Par take five nodes
    spare = max(0, max_nodes - 5 - int(wrap))
    extra_out = rng.randint(0, spare)
    extra_in = spare - extra_out
    out_body = random_process(rng, 1 + extra_out, names) if extra_out else NIL
    recv_body = random_process(rng, 1 + extra_in, names + ["v"]) if extra_in else NIL
    if rng.random() < 0.5:
        receiver = Input(chan, "v", frozenset(n for n in pool if rng.random() < 0.2), recv_body)
    else:
        receiver = TrustedInput(chan, "v", frozenset(n for n in pool if rng.random() < 0.6),
                                recv_body)
    term = Par(Output(chan, obj, out_body), receiver)
    if wrap:
        term = (New if rng.random() < 0.5 else Hide)("u", term)
    return term
