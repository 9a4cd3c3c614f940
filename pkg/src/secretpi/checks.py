"""The calculus' headline properties as named, executable checks.

Each check returns a :class:`CheckResult`; ``run_checks`` drives them for the
``check`` CLI command and the acceptance tests.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .congruence import congruent_bounded, normalize, state_key
from .encodings import (
    build_dbus, build_example1, build_example2, dbus_expected, dbus_leaked, dbus_user1,
    encode_match, example2_after, example2_context,
)
from .equivalence import Barb, Bisimilar, NotBisimilar, barbs, bisimilar, replay, weak_barb, weak_barbs
from .generate import corpus, random_process, random_redex_process, seed_from_env
from .lts import NU, TAU, CommSignal, Mode, transitions
from .parser import ParseError, parse, pretty
from .reduction import reach, step
from .syntax import (
    Hide, Input, New, Output, Par, all_names, alpha_eq, base_of, block_name, bound_names, free_names,
    substitute,
)

OMEGA = Barb("omega")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    facts: list = field(default_factory=list)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


class _Facts:
    """Collects named boolean facts; the check passes iff all hold."""

    def __init__(self):
        self.items = []

    def __call__(self, label, ok):
        self.items.append((label, bool(ok)))
        return ok

    def ok(self):
        return all(v for _, v in self.items)

    def summary(self):
        bad = [k for k, v in self.items if not v]
        return "failed: " + "; ".join(bad) if bad else f"{len(self.items)} facts hold"


def check_secret_leak(f):
    _, leaky = build_example1("v")
    f("v!=z: the listener can output on leak", weak_barb(leaky, Barb("leak")) is True)
    f("v!=z: the leak carries v", any(parse("leak!<v>") == s for s in reach(leaky).states))
    _, safe = build_example1("z")
    res = reach(safe)
    f("v=z: no reduction at all", len(res.states) == 1 and not res.bound_hit and not step(safe))
    f("v=z: no leak barb", weak_barb(safe, Barb("leak")) is False)
    f("the attacker alone shows barb x!", Barb("x") in barbs(build_example1("v")[0]))


def check_trusted_exchange(f):
    for i in (1, 2):
        ctx = example2_context(build_example2(2, {"z1"}, i))
        after = state_key(normalize(example2_context(example2_after(2, {"z1"}, i))))
        same = state_key(normalize(ctx))
        res = reach(ctx)
        f(f"i={i}: exploration completes", not res.bound_hit)
        f(f"i={i}: every reachable state is the exchange or unchanged",
          all(state_key(s) in (after, same) for s in res.states))
        f(f"i={i}: every successor is the exchange or unchanged",
          all(state_key(q) in (after, same) for s in res.states for q in step(s)))
        f(f"i={i}: the exchange happens iff z{i} is accepted",
          any(state_key(s) == after for s in res.states) == (i == 1))
        f(f"i={i}: the context's fresh name never reaches out!",
          not any(isinstance(t, Output) and t.subject == "out" and base_of(t.obj) not in ("z1", "z2")
                  for s in res.states for t in _threads(s)))


def _threads(p):
    from .congruence import to_standard_form
    return to_standard_form(p).threads


def check_barbs(f):
    z = Barb("z", "in")
    f("(hide x) z[y:{x}] has no barb z", z not in barbs(parse("(hide x) z[y:{x}].q!<q>")))
    f("(new x) x(y/{b}) has no barb z", z not in barbs(parse("(new x) x(y/{b}).q!<q>")))
    f("z[y:{}] has no barb z", z not in barbs(parse("z[y:{}].q!<q>")))
    f("(new x) z[y:{a,x}] has barb z", z in barbs(parse("(new x) z[y:{a, x}].p!<p>")))
    f("(hide x) z(y/{b}) has barb z", z in barbs(parse("(hide x) z(y/{b}).p!<p>")))
    f("(hide y) x!<v> has barb x!", Barb("x") in barbs(parse("(hide y) x!<v>.q!<q>")))
    f("(hide y) x!<y> has no barb x!", Barb("x") not in barbs(parse("(hide y) x!<y>.q!<q>")))


def check_block_accept(f):
    blocked = "(hide z) (x!<z>.omega!<omega> | x(y{}))"
    f("accepting z reaches omega", weak_barb(parse(blocked.format("")), OMEGA) is True)
    f("blocking z never reaches omega", weak_barb(parse(blocked.format("/{z}")), OMEGA) is False)
    accepted = "x!<a>.omega!<omega> | x[y:{}]"
    f("accepting a reaches omega", weak_barb(parse(accepted.format("{a}")), OMEGA) is True)
    f("an empty accept set never reaches omega",
      weak_barb(parse(accepted.format("{}")), OMEGA) is False)


def check_spy_observes_new(f):
    left = parse("(new x) (x!<z> | x(y))")
    v = bisimilar(left, parse("0"), Mode.SPIED)
    f("spied: not bisimilar to 0", isinstance(v, NotBisimilar))
    if isinstance(v, NotBisimilar):
        f("the distinguishing action is !nu", v.actions == [CommSignal(NU)])
        f("the trace replays", replay(v))
    f("plain: bisimilar to 0", isinstance(bisimilar(left, parse("0"), Mode.PLAIN), Bisimilar))
    spy = parse("spy.omega!<omega>")
    f("a bare spy next to it reaches omega", weak_barb(Par(spy, left), OMEGA) is True)
    f("a bare spy next to 0 does not", weak_barb(Par(spy, parse("0")), OMEGA) is False)


HIDE_PAIRS = [(f"(hide x) (x!<z> | x(y).{q})", f"(hide x) {q.replace('y', 'z')}")
              for q in ("0", "a!<a>", "a(w)")]
MATCH_PAIRS = [
    ("x", "x", "p!<p>", "q!<q>", "then"),
    ("x", "y", "p!<p>", "q!<q>", "else"),
    ("x", "x", "p!<p>.p!<a>", "q!<q>.q!<a>", "then"),
    ("x", "y", "p!<p>.p!<a>", "q!<q>.q!<a>", "else"),
]


def _pairs_for_soundness():
    """Every pair the suite claims bisimilar, with its mode."""
    pairs = [(parse(a), parse(b), Mode.SPIED) for a, b in HIDE_PAIRS]
    pairs.append((parse("(hide x) z!<x>"), parse("0"), Mode.SPIED))
    for x, y, p, q, side in MATCH_PAIRS:
        target = parse(p if side == "then" else q)
        pairs.append((encode_match(x, y, parse(p), parse(q)), target, Mode.PLAIN))
    pairs.append((dbus_user1(True), dbus_expected(), Mode.SPIED))
    return pairs


def check_hide_invisible(f):
    for a, b in HIDE_PAIRS:
        f(f"{a} ~ {b}", isinstance(bisimilar(parse(a), parse(b), Mode.SPIED), Bisimilar))


def check_no_extrusion(f):
    p = parse("(hide x) z!<x>")
    f("bisimilar to 0 under spies", isinstance(bisimilar(p, parse("0"), Mode.SPIED), Bisimilar))
    f("no spied transitions", transitions(p, Mode.SPIED) == [])
    f("no plain transitions", transitions(p, Mode.PLAIN) == [])


def check_matching(f):
    for x, y, p, q, side in MATCH_PAIRS:
        enc = encode_match(x, y, parse(p), parse(q))
        target = parse(p if side == "then" else q)
        f(f"if {x}={y} then {p} else {q} ~ {side} branch",
          isinstance(bisimilar(enc, target, Mode.PLAIN), Bisimilar))


def _still_on_sys(state):
    """Is the thread that may output on steal still waiting on sys?"""
    return all(isinstance(t, Input) and t.subject == "sys"
               for t in _threads(state) if "steal" in all_names(t))


def check_dbus(f):
    res = reach(build_dbus(False))
    f("unpatched: a password leaks", any(dbus_leaked(s) for s in res.states))
    patched = reach(build_dbus(True))
    f("patched: no password leaks", not any(dbus_leaked(s) for s in patched.states))
    f("unpatched: the other user gets past the system bus",
      not all(_still_on_sys(s) for s in res.states))
    f("patched: the other user never gets past the system bus",
      all(_still_on_sys(s) for s in patched.states))
    f("patched user ~ hide c (new pwd) P{pwd/x} under spies",
      isinstance(bisimilar(dbus_user1(True), dbus_expected(), Mode.SPIED), Bisimilar))


def check_harmony(f, count=500):
    seed = seed_from_env()
    rng = random.Random(seed)
    terms = [random_redex_process(rng, 8) for _ in range(count)]
    terms += corpus(count, seed + 1, max_nodes=8, par_weight=3)
    bad, active = 0, 0
    for p in terms:
        red = {state_key(q): q for q in step(p)}
        tau = {}
        for a, q in transitions(p, Mode.PLAIN):
            if a.kind == TAU:
                q = normalize(q)
                tau[state_key(q)] = q
        active += bool(red)
        if set(red) == set(tau):
            continue
        only_r = [red[k] for k in red.keys() - tau.keys()]
        only_t = [tau[k] for k in tau.keys() - red.keys()]
        matched = all(any(congruent_bounded(a, b, 500) for b in only_t) for a in only_r) and \
            all(any(congruent_bounded(a, b, 500) for b in only_r) for a in only_t)
        bad += not matched
    f(f"{len(terms)} terms, {active} with reductions, {bad} discrepancies", bad == 0)
    f("the corpus exercises reduction", active >= count // 2)


def _contexts(p, q):
    names = free_names(p) | free_names(q)
    fresh = next(f"f{i}" for i in range(100) if f"f{i}" not in names)
    wrap = sorted(names)[0] if names else fresh
    return [
        ("parallel output", lambda r: Par(r, Output(fresh, fresh, parse("0")))),
        (f"new {wrap}", lambda r: New(wrap, r)),
        (f"hide {wrap}", lambda r: Hide(wrap, r)),
    ]


def check_soundness(f):
    for p, q, mode in _pairs_for_soundness():
        tag = f"{pretty(p)} ~ {pretty(q)}"
        if not f(f"{tag}: bisimilar", isinstance(bisimilar(p, q, mode), Bisimilar)):
            continue
        (bp, hp), (bq, hq) = weak_barbs(p), weak_barbs(q)
        f(f"{tag}: same weak barbs", bp == bq and not hp and not hq)
        for label, ctx in _contexts(p, q):
            f(f"{tag}: preserved by {label}",
              isinstance(bisimilar(ctx(p), ctx(q), mode), Bisimilar))


def check_hygiene(f, count=10_000):
    seed = seed_from_env()
    rng = random.Random(seed)
    bad = 0
    for k in range(count):
        p = random_process(rng, rng.randint(1, 14), repl=True, spy=True)
        bad += not alpha_eq(parse(pretty(p)), p)
    f(f"{count} printed terms parse back", bad == 0)
    x = parse("x(y/{b}).y!<a> | x[y:{a}].a!<y>")
    f("blocking adds to inputs only",
      block_name(x, "c") == parse("x(y/{b, c}).y!<a> | x[y:{a}].a!<y>"))
    f("blocking renames a clashing binder",
      alpha_eq(block_name(parse("x(c).c!<a>"), "c"), parse("x(y/{c}).y!<a>")))
    f("substitution avoids capture",
      alpha_eq(substitute(parse("(new y) x!<y>.a!<z>"), "y", "z"), parse("(new w) x!<w>.a!<y>")))
    f("substitution rewrites blocked and accepted sets",
      substitute(parse("x(y/{b}) | x[y:{b}]"), "c", "b") == parse("x(y/{c}) | x[y:{c}]"))
    f("free names", free_names(parse("x(y/{b}).y!<a> | (hide h) h!<z>")) == {"x", "b", "a", "z"})
    f("bound names", bound_names(parse("x(y).0 | (new n) (hide h) !t[u:{v}]")) == {"y", "n", "h", "u"})
    crashes = 0
    for _ in range(2000):
        data = bytes(rng.randrange(256) for _ in range(rng.randint(0, 40)))
        try:
            parse(data)
        except ParseError:
            pass
        except Exception:  # noqa: BLE001 - anything else is a crash
            crashes += 1
    f("arbitrary bytes only raise parse errors", crashes == 0)


CHECKS = {
    "secret-leak": check_secret_leak,
    "trusted-exchange": check_trusted_exchange,
    "barbs": check_barbs,
    "block-accept": check_block_accept,
    "spy-observes-new": check_spy_observes_new,
    "hide-invisible": check_hide_invisible,
    "no-extrusion": check_no_extrusion,
    "matching": check_matching,
    "dbus-patch": check_dbus,
    "harmony": check_harmony,
    "soundness": check_soundness,
    "hygiene": check_hygiene,
}


def run_check(name: str) -> CheckResult:
    facts = _Facts()
    start = time.perf_counter()
    try:
        CHECKS[name](facts)
    except Exception as exc:  # a crash is a failure with a reason
        facts(f"raised {type(exc).__name__}: {exc}", False)
    result = CheckResult(name, facts.ok(), facts.summary(), time.perf_counter() - start,
                         facts.items)
    return result


def run_checks(only=None) -> list[CheckResult]:
    names = list(CHECKS) if not only else list(only)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}")
    return [run_check(n) for n in names]
