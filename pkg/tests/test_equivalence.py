import pytest
from hypothesis import given, settings

from secretpi.equivalence import (
    INPUT, OUTPUT, Barb, Bisimilar, Bounds, Inconclusive, NotBisimilar, barbs, bisimilar,
    parse_verdict, replay, serialize_verdict, weak_barb, weak_barbs,
)
from secretpi.lts import NU, CommSignal, Mode, Out
from secretpi.parser import parse
from secretpi.syntax import Hide

from conftest import processes

S, PL = Mode.SPIED, Mode.PLAIN


def bset(*items):
    return frozenset(Barb(s, p) for s, p in items)


@pytest.mark.parametrize("text,expected", [
    ("x!<a>", bset(("x", OUTPUT))),
    ("x(y)", bset(("x", INPUT))),
    ("(new x) x!<a>", bset()),
    ("(hide x) x(y)", bset()),
    ("(hide h) x!<h>", bset()),
    ("(new n) x!<n>", bset(("x", OUTPUT))),
    ("x[y:{a}]", bset(("x", INPUT))),
    ("(hide a) x[y:{a}]", bset()),
    ("(hide a) x[y:{a, b}]", bset(("x", INPUT))),
    ("x(y/{a})", bset(("x", INPUT))),
    ("spy", bset()),
    ("spy:x.x!<a>", bset()),
])
def test_strong_barbs(text, expected):
    assert barbs(parse(text)) == expected


def test_barb_validation():
    with pytest.raises(ValueError):
        Barb(NU)
    with pytest.raises(ValueError):
        Barb("x", "sideways")
    assert str(Barb("x")) == "x!" and str(Barb("x", INPUT)) == "x"


def test_weak_barbs():
    p = parse("(new c) (c!<a> | c(y).y!<b>)")
    assert barbs(p) == bset()
    found, hit = weak_barbs(p)
    assert found == bset(("a", OUTPUT)) and not hit
    assert weak_barb(p, Barb("a")) is True
    assert weak_barb(p, Barb("b")) is False


def test_weak_barb_truncated_search_is_unknown():
    p = parse("!(new c) (c!<c> | c(y).z!<y>) | q!<q>")
    tight = Bounds(max_steps=1, max_states=1)
    assert weak_barb(p, Barb("nothere"), tight) is None
    assert weak_barb(p, Barb("q"), tight) is True


def test_bounds_validation():
    with pytest.raises(ValueError):
        Bounds(max_states=0)


def test_restricted_talk_is_visible_to_spies():
    p = parse("(new x) (x!<z> | x(y))")
    assert isinstance(bisimilar(p, parse("0"), PL), Bisimilar)
    v = bisimilar(p, parse("0"), S)
    assert isinstance(v, NotBisimilar)
    assert v.actions == [CommSignal(NU)]
    assert v.trace[0].side == "left" and v.trace[0].defender is None
    assert replay(v)


def test_hidden_talk_is_not_visible():
    p = parse("(hide x) (x!<z> | x(y).a!<y>)")
    assert isinstance(bisimilar(p, parse("(hide x) a!<z>"), S), Bisimilar)


def test_distinct_outputs():
    v = bisimilar(parse("a!<b>"), parse("a!<c>"), PL)
    assert isinstance(v, NotBisimilar) and replay(v)
    assert [str(a) for a in v.actions] in (["a!<b>"], ["a!<c>"])


def test_multi_step_trace_replays():
    left = parse("a(x).(b!<b> | c!<c>)")
    right = parse("a(x).b!<b> | a(x).c!<c>")
    v = bisimilar(left, right, PL)
    assert isinstance(v, NotBisimilar)
    assert len(v.trace) >= 2 and replay(v)


def test_weak_equivalence_absorbs_tau():
    left = parse("(new c) (c!<c> | c(y).a!<b>)")
    assert isinstance(bisimilar(left, parse("a!<b>"), PL), Bisimilar)


def test_bound_hit_is_inconclusive():
    p = parse("!x(y).x!<y>")
    v = bisimilar(p, p, PL, Bounds(max_states=3))
    assert isinstance(v, Inconclusive) and v.reason == "boundHit"


def test_mode_mismatch():
    with pytest.raises(ValueError):
        bisimilar(parse("spy"), parse("0"), PL)


def test_replay_rejects_doctored_trace():
    v = bisimilar(parse("a!<b>"), parse("0"), PL)
    v.trace[0] = type(v.trace[0])("left", Out("a", "zz"), 1, None)
    assert not replay(v)


@pytest.mark.parametrize("pair", [("a!<b>", "a!<b>"), ("a!<b>", "a!<c>"), ("!a!<a>", "!a!<a> | !a!<a>")])
def test_verdict_text_round_trip(pair):
    v = bisimilar(parse(pair[0]), parse(pair[1]), PL, Bounds(max_states=50))
    back = parse_verdict(serialize_verdict(v))
    assert type(back) is type(v)
    assert back.lines() == v.lines()


def test_parse_verdict_errors():
    with pytest.raises(ValueError):
        parse_verdict("nothing here")
    with pytest.raises(ValueError):
        parse_verdict("verdict maybe")


def test_bisimilar_relation_contains_roots():
    v = bisimilar(parse("a!<b>.c!<d>"), parse("a!<b>.c!<d>"), PL)
    assert (0, 0) in v.relation


@settings(max_examples=60)
@given(processes(repl=False, spy=True, max_leaves=4))
def test_reflexive(p):
    assert isinstance(bisimilar(p, p, S), Bisimilar)


@settings(max_examples=60)
@given(processes(repl=False, spy=False, max_leaves=3), processes(repl=False, spy=False, max_leaves=3))
def test_symmetric_and_sound_for_barbs(p, q):
    v1, v2 = bisimilar(p, q, PL), bisimilar(q, p, PL)
    assert type(v1) is type(v2)
    if isinstance(v1, NotBisimilar):
        assert replay(v1) and replay(v2)
    elif isinstance(v1, Bisimilar):
        assert weak_barbs(p)[0] == weak_barbs(q)[0]


@settings(max_examples=40)
@given(processes(repl=False, spy=False, max_leaves=4))
def test_dead_hide_changes_nothing(p):
    assert isinstance(bisimilar(Hide("zz", p), p, S), Bisimilar)
