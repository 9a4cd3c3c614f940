import pytest
from hypothesis import given, settings

from secretpi.congruence import state_key
from secretpi.lts import (
    BOUT, COMM, IN, OUT, SPYQ, TAU, TAU_ACTION, Action, BoundOut, CommSignal, In, LtsGraph, Mode,
    ModeMismatch, NameBudget, Out, SpyQuery, build_graph, parse_action, parse_machine,
    transitions, weak_closure,
)
from secretpi.parser import parse
from secretpi.syntax import NIL, NU, Hide, free_names

from conftest import processes

S, PL = Mode.SPIED, Mode.PLAIN


def labels(text, mode=S, budget=None):
    return sorted(str(a) for a, _ in transitions(parse(text), mode, budget))


def test_action_names():
    assert In("x", "z").free_names == {"x"} and In("x", "z").bound_names == {"z"}
    assert Out("x", "z").free_names == {"x", "z"} and not Out("x", "z").bound_names
    assert BoundOut("x", "z").free_names == {"x"} and BoundOut("x", "z").bound_names == {"z"}
    assert not TAU_ACTION.free_names and not TAU_ACTION.bound_names
    assert Out("x", "z").subj == {"x"} and Out("x", "z").objects == {"z"}
    assert BoundOut("x", "z").subj == {"x"} and not BoundOut("x", "z").objects
    assert not CommSignal("x").subj and not SpyQuery(NU).objects


@pytest.mark.parametrize("action", [In("x", "z"), Out("x", "z"), BoundOut("x", "e#1"),
                                    TAU_ACTION, SpyQuery(NU), CommSignal("x")])
def test_action_text_round_trip(action):
    assert parse_action(str(action)) == action


def test_restricted_communication_signals_nu():
    ((a, q),) = transitions(parse("(new x) (x!<z> | x(y))"), S)
    assert a == CommSignal(NU)
    assert state_key(q) == state_key(NIL)


def test_hidden_communication_is_silent():
    got = transitions(parse("(hide x) (x!<z> | x(y).y!<a>)"), S)
    assert [a for a, _ in got] == [TAU_ACTION]
    assert state_key(got[0][1]) == state_key(parse("(hide x) z!<a>"))


def test_hidden_names_cannot_be_extruded():
    for mode in (S, PL):
        assert transitions(parse("(hide x) z!<x>"), mode) == []


def test_spy_queries():
    assert labels("spy:x.a!<b>") == ["?x"]
    assert labels("spy") == ["?nu"]
    assert labels("(new x) spy:x") == ["?nu"]
    assert labels("(hide x) spy:x") == ["tau"]


def test_open():
    ((a, q),) = transitions(parse("(new y) x!<y>.y!<a>"), S)
    assert a.kind == BOUT and a.subject == "x"
    assert q == parse(f"{a.obj}!<a>")


def test_close():
    got = transitions(parse("(new y) x!<y>.y!<a> | x(w).w(u)"), PL)
    taus = [q for a, q in got if a.kind == TAU]
    assert len(taus) == 1
    assert state_key(taus[0]) == state_key(parse("(new y) (y!<a> | y(u))"))


def test_plain_mode_rejects_spies():
    with pytest.raises(ModeMismatch):
        transitions(parse("spy"), PL)


def test_input_branching():
    budget = NameBudget(frozenset({"a", "b", "z"}))
    blocked = labels("x(y/{z})", PL, budget)
    assert "x(z)" not in blocked and {"x(a)", "x(b)", "x(fresh#1)"} <= set(blocked)
    assert labels("x[y:{a, z}]", PL, budget) == ["x(a)", "x(z)"]
    assert labels("x[y:{}]", PL, budget) == []


def test_received_name_is_not_captured_by_hide():
    budget = NameBudget(frozenset({"a"}), extra=("h",))
    got = {str(a): q for a, q in transitions(parse("(hide h) x(y).y!<h>"), PL, budget)}
    q = got["x(h)"]
    assert isinstance(q, Hide) and q.name != "h" and "h" in free_names(q)


def test_name_budget():
    assert NameBudget(frozenset({"b", "a"}), 2).candidates() == ["a", "b", "fresh#1", "fresh#2"]
    with pytest.raises(ValueError):
        NameBudget(fresh_count=0)


@settings(max_examples=150)
@given(processes(repl=True, spy=True, max_leaves=6))
def test_hide_filters_and_nu_is_never_a_channel(p):
    p = Hide("a", p)
    for a, _ in transitions(p, S):
        assert a.kind not in (IN, OUT, BOUT) or a.subject != NU
        assert "a" not in a.free_names
        if a.kind in (OUT,):
            assert a.obj != "a"


@settings(max_examples=150)
@given(processes(repl=False, spy=False, max_leaves=6))
def test_plain_and_spied_differ_only_in_labels(p):
    def key(mode):
        out = set()
        for a, q in transitions(p, mode):
            if a.kind == COMM:
                a = TAU_ACTION
            out.add((a, state_key(q)))
        return out

    assert key(PL) == key(S)


def test_weak_closure():
    assert [str(q) for q in weak_closure(NIL, PL, None, TAU_ACTION)] == ["0"]
    p = parse("(hide x) (x!<z> | x(y).a!<m>)")
    reached = weak_closure(p, PL, None, Out("a", "m"))
    assert reached and state_key(reached[0]) == state_key(NIL)
    assert weak_closure(p, PL, None, Out("a", "z")) == []


def test_build_graph_examples():
    g = build_graph(NIL)
    assert len(g.states) == 1 and g.edges == [] and not g.bound_hit
    g = build_graph(parse("(new x) (x!<z> | x(y))"), S)
    assert len(g.states) == 2 and [str(a) for _, a, _ in g.edges] == ["!nu"]
    g = build_graph(parse("!x(y).x!<y>"), PL, max_states=4)
    assert g.bound_hit and g.unexplored
    with pytest.raises(ValueError):
        build_graph(NIL, max_states=0)


def test_extruded_names_are_numbered():
    g = build_graph(parse("(new y) x!<y>.y!<y>"), S)
    assert [str(a) for _, a, _ in g.edges] == ["(ext#1)x!<ext#1>", "ext#1!<ext#1>"]


def test_machine_format_round_trip():
    g = build_graph(parse("(new y) x!<y>.y!<y> | a(b)"), S)
    back = parse_machine(g.to_machine())
    assert back.states == g.states and back.edges == g.edges and back.bound_hit == g.bound_hit


def test_dot_output():
    dot = build_graph(parse("spy"), S).to_dot()
    assert dot.startswith("digraph lts {") and dot.rstrip().endswith("}")
    assert 's0 -> s1 [label="?nu"];' in dot


def test_graph_dataclass_defaults():
    g = LtsGraph()
    assert g.to_machine() == "boundhit 0\n"
    assert Action(SPYQ, "x") == SpyQuery("x")
    assert free_names(parse("a!<b>")) == {"a", "b"}
