from hypothesis import given, settings

from secretpi.congruence import (
    HIDE, NEW, StandardForm, congruent_bounded, from_standard_form, normalize, state_key,
    to_standard_form, unfold_repl,
)
from secretpi.parser import parse
from secretpi.syntax import NIL, Input, Output, Repl, alpha_eq, free_names, size

from conftest import processes


def test_hide_extrusion_blocks_the_outside_input():
    s = to_standard_form(parse("(hide z) x!<v> | x(y).leak!<y>"))
    assert [k for k, _ in s.binders] == [HIDE]
    (z,) = s.hidden
    out, inp = s.threads
    assert out == Output("x", "v", NIL)
    assert isinstance(inp, Input) and inp.blocked == {z}


def test_hide_does_not_block_its_own_scope():
    s = to_standard_form(parse("(hide z) (x!<z> | x(y).y!<y>)"))
    assert all(not t.blocked for t in s.threads if isinstance(t, Input))


def test_dead_binders_vanish():
    assert to_standard_form(parse("(new x) 0")).is_nil()
    assert to_standard_form(parse("(hide x) a!<b>")).binders == ()


def test_nil_is_a_unit():
    p = parse("a!<b> | c(d).d!<d>")
    assert to_standard_form(parse("0 | (a!<b> | c(d).d!<d>)")) == to_standard_form(p)


def test_from_standard_form():
    assert from_standard_form(StandardForm((), ())) == NIL
    got = from_standard_form(StandardForm(((NEW, "x"),), (Output("x", "a", NIL),)))
    assert got == parse("(new x) x!<a>")


def test_hide_binders_come_first():
    s = to_standard_form(parse("(new x) (hide y) x!<y>"))
    assert [k for k, _ in s.binders] == [HIDE, NEW]


def test_congruent_bounded_examples():
    p = parse("a!<b> | c(d)")
    assert congruent_bounded(p, p) is True
    assert congruent_bounded(parse("(new x) (hide y) x!<y>"), parse("(hide y) (new x) x!<y>")) is True
    assert congruent_bounded(parse("x!<a>"), parse("x!<b>")) is False
    assert congruent_bounded(parse("a!<a> | b!<b>"), parse("b!<b> | a!<a>")) is True
    assert congruent_bounded(parse("(hide z) x!<v> | x(y).leak!<y>"),
                             parse("(hide z) (x!<v> | x(y/{z}).leak!<y>)")) is True


def test_unfold_repl():
    s = to_standard_form(parse("!x!<a>"))
    assert unfold_repl(s, 0) == s
    assert sorted(map(str, unfold_repl(s, 1).threads)) == ["!x!<a>", "x!<a>"]
    two = unfold_repl(to_standard_form(parse("!(new x) x!<x>")), 2)
    copies = [t for t in two.threads if not isinstance(t, Repl)]
    assert len(copies) == 2 and len(two.restricted) == 2
    assert {t.subject for t in copies} == two.restricted


@settings(max_examples=150)
@given(processes(repl=False, spy=False, max_leaves=3))
def test_standard_form_is_congruent(p):
    if size(p) > 6:
        return
    q = from_standard_form(to_standard_form(p))
    assert congruent_bounded(p, q, fuel=4000) is not False


@given(processes())
def test_standard_form_keeps_free_names(p):
    assert free_names(from_standard_form(to_standard_form(p))) == free_names(p)


@given(processes())
def test_state_key_invariants(p):
    key = state_key(p)
    assert key == state_key(normalize(p))
    assert alpha_eq(normalize(normalize(p)), normalize(p))


def test_state_key_ignores_thread_order_and_names():
    keys = {state_key(parse(t)) for t in (
        "(new x) (x!<a> | b(y).y!<x>)",
        "(new q) (b(w).w!<q> | q!<a>)",
    )}
    assert len(keys) == 1
    assert state_key(parse("(new x) x!<a>")) != state_key(parse("(hide x) x!<a>"))
