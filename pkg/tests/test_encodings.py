import pytest

from secretpi.congruence import state_key
from secretpi.encodings import (
    build_credit_card, build_dbus, build_example1, build_example2, dbus_expected, dbus_leaked,
    dbus_user1, encode_match, example2_after, example2_context,
)
from secretpi.equivalence import Bisimilar, NotBisimilar, bisimilar
from secretpi.lts import Mode
from secretpi.parser import parse, pretty
from secretpi.reduction import enumerate_redexes, reach, step
from secretpi.congruence import to_standard_form
from secretpi.syntax import Hide, Output, alpha_canonicalize, free_names, is_canonical


def test_match_key_is_fresh():
    enc = encode_match("k", "w", parse("k!<w>"), parse("0"))
    assert isinstance(enc, Hide)
    assert enc.name not in {"k", "w"}
    assert free_names(enc) == {"k", "w"}


def test_match_has_exactly_one_redex_when_equal():
    enc = encode_match("x", "x", parse("p!<p>"), parse("q!<q>"))
    assert len(enumerate_redexes(to_standard_form(enc))) == 1
    (after,) = step(enc)
    assert "p" in pretty(after)


def test_match_unequal_takes_the_else_branch():
    enc = encode_match("x", "y", parse("p!<p>"), parse("q!<q>"))
    (after,) = step(enc)
    assert "q!<q>" in pretty(after) and "p!<p>" in pretty(after)
    assert isinstance(bisimilar(enc, parse("q!<q>"), Mode.PLAIN), Bisimilar)


@pytest.mark.parametrize("x,y,branch", [("x", "x", "p!<p>"), ("x", "y", "q!<q>")])
def test_match_behaves_like_branch(x, y, branch):
    enc = encode_match(x, y, parse("p!<p>.p(z)"), parse("q!<q>.q(z)"))
    target = parse(branch + "." + branch[0] + "(z)")
    assert isinstance(bisimilar(enc, target, Mode.PLAIN), Bisimilar)


def test_then_branch_runs_with_key_blocked():
    enc = encode_match("x", "x", parse("p(u).u!<u>"), parse("0"))
    (after,) = step(enc)
    text = pretty(after)
    assert "/{" in text  # the input of the branch now carries the blocked key


def test_example1_leaks():
    p, ctx = build_example1()
    assert pretty(p) == "(hide z) x!<v>"
    states = reach(ctx).states
    assert any(state_key(s) == state_key(parse("leak!<v>")) for s in states)
    with pytest.raises(ValueError):
        build_example1(x="z")


def test_example2_exchange():
    p = build_example2(3, {"z1", "z2"}, 2)
    assert pretty(p).startswith("(hide z1) (hide z2) (hide z3)")
    after = step(p)
    assert [state_key(a) for a in after] == [state_key(example2_after(3, {"z1", "z2"}, 2))]
    assert step(build_example2(3, {"z1"}, 2)) == []
    with pytest.raises(ValueError):
        build_example2(2, {"z5"}, 1)
    with pytest.raises(ValueError):
        build_example2(2, {"z1"}, 3)


def test_example2_context_cannot_interfere():
    p = example2_context(build_example2(2, {"z1"}, 1))
    res = reach(p, max_steps=4, max_states=200)
    assert not res.bound_hit
    texts = [pretty(s) for s in res.states]
    assert any("out!<z1#" in t for t in texts)
    # the listening context ends up with the hidden names blocked
    assert all("!x(w#1/{z1#1})" in t for t in texts)


def test_dbus():
    assert any(dbus_leaked(s) for s in reach(build_dbus(False)).states)
    assert not any(dbus_leaked(s) for s in reach(build_dbus(True)).states)
    assert isinstance(bisimilar(dbus_user1(True), dbus_expected(), Mode.SPIED), Bisimilar)
    assert isinstance(bisimilar(dbus_user1(False), dbus_expected(), Mode.SPIED), NotBisimilar)
    assert not dbus_leaked(parse("steal!<other>"))
    assert dbus_leaked(parse("(new pwd) steal!<pwd>"))


def test_credit_card():
    open_ = build_credit_card(restricted=False)
    closed = build_credit_card(restricted=True)
    assert "s" in free_names(open_) and "s" not in free_names(closed)
    assert any(isinstance(t, Output) and t.subject == "p"
               for s in reach(build_credit_card(card="oc")).states
               for t in to_standard_form(s).threads)


@pytest.mark.parametrize("term", [
    encode_match("x", "y", parse("a!<b>"), parse("b(c)")),
    build_example1()[1],
    build_example2(3, {"z1", "z3"}, 3),
    example2_context(build_example2(2, {"z2"}, 2)),
    build_dbus(False),
    build_dbus(True),
    build_credit_card(),
])
def test_builders_print_parseable_terms(term):
    assert parse(pretty(term)) == term
    assert is_canonical(alpha_canonicalize(term))
