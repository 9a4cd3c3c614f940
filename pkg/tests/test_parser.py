import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secretpi.parser import ParseError, parse, pretty, tokenize
from secretpi.syntax import NIL, Hide, Input, Output, Par, Repl, Spy, TrustedInput, alpha_eq

from conftest import processes


def test_examples():
    assert parse("(hide z) x!<v>") == Hide("z", Output("x", "v", NIL))
    assert parse("x(y/{b}).0") == Input("x", "y", frozenset({"b"}), NIL)
    assert parse("x[y:{a}].0 | x!<a>") == Par(TrustedInput("x", "y", frozenset({"a"}), NIL),
                                              Output("x", "a", NIL))


def test_shorthands():
    assert parse("x(y)") == parse("x(y/{}).0")
    assert parse("x[y:a]") == parse("x[y:{a}]")
    assert parse("spy") == Spy(frozenset(), NIL)
    assert parse("spy:x.a!<b>") == Spy(frozenset({"x"}), Output("a", "b", NIL))
    assert parse("!!0") == Repl(Repl(NIL))


def test_par_is_left_associative_and_binds_loosest():
    assert parse("a!<a> | b!<b> | c!<c>") == Par(Par(parse("a!<a>"), parse("b!<b>")), parse("c!<c>"))
    assert parse("(new x) a!<x> | b!<b>") == Par(parse("(new x) a!<x>"), parse("b!<b>"))
    assert parse("!a(x) | b!<b>") == Par(parse("!a(x)"), parse("b!<b>"))


def test_comments_and_whitespace():
    assert parse("-- leak attempt\n(hide z)\n  x!<v>  -- done\n") == parse("(hide z) x!<v>")


def test_pretty_examples():
    assert pretty(NIL) == "0"
    assert pretty(Input("x", "y", frozenset(), NIL)) == "x(y)"
    assert pretty(parse("x(y/{c,b}).y!<a>")) == "x(y/{b, c}).y!<a>"
    assert pretty(parse("a!<b> | (c!<d> | e(f))")) == "a!<b> | (c!<d> | e(f))"
    assert pretty(parse("(a!<b> | c!<d>) | e(f)")) == "a!<b> | c!<d> | e(f)"
    assert pretty(parse("x(y).(a!<a> | b!<b>)")) == "x(y).(a!<a> | b!<b>)"


@pytest.mark.parametrize("text,line,col", [
    ("x(", 1, 3),
    ("x!<y", 1, 5),
    ("a!<b> |", 1, 8),
    ("\n  (new nu) 0", 2, 8),
    ("x(y) y!<a>", 1, 6),
    ("x(y/{a,}) ", 1, 8),
    ("x $ y", 1, 3),
    ("spy:spy", 1, 5),
])
def test_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (line, col)
    assert f"{line}:{col}" in str(info.value)


def test_error_lists_expected_tokens():
    with pytest.raises(ParseError) as info:
        parse("x")
    assert info.value.expected == {"(", "[", "!"}


def test_reserved_words_are_not_names():
    for word in ("new", "hide", "spy", "nu"):
        with pytest.raises(ParseError):
            parse(f"{word}!<a>")


def test_bytes_input():
    assert parse(b"x!<y>") == parse("x!<y>")
    with pytest.raises(ParseError):
        parse(b"\xff\xfe")


def test_deep_nesting_is_an_error_not_a_crash():
    with pytest.raises(ParseError):
        parse("(" * 5000 + "0" + ")" * 5000)


def test_tokenize_tracks_lines():
    toks = tokenize("a\n  b")
    assert [(t.text, t.line, t.column) for t in toks[:2]] == [("a", 1, 1), ("b", 2, 3)]


@settings(max_examples=500)
@given(processes(max_leaves=10))
def test_round_trip(p):
    assert alpha_eq(parse(pretty(p)), p)
    assert pretty(parse(pretty(p))) == pretty(p)


@settings(max_examples=300)
@given(st.binary(max_size=60))
def test_arbitrary_bytes_never_crash(data):
    try:
        parse(data)
    except ParseError as exc:
        assert exc.line >= 1 and exc.column >= 1


@settings(max_examples=300)
@given(st.text(alphabet="xy01()[]{}<>!|./:,- \nnewhidespy", max_size=40))
def test_token_soup_never_crashes(text):
    try:
        parse(text)
    except ParseError:
        pass
