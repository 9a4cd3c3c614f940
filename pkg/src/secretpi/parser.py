"""Concrete syntax: tokenizer, recursive-descent parser and pretty-printer.

ASCII mapping of the mathematical notation::

    x(y)            input               x(y/{b,c})   input with blocked names
    x[y:{a}]        trusted input       x!<y>        output
    (new x) P       restriction         (hide x) P   hiding
    !P              replication         0            inaction
    spy.P  spy:x.P  spies               P | Q        composition

Prefix continuations are written with ``.``; a trailing ``.0`` may be
omitted.  ``--`` starts a line comment.  Identifiers may contain ``#``
after the first character, so engine-generated names print and re-parse.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    NIL, RESERVED, Hide, Input, New, Nil, Output, Par, Process, Repl, Spy, TrustedInput,
)

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_'#]*")
_PUNCT = ("|", ".", "(", ")", "[", "]", "{", "}", "<", ">", "!", "/", ":", ",")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected=()):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{line}:{column}: {message}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident', 'zero', a punctuation string, or 'eof'
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c in " \t\r\f\v":
            i, col = i + 1, col + 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        m = IDENT_RE.match(text, i)
        if m:
            word = m.group()
            tokens.append(Token("ident", word, line, col))
            i, col = m.end(), col + len(word)
            continue
        if c == "0" and not (i + 1 < n and text[i + 1].isdigit()):
            tokens.append(Token("zero", "0", line, col))
            i, col = i + 1, col + 1
            continue
        if c in _PUNCT:
            tokens.append(Token(c, c, line, col))
            i, col = i + 1, col + 1
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def error(self, message, expected=()):
        t = self.tok
        shown = t.text or "end of input"
        raise ParseError(f"{message}, found {shown!r}", t.line, t.column, expected)

    def expect(self, kind) -> Token:
        if self.tok.kind != kind:
            self.error("unexpected token", {kind})
        t = self.tok
        self.pos += 1
        return t

    def keyword(self, word) -> bool:
        return self.tok.kind == "ident" and self.tok.text == word

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident":
            self.error("expected a name", {"identifier"})
        if t.text in RESERVED:
            self.error(f"{t.text!r} is reserved", {"identifier"})
        self.pos += 1
        return t.text

    # proc := seq ("|" seq)*
    def proc(self) -> Process:
        p = self.seq()
        while self.tok.kind == "|":
            self.pos += 1
            p = Par(p, self.seq())
        return p

    # seq := prefix ("." seq)? | atom
    def seq(self) -> Process:
        t = self.tok
        if t.kind == "ident":
            return self.prefixed()
        if t.kind == "zero":
            self.pos += 1
            return NIL
        if t.kind == "!":
            self.pos += 1
            return Repl(self.seq())
        if t.kind == "(":
            nxt = self.peek()
            if nxt.kind == "ident" and nxt.text in ("new", "hide") and self.peek(2).kind == "ident" \
                    and self.peek(3).kind == ")":
                self.pos += 1
                word = self.tok.text
                self.pos += 1
                name = self.ident()
                self.expect(")")
                body = self.seq()
                return New(name, body) if word == "new" else Hide(name, body)
            self.pos += 1
            p = self.proc()
            self.expect(")")
            return p
        self.error("expected a process", {"identifier", "0", "!", "("})

    def continuation(self) -> Process:
        if self.tok.kind == ".":
            self.pos += 1
            return self.seq()
        return NIL

    def prefixed(self) -> Process:
        if self.keyword("spy"):
            self.pos += 1
            spied = frozenset()
            if self.tok.kind == ":":
                self.pos += 1
                spied = frozenset({self.ident()})
            return Spy(spied, self.continuation())
        subject = self.ident()
        t = self.tok
        if t.kind == "(":
            self.pos += 1
            param = self.ident()
            blocked = frozenset()
            if self.tok.kind == "/":
                self.pos += 1
                blocked = self.nameset()
            self.expect(")")
            return Input(subject, param, blocked, self.continuation())
        if t.kind == "[":
            self.pos += 1
            param = self.ident()
            self.expect(":")
            accepted = self.nameset()
            self.expect("]")
            return TrustedInput(subject, param, accepted, self.continuation())
        if t.kind == "!":
            self.pos += 1
            self.expect("<")
            obj = self.ident()
            self.expect(">")
            return Output(subject, obj, self.continuation())
        self.error("expected a prefix after the channel name", {"(", "[", "!"})

    def nameset(self) -> frozenset:
        if self.tok.kind == "ident":
            return frozenset({self.ident()})
        self.expect("{")
        names = []
        if self.tok.kind != "}":
            names.append(self.ident())
            while self.tok.kind == ",":
                self.pos += 1
                names.append(self.ident())
        self.expect("}")
        return frozenset(names)


def parse(text) -> Process:
    """Parse a process; raises ``ParseError`` (with position) on bad input."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc.reason}", 1, exc.start + 1) from None
    tokens = tokenize(text)
    parser = _Parser(tokens)
    try:
        p = parser.proc()
    except RecursionError:
        t = parser.tok
        raise ParseError("term nested too deeply", t.line, t.column) from None
    if parser.tok.kind != "eof":
        parser.error("trailing input", {"|", "eof"})
    return p


# ---------------------------------------------------------------------------
# printing

def _set(names) -> str:
    return "{" + ", ".join(sorted(names)) + "}"


def pretty(p: Process) -> str:
    """Deterministic printing with minimal parentheses; ``parse`` inverts it."""
    return _proc(p)


def _proc(p: Process) -> str:
    if isinstance(p, Par):
        return f"{_proc(p.left)} | {_seq(p.right)}"
    return _seq(p)


def _seq(p: Process) -> str:
    if isinstance(p, Par):
        return f"({_proc(p)})"
    if isinstance(p, Nil):
        return "0"
    if isinstance(p, Repl):
        return "!" + _seq(p.body)
    if isinstance(p, New):
        return f"(new {p.name}) {_seq(p.body)}"
    if isinstance(p, Hide):
        return f"(hide {p.name}) {_seq(p.body)}"
    if isinstance(p, Input):
        head = f"{p.subject}({p.param}/{_set(p.blocked)})" if p.blocked else f"{p.subject}({p.param})"
    elif isinstance(p, TrustedInput):
        head = f"{p.subject}[{p.param}:{_set(p.accepted)}]"
    elif isinstance(p, Output):
        head = f"{p.subject}!<{p.obj}>"
    elif isinstance(p, Spy):
        head = f"spy:{next(iter(p.spied))}" if p.spied else "spy"
    else:
        raise TypeError(f"not a process: {p!r}")
    if isinstance(p.body, Nil):
        return head
    return f"{head}.{_seq(p.body)}"
