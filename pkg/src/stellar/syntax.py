"""Reading and writing the ``.stellar`` constellation text format.

::

    # comment
    +add(0, Y, Y);
    -add(X, Y, Z) +add(s(X), Y, s(Z));
    -add(s(s(0)), s(s(0)), R) R;
    [];

A star may also be wrapped in brackets, as in ``[s(0) -a(X)];``, which is
how the command line prints normal forms.

Uppercase-initial identifiers are variables unless followed by ``(``;
everything else (lowercase, digits, dots, underscores) names a symbol or a
colour.  ``a:b:c`` is right-associative gluing.  ``-`` and ``−`` both mean
negative polarity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from stellar.core import Constellation, Fn, Star, Term, Var, canonical_constellation

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<empty>\[\])
  | (?P<ident>[A-Za-z0-9_][A-Za-z0-9_.]*)
  | (?P<punct>[+\-−(),:;\[\]])
    """,
    re.VERBOSE,
)


class StellarSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    i = 0
    line, line_start = 1, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise StellarSyntaxError(f"unexpected character {text[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), line, i - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = i + chunk.rindex("\n") + 1
        i = m.end()
    toks.append(_Tok("eof", "", line, i - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise StellarSyntaxError(msg, tok.line, tok.col)

    def expect(self, text):
        t = self.next()
        if t.text != text:
            self.error(f"expected {text!r}, got {t.text or 'end of input'!r}", t)
        return t

    def constellation(self) -> Constellation:
        stars = []
        while self.peek().kind != "eof":
            stars.append(self.star())
            self.expect(";")
        return Constellation(tuple(stars))

    def star(self) -> Star:
        if self.peek().kind == "empty":
            self.next()
            return Star(())
        boxed = self.peek().text == "["
        if boxed:
            self.next()
        stop = ("]",) if boxed else (";",)
        rays = []
        while self.peek().text not in stop and self.peek().kind != "eof":
            rays.append(self.term())
        if boxed:
            self.expect("]")
        if not rays and not boxed:
            self.error("empty star must be written []")
        return Star(tuple(rays))

    def term(self) -> Term:
        left = self.primary()
        if self.peek().text == ":":
            self.next()
            return Fn(":", (left, self.term()))
        return left

    def primary(self) -> Term:
        tok = self.peek()
        pol = None
        if tok.text in ("+", "-", "−"):
            self.next()
            pol = "+" if tok.text == "+" else "-"
            tok = self.peek()
        if tok.text == "(":
            if pol:
                self.error("polarity must precede a symbol")
            self.next()
            inner = self.term()
            self.expect(")")
            return inner
        if tok.kind != "ident":
            self.error(f"expected a term, got {tok.text or 'end of input'!r}")
        self.next()
        has_args = self.peek().text == "("
        if (tok.text[0].isupper() or tok.text[0] == "_") and not has_args:
            if pol:
                self.error("polarity on a variable", tok)
            return Var(tok.text)
        args = []
        if has_args:
            self.next()
            args.append(self.term())
            while self.peek().text == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
        return Fn(tok.text, tuple(args), pol)


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek().kind != "eof":
        p.error("trailing input")
    return t


def parse_star(text: str) -> Star:
    p = _Parser(text)
    s = p.star()
    if p.peek().text == ";":
        p.next()
    if p.peek().kind != "eof":
        p.error("trailing input")
    return s


def parse_constellation(text: str) -> Constellation:
    return _Parser(text).constellation()


def format_term(t: Term, blind: bool = False) -> str:
    if isinstance(t, Var):
        return "_" if blind else t.name
    if t.name == ":" and len(t.args) == 2 and t.pol is None:
        left, right = t.args
        ls = format_term(left, blind)
        if isinstance(left, Fn) and left.name == ":" and len(left.args) == 2 and left.pol is None:
            ls = f"({ls})"
        return f"{ls}:{format_term(right, blind)}"
    head = (t.pol or "") + t.name
    if not t.args:
        return head
    return head + "(" + ", ".join(format_term(a, blind) for a in t.args) + ")"


def format_star(s: Star, brackets: bool = False) -> str:
    if not s.rays:
        return "[]"
    body = " ".join(format_term(r) for r in s.rays)
    return f"[{body}]" if brackets else body


def serialize(c: Constellation, canonical: bool = True, brackets: bool = False) -> str:
    """One star per line, each terminated by ``;``."""
    if canonical:
        c = canonical_constellation(c)
    return "".join(format_star(s, brackets) + ";\n" for s in c.stars)
