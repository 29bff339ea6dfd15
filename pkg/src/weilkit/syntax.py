"""Tokenizer and infix expression parser shared by presentations and programs.

Expressions parse to nested tuples:

    ("num", Fraction) | ("var", name) | ("neg", e) | ("add"|"sub"|"mul"|"div", a, b)
    | ("pow", e, int) | ("call", name, e)
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[^\W\d]\w*)|(?P<op>->|\*\*|[-+*/^()\[\],;]))",
    re.UNICODE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num" | "name" | "op" | "end"
    text: str
    pos: int


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError(
                f"unexpected character {text[bad]!r} at {bad}", position=bad, expected="token"
            )
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class TokenStream:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def at(self, text):
        tok = self.peek
        return tok.kind in ("op", "name") and tok.text == text

    def accept(self, text):
        if self.at(text):
            return self.next()
        return None

    def expect(self, text):
        tok = self.peek
        if not self.at(text):
            self.fail(repr(text))
        return self.next()

    def expect_name(self):
        tok = self.peek
        if tok.kind != "name":
            self.fail("identifier")
        return self.next().text

    def fail(self, expected):
        tok = self.peek
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(
            f"expected {expected} at position {tok.pos}, found {found}",
            position=tok.pos,
            expected=expected,
        )

    def done(self):
        if self.peek.kind != "end":
            self.fail("end of input")


# binding powers
_INFIX = {"+": 10, "-": 10, "*": 20, "/": 20}
_POW = 40
_NAMES = {"+": "add", "-": "sub", "*": "mul", "/": "div"}


def parse_expr(ts, min_bp=0):
    """Pratt parser over a TokenStream; stops at the first token it cannot continue with."""
    left = _prefix(ts)
    while True:
        tok = ts.peek
        if tok.kind != "op":
            break
        if tok.text in ("^", "**"):
            if _POW < min_bp:
                break
            ts.next()
            exponent = _int_exponent(ts)
            left = ("pow", left, exponent)
            continue
        bp = _INFIX.get(tok.text)
        if bp is None or bp <= min_bp:
            break
        ts.next()
        right = parse_expr(ts, bp)
        left = (_NAMES[tok.text], left, right)
    return left


def _int_exponent(ts):
    sign = 1
    if ts.accept("("):
        if ts.accept("-"):
            sign = -1
        tok = ts.peek
        if tok.kind != "num" or "." in tok.text:
            ts.fail("integer exponent")
        ts.next()
        ts.expect(")")
        return sign * int(tok.text)
    if ts.accept("-"):
        sign = -1
    tok = ts.peek
    if tok.kind != "num" or "." in tok.text:
        ts.fail("integer exponent")
    ts.next()
    return sign * int(tok.text)


def _prefix(ts):
    tok = ts.peek
    if tok.kind == "num":
        ts.next()
        return ("num", Fraction(tok.text))
    if tok.kind == "name":
        ts.next()
        if ts.at("("):
            ts.next()
            arg = parse_expr(ts)
            ts.expect(")")
            return ("call", tok.text, arg)
        return ("var", tok.text)
    if ts.accept("("):
        inner = parse_expr(ts)
        ts.expect(")")
        return inner
    if ts.accept("-"):
        # unary minus binds tighter than * but looser than ^
        return ("neg", parse_expr(ts, 30))
    if ts.accept("+"):
        return parse_expr(ts, 30)
    ts.fail("number, identifier or '('")


def parse_expression(text):
    ts = TokenStream(text)
    tree = parse_expr(ts)
    ts.done()
    return tree


def variables(tree):
    """Variable names in order of first appearance."""
    seen = []

    def walk(node):
        tag = node[0]
        if tag == "var":
            if node[1] not in seen:
                seen.append(node[1])
        elif tag in ("neg", "call"):
            walk(node[-1])
        elif tag == "pow":
            walk(node[1])
        elif tag != "num":
            walk(node[1])
            walk(node[2])

    walk(tree)
    return seen
