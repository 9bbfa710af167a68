"""Tiny expression grammar for CLI integrands.

Supports one free variable ``x``, the constant ``pi``, decimal literals,
``+ - * /``, integer powers via ``^``, parentheses, and the functions
sqrt, atan, acos, cos, exp, log.  Parse errors carry the offending
position for caret diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp

from . import numeric
from .numeric import DEFAULT, PrecisionConfig, UsageError

FUNCTIONS = ("sqrt", "atan", "acos", "cos", "exp", "log")


class ParseError(UsageError):
    def __init__(self, message: str, position: int, text: str):
        super().__init__(message)
        self.position = position
        self.text = text

    def diagnostic(self) -> str:
        return f"{self.text}\n{' ' * self.position}^ {self.args[0]}"


@dataclass(frozen=True)
class Token:
    kind: str  # num | ident | op | end
    value: str
    pos: int


def _tokenize(text: str) -> list:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            if j < n and text[j] in "eE" and j + 1 < n and (
                text[j + 1].isdigit() or text[j + 1] in "+-"
            ):
                k = j + 2 if text[j + 1] in "+-" else j + 1
                if k < n and text[k].isdigit():
                    while k < n and text[k].isdigit():
                        k += 1
                    j = k
            tokens.append(Token("num", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], i))
            i = j
            continue
        if c in "+-*/^()":
            tokens.append(Token("op", c, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", i, text)
    tokens.append(Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, message, token=None):
        token = token or self.peek()
        raise ParseError(message, token.pos, self.text)

    def parse(self):
        node = self.expr()
        if self.peek().kind != "end":
            self.fail(f"unexpected {self.peek().value!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind == "op" and self.peek().value in "+-":
            op = self.next().value
            node = ("bin", op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind == "op" and self.peek().value in "*/":
            op = self.next().value
            node = ("bin", op, node, self.factor())
        return node

    def factor(self):
        if self.peek().kind == "op" and self.peek().value == "-":
            self.next()
            return ("neg", self.factor())
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek().kind == "op" and self.peek().value == "^":
            self.next()
            sign = 1
            if self.peek().kind == "op" and self.peek().value == "-":
                self.next()
                sign = -1
            tok = self.peek()
            if tok.kind != "num" or "." in tok.value or "e" in tok.value.lower():
                self.fail("exponent must be an integer literal", tok)
            self.next()
            node = ("pow", node, sign * int(tok.value))
        return node

    def atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.next()
            return ("num", tok.value)
        if tok.kind == "ident":
            self.next()
            if tok.value in FUNCTIONS:
                if not (self.peek().kind == "op" and self.peek().value == "("):
                    self.fail(f"{tok.value} requires parentheses")
                self.next()
                arg = self.expr()
                close = self.peek()
                if not (close.kind == "op" and close.value == ")"):
                    self.fail("expected ')'")
                self.next()
                return ("call", tok.value, arg)
            if tok.value == "x":
                return ("var",)
            if tok.value == "pi":
                return ("pi",)
            self.fail(f"unknown identifier {tok.value!r}", tok)
        if tok.kind == "op" and tok.value == "(":
            self.next()
            node = self.expr()
            close = self.peek()
            if not (close.kind == "op" and close.value == ")"):
                self.fail("expected ')'")
            self.next()
            return node
        self.fail(f"expected a value, found {tok.value or 'end of input'!r}")


def parse(text: str):
    """Parse an expression; raises ParseError with caret position."""
    return _Parser(text).parse()


def uses_variable(node) -> bool:
    if node[0] == "var":
        return True
    if node[0] in ("num", "pi"):
        return False
    if node[0] == "neg":
        return uses_variable(node[1])
    if node[0] == "call":
        return uses_variable(node[2])
    if node[0] == "pow":
        return uses_variable(node[1])
    return uses_variable(node[2]) or uses_variable(node[3])


def _evaluate(node, x, cfg: PrecisionConfig):
    kind = node[0]
    if kind == "num":
        return float(node[1]) if cfg.fast_mode else mp.mpf(node[1])
    if kind == "pi":
        return numeric.constant("pi", cfg)
    if kind == "var":
        if x is None:
            raise UsageError("expression uses 'x' where a constant is required")
        return x
    if kind == "neg":
        return -_evaluate(node[1], x, cfg)
    if kind == "call":
        return numeric._ELEMENTARY[node[1]](_evaluate(node[2], x, cfg))
    if kind == "pow":
        return _evaluate(node[1], x, cfg) ** node[2]
    op, left, right = node[1], node[2], node[3]
    lv = _evaluate(left, x, cfg)
    rv = _evaluate(right, x, cfg)
    if op == "+":
        return lv + rv
    if op == "-":
        return lv - rv
    if op == "*":
        return lv * rv
    return lv / rv


def compile_integrand(text: str, cfg: PrecisionConfig = DEFAULT):
    """Parse and return f(x) evaluating at cfg precision (vectorized in
    fast mode: numpy arrays pass straight through the arithmetic)."""
    node = parse(text)

    def f(x):
        return _evaluate(node, x, cfg)

    return f


def eval_constant(text: str, cfg: PrecisionConfig = DEFAULT):
    """Evaluate a variable-free expression (e.g. a domain bound)."""
    node = parse(text)
    if uses_variable(node):
        raise ParseError("'x' is not allowed here", 0, text)
    with cfg.context():
        return _evaluate(node, None, cfg)
