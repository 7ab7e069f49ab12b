"""Single-variable real arithmetic expressions.

Partition functions are supplied as text such as ``"ln(1+x^2)"`` or
``"0.2/(x-0.5)"``.  :func:`parse` turns the text into an immutable tree and
:func:`evaluate` computes it at a real point (or elementwise over a numpy
array) with IEEE semantics: poles give signed infinities, logarithms of
non-positive numbers and fractional powers of negative numbers give NaN.
Nothing here ever raises during evaluation.

Grammar, loosest binding first::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := primary ("^" unary)?          # right associative
    primary := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"

so ``-x^2`` is ``-(x^2)`` and ``2^3^2`` is ``2^(3^2)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ExpressionSyntaxError, UnknownIdentifier

__all__ = [
    "Num", "Const", "Var", "Neg", "BinOp", "Call", "Node",
    "Expression", "parse", "evaluate", "to_text", "substitute",
    "FUNCTIONS", "CONSTANTS",
]


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Const, Var, Neg, BinOp, Call]

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "ln": np.log,
    "log10": np.log10,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "floor": np.floor,
    "sign": np.sign,  # sign(0) == 0
}

CONSTANTS = {"pi": math.pi, "e": math.e}

_BINARY = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.true_divide,
    "^": np.power,
}


@dataclass(frozen=True)
class Expression:
    """A parsed expression in one named variable."""

    root: Node
    variable: str = "x"
    text: str = ""

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self) -> str:
        return self.text or to_text(self)


# -- tokenizer ---------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExpressionSyntaxError(
                f"unexpected character {text[pos]!r}", pos, "number, name, operator or parenthesis")
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variable: str):
        self.text = text
        self.variable = variable
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, tok, pos = self.peek()
        if tok != value or kind != "op":
            what = "end of input" if kind == "end" else repr(tok)
            raise ExpressionSyntaxError(f"unexpected {what}", pos, repr(value))
        self.advance()

    def parse(self) -> Node:
        node = self.expr()
        kind, tok, pos = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {tok!r}", pos, "operator or end of input")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        kind, tok, _ = self.peek()
        if kind == "op" and tok == "-":
            self.advance()
            return Neg(self.unary())
        if kind == "op" and tok == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        kind, tok, _ = self.peek()
        if kind == "op" and tok == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> Node:
        kind, tok, pos = self.advance()
        if kind == "num":
            return Num(float(tok))
        if kind == "name":
            if tok in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(tok, arg)
            if tok in CONSTANTS:
                return Const(tok)
            if tok == self.variable:
                return Var(tok)
            raise UnknownIdentifier(tok, pos)
        if kind == "op" and tok == "(":
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if kind == "end" else repr(tok)
        raise ExpressionSyntaxError(f"unexpected {what}", pos, "expression")


def parse(text: str, variable: str = "x") -> Expression:
    """Parse ``text`` into an :class:`Expression` in ``variable``.

    Raises
    ------
    ExpressionSyntaxError
        On malformed input; carries the offending offset.
    UnknownIdentifier
        For any name that is neither the variable, a supported function,
        nor ``pi``/``e``.
    """
    if not text or not text.strip():
        raise ExpressionSyntaxError("empty expression", 0, "expression")
    if not text.isascii():
        bad = next(i for i, ch in enumerate(text) if not ch.isascii())
        raise ExpressionSyntaxError("non-ASCII character", len(text[:bad].encode()), "ASCII input")
    if variable in FUNCTIONS or variable in CONSTANTS:
        raise ValueError(f"variable name {variable!r} shadows a builtin")
    root = _Parser(text, variable).parse()
    return Expression(root, variable, text)


# -- evaluation --------------------------------------------------------------

def _eval(node: Node, x):
    if isinstance(node, Var):
        return x
    if isinstance(node, Num):
        return np.float64(node.value)
    if isinstance(node, Const):
        return np.float64(CONSTANTS[node.name])
    if isinstance(node, Neg):
        return np.negative(_eval(node.operand, x))
    if isinstance(node, BinOp):
        return _BINARY[node.op](_eval(node.left, x), _eval(node.right, x))
    if isinstance(node, Call):
        return FUNCTIONS[node.func](_eval(node.arg, x))
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(expr: Expression | Node, x):
    """Evaluate at a float (returns float) or elementwise over an array.

    Variable-free subtrees broadcast against the shape of ``x``.
    """
    root = expr.root if isinstance(expr, Expression) else expr
    scalar = np.ndim(x) == 0
    xv = np.float64(x) if scalar else np.asarray(x, dtype=np.float64)
    with np.errstate(all="ignore"):
        out = _eval(root, xv)
    if scalar:
        return float(out)
    return np.broadcast_to(np.asarray(out, dtype=np.float64), xv.shape).copy()


# -- printing and rewriting --------------------------------------------------

def _text(node: Node) -> str:
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, (Const, Var)):
        return node.name
    if isinstance(node, Neg):
        return f"(-{_text(node.operand)})"
    if isinstance(node, BinOp):
        return f"({_text(node.left)} {node.op} {_text(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({_text(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def to_text(expr: Expression | Node) -> str:
    """Fully parenthesized text that reparses to an identical tree."""
    root = expr.root if isinstance(expr, Expression) else expr
    return _text(root)


def substitute(expr: Expression, replacement: Node) -> Expression:
    """Replace every occurrence of the variable with ``replacement``."""

    def walk(node: Node) -> Node:
        if isinstance(node, Var):
            return replacement
        if isinstance(node, Neg):
            return Neg(walk(node.operand))
        if isinstance(node, BinOp):
            return BinOp(node.op, walk(node.left), walk(node.right))
        if isinstance(node, Call):
            return Call(node.func, walk(node.arg))
        return node

    root = walk(expr.root)
    return Expression(root, expr.variable, to_text(root))
