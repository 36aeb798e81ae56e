"""Tiny arithmetic expression language for potentials.

Grammar (operators by increasing precedence):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?          # right associative
    atom   := NUMBER | NAME | NAME '(' expr (',' expr)* ')' | '(' expr ')'

Allowed names are the variables ``x`` and ``s`` and the one-argument
functions ``sin``, ``cos``, ``exp``, ``sqrt``.  Everything else is
rejected at parse time.  Trees evaluate with numpy semantics, so array
arguments broadcast.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import ExpressionError

VARIABLES = ("x", "s")
FUNCTIONS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "sqrt": np.sqrt}


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Call]


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_pos = len(text) - len(stripped)
            raise ExpressionError(f"unexpected character {text[bad_pos]!r}", bad_pos)
        if m.lastgroup == "num" or (m.group("num") is not None):
            tokens.append(("num", m.group(0).strip(), m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.end() - len(m.group("name"))))
        else:
            tokens.append(("op", m.group("op"), m.end() - 1))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, symbol):
        kind, value, pos = self.peek()
        if kind != "op" or value != symbol:
            raise ExpressionError(f"expected {symbol!r}", pos)
        return self.advance()

    def parse(self):
        node = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ExpressionError(f"unexpected {value!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                node = BinOp(value, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.advance()
                node = BinOp(value, node, self.unary())
            else:
                return node

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Neg(self.unary())
        if kind == "op" and value == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            node = BinOp("^", node, self.unary())
        return node

    def atom(self):
        kind, value, pos = self.advance()
        if kind == "num":
            return Num(float(value))
        if kind == "name":
            nk, nv, _ = self.peek()
            if nk == "op" and nv == "(":
                if value not in FUNCTIONS:
                    raise ExpressionError(f"unknown function {value!r}", pos)
                self.advance()
                args = [self.expr()]
                while True:
                    k2, v2, _ = self.peek()
                    if k2 == "op" and v2 == ",":
                        self.advance()
                        args.append(self.expr())
                    else:
                        break
                self.expect_op(")")
                if len(args) != 1:
                    raise ExpressionError(
                        f"{value} expects 1 argument, got {len(args)}", pos
                    )
                return Call(value, args[0])
            if value in VARIABLES:
                return Var(value)
            raise ExpressionError(f"unknown identifier {value!r}", pos)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "end":
            raise ExpressionError("expected value", pos)
        raise ExpressionError(f"unexpected {value!r}", pos)


def parse_expression(text: str) -> Expr:
    """Parse ``text`` into an expression tree, rejecting unknown names."""
    if not text or not text.strip():
        raise ExpressionError("empty expression", 0)
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printer

_PRECEDENCE = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}


def _prec(node):
    if isinstance(node, BinOp):
        return _PRECEDENCE[node.op]
    if isinstance(node, Neg):
        return 15
    return 100


def to_string(node: Expr) -> str:
    """Render a tree so that ``parse_expression(to_string(t)) == t``."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_string(node.arg)})"
    if isinstance(node, Neg):
        inner = to_string(node.arg)
        # "-a*b" would re-parse as (-a)*b, so anything below a power
        # needs parentheses
        if (isinstance(node.arg, BinOp) and node.arg.op != "^") or isinstance(
            node.arg, Neg
        ):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, BinOp):
        lp, rp = _prec(node.left), _prec(node.right)
        left = to_string(node.left)
        right = to_string(node.right)
        if node.op == "^":
            # left operand of ^ must be an atom; right binds as unary
            if lp < 100:
                left = f"({left})"
            if isinstance(node.right, BinOp) and node.right.op != "^":
                right = f"({right})"
            return f"{left}^{right}"
        my = _PRECEDENCE[node.op]
        if lp < my:
            left = f"({left})"
        # subtraction/division are left associative: parenthesize equal-prec rhs
        if rp < my or (rp == my and node.op in "-/"):
            right = f"({right})"
        elif node.op in "+*" and rp == my and isinstance(node.right, BinOp):
            right = f"({right})"
        return f"{left} {node.op} {right}" if node.op in "+-" else f"{left}{node.op}{right}"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# Evaluation


def free_variables(node: Expr) -> set:
    if isinstance(node, Num):
        return set()
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Neg):
        return free_variables(node.arg)
    if isinstance(node, Call):
        return free_variables(node.arg)
    return free_variables(node.left) | free_variables(node.right)


def compile_expression(node: Expr) -> Callable:
    """Compose the tree into a closure ``f(x, s)`` with numpy semantics."""
    if isinstance(node, Num):
        v = node.value
        return lambda x, s: v
    if isinstance(node, Var):
        if node.name == "x":
            return lambda x, s: x
        return lambda x, s: s
    if isinstance(node, Neg):
        f = compile_expression(node.arg)
        return lambda x, s: -f(x, s)
    if isinstance(node, Call):
        fn = FUNCTIONS[node.func]
        f = compile_expression(node.arg)
        return lambda x, s: fn(f(x, s))
    f, g = compile_expression(node.left), compile_expression(node.right)
    op = node.op
    if op == "+":
        return lambda x, s: f(x, s) + g(x, s)
    if op == "-":
        return lambda x, s: f(x, s) - g(x, s)
    if op == "*":
        return lambda x, s: f(x, s) * g(x, s)
    if op == "/":
        return lambda x, s: f(x, s) / g(x, s)
    return lambda x, s: f(x, s) ** g(x, s)


def evaluate(node: Expr, x=0.0, s=0.0):
    return compile_expression(node)(x, s)


# ---------------------------------------------------------------------------
# Differentiation


def _mul(a, b):
    if a == Num(0.0) or b == Num(0.0):
        return Num(0.0)
    if a == Num(1.0):
        return b
    if b == Num(1.0):
        return a
    return BinOp("*", a, b)


def _add(a, b):
    if a == Num(0.0):
        return b
    if b == Num(0.0):
        return a
    return BinOp("+", a, b)


def _sub(a, b):
    if b == Num(0.0):
        return a
    return BinOp("-", a, b)


def differentiate(node: Expr, name: str) -> Expr:
    """Symbolic d/d(name); stays inside the expression grammar.

    Powers require the exponent to be free of ``name`` (general u^v would
    need a logarithm, which the grammar does not have).
    """
    if isinstance(node, Num):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0) if node.name == name else Num(0.0)
    if isinstance(node, Neg):
        d = differentiate(node.arg, name)
        return Num(0.0) if d == Num(0.0) else Neg(d)
    if isinstance(node, Call):
        u, du = node.arg, differentiate(node.arg, name)
        if du == Num(0.0):
            return Num(0.0)
        if node.func == "sin":
            return _mul(Call("cos", u), du)
        if node.func == "cos":
            return Neg(_mul(Call("sin", u), du))
        if node.func == "exp":
            return _mul(Call("exp", u), du)
        return BinOp("/", du, _mul(Num(2.0), Call("sqrt", u)))
    if isinstance(node, BinOp):
        u, v = node.left, node.right
        du, dv = differentiate(u, name), differentiate(v, name)
        if node.op in "+-":
            return _add(du, dv) if node.op == "+" else _sub(du, dv)
        if node.op == "*":
            return _add(_mul(du, v), _mul(u, dv))
        if node.op == "/":
            num = _sub(_mul(du, v), _mul(u, dv))
            return BinOp("/", num, BinOp("^", v, Num(2.0)))
        # power
        if name in free_variables(v):
            raise ExpressionError(
                "cannot differentiate a power with the variable in the exponent"
            )
        if du == Num(0.0):
            return Num(0.0)
        if v == Num(2.0):
            return _mul(_mul(Num(2.0), u), du)
        new_exp = _fold_sub(v)
        return _mul(_mul(v, BinOp("^", u, new_exp)), du)
    raise TypeError(f"not an expression node: {node!r}")


def _fold_sub(exponent):
    # exponent - 1, folding when the exponent is a bare literal
    if isinstance(exponent, Num):
        return Num(exponent.value - 1.0)
    return BinOp("-", exponent, Num(1.0))
