"""A closed expression grammar for index-dependent families.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | 'n' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'

so ``^`` binds tighter than unary minus, which binds tighter than the
multiplicative operators; ``^`` is right-associative.  Nothing outside this
grammar is ever executed.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Union

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "atan")
CONSTANTS = {"pi": math.pi, "e": math.e}


class ExpressionError(ValueError):
    pass


class ExpressionSyntaxError(ExpressionError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column


class EvaluationError(ExpressionError):
    def __init__(self, message: str, span: tuple[int, int] | None):
        where = f" at columns {span[0]}-{span[1]}" if span else ""
        super().__init__(f"{message}{where}")
        self.span = span


_span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: float
    span: tuple[int, int] | None = _span


@dataclass(frozen=True)
class Var:
    name: str = "n"
    span: tuple[int, int] | None = _span


@dataclass(frozen=True)
class Const:
    name: str
    span: tuple[int, int] | None = _span


@dataclass(frozen=True)
class Neg:
    operand: "Expression"
    span: tuple[int, int] | None = _span


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expression"
    span: tuple[int, int] | None = _span


@dataclass(frozen=True)
class Add:
    left: "Expression"
    right: "Expression"
    span: tuple[int, int] | None = _span


@dataclass(frozen=True)
class Sub:
    left: "Expression"
    right: "Expression"
    span: tuple[int, int] | None = _span


@dataclass(frozen=True)
class Mul:
    left: "Expression"
    right: "Expression"
    span: tuple[int, int] | None = _span


@dataclass(frozen=True)
class Div:
    left: "Expression"
    right: "Expression"
    span: tuple[int, int] | None = _span


@dataclass(frozen=True)
class Pow:
    left: "Expression"
    right: "Expression"
    span: tuple[int, int] | None = _span


Expression = Union[Num, Var, Const, Neg, Call, Add, Sub, Mul, Div, Pow]
BINARY = {Add: "+", Sub: "-", Mul: "*", Div: "/", Pow: "^"}
_BY_SYMBOL = {"+": Add, "-": Sub, "*": Mul, "/": Div, "×": Mul, "÷": Div}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()×÷])
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str
    text: str
    start: int  # 0-based offset

    @property
    def column(self) -> int:
        return self.start + 1


def tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise ExpressionSyntaxError(f"expected {text!r}, found {found!r}", self.tok.column)
        return self.advance()

    def parse(self) -> Expression:
        if self.tok.kind == "end":
            raise ExpressionSyntaxError("empty expression", 1)
        node = self.expr()
        if self.tok.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {self.tok.text!r}", self.tok.column)
        return node

    def expr(self) -> Expression:
        left = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance()
            right = self.term()
            left = _BY_SYMBOL[op.text](left, right, span=_join(left, right))
        return left

    def term(self) -> Expression:
        left = self.unary()
        while self.tok.text in ("*", "/", "×", "÷"):
            op = self.advance()
            right = self.unary()
            left = _BY_SYMBOL[op.text](left, right, span=_join(left, right))
        return left

    def unary(self) -> Expression:
        if self.tok.text == "-":
            op = self.advance()
            operand = self.unary()
            return Neg(operand, span=(op.column, operand.span[1]))
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        if self.tok.text == "^":
            self.advance()
            exponent = self.unary()
            return Pow(base, exponent, span=_join(base, exponent))
        return base

    def atom(self) -> Expression:
        t = self.tok
        end = t.start + len(t.text)
        if t.kind == "num":
            self.advance()
            return Num(float(t.text), span=(t.column, end))
        if t.kind == "name":
            self.advance()
            if t.text == "n":
                return Var("n", span=(t.column, end))
            if t.text in CONSTANTS:
                return Const(t.text, span=(t.column, end))
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                close = self.expect(")")
                return Call(t.text, arg, span=(t.column, close.column))
            raise ExpressionSyntaxError(f"unknown name {t.text!r}", t.column)
        if t.text == "(":
            self.advance()
            inner = self.expr()
            close = self.expect(")")
            return replace(inner, span=(t.column, close.column))
        found = t.text or "end of input"
        raise ExpressionSyntaxError(f"unexpected {found!r}", t.column)


def _join(left: Expression, right: Expression):
    if left.span is None or right.span is None:
        return None
    return (left.span[0], right.span[1])


def parse_expression(text: str) -> Expression:
    return _Parser(text).parse()


def to_text(node: Expression) -> str:
    """Print an expression so that parsing it back yields the same tree."""
    if isinstance(node, Num):
        s = repr(float(node.value))
        if node.value < 0 or s.startswith("-"):
            return f"(-{repr(-float(node.value))})"
        if "inf" in s or "nan" in s:
            raise ExpressionError(f"cannot print non-finite literal {s}")
        return s
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_text(node.operand)})"
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    op = BINARY[type(node)]
    return f"({to_text(node.left)}{op}{to_text(node.right)})"


def evaluate(node: Expression, n: float) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return float(n)
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -evaluate(node.operand, n)
    if isinstance(node, Call):
        x = evaluate(node.arg, n)
        return _call(node, x)
    a = evaluate(node.left, n)
    b = evaluate(node.right, n)
    if isinstance(node, Add):
        return a + b
    if isinstance(node, Sub):
        return a - b
    if isinstance(node, Mul):
        return a * b
    if isinstance(node, Div):
        if b == 0.0:
            raise EvaluationError("division by zero", node.span)
        return a / b
    try:
        r = a ** b
    except (OverflowError, ZeroDivisionError) as exc:
        raise EvaluationError(f"power failed ({exc})", node.span) from None
    if isinstance(r, complex):
        raise EvaluationError("negative base with fractional exponent", node.span)
    return r


def _call(node: Call, x: float) -> float:
    f = node.func
    if f == "log":
        if x <= 0.0:
            raise EvaluationError("log of a non-positive value", node.span)
        return math.log(x)
    if f == "sqrt":
        if x < 0.0:
            raise EvaluationError("sqrt of a negative value", node.span)
        return math.sqrt(x)
    if f == "exp":
        try:
            return math.exp(x)
        except OverflowError:
            raise EvaluationError("exp overflow", node.span) from None
    return getattr(math, f)(x)


# -- building expressions programmatically ---------------------------------


class E:
    """Operator-overloading wrapper used to assemble expression trees in code."""

    __slots__ = ("node",)

    def __init__(self, node):
        if isinstance(node, E):
            node = node.node
        elif isinstance(node, (int, float)):
            node = Num(float(node))
        self.node = node

    def __add__(self, o):
        return E(Add(self.node, E(o).node))

    def __radd__(self, o):
        return E(Add(E(o).node, self.node))

    def __sub__(self, o):
        return E(Sub(self.node, E(o).node))

    def __rsub__(self, o):
        return E(Sub(E(o).node, self.node))

    def __mul__(self, o):
        return E(Mul(self.node, E(o).node))

    def __rmul__(self, o):
        return E(Mul(E(o).node, self.node))

    def __truediv__(self, o):
        return E(Div(self.node, E(o).node))

    def __rtruediv__(self, o):
        return E(Div(E(o).node, self.node))

    def __pow__(self, o):
        return E(Pow(self.node, E(o).node))

    def __neg__(self):
        return E(Neg(self.node))

    def text(self) -> str:
        return to_text(self.node)


N = E(Var("n"))
PI = E(Const("pi"))


def fn(name: str, x) -> E:
    if name not in FUNCTIONS:
        raise ExpressionError(f"unknown function {name}")
    return E(Call(name, E(x).node))
