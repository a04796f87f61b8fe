"""Parser and evaluator for the "y = f(x)" mapping expression language.

Grammar (recursive descent, whitespace insignificant):

    mapping := ("y" "=")? expr
    expr    := term (("+" | "-") term)*
    term    := factor (("*" | "/") factor)*
    factor  := ("-")? atom
    atom    := number | variable | name "(" expr ("," expr)* ")" | "(" expr ")"

Variables are x0..x9 with x aliasing x0. Runtime domain errors (divide by
zero, log of non-positive, ...) yield non-finite values that the signal
registry masks; evaluation itself never raises.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import SonomapError


class ExpressionError(SonomapError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


class ExpressionSyntaxError(ExpressionError):
    pass


class UnknownFunctionError(ExpressionError):
    pass


class ArityError(ExpressionError):
    pass


class UnboundVariableError(ExpressionError):
    pass


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Neg:
    child: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


FUNCTIONS = {
    "sin": 1, "cos": 1, "abs": 1, "exp": 1, "log": 1, "sqrt": 1, "floor": 1,
    "min": 2, "max": 2, "pow": 2, "clamp": 3,
}

_NUMBER_RE = re.compile(r"\d+(\.\d*)?([eE][+-]?\d+)?|\.\d+([eE][+-]?\d+)?")
_NAME_RE = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*")


class _Parser:
    def __init__(self, text: str, n_sources: int):
        self.text = text
        self.n = n_sources
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expect(self, ch: str):
        if self._peek() != ch:
            raise ExpressionSyntaxError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def parse(self):
        self._skip_ws()
        # optional "y =" prefix
        m = _NAME_RE.match(self.text, self.pos)
        if m and m.group(0) == "y":
            save = self.pos
            self.pos = m.end()
            if self._peek() == "=":
                self.pos += 1
            else:
                self.pos = save
        node = self._expr()
        self._skip_ws()
        if self.pos < len(self.text):
            raise ExpressionSyntaxError(f"unexpected {self.text[self.pos]!r}", self.pos)
        return node

    def _expr(self):
        node = self._term()
        while self._peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            node = Bin(op, node, self._term())
        return node

    def _term(self):
        node = self._factor()
        while self._peek() in ("*", "/"):
            op = self.text[self.pos]
            self.pos += 1
            node = Bin(op, node, self._factor())
        return node

    def _factor(self):
        if self._peek() == "-":
            self.pos += 1
            return Neg(self._factor())
        return self._atom()

    def _atom(self):
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            node = self._expr()
            self._expect(")")
            return node
        m = _NUMBER_RE.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return Num(float(m.group(0)))
        m = _NAME_RE.match(self.text, self.pos)
        if m:
            name = m.group(0)
            start = self.pos
            self.pos = m.end()
            if name == "pi":
                return Num(math.pi)
            if name == "x":
                return self._var(0, start)
            if re.fullmatch(r"x\d", name):
                return self._var(int(name[1]), start)
            if self._peek() == "(":
                return self._call(name, start)
            raise ExpressionSyntaxError(f"unknown name {name!r}", start)
        raise ExpressionSyntaxError("expected number, variable or '('", self.pos)

    def _var(self, index: int, start: int):
        if index >= self.n:
            raise UnboundVariableError(
                f"x{index} unbound ({self.n} source(s))", start)
        return Var(index)

    def _call(self, name: str, start: int):
        if name not in FUNCTIONS:
            raise UnknownFunctionError(f"unknown function {name!r}", start)
        self._expect("(")
        args = [self._expr()]
        while self._peek() == ",":
            self.pos += 1
            args.append(self._expr())
        self._expect(")")
        if len(args) != FUNCTIONS[name]:
            raise ArityError(
                f"{name} takes {FUNCTIONS[name]} argument(s), got {len(args)}", start)
        return Call(name, tuple(args))


def parse_expression(text: str, n_sources: int = 1):
    if not text or not text.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    if n_sources < 1:
        raise ValueError("n_sources must be >= 1")
    return _Parser(text, n_sources).parse()


def _safe(fn, *args) -> float:
    try:
        return float(fn(*args))
    except (ValueError, OverflowError, ZeroDivisionError, TypeError):
        # TypeError covers pow() of a negative base returning complex
        return math.nan


_IMPL = {
    "sin": math.sin, "cos": math.cos, "abs": abs, "exp": math.exp,
    "log": math.log, "sqrt": math.sqrt, "floor": math.floor,
    "min": min, "max": max, "pow": pow,
    "clamp": lambda v, lo, hi: lo if v < lo else hi if v > hi else v,
}


def evaluate(node, inputs) -> float:
    """Evaluate an AST; total function, non-finite results pass through."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return float(inputs[node.index])
    if isinstance(node, Neg):
        return -evaluate(node.child, inputs)
    if isinstance(node, Bin):
        lhs = evaluate(node.left, inputs)
        rhs = evaluate(node.right, inputs)
        if node.op == "+":
            return lhs + rhs
        if node.op == "-":
            return lhs - rhs
        if node.op == "*":
            return _safe(lambda: lhs * rhs)
        return _safe(lambda: lhs / rhs)
    args = [evaluate(a, inputs) for a in node.args]
    return _safe(_IMPL[node.name], *args)


def format_expression(node) -> str:
    """Render an AST back to source; reparsing yields a structurally
    identical tree (fully parenthesized)."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Neg):
        return f"(-{format_expression(node.child)})"
    if isinstance(node, Bin):
        return f"({format_expression(node.left)}{node.op}{format_expression(node.right)})"
    return f"{node.name}({','.join(format_expression(a) for a in node.args)})"
