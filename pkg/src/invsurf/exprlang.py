"""A tiny expression language for user-defined curves and surfaces.

A map is written as three comma-separated coordinate expressions::

    u*cos(v), u*sin(v), 2*v

Grammar (hand-written recursive descent, one token of lookahead)::

    triple  := expr "," expr "," expr
    expr    := term (("+" | "-") term)*
    term    := factor (("*" | "/") factor)*
    factor  := "-" factor | power
    power   := atom ("^" factor)?
    atom    := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"

``^`` binds tighter than unary minus and is right-associative, so
``-2^2 == -4`` and ``2^3^2 == 2^9``.  Exponents must be integer constants.
The Unicode minus sign (U+2212) is accepted as a synonym for ``-``.
Error offsets are byte offsets into the UTF-8 encoded source.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Union

from . import jets
from .errors import (
    ArityError,
    DivisionByZero,
    DomainError,
    ExpressionSyntaxError,
    UnknownIdentifier,
)
from .jets import ScalarJet2, ScalarJet3, SurfaceJet2

FUNCTIONS = {"sin": jets.sin, "cos": jets.cos, "sqrt": jets.sqrt, "exp": jets.exp}
CONSTANTS = {"pi": math.pi}

CURVE_PARAMS = (("t",), ("s",))
SURFACE_PARAMS = (("s", "u"), ("u", "v"))


# --- syntax tree ------------------------------------------------------------

@dataclass(frozen=True)
class NumberLiteral:
    value: float
    offset: int = 0


@dataclass(frozen=True)
class Constant:
    name: str
    offset: int = 0


@dataclass(frozen=True)
class Variable:
    name: str
    offset: int = 0


@dataclass(frozen=True)
class Unary:
    op: str
    child: "Expr"
    offset: int = 0


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    offset: int = 0


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Expr", ...]
    offset: int = 0


Expr = Union[NumberLiteral, Constant, Variable, Unary, Binary, Call]


def strip_offsets(node: Expr) -> Expr:
    """Copy of ``node`` with every offset zeroed, for structural comparison."""
    if isinstance(node, (NumberLiteral, Constant, Variable)):
        return type(node)(node.value if isinstance(node, NumberLiteral) else node.name)
    if isinstance(node, Unary):
        return Unary(node.op, strip_offsets(node.child))
    if isinstance(node, Binary):
        return Binary(node.op, strip_offsets(node.left), strip_offsets(node.right))
    return Call(node.name, tuple(strip_offsets(a) for a in node.args))


def to_source(node: Expr) -> str:
    """Canonical, fully parenthesised rendering that re-parses to the same tree."""
    if isinstance(node, NumberLiteral):
        return repr(node.value)
    if isinstance(node, (Constant, Variable)):
        return node.name
    if isinstance(node, Unary):
        return f"(-{to_source(node.child)})"
    if isinstance(node, Binary):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    return f"{node.name}({', '.join(to_source(a) for a in node.args)})"


# --- tokenizer -----------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),−])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number", "ident", "op", "eof"
    text: str
    pos: int  # character index


def _tokenize(text: str, byte_offset) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", byte_offset(pos))
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            if tok == "−":
                tok = "-"
            tokens.append(_Token(kind, tok, pos))
        pos = m.end()
    tokens.append(_Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, allowed_vars: frozenset[str] | None):
        self.text = text
        self.allowed_vars = allowed_vars
        self.tokens = _tokenize(text, self.byte_offset)
        self.i = 0
        self.open_parens: list[int] = []

    def byte_offset(self, pos: int) -> int:
        return len(self.text[:pos].encode("utf-8"))

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, pos: int | None = None):
        if pos is None:
            tok = self.tok
            if tok.kind == "eof":
                if self.open_parens:
                    # point at the parenthesis that was never closed
                    pos = self.open_parens[-1]
                    message = f"{message}: unclosed '('"
                else:
                    pos = tok.pos
                message = f"{message}: unexpected end of input"
            else:
                pos = tok.pos
                message = f"{message}: unexpected {tok.text!r}"
        raise ExpressionSyntaxError(message, self.byte_offset(pos))

    def expect(self, text: str) -> _Token:
        if self.tok.kind == "op" and self.tok.text == text:
            return self.advance()
        self.error(f"expected {text!r}")

    def at_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    # grammar ---------------------------------------------------------

    def parse_list(self) -> list[Expr]:
        exprs = [self.expr()]
        while self.at_op(","):
            self.advance()
            exprs.append(self.expr())
        if self.tok.kind != "eof":
            self.error("expected ',' or end of input")
        return exprs

    def expr(self) -> Expr:
        node = self.term()
        while self.at_op("+", "-"):
            tok = self.advance()
            node = Binary(tok.text, node, self.term(), self.byte_offset(tok.pos))
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.at_op("*", "/"):
            tok = self.advance()
            node = Binary(tok.text, node, self.factor(), self.byte_offset(tok.pos))
        return node

    def factor(self) -> Expr:
        if self.at_op("-"):
            tok = self.advance()
            return Unary("-", self.factor(), self.byte_offset(tok.pos))
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at_op("^"):
            tok = self.advance()
            exp_pos = self.tok.pos
            exponent = self.factor()
            value = _constant_value(exponent)
            if value is None or not float(value).is_integer():
                raise ExpressionSyntaxError(
                    "exponent must be an integer constant", self.byte_offset(exp_pos)
                )
            return Binary("^", base, exponent, self.byte_offset(tok.pos))
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return NumberLiteral(float(tok.text), self.byte_offset(tok.pos))
        if tok.kind == "ident":
            self.advance()
            offset = self.byte_offset(tok.pos)
            if self.at_op("("):
                if tok.text not in FUNCTIONS:
                    raise UnknownIdentifier(f"unknown function {tok.text!r}", offset)
                paren = self.advance()
                self.open_parens.append(paren.pos)
                args = [self.expr()]
                while self.at_op(","):
                    self.advance()
                    args.append(self.expr())
                self.expect(")")
                self.open_parens.pop()
                if len(args) != 1:
                    raise ExpressionSyntaxError(
                        f"{tok.text}() takes exactly one argument, got {len(args)}", offset
                    )
                return Call(tok.text, tuple(args), offset)
            if tok.text in CONSTANTS:
                return Constant(tok.text, offset)
            if tok.text in FUNCTIONS:
                raise ExpressionSyntaxError(f"function {tok.text!r} needs an argument list", offset)
            if self.allowed_vars is not None and tok.text not in self.allowed_vars:
                raise UnknownIdentifier(f"unknown identifier {tok.text!r}", offset)
            return Variable(tok.text, offset)
        if self.at_op("("):
            paren = self.advance()
            self.open_parens.append(paren.pos)
            node = self.expr()
            self.expect(")")
            self.open_parens.pop()
            return node
        self.error("expected a number, identifier or '('")


def _constant_value(node: Expr) -> float | None:
    """Value of a variable-free subtree, or None."""
    try:
        return evaluate(node, {})
    except (UnknownIdentifier, DivisionByZero, DomainError, OverflowError):
        return None


def parse_expr(text: str, variables: tuple[str, ...] | None = None) -> Expr:
    """Parse a single expression (no top-level commas)."""
    parser = _Parser(text, None if variables is None else frozenset(variables))
    exprs = parser.parse_list()
    if len(exprs) != 1:
        raise ArityError(f"expected one expression, got {len(exprs)}")
    return exprs[0]


# --- evaluation ------------------------------------------------------------

def evaluate(node: Expr, env: Mapping[str, object]):
    """Evaluate ``node`` with variables bound in ``env`` (floats or jets).

    Jet errors are re-raised with the offset of the offending subexpression.
    """
    try:
        if isinstance(node, NumberLiteral):
            return node.value
        if isinstance(node, Constant):
            return CONSTANTS[node.name]
        if isinstance(node, Variable):
            try:
                return env[node.name]
            except KeyError:
                raise UnknownIdentifier(f"unbound variable {node.name!r}", node.offset) from None
        if isinstance(node, Unary):
            return -evaluate(node.child, env)
        if isinstance(node, Call):
            return FUNCTIONS[node.name](evaluate(node.args[0], env))
        left = evaluate(node.left, env)
        if node.op == "^":
            return jets.ipow(left, int(evaluate(node.right, {})))
        right = evaluate(node.right, env)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if not isinstance(right, (ScalarJet2, ScalarJet3)) and abs(right) < jets.ZERO_DENOMINATOR:
            raise DivisionByZero("division by zero")
        return left / right
    except (DivisionByZero, DomainError) as exc:
        if exc.offset is None:
            exc.offset = node.offset
            exc.args = (f"{exc.args[0]} (in subexpression at byte {node.offset})",)
        raise


# --- compiled maps -----------------------------------------------------------

def _infer_params(names: set[str]) -> tuple[str, ...]:
    if "v" in names:
        if names - {"u", "v"}:
            raise UnknownIdentifier(f"cannot mix {sorted(names)} in one map")
        return ("u", "v")
    if "u" in names:
        if names - {"s", "u"}:
            raise UnknownIdentifier(f"cannot mix {sorted(names)} in one map")
        return ("s", "u")
    if names <= {"t"}:
        return ("t",)
    if names <= {"s"}:
        return ("s",)
    raise UnknownIdentifier(f"cannot mix {sorted(names)} in one map")


def _variables(node: Expr, out: dict[str, int]) -> None:
    if isinstance(node, Variable):
        out.setdefault(node.name, node.offset)
    elif isinstance(node, Unary):
        _variables(node.child, out)
    elif isinstance(node, Binary):
        _variables(node.left, out)
        _variables(node.right, out)
    elif isinstance(node, Call):
        for a in node.args:
            _variables(a, out)


_ALL_PARAMS = frozenset({"t", "s", "u", "v"})


@dataclass(frozen=True)
class CompiledMap:
    """Three coordinate expressions over one (curve) or two (surface) parameters."""

    components: tuple[Expr, Expr, Expr]
    params: tuple[str, ...]
    source: str = ""

    @property
    def arity(self) -> int:
        return len(self.params)

    def __call__(self, *args: float) -> tuple[float, float, float]:
        env = dict(zip(self.params, (float(a) for a in args)))
        return tuple(float(evaluate(c, env)) for c in self.components)

    def eval_jet(self, *point: float):
        """Exact jets at ``point``.

        Returns a ``SurfaceJet2`` for surfaces and a triple of
        ``ScalarJet3`` for curves.
        """
        if len(point) != self.arity:
            raise ArityError(f"map takes {self.arity} parameter(s), got {len(point)}")
        if self.arity == 1:
            env = {self.params[0]: ScalarJet3.variable(float(point[0]))}
            return tuple(_as_jet(evaluate(c, env), ScalarJet3) for c in self.components)
        env = {
            self.params[0]: ScalarJet2.variable(float(point[0]), 0),
            self.params[1]: ScalarJet2.variable(float(point[1]), 1),
        }
        return SurfaceJet2.from_components(
            [_as_jet(evaluate(c, env), ScalarJet2) for c in self.components]
        )

    def to_source(self) -> str:
        return ", ".join(to_source(c) for c in self.components)


def _as_jet(value, cls):
    return value if isinstance(value, cls) else cls.constant(float(value))


def parse(text: str, params: tuple[str, ...] | None = None) -> CompiledMap:
    """Parse three comma-separated coordinate expressions into a ``CompiledMap``.

    ``params`` fixes the parameter names; otherwise they are inferred from
    the identifiers used (``t`` or ``s`` for curves, ``s,u`` or ``u,v`` for
    surfaces).
    """
    if params is not None and params not in CURVE_PARAMS + SURFACE_PARAMS:
        raise ValueError(f"unsupported parameter names {params!r}")
    allowed = _ALL_PARAMS if params is None else frozenset(params)
    parser = _Parser(text, allowed)
    exprs = parser.parse_list()
    if len(exprs) != 3:
        raise ArityError(f"expected 3 comma-separated components, got {len(exprs)}")
    used: dict[str, int] = {}
    for e in exprs:
        _variables(e, used)
    if params is None:
        try:
            params = _infer_params(set(used))
        except UnknownIdentifier as exc:
            raise UnknownIdentifier(str(exc), max(used.values())) from None
    return CompiledMap(tuple(exprs), params, text)
