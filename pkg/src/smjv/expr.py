"""Guard and assignment expressions used by statecharts.

The language is deliberately small: integer and boolean literals, variable
references (optionally dotted, e.g. ``RES.CTscan``), ``+``/``-``,
comparisons and the boolean connectives ``&&``, ``||`` and ``!``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

Value = Union[int, bool]


class ExprError(Exception):
    """Raised for syntax errors and for evaluation/type failures."""


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[IntLit, BoolLit, Var, Not, Neg, BinOp]

TRUE = BoolLit(True)
FALSE = BoolLit(False)

# binding power, higher binds tighter
PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "==": 3, "!=": 3, "<=": 3, ">=": 3, "<": 3, ">": 3,
    "+": 4, "-": 4,
}
_UNARY_PREC = 5

ARITH_OPS = frozenset({"+", "-"})
COMPARE_OPS = frozenset({"==", "!=", "<=", ">=", "<", ">"})
BOOL_OPS = frozenset({"&&", "||"})

IDENT = r"[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)*"
IDENT_RE = re.compile(IDENT + r"\Z")

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>" + IDENT + r")"
    r"|(?P<op>\|\||&&|==|!=|<=|>=|<|>|\+|-|!|\(|\)))"
)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """Split *text* into ``(kind, value, offset)`` tokens."""
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ExprError(f"unexpected character {text[pos]!r} at offset {pos}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ExprError(f"unexpected end of expression in {self.text!r}")
        self.pos += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise ExprError(f"expected {value!r} at offset {tok[2]}, got {tok[1]!r}")

    def parse(self) -> Expr:
        if not self.tokens:
            raise ExprError("empty expression")
        expr = self.binary(1)
        tok = self.peek()
        if tok is not None:
            raise ExprError(f"unexpected {tok[1]!r} at offset {tok[2]}")
        return expr

    def binary(self, min_prec: int) -> Expr:
        left = self.unary()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] not in PRECEDENCE:
                return left
            prec = PRECEDENCE[tok[1]]
            if prec < min_prec:
                return left
            self.take()
            right = self.binary(prec + 1)
            left = BinOp(tok[1], left, right)

    def unary(self) -> Expr:
        kind, value, offset = self.take()
        if kind == "num":
            return IntLit(int(value))
        if kind == "name":
            if value == "true":
                return TRUE
            if value == "false":
                return FALSE
            return Var(value)
        if value == "!":
            return Not(self.unary())
        if value == "-":
            return Neg(self.unary())
        if value == "(":
            inner = self.binary(1)
            self.expect(")")
            return inner
        raise ExprError(f"unexpected {value!r} at offset {offset}")


def parse_expr(text: str) -> Expr:
    return _Parser(text).parse()


def _prec(expr: Expr) -> int:
    if isinstance(expr, BinOp):
        return PRECEDENCE[expr.op]
    if isinstance(expr, (Not, Neg)):
        return _UNARY_PREC
    return _UNARY_PREC + 1


def format_expr(expr: Expr) -> str:
    """Print *expr* with the minimum parentheses needed to re-parse it."""
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, (Not, Neg)):
        sign = "!" if isinstance(expr, Not) else "-"
        inner = format_expr(expr.operand)
        if _prec(expr.operand) < _UNARY_PREC:
            inner = f"({inner})"
        return sign + inner
    prec = PRECEDENCE[expr.op]
    left = format_expr(expr.left)
    right = format_expr(expr.right)
    # all binary operators are left-associative
    if _prec(expr.left) < prec:
        left = f"({left})"
    if _prec(expr.right) <= prec:
        right = f"({right})"
    return f"{left} {expr.op} {right}"


def variables(expr: Expr) -> set[str]:
    if isinstance(expr, Var):
        return {expr.name}
    if isinstance(expr, (Not, Neg)):
        return variables(expr.operand)
    if isinstance(expr, BinOp):
        return variables(expr.left) | variables(expr.right)
    return set()


def conjuncts(expr: Expr) -> list[Expr]:
    """Flatten a left-nested ``&&`` chain into its operands."""
    if isinstance(expr, BinOp) and expr.op == "&&":
        return conjuncts(expr.left) + conjuncts(expr.right)
    return [expr]


def conjoin(*exprs: Expr) -> Expr:
    result = exprs[0]
    for e in exprs[1:]:
        result = BinOp("&&", result, e)
    return result


def disjoin(*exprs: Expr) -> Expr:
    result = exprs[0]
    for e in exprs[1:]:
        result = BinOp("||", result, e)
    return result


def eval_expr(expr: Expr, env: Mapping[str, Value]) -> Value:
    """Evaluate *expr* strictly against *env*.

    Raises :class:`ExprError` naming the variable for unbound references,
    and for operands of the wrong type.
    """
    if isinstance(expr, (IntLit, BoolLit)):
        return expr.value
    if isinstance(expr, Var):
        try:
            return env[expr.name]
        except KeyError:
            raise ExprError(f"unbound variable {expr.name!r}") from None
    if isinstance(expr, Not):
        return not _as_bool(eval_expr(expr.operand, env), expr)
    if isinstance(expr, Neg):
        return -_as_int(eval_expr(expr.operand, env), expr)
    op = expr.op
    if op == "&&":
        return _as_bool(eval_expr(expr.left, env), expr) and _as_bool(
            eval_expr(expr.right, env), expr
        )
    if op == "||":
        return _as_bool(eval_expr(expr.left, env), expr) or _as_bool(
            eval_expr(expr.right, env), expr
        )
    left = eval_expr(expr.left, env)
    right = eval_expr(expr.right, env)
    if op in ("==", "!="):
        if type(left) is not type(right):
            raise ExprError(f"type mismatch in {format_expr(expr)!r}")
        return (left == right) if op == "==" else (left != right)
    left = _as_int(left, expr)
    right = _as_int(right, expr)
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "<=":
        return left <= right
    if op == ">=":
        return left >= right
    if op == "<":
        return left < right
    if op == ">":
        return left > right
    raise ExprError(f"unknown operator {op!r}")


def _as_bool(value, expr):
    if not isinstance(value, bool):
        raise ExprError(f"expected boolean operand in {format_expr(expr)!r}")
    return value


def _as_int(value, expr):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ExprError(f"expected integer operand in {format_expr(expr)!r}")
    return value


def infer_type(expr: Expr, types: Mapping[str, str]) -> str:
    """Return ``"int"`` or ``"bool"`` for *expr* given declared variable *types*.

    Raises :class:`ExprError` on undeclared variables or ill-typed operands.
    """
    if isinstance(expr, IntLit):
        return "int"
    if isinstance(expr, BoolLit):
        return "bool"
    if isinstance(expr, Var):
        if expr.name not in types:
            raise ExprError(f"undeclared variable {expr.name!r}")
        return types[expr.name]
    if isinstance(expr, Not):
        _require(expr.operand, "bool", types, expr)
        return "bool"
    if isinstance(expr, Neg):
        _require(expr.operand, "int", types, expr)
        return "int"
    if expr.op in BOOL_OPS:
        _require(expr.left, "bool", types, expr)
        _require(expr.right, "bool", types, expr)
        return "bool"
    if expr.op in ARITH_OPS:
        _require(expr.left, "int", types, expr)
        _require(expr.right, "int", types, expr)
        return "int"
    if expr.op in ("==", "!="):
        lt = infer_type(expr.left, types)
        rt = infer_type(expr.right, types)
        if lt != rt:
            raise ExprError(f"type mismatch in {format_expr(expr)!r}")
        return "bool"
    _require(expr.left, "int", types, expr)
    _require(expr.right, "int", types, expr)
    return "bool"


def _require(sub, wanted, types, whole):
    got = infer_type(sub, types)
    if got != wanted:
        raise ExprError(
            f"expected {wanted} operand, got {got} in {format_expr(whole)!r}"
        )
