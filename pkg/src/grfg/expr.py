"""Operation set, sanitized column arithmetic and the feature expression language.

Every generated feature is a small expression tree over original columns. The
tree renders to a name such as ``sigmoid((a/b))`` and parses back, so any
column of a reconstructed feature set can be recomputed from raw data.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Union

import numpy as np

CLAMP = 1e12


class Operation(Enum):
    # order is fixed: one-hot indices depend on it
    SQUARE_ROOT = ("sqrt", 1)
    SQUARE = ("square", 1)
    COSINE = ("cos", 1)
    SINE = ("sin", 1)
    TANGENT = ("tan", 1)
    EXP = ("exp", 1)
    CUBE = ("cube", 1)
    LOG = ("log", 1)
    RECIPROCAL = ("recip", 1)
    SIGMOID = ("sigmoid", 1)
    PLUS = ("+", 2)
    SUBTRACT = ("-", 2)
    MULTIPLY = ("*", 2)
    DIVIDE = ("/", 2)

    def __init__(self, symbol: str, arity: int):
        self.symbol = symbol
        self.arity = arity

    @property
    def index(self) -> int:
        return OPERATIONS.index(self)

    @property
    def is_unary(self) -> bool:
        return self.arity == 1


OPERATIONS: tuple[Operation, ...] = tuple(Operation)
UNARY_OPS = tuple(op for op in OPERATIONS if op.arity == 1)
BINARY_OPS = tuple(op for op in OPERATIONS if op.arity == 2)
_BY_SYMBOL = {op.symbol: op for op in OPERATIONS}


def _raw(op: Operation, a: np.ndarray, b: np.ndarray | None) -> np.ndarray:
    if op is Operation.SQUARE_ROOT:
        return np.sqrt(np.abs(a))
    if op is Operation.SQUARE:
        return a * a
    if op is Operation.COSINE:
        return np.cos(a)
    if op is Operation.SINE:
        return np.sin(a)
    if op is Operation.TANGENT:
        return np.tan(a)
    if op is Operation.EXP:
        return np.exp(a)
    if op is Operation.CUBE:
        return a * a * a
    if op is Operation.LOG:
        return np.log(np.abs(a))
    if op is Operation.RECIPROCAL:
        return 1.0 / a
    if op is Operation.SIGMOID:
        return 1.0 / (1.0 + np.exp(-a))
    if op is Operation.PLUS:
        return a + b
    if op is Operation.SUBTRACT:
        return a - b
    if op is Operation.MULTIPLY:
        return a * b
    return a / b


def sanitize(v: np.ndarray) -> np.ndarray:
    v = np.where(np.isfinite(v), v, 0.0)
    return np.clip(v, -CLAMP, CLAMP)


def apply_op(op: Operation, a, b=None) -> np.ndarray:
    """Element-wise ``op`` with non-finite results zeroed and the rest clamped to +-1e12."""
    a = np.asarray(a, dtype=float)
    if op.arity == 2:
        if b is None:
            raise ValueError(f"{op.name} needs two operands")
        b = np.asarray(b, dtype=float)
        if a.shape != b.shape:
            raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    elif b is not None:
        raise ValueError(f"{op.name} takes one operand")
    with np.errstate(all="ignore"):
        return sanitize(_raw(op, a, b))


@dataclass(frozen=True)
class Leaf:
    name: str


@dataclass(frozen=True)
class Unary:
    op: Operation
    child: "FeatureExpr"


@dataclass(frozen=True)
class Binary:
    op: Operation
    left: "FeatureExpr"
    right: "FeatureExpr"


FeatureExpr = Union[Leaf, Unary, Binary]


def render_name(expr: FeatureExpr) -> str:
    if isinstance(expr, Leaf):
        return expr.name
    if isinstance(expr, Unary):
        return f"{expr.op.symbol}({render_name(expr.child)})"
    return f"({render_name(expr.left)}{expr.op.symbol}{render_name(expr.right)})"


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.pos = pos


class UnknownColumnError(KeyError):
    def __str__(self):
        return f"unknown column {self.args[0]!r}"


_STOP = set("()+-*/,") | {" ", "\t", "\n", "\r"}


class _Parser:
    def __init__(self, text: str, known):
        self.text = text
        self.pos = 0
        self.known = known

    def error(self, msg):
        raise ExprSyntaxError(msg, self.text, self.pos)

    def expect(self, ch):
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def word(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in _STOP:
            self.pos += 1
        if start == self.pos:
            self.error("expected a name")
        return self.text[start:self.pos]

    def expr(self) -> FeatureExpr:
        if self.pos >= len(self.text):
            self.error("unexpected end of input")
        if self.text[self.pos] == "(":
            self.pos += 1
            left = self.expr()
            if self.pos >= len(self.text):
                self.error("unexpected end of input")
            op = _BY_SYMBOL.get(self.text[self.pos])
            if op is None or op.arity != 2:
                self.error("expected a binary operator")
            self.pos += 1
            right = self.expr()
            self.expect(")")
            return Binary(op, left, right)
        start = self.pos
        name = self.word()
        if self.pos < len(self.text) and self.text[self.pos] == "(":
            op = _BY_SYMBOL.get(name)
            if op is None or op.arity != 1:
                self.pos = start
                self.error(f"unknown unary operation {name!r}")
            self.pos += 1
            child = self.expr()
            self.expect(")")
            return Unary(op, child)
        if self.known is not None and name not in self.known:
            raise UnknownColumnError(name)
        return Leaf(name)


def parse_name(text: str, known_columns=None) -> FeatureExpr:
    """Parse a rendered feature name back into its expression tree.

    ``known_columns`` restricts the accepted leaf names; pass None to skip the check.
    """
    p = _Parser(text, None if known_columns is None else set(known_columns))
    expr = p.expr()
    if p.pos != len(text):
        p.error("trailing characters")
    return expr


def leaves(expr: FeatureExpr) -> list[str]:
    if isinstance(expr, Leaf):
        return [expr.name]
    if isinstance(expr, Unary):
        return leaves(expr.child)
    return leaves(expr.left) + leaves(expr.right)


def depth(expr: FeatureExpr) -> int:
    if isinstance(expr, Leaf):
        return 0
    if isinstance(expr, Unary):
        return 1 + depth(expr.child)
    return 1 + max(depth(expr.left), depth(expr.right))


def evaluate(expr: FeatureExpr, columns) -> np.ndarray:
    """Recompute ``expr`` on raw columns (a DataTable or a name -> vector mapping)."""
    if not isinstance(columns, Mapping):
        columns = columns.columns
    return _eval(expr, columns)


def _eval(expr, columns: Mapping[str, np.ndarray]) -> np.ndarray:
    if isinstance(expr, Leaf):
        if expr.name not in columns:
            raise UnknownColumnError(expr.name)
        return np.asarray(columns[expr.name], dtype=float)
    if isinstance(expr, Unary):
        return apply_op(expr.op, _eval(expr.child, columns))
    return apply_op(expr.op, _eval(expr.left, columns), _eval(expr.right, columns))


def read_provenance(path) -> list[tuple[str, str]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"provenance line {lineno}: expected name<TAB>expression")
            rows.append((parts[0], parts[1]))
    return rows


def write_provenance(path, features) -> None:
    """``features`` is an iterable of FeatureExpr."""
    with open(path, "w", encoding="utf-8") as fh:
        for expr in features:
            name = render_name(expr)
            fh.write(f"{name}\t{name}\n")
