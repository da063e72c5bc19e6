"""Expression parsing and exact differentiation for functions of x1..xn.

Grammar (whitespace insignificant, numbers are decimal with optional
fraction and exponent):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' integer)?
    base   := number | ident | '(' expr ')' | '-' base | func '(' expr ')'
    func   := 'sin' | 'cos' | 'exp' | 'log'
    ident  := 'x' positive-integer

Exponents must be integer literals; fractional powers are rejected at parse
time so expressions stay twice continuously differentiable away from the
singular points of log, division and negative powers.

Values, gradients and Hessians are propagated exactly through the tree
(second-order forward mode).  No finite differences here: the rank tests and
inertia counts downstream are tolerance sensitive and cannot absorb
derivative noise.  Finite differences appear only in the test oracles.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Expr",
    "Jet2",
    "ExprSyntaxError",
    "ExprDomainError",
    "parse",
    "eval2",
    "to_source",
    "polynomial_degree",
]

_FUNCS = ("sin", "cos", "exp", "log")


class ExprSyntaxError(ValueError):
    """Source string violates the grammar; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ExprDomainError(ArithmeticError):
    """Evaluation hit log of a nonpositive value or a division by zero."""

    def __init__(self, message: str, subterm: str):
        super().__init__(f"{message} in subterm '{subterm}'")
        self.subterm = subterm


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str  # one of _FUNCS
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Pow, Call]


@dataclass(frozen=True)
class Expr:
    """Parsed expression together with the ambient dimension n."""

    root: Node
    n: int


@dataclass(frozen=True, eq=False)
class Jet2:
    """Value, gradient and Hessian of an expression at one point.

    The Hessian is exactly symmetric: every propagation rule adds the two
    transposed outer products with commutative float additions, so symmetry
    is preserved bit for bit.
    """

    value: float
    gradient: np.ndarray
    hessian: np.ndarray


# ---------------------------------------------------------------------------
# Tokenizer / parser

_NUM_RE = re.compile(r"(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?")
_NAME_RE = re.compile(r"[A-Za-z_]\w*")
_INT_RE = re.compile(r"\d+")


class _Parser:
    def __init__(self, source: str, n: int):
        self.src = source
        self.n = n
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip_ws()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def _expect(self, ch: str):
        if self._peek() != ch:
            raise ExprSyntaxError(f"expected '{ch}'", self.pos)
        self.pos += 1

    def parse(self) -> Node:
        node = self.expr()
        self._skip_ws()
        if self.pos != len(self.src):
            raise ExprSyntaxError("unexpected trailing input", self.pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._peek() in ("+", "-"):
            op = self.src[self.pos]
            self.pos += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self._peek() in ("*", "/"):
            op = self.src[self.pos]
            self.pos += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        node = self.base()
        if self._peek() == "^":
            self.pos += 1
            node = Pow(node, self._integer())
        return node

    def _integer(self) -> int:
        self._skip_ws()
        start = self.pos
        sign = 1
        if self._peek() == "-":
            sign = -1
            self.pos += 1
            self._skip_ws()
        m = _INT_RE.match(self.src, self.pos)
        if not m:
            raise ExprSyntaxError("exponent must be an integer literal", start)
        end = m.end()
        # reject 2.5 or 1e3 style exponents outright
        if end < len(self.src) and self.src[end] in ".eE":
            tail = _NUM_RE.match(self.src, self.pos)
            if tail and tail.end() > end:
                raise ExprSyntaxError("exponent must be an integer literal", start)
        self.pos = end
        return sign * int(m.group())

    def base(self) -> Node:
        ch = self._peek()
        if ch == "":
            raise ExprSyntaxError("unexpected end of input", self.pos)
        if ch == "(":
            self.pos += 1
            node = self.expr()
            self._expect(")")
            return node
        if ch == "-":
            self.pos += 1
            return Neg(self.base())
        m = _NUM_RE.match(self.src, self.pos)
        if m:
            self.pos = m.end()
            return Num(float(m.group()))
        m = _NAME_RE.match(self.src, self.pos)
        if m:
            return self._name(m.group(), m.start())
        raise ExprSyntaxError(f"unexpected character '{ch}'", self.pos)

    def _name(self, name: str, start: int) -> Node:
        if name in _FUNCS:
            self.pos = start + len(name)
            self._expect("(")
            node = self.expr()
            self._expect(")")
            return Call(name, node)
        m = re.fullmatch(r"x(\d+)", name)
        if m is None:
            raise ExprSyntaxError(f"unknown identifier '{name}'", start)
        index = int(m.group(1))
        if not 1 <= index <= self.n:
            raise ExprSyntaxError(
                f"variable x{index} out of range for n={self.n}", start
            )
        self.pos = start + len(name)
        return Var(index)


def parse(source: str, n: int) -> Expr:
    """Parse `source` into an expression over x1..xn."""
    if n < 1:
        raise ValueError(f"dimension must be at least 1, got {n}")
    return Expr(_Parser(source, n).parse(), n)


# ---------------------------------------------------------------------------
# Printing (fully parenthesized; parse(to_source(parse(s))) == parse(s))


def to_source(node: Node | Expr) -> str:
    if isinstance(node, Expr):
        node = node.root
    if isinstance(node, Num):
        r = repr(node.value)
        return f"({r})" if node.value < 0 else r
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Pow):
        return f"{to_source(node.base)}^{node.exponent}"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    raise TypeError(f"not an AST node: {node!r}")


# ---------------------------------------------------------------------------
# Exact second-order evaluation


def eval2(expr: Expr, x) -> Jet2:
    """Evaluate value, gradient and Hessian of `expr` at the point `x`.

    Exact to machine precision for polynomial input; raises ExprDomainError
    on log of a nonpositive argument, division by zero, or 0 raised to a
    negative power.
    """
    xv = np.asarray(x, dtype=float)
    if xv.shape != (expr.n,):
        raise ValueError(f"point has shape {xv.shape}, expected ({expr.n},)")
    v, g, h = _jet(expr.root, xv, expr.n)
    g = g.copy()
    h = h.copy()
    g.flags.writeable = False
    h.flags.writeable = False
    return Jet2(float(v), g, h)


def _jet(node: Node, x: np.ndarray, n: int):
    if isinstance(node, Num):
        return node.value, np.zeros(n), np.zeros((n, n))
    if isinstance(node, Var):
        g = np.zeros(n)
        g[node.index - 1] = 1.0
        return x[node.index - 1], g, np.zeros((n, n))
    if isinstance(node, Neg):
        v, g, h = _jet(node.operand, x, n)
        return -v, -g, -h
    if isinstance(node, BinOp):
        va, ga, ha = _jet(node.left, x, n)
        vb, gb, hb = _jet(node.right, x, n)
        if node.op == "+":
            return va + vb, ga + gb, ha + hb
        if node.op == "-":
            return va - vb, ga - gb, ha - hb
        if node.op == "*":
            return (
                va * vb,
                va * gb + vb * ga,
                va * hb + vb * ha + np.outer(ga, gb) + np.outer(gb, ga),
            )
        # division: q = a/b, grad q = (ga - q gb)/b,
        # hess q = (ha - q hb - grad q gb' - gb grad q')/b
        if vb == 0.0:
            raise ExprDomainError("division by zero", to_source(node))
        v = va / vb
        g = (ga - v * gb) / vb
        h = (ha - v * hb - np.outer(g, gb) - np.outer(gb, g)) / vb
        return v, g, h
    if isinstance(node, Pow):
        vu, gu, hu = _jet(node.base, x, n)
        k = node.exponent
        if k == 0:
            return 1.0, np.zeros(n), np.zeros((n, n))
        if k < 0 and vu == 0.0:
            raise ExprDomainError("zero raised to a negative power", to_source(node))
        v = vu**k
        d1 = k * vu ** (k - 1)
        # k == 1 would hit u^(-1) at u = 0 despite the zero prefactor
        d2 = 0.0 if k == 1 else k * (k - 1) * vu ** (k - 2)
        return v, d1 * gu, d1 * hu + d2 * np.outer(gu, gu)
    if isinstance(node, Call):
        vu, gu, hu = _jet(node.arg, x, n)
        if node.func == "sin":
            d0, d1, d2 = np.sin(vu), np.cos(vu), -np.sin(vu)
        elif node.func == "cos":
            d0, d1, d2 = np.cos(vu), -np.sin(vu), -np.cos(vu)
        elif node.func == "exp":
            d0 = d1 = d2 = np.exp(vu)
        else:  # log
            if vu <= 0.0:
                raise ExprDomainError("log of a nonpositive value", to_source(node))
            d0, d1, d2 = np.log(vu), 1.0 / vu, -1.0 / (vu * vu)
        return d0, d1 * gu, d1 * hu + d2 * np.outer(gu, gu)
    raise TypeError(f"not an AST node: {node!r}")


# ---------------------------------------------------------------------------
# Structural degree analysis (no simplification: x1^3 - x1^3 has degree 3)


def polynomial_degree(node: Node | Expr) -> int | None:
    """Total degree of a polynomial AST, or None if not polynomial."""
    if isinstance(node, Expr):
        node = node.root
    if isinstance(node, Num):
        return 0
    if isinstance(node, Var):
        return 1
    if isinstance(node, Neg):
        return polynomial_degree(node.operand)
    if isinstance(node, BinOp):
        da = polynomial_degree(node.left)
        db = polynomial_degree(node.right)
        if da is None or db is None:
            return None
        if node.op in "+-":
            return max(da, db)
        if node.op == "*":
            return da + db
        return da if db == 0 else None  # division only by a constant subtree
    if isinstance(node, Pow):
        d = polynomial_degree(node.base)
        if d is None:
            return None
        if node.exponent < 0:
            return 0 if d == 0 else None
        return d * node.exponent
    if isinstance(node, Call):
        return None
    raise TypeError(f"not an AST node: {node!r}")
