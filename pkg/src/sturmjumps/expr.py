"""Formula parsing and second-order forward-mode differentiation.

Potentials are supplied as text formulas in the variable ``x``, e.g.
``"2+sin(x)"`` or ``"(1-x)/x"``.  ``parse`` builds an immutable AST,
``eval_jet2`` evaluates value, first and second derivative in a single
pass by propagating ``(v, d1, d2)`` jets with exact chain rules, and
``compile_value`` emits a fast plain-value callable for inner loops.

Grammar (whitespace ignored)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := unary ('^' factor)?          # '^' is right-associative
    unary  := '-' unary | atom
    atom   := number | 'x' | 'pi' | 'e' | ident '(' expr ')' | '(' expr ')'

Unary minus binds tighter than a '^' base, so ``-x^2`` means ``(-x)^2``.
Functions: sqrt, exp, log, sin, cos.  ``abs`` is deliberately absent: it
would silently break twice-differentiability.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, NamedTuple, Union

__all__ = [
    "Number",
    "Symbol",
    "Unary",
    "Binary",
    "ExprAst",
    "Jet2",
    "FormulaError",
    "EvalDomainError",
    "parse",
    "serialize",
    "eval_jet2",
    "compile_value",
]

FUNCTIONS = ("sqrt", "exp", "log", "sin", "cos")
NAMED_CONSTANTS = {"pi": math.pi, "e": math.e}


class FormulaError(ValueError):
    """Malformed formula text; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class EvalDomainError(ArithmeticError):
    """A formula left the real domain (or overflowed) during evaluation."""

    def __init__(self, message: str, subexpr: str, x: float):
        super().__init__(f"{message} in '{subexpr}' at x={x!r}")
        self.subexpr = subexpr
        self.x = x


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Symbol:
    name: str  # 'x', 'pi' or 'e'


@dataclass(frozen=True)
class Unary:
    op: str  # 'neg' or a function name
    arg: "ExprAst"


@dataclass(frozen=True)
class Binary:
    op: str  # '+', '-', '*', '/', '^'
    lhs: "ExprAst"
    rhs: "ExprAst"


ExprAst = Union[Number, Symbol, Unary, Binary]


class Jet2(NamedTuple):
    """Value and first two derivatives with respect to x."""

    v: float
    d1: float
    d2: float


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_NUM_RE = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class _Parser:
    def __init__(self, source: str):
        self.src = source
        self.pos = 0

    def fail(self, message):
        raise FormulaError(message, self.pos)

    def peek(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.fail(f"expected '{ch}'")
        self.pos += 1

    def parse(self):
        node = self.expr()
        if self.peek() != "":
            self.fail("unexpected trailing input")
        return node

    def expr(self):
        node = self.term()
        while True:
            ch = self.peek()
            if ch in ("+", "-"):
                self.pos += 1
                node = Binary(ch, node, self.term())
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            ch = self.peek()
            if ch in ("*", "/"):
                self.pos += 1
                node = Binary(ch, node, self.factor())
            else:
                return node

    def factor(self):
        base = self.unary()
        if self.peek() == "^":
            self.pos += 1
            return Binary("^", base, self.factor())
        return base

    def unary(self):
        if self.peek() == "-":
            self.pos += 1
            return Unary("neg", self.unary())
        return self.atom()

    def atom(self):
        ch = self.peek()
        if ch == "":
            self.fail("unexpected end of input")
        if ch == "(":
            self.pos += 1
            node = self.expr()
            self.expect(")")
            return node
        m = _NUM_RE.match(self.src, self.pos)
        if m:
            value = float(m.group())
            if not math.isfinite(value):
                self.fail(f"numeric literal '{m.group()}' overflows")
            self.pos = m.end()
            return Number(value)
        m = _IDENT_RE.match(self.src, self.pos)
        if m:
            name = m.group()
            start = self.pos
            self.pos = m.end()
            if name in FUNCTIONS:
                if self.peek() != "(":
                    self.pos = start
                    self.fail(f"function '{name}' takes exactly one parenthesized argument")
                self.pos += 1
                arg = self.expr()
                self.expect(")")
                return Unary(name, arg)
            if self.peek() == "(":
                self.pos = start
                if name == "x" or name in NAMED_CONSTANTS:
                    self.fail(f"'{name}' is not a function")
                self.fail(f"unknown function '{name}'")
            if name == "x" or name in NAMED_CONSTANTS:
                return Symbol(name)
            self.pos = start
            self.fail(f"unknown identifier '{name}'")
        self.fail(f"unexpected character {ch!r}")


def parse(source: str) -> ExprAst:
    """Parse formula text into an AST; raises FormulaError with a byte offset."""
    if not isinstance(source, str) or not source.strip():
        raise FormulaError("empty formula", 0)
    return _Parser(source).parse()


# ---------------------------------------------------------------------------
# serialization (round-trips structurally through parse)
# ---------------------------------------------------------------------------

_BINARY_LEVEL = {"+": 0, "-": 0, "*": 1, "/": 1, "^": 2}


def _node_level(node):
    if isinstance(node, (Number, Symbol)):
        return 4
    if isinstance(node, Unary):
        return 3 if node.op == "neg" else 4
    return _BINARY_LEVEL[node.op]


def _fmt(node, minimum):
    if isinstance(node, Number):
        s = repr(node.value)
    elif isinstance(node, Symbol):
        s = node.name
    elif isinstance(node, Unary):
        if node.op == "neg":
            s = "-" + _fmt(node.arg, 3)
        else:
            s = f"{node.op}({_fmt(node.arg, 0)})"
    else:
        op = node.op
        if op == "^":
            # the base slot only admits unary/atom, the exponent a factor
            s = _fmt(node.lhs, 3) + "^" + _fmt(node.rhs, 2)
        elif op in "*/":
            s = _fmt(node.lhs, 1) + op + _fmt(node.rhs, 2)
        else:
            s = _fmt(node.lhs, 0) + op + _fmt(node.rhs, 1)
    if _node_level(node) < minimum:
        return "(" + s + ")"
    return s


def serialize(node: ExprAst) -> str:
    """Render an AST back to formula text; parse(serialize(t)) equals t."""
    return _fmt(node, 0)


# ---------------------------------------------------------------------------
# jet evaluation
# ---------------------------------------------------------------------------


def _domain(message, node, x):
    return EvalDomainError(message, serialize(node), x)


def _jet_log(a, node, x):
    if a.v <= 0.0:
        raise _domain("logarithm of a non-positive value", node, x)
    r = a.d1 / a.v
    return Jet2(math.log(a.v), r, a.d2 / a.v - r * r)


def _jet_exp(a, node, x):
    try:
        e = math.exp(a.v)
    except OverflowError:
        raise _domain("exp overflow", node, x) from None
    return Jet2(e, e * a.d1, e * (a.d2 + a.d1 * a.d1))


def _jet_mul(a, b):
    return Jet2(
        a.v * b.v,
        a.d1 * b.v + a.v * b.d1,
        a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
    )


def _apply_unary(node, a, x):
    op = node.op
    if op == "neg":
        return Jet2(-a.v, -a.d1, -a.d2)
    if op == "sqrt":
        if a.v < 0.0:
            raise _domain("square root of a negative value", node, x)
        if a.v == 0.0:
            if a.d1 == 0.0 and a.d2 == 0.0:
                return Jet2(0.0, 0.0, 0.0)
            raise _domain("square root not differentiable at zero", node, x)
        s = math.sqrt(a.v)
        d1 = a.d1 / (2.0 * s)
        return Jet2(s, d1, (a.d2 - 2.0 * d1 * d1) / (2.0 * s))
    if op == "exp":
        return _jet_exp(a, node, x)
    if op == "log":
        return _jet_log(a, node, x)
    if op == "sin":
        s, c = math.sin(a.v), math.cos(a.v)
        return Jet2(s, c * a.d1, c * a.d2 - s * a.d1 * a.d1)
    if op == "cos":
        s, c = math.sin(a.v), math.cos(a.v)
        return Jet2(c, -s * a.d1, -s * a.d2 - c * a.d1 * a.d1)
    raise _domain(f"unknown function '{op}'", node, x)


def _apply_power(node, a, b, x):
    if b.d1 == 0.0 and b.d2 == 0.0:
        p = b.v
        if p == 0.0:
            return Jet2(1.0, 0.0, 0.0)
        if p == 1.0:
            return a
        if a.v == 0.0:
            if a.d1 == 0.0 and a.d2 == 0.0:
                if p < 0.0:
                    raise _domain("zero raised to a negative power", node, x)
                return Jet2(0.0, 0.0, 0.0)
            if p >= 2.0:
                d2 = 2.0 * a.d1 * a.d1 if p == 2.0 else 0.0
                return Jet2(0.0, 0.0, d2)
            raise _domain("power not twice differentiable at zero base", node, x)
        if a.v < 0.0 and not float(p).is_integer():
            raise _domain("negative base with non-integer exponent", node, x)
        try:
            vp = math.pow(a.v, p)
            vp1 = math.pow(a.v, p - 1.0)
            vp2 = math.pow(a.v, p - 2.0)
        except (ValueError, OverflowError):
            raise _domain("power out of domain", node, x) from None
        d1 = p * vp1 * a.d1
        d2 = p * (p - 1.0) * vp2 * a.d1 * a.d1 + p * vp1 * a.d2
        return Jet2(vp, d1, d2)
    # x-dependent exponent: a^b = exp(b*log(a)), base must stay positive
    if a.v <= 0.0:
        raise _domain("variable exponent requires a positive base", node, x)
    return _jet_exp(_jet_mul(b, _jet_log(a, node, x)), node, x)


def _jet(node, x):
    if isinstance(node, Number):
        return Jet2(node.value, 0.0, 0.0)
    if isinstance(node, Symbol):
        if node.name == "x":
            return Jet2(x, 1.0, 0.0)
        return Jet2(NAMED_CONSTANTS[node.name], 0.0, 0.0)
    if isinstance(node, Unary):
        out = _apply_unary(node, _jet(node.arg, x), x)
    else:
        a = _jet(node.lhs, x)
        b = _jet(node.rhs, x)
        op = node.op
        if op == "+":
            out = Jet2(a.v + b.v, a.d1 + b.d1, a.d2 + b.d2)
        elif op == "-":
            out = Jet2(a.v - b.v, a.d1 - b.d1, a.d2 - b.d2)
        elif op == "*":
            out = _jet_mul(a, b)
        elif op == "/":
            if b.v == 0.0:
                raise _domain("division by zero", node, x)
            q = a.v / b.v
            q1 = (a.d1 - q * b.d1) / b.v
            q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v
            out = Jet2(q, q1, q2)
        else:
            out = _apply_power(node, a, b, x)
    if not (math.isfinite(out.v) and math.isfinite(out.d1) and math.isfinite(out.d2)):
        raise _domain("overflow to non-finite", node, x)
    return out


def eval_jet2(ast: ExprAst, x: float) -> Jet2:
    """Evaluate (V(x), V'(x), V''(x)); the seed for 'x' is (x, 1, 0)."""
    return _jet(ast, x)


# ---------------------------------------------------------------------------
# compilation to a plain-value callable
# ---------------------------------------------------------------------------


def _emit(node):
    if isinstance(node, Number):
        return repr(node.value)
    if isinstance(node, Symbol):
        return "x" if node.name == "x" else node.name
    if isinstance(node, Unary):
        if node.op == "neg":
            return f"(-{_emit(node.arg)})"
        return f"{node.op}({_emit(node.arg)})"
    if node.op == "^":
        return f"pow({_emit(node.lhs)},{_emit(node.rhs)})"
    return f"({_emit(node.lhs)}{node.op}{_emit(node.rhs)})"


def compile_value(ast: ExprAst, vectorized: bool = False) -> Callable:
    """Compile an AST to a fast value-only callable.

    The scalar backend (math) raises ValueError/ZeroDivisionError/
    OverflowError on domain violations; the vectorized backend (numpy)
    produces nan/inf entries instead, so callers screen with isfinite.
    """
    if vectorized:
        import numpy as np

        env = {
            "sqrt": np.sqrt,
            "exp": np.exp,
            "log": np.log,
            "sin": np.sin,
            "cos": np.cos,
            "pow": np.power,
            "pi": np.pi,
            "e": np.e,
        }
    else:
        env = {
            "sqrt": math.sqrt,
            "exp": math.exp,
            "log": math.log,
            "sin": math.sin,
            "cos": math.cos,
            "pow": math.pow,
            "pi": math.pi,
            "e": math.e,
        }
    env["__builtins__"] = {}
    # the source string is generated from our own AST nodes only
    return eval(f"lambda x: {_emit(ast)}", env)
