"""Scalar expression language: parsing, differentiation, evaluation.

Expressions are small immutable trees over named real variables with the
four arithmetic operations, negation, powers, and the unary functions
sqrt, sin, cos, tan, exp and ln.  Everything in this module is a pure
function over those trees, so expressions can be shared freely between
threads.

Grammar (also used by the printer)::

    expr  := term (('+'|'-') term)*
    term  := unary (('*'|'/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

``pi`` is a named constant; numbers are decimal literals with optional
fraction and exponent.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from typing import Callable, Mapping

from .errors import EvaluationError, ParseError, UnboundVariableError

__all__ = [
    "Expression", "Constant", "Variable", "Add", "Sub", "Mul", "Div", "Neg",
    "Pow", "Call", "Bindings", "FUNCTIONS", "NAMED_CONSTANTS", "RESERVED_NAMES",
    "as_expr", "parse_expr", "evaluate", "diff", "simplify", "substitute",
    "free_variables", "to_string", "ZeroTestConfig", "ZeroTestResult",
    "zero_residual", "is_numerically_zero",
]

Bindings = Mapping[str, float]

FUNCTIONS: Mapping[str, Callable[[float], float]] = {
    "sqrt": math.sqrt,
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "ln": math.log,
}

NAMED_CONSTANTS: Mapping[str, float] = {"pi": math.pi}

RESERVED_NAMES = frozenset(FUNCTIONS) | frozenset(NAMED_CONSTANTS)


class Expression:
    """Base class for expression nodes.

    Nodes are frozen dataclasses: structural equality and hashing come
    for free, which the compiler uses for common-subexpression reuse.
    Arithmetic operators build new trees and coerce plain numbers.
    """

    __slots__ = ()

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __pow__(self, other):
        return Pow(self, as_expr(other))

    def __neg__(self):
        return Neg(self)

    def __str__(self):
        return to_string(self)


@dataclass(frozen=True, slots=True)
class Constant(Expression):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        if not math.isfinite(self.value):
            raise ValueError("constants must be finite")


@dataclass(frozen=True, slots=True)
class Variable(Expression):
    name: str

    def __post_init__(self):
        if not self.name.isidentifier():
            raise ValueError(f"invalid variable name {self.name!r}")
        if self.name in RESERVED_NAMES:
            raise ValueError(f"{self.name!r} is reserved and cannot be a variable")


@dataclass(frozen=True, slots=True)
class Add(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, slots=True)
class Sub(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, slots=True)
class Mul(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, slots=True)
class Div(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, slots=True)
class Neg(Expression):
    child: Expression


@dataclass(frozen=True, slots=True)
class Pow(Expression):
    base: Expression
    exponent: Expression


@dataclass(frozen=True, slots=True)
class Call(Expression):
    func: str
    arg: Expression

    def __post_init__(self):
        if self.func not in FUNCTIONS:
            raise ValueError(f"unknown function {self.func!r}")


def as_expr(value) -> Expression:
    """Coerce a number, string or Expression into an Expression."""
    if isinstance(value, Expression):
        return value
    if isinstance(value, str):
        return parse_expr(value)
    if isinstance(value, (int, float)):
        return Constant(float(value))
    raise TypeError(f"cannot interpret {value!r} as an expression")


def _children(node: Expression) -> tuple[Expression, ...]:
    if isinstance(node, (Add, Sub, Mul, Div)):
        return (node.left, node.right)
    if isinstance(node, Neg):
        return (node.child,)
    if isinstance(node, Pow):
        return (node.base, node.exponent)
    if isinstance(node, Call):
        return (node.arg,)
    return ()


def free_variables(expression: Expression) -> frozenset[str]:
    """Names of all variables occurring in the expression."""
    names: set[str] = set()
    stack = [expression]
    while stack:
        node = stack.pop()
        if isinstance(node, Variable):
            names.add(node.name)
        else:
            stack.extend(_children(node))
    return frozenset(names)


# ---------------------------------------------------------------------------
# evaluation


def evaluate(expression: Expression, bindings: Bindings) -> float:
    """Evaluate to an IEEE double at the given variable bindings.

    Raises UnboundVariableError for missing variables and
    EvaluationError (naming the offending subexpression) whenever an
    intermediate value is non-finite.
    """
    return _eval_node(expression, bindings)


def _eval_node(node: Expression, bindings: Bindings) -> float:
    if isinstance(node, Constant):
        return node.value
    if isinstance(node, Variable):
        try:
            value = float(bindings[node.name])
        except KeyError:
            raise UnboundVariableError(node.name) from None
        if not math.isfinite(value):
            raise EvaluationError(f"binding for {node.name!r} is not finite")
        return value
    try:
        if isinstance(node, Add):
            value = _eval_node(node.left, bindings) + _eval_node(node.right, bindings)
        elif isinstance(node, Sub):
            value = _eval_node(node.left, bindings) - _eval_node(node.right, bindings)
        elif isinstance(node, Mul):
            value = _eval_node(node.left, bindings) * _eval_node(node.right, bindings)
        elif isinstance(node, Div):
            value = _eval_node(node.left, bindings) / _eval_node(node.right, bindings)
        elif isinstance(node, Neg):
            value = -_eval_node(node.child, bindings)
        elif isinstance(node, Pow):
            value = math.pow(_eval_node(node.base, bindings),
                             _eval_node(node.exponent, bindings))
        elif isinstance(node, Call):
            value = FUNCTIONS[node.func](_eval_node(node.arg, bindings))
        else:  # pragma: no cover - unreachable for well-formed trees
            raise TypeError(f"not an expression node: {node!r}")
    except (ZeroDivisionError, ValueError, OverflowError) as exc:
        raise EvaluationError(
            f"non-finite value in {to_string(node)!r}: {exc}"
        ) from None
    if not math.isfinite(value):
        raise EvaluationError(f"non-finite value in {to_string(node)!r}")
    return value


# ---------------------------------------------------------------------------
# differentiation

_ZERO = Constant(0.0)
_ONE = Constant(1.0)
_TWO = Constant(2.0)


def diff(expression: Expression, var: str) -> Expression:
    """Symbolic partial derivative with respect to ``var``.

    Uses the sum, product, quotient and chain rules; the result is not
    simplified (pass it through :func:`simplify` for compact trees).
    """
    e = expression
    if isinstance(e, Constant):
        return _ZERO
    if isinstance(e, Variable):
        return _ONE if e.name == var else _ZERO
    if isinstance(e, Add):
        return Add(diff(e.left, var), diff(e.right, var))
    if isinstance(e, Sub):
        return Sub(diff(e.left, var), diff(e.right, var))
    if isinstance(e, Neg):
        return Neg(diff(e.child, var))
    if isinstance(e, Mul):
        return Add(Mul(diff(e.left, var), e.right), Mul(e.left, diff(e.right, var)))
    if isinstance(e, Div):
        num = Sub(Mul(diff(e.left, var), e.right), Mul(e.left, diff(e.right, var)))
        return Div(num, Pow(e.right, _TWO))
    if isinstance(e, Pow):
        if isinstance(e.exponent, Constant):
            c = e.exponent.value
            return Mul(Mul(Constant(c), Pow(e.base, Constant(c - 1.0))),
                       diff(e.base, var))
        # general b^e via  b^e * (e' ln b + e b'/b)
        return Mul(e, Add(Mul(diff(e.exponent, var), Call("ln", e.base)),
                          Div(Mul(e.exponent, diff(e.base, var)), e.base)))
    if isinstance(e, Call):
        dg = diff(e.arg, var)
        g = e.arg
        if e.func == "sqrt":
            return Div(dg, Mul(_TWO, Call("sqrt", g)))
        if e.func == "sin":
            return Mul(Call("cos", g), dg)
        if e.func == "cos":
            return Neg(Mul(Call("sin", g), dg))
        if e.func == "tan":
            return Div(dg, Pow(Call("cos", g), _TWO))
        if e.func == "exp":
            return Mul(Call("exp", g), dg)
        if e.func == "ln":
            return Div(dg, g)
    raise TypeError(f"not an expression node: {e!r}")  # pragma: no cover


# ---------------------------------------------------------------------------
# substitution and simplification


def substitute(expression: Expression, mapping: Mapping[str, Expression]) -> Expression:
    """Simultaneously replace variables by expressions.

    Replacement subtrees are inserted verbatim and not re-substituted.
    """
    resolved = {name: as_expr(value) for name, value in mapping.items()}

    def walk(node: Expression) -> Expression:
        if isinstance(node, Variable):
            return resolved.get(node.name, node)
        if isinstance(node, Constant):
            return node
        kids = _children(node)
        new_kids = tuple(walk(k) for k in kids)
        if all(a is b for a, b in zip(kids, new_kids)):
            return node
        return _rebuild(node, new_kids)

    return walk(expression)


def _rebuild(node: Expression, kids: tuple[Expression, ...]) -> Expression:
    if isinstance(node, Add):
        return Add(*kids)
    if isinstance(node, Sub):
        return Sub(*kids)
    if isinstance(node, Mul):
        return Mul(*kids)
    if isinstance(node, Div):
        return Div(*kids)
    if isinstance(node, Neg):
        return Neg(*kids)
    if isinstance(node, Pow):
        return Pow(*kids)
    if isinstance(node, Call):
        return Call(node.func, kids[0])
    raise TypeError(f"not an expression node: {node!r}")  # pragma: no cover


def _is_const(node: Expression, value: float) -> bool:
    return isinstance(node, Constant) and node.value == value


def _rewrite_once(node: Expression) -> Expression:
    """One local rewrite; children are assumed already simplified."""
    kids = _children(node)
    if kids and all(isinstance(k, Constant) for k in kids):
        try:
            return Constant(_eval_node(node, {}))
        except EvaluationError:
            return node  # non-finite fold (e.g. 1/0): leave for evaluation to report
    if isinstance(node, Add):
        if _is_const(node.left, 0.0):
            return node.right
        if _is_const(node.right, 0.0):
            return node.left
    elif isinstance(node, Sub):
        if _is_const(node.right, 0.0):
            return node.left
        if _is_const(node.left, 0.0):
            return Neg(node.right)
        if node.left == node.right:
            return _ZERO
    elif isinstance(node, Mul):
        if _is_const(node.left, 0.0) or _is_const(node.right, 0.0):
            return _ZERO
        if _is_const(node.left, 1.0):
            return node.right
        if _is_const(node.right, 1.0):
            return node.left
    elif isinstance(node, Div):
        if _is_const(node.right, 1.0):
            return node.left
    elif isinstance(node, Pow):
        if _is_const(node.exponent, 1.0):
            return node.base
        if _is_const(node.exponent, 0.0):
            return _ONE
    elif isinstance(node, Neg):
        if isinstance(node.child, Neg):
            return node.child.child
        if isinstance(node.child, Constant):
            return Constant(-node.child.value)
    return node


def simplify(expression: Expression) -> Expression:
    """Shallow, value-preserving simplification.

    Folds constant subtrees and eliminates +0, *0, *1, ^1, ^0, x - x and
    double negation.  Idempotent; does not attempt general algebraic
    rewriting (zero-equivalence is handled numerically by
    :func:`is_numerically_zero`).
    """
    node = expression
    if isinstance(node, (Constant, Variable)):
        return node
    kids = _children(node)
    new_kids = tuple(simplify(k) for k in kids)
    if not all(a is b for a, b in zip(kids, new_kids)):
        node = _rebuild(node, new_kids)
    while True:
        rewritten = _rewrite_once(node)
        if rewritten is node:
            return node
        node = rewritten
        if isinstance(node, (Constant, Variable)):
            return node


# ---------------------------------------------------------------------------
# printing

_LEVEL_ADD, _LEVEL_MUL, _LEVEL_UNARY, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _format_number(value: float) -> str:
    if value == int(value) and abs(value) <= 1e16:
        return str(int(value))
    return repr(value)


def _node_level(node: Expression) -> int:
    if isinstance(node, (Add, Sub)):
        return _LEVEL_ADD
    if isinstance(node, (Mul, Div)):
        return _LEVEL_MUL
    if isinstance(node, Neg):
        return _LEVEL_UNARY
    if isinstance(node, Constant) and node.value < 0:
        return _LEVEL_UNARY
    if isinstance(node, Pow):
        return _LEVEL_POW
    return _LEVEL_ATOM


def _fmt(node: Expression, min_level: int) -> str:
    if isinstance(node, Constant):
        text = _format_number(node.value)
    elif isinstance(node, Variable):
        text = node.name
    elif isinstance(node, Add):
        text = f"{_fmt(node.left, _LEVEL_ADD)} + {_fmt(node.right, _LEVEL_MUL)}"
    elif isinstance(node, Sub):
        text = f"{_fmt(node.left, _LEVEL_ADD)} - {_fmt(node.right, _LEVEL_MUL)}"
    elif isinstance(node, Mul):
        text = f"{_fmt(node.left, _LEVEL_MUL)}*{_fmt(node.right, _LEVEL_UNARY)}"
    elif isinstance(node, Div):
        text = f"{_fmt(node.left, _LEVEL_MUL)}/{_fmt(node.right, _LEVEL_UNARY)}"
    elif isinstance(node, Neg):
        text = f"-{_fmt(node.child, _LEVEL_UNARY)}"
    elif isinstance(node, Pow):
        text = f"{_fmt(node.base, _LEVEL_ATOM)}^{_fmt(node.exponent, _LEVEL_UNARY)}"
    elif isinstance(node, Call):
        return f"{node.func}({_fmt(node.arg, _LEVEL_ADD)})"
    else:  # pragma: no cover
        raise TypeError(f"not an expression node: {node!r}")
    if _node_level(node) < min_level:
        return f"({text})"
    return text


def to_string(expression: Expression) -> str:
    """Render to text that reparses to an equivalent tree."""
    return _fmt(expression, 0)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"(?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
)


class _Parser:
    def __init__(self, text: str):
        if not text.isascii():
            bad = next(i for i, ch in enumerate(text) if not ch.isascii())
            raise ParseError("non-ASCII character", len(text[:bad].encode()))
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        n = len(text)
        while pos < n:
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", pos,
                                 ("number", "identifier", "operator"))
            kind = m.lastgroup or ""
            self.tokens.append((kind, m.group(), pos))
            pos = m.end()
        self.tokens.append(("end", "", n))
        self.index = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.index]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect_op(self, op: str):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"got {text or 'end of input'!r}", pos, (repr(op),))
        self.advance()

    def parse(self) -> Expression:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {text!r}", pos,
                             ("'+'", "'-'", "'*'", "'/'", "'^'", "end of input"))
        return node

    def expr(self) -> Expression:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                right = self.term()
                node = Add(node, right) if text == "+" else Sub(node, right)
            else:
                return node

    def term(self) -> Expression:
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                right = self.unary()
                node = Mul(node, right) if text == "*" else Div(node, right)
            else:
                return node

    def unary(self) -> Expression:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            return Pow(base, self.unary())
        return base

    def atom(self) -> Expression:
        kind, text, pos = self.advance()
        if kind == "num":
            return Constant(float(text))
        if kind == "ident":
            nxt_kind, nxt_text, _ = self.peek()
            if nxt_kind == "op" and nxt_text == "(":
                if text not in FUNCTIONS:
                    raise ParseError(f"unknown function {text!r}", pos,
                                     tuple(sorted(FUNCTIONS)))
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            if text in NAMED_CONSTANTS:
                return Constant(NAMED_CONSTANTS[text])
            if text in FUNCTIONS:
                raise ParseError(f"function {text!r} requires an argument list", pos,
                                 ("'('",))
            return Variable(text)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"got {text or 'end of input'!r}", pos,
                         ("number", "identifier", "'('", "'-'"))


def parse_expr(text: str) -> Expression:
    """Parse expression text into its unique AST.

    '^' binds tightest and is right-associative, then unary minus, then
    '*' and '/', then '+' and '-' (left-associative).
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# numeric zero testing


@dataclass(frozen=True)
class ZeroTestConfig:
    """Settings for the quasi-random numeric zero test.

    ``seed`` offsets the start of the Halton sequence; when None it is
    taken from the FORMCALC_SEED environment variable (default 0).
    """

    samples: int = 128
    tol: float = 1e-9
    seed: int | None = None

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class ZeroTestResult:
    is_zero: bool
    max_abs: float
    threshold: float
    scale: float
    worst_point: tuple[float, float, float]


def _resolve_seed(cfg: ZeroTestConfig) -> int:
    if cfg.seed is not None:
        return cfg.seed
    return int(os.environ.get("FORMCALC_SEED", "0"))


def zero_residual(expression: Expression, box, cfg: ZeroTestConfig | None = None) -> ZeroTestResult:
    """Sample |expression| over the box and compare against a scaled tolerance.

    The threshold is tol * (1 + scale) where scale is the largest
    absolute value attained by any subterm at the samples; this keeps
    cancellation noise in genuinely-zero differences of large terms from
    being misread as a nonzero value.
    """
    import numpy as np
    from scipy.stats import qmc

    from . import kernels

    cfg = cfg or ZeroTestConfig()
    sampler = qmc.Halton(d=3, scramble=False)
    sampler.fast_forward(1 + _resolve_seed(cfg))
    unit = sampler.random(cfg.samples)
    (xlo, xhi), (ylo, yhi), (zlo, zhi) = box.bounds
    lows = np.array([xlo, ylo, zlo])
    spans = np.array([xhi - xlo, yhi - ylo, zhi - zlo])
    points = lows + unit * spans

    program = kernels.compile_program([expression], ("x", "y", "z"))
    values = kernels.eval_program(kernels.with_all_outputs(program), points)
    if not np.isfinite(values).all():
        slot, col = np.argwhere(~np.isfinite(values))[0]
        x, y, z = points[col]
        # re-run the tree evaluator for a message naming the subexpression
        evaluate(expression, {"x": x, "y": y, "z": z})
        raise EvaluationError(
            f"non-finite evaluation at sample point ({x}, {y}, {z})")
    own = np.abs(values[program.outputs[0]])
    worst = int(np.argmax(own))
    max_abs = float(own[worst])
    # subterm slots: variables occurring in the expression plus every
    # computed slot (each is a distinct subexpression of e)
    names = free_variables(expression)
    subterm_slots = [i for i, v in enumerate(program.variables) if v in names]
    subterm_slots += list(range(len(program.variables), program.n_slots))
    scale = float(np.abs(values[subterm_slots]).max()) if subterm_slots else 0.0
    threshold = cfg.tol * (1.0 + scale)
    return ZeroTestResult(
        is_zero=max_abs <= threshold,
        max_abs=max_abs,
        threshold=threshold,
        scale=scale,
        worst_point=tuple(float(c) for c in points[worst]),
    )


def is_numerically_zero(expression: Expression, box, cfg: ZeroTestConfig | None = None) -> bool:
    """True iff the expression vanishes numerically over the box."""
    return zero_residual(expression, box, cfg).is_zero
