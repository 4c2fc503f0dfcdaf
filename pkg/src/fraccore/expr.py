"""A tiny expression language in one variable ``x``.

Grammar, loosest binding first::

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := "-" unary | power
    power := atom ("^" unary)?
    atom  := NUMBER | "x" | NAME "(" expr ("," expr)* ")" | "(" expr ")"

so ``^`` is right-associative and binds tighter than unary minus
(``-x^2 == -(x^2)``). Functions: sin, cos, exp, ln, sqrt, abs, pow.

Trees are compiled to postfix code, so evaluation and printing are
iterative and long sums do not hit the recursion limit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from fraccore.errors import DomainError, FracError

__all__ = ["Expr", "ExprSyntaxError", "eval_expression", "parse_expression"]

MAX_DEPTH = 200

FUNCTIONS = {"sin": 1, "cos": 1, "exp": 1, "ln": 1, "sqrt": 1, "abs": 1, "pow": 2}
_BINARY = {"+": "add", "-": "sub", "*": "mul", "/": "div", "^": "pow"}

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),])"
)


class ExprSyntaxError(FracError, ValueError):
    """Malformed expression; ``offset`` is a 0-based byte offset into the text."""

    def __init__(self, text: str, offset: int, expected: str) -> None:
        self.text = text
        self.offset = offset
        self.expected = expected
        found = "end of input" if offset >= len(text) else repr(text[offset])
        super().__init__(f"syntax error at offset {offset}: expected {expected}, found {found}")


@dataclass(frozen=True)
class Expr:
    """Parsed expression.

    ``code`` is postfix: ``("num", value)``, ``("var",)``, ``("neg",)``,
    binary ``("add",)`` etc., and ``("call", name, nargs)``. Every entry
    also records the source span of the subexpression it closes.
    """

    text: str
    code: tuple[tuple, ...]
    spans: tuple[tuple[int, int], ...]

    def sexpr(self) -> str:
        """Prefix rendering, e.g. ``(add (sin x) (pow x 2))``."""
        stack: list[str] = []
        for ins in self.code:
            op = ins[0]
            if op == "num":
                stack.append(_format_number(ins[1]))
            elif op == "var":
                stack.append("x")
            elif op == "neg":
                stack.append(f"(neg {stack.pop()})")
            elif op == "call":
                name, nargs = ins[1], ins[2]
                args = stack[-nargs:]
                del stack[-nargs:]
                stack.append(f"({name} {' '.join(args)})")
            else:
                rhs = stack.pop()
                lhs = stack.pop()
                stack.append(f"({op} {lhs} {rhs})")
        return stack[0]

    def __call__(self, x):
        return eval_expression(self, x)


def _format_number(v: float) -> str:
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


# {{{ parser


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise ExprSyntaxError(text, pos, "a number, 'x', a function or an operator")
            if m.lastgroup != "ws":
                self.tokens.append((m.lastgroup, m.group(), pos))
            pos = m.end()
        self.i = 0
        self.code: list[tuple] = []
        self.spans: list[tuple[int, int]] = []
        self.depth = 0

    # token helpers

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def offset(self) -> int:
        tok = self.peek()
        return tok[2] if tok else len(self.text)

    def end_of_previous(self) -> int:
        kind, val, pos = self.tokens[self.i - 1]
        return pos + len(val)

    def accept(self, value: str) -> bool:
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> None:
        if not self.accept(value):
            raise ExprSyntaxError(self.text, self.offset(), repr(value).replace("'", '"'))

    def emit(self, ins: tuple, start: int) -> None:
        self.code.append(ins)
        self.spans.append((start, self.end_of_previous()))

    def enter(self) -> None:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ExprSyntaxError(self.text, self.offset(), f"at most {MAX_DEPTH} levels of nesting")

    # grammar

    def parse(self) -> Expr:
        self.expr()
        if self.peek() is not None:
            raise ExprSyntaxError(self.text, self.offset(), "an operator or end of input")
        return Expr(self.text, tuple(self.code), tuple(self.spans))

    def expr(self) -> None:
        start = self.offset()
        self.term()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] not in "+-":
                return
            self.i += 1
            self.term()
            self.emit((_BINARY[tok[1]],), start)

    def term(self) -> None:
        start = self.offset()
        self.unary()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] not in "*/":
                return
            self.i += 1
            self.unary()
            self.emit((_BINARY[tok[1]],), start)

    def unary(self) -> None:
        start = self.offset()
        self.enter()
        if self.accept("-"):
            self.unary()
            self.emit(("neg",), start)
        else:
            self.power()
        self.depth -= 1

    def power(self) -> None:
        start = self.offset()
        self.atom()
        if self.accept("^"):
            self.unary()
            self.emit(("pow",), start)

    def atom(self) -> None:
        tok = self.peek()
        start = self.offset()
        if tok is None:
            raise ExprSyntaxError(self.text, start, "a number, 'x', a function or '('")
        kind, val, _ = tok
        if kind == "num":
            self.i += 1
            self.emit(("num", float(val)), start)
            return
        if kind == "name":
            self.i += 1
            if val == "x":
                self.emit(("var",), start)
                return
            if val not in FUNCTIONS:
                raise ExprSyntaxError(
                    self.text, start, "'x' or one of " + ", ".join(sorted(FUNCTIONS))
                )
            self.expect("(")
            self.enter()
            nargs = FUNCTIONS[val]
            for k in range(nargs):
                if k:
                    self.expect(",")
                self.expr()
            self.expect(")")
            self.depth -= 1
            self.emit(("call", val, nargs), start)
            return
        if self.accept("("):
            self.enter()
            self.expr()
            self.expect(")")
            self.depth -= 1
            return
        raise ExprSyntaxError(self.text, start, "a number, 'x', a function or '('")


def parse_expression(text: str) -> Expr:
    """Parse ``text``; raises :class:`ExprSyntaxError` with the offending offset."""
    return _Parser(text).parse()


# }}}


# {{{ evaluation


def _check(mask: np.ndarray, x: np.ndarray, text: str, reason: str) -> None:
    if np.any(mask):
        i = int(np.flatnonzero(mask)[0])
        raise DomainError(f"{text}: {reason} at x={float(x.flat[i])!r}")


def eval_expression(e: Expr, x):
    """Evaluate at a scalar or array ``x``; a scalar in gives a float out.

    :raises DomainError: naming the subexpression that left its domain
        (``ln``/``sqrt`` of invalid arguments, division by zero, overflow).
    """
    scalar = np.ndim(x) == 0
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    stack: list[np.ndarray] = []
    with np.errstate(all="ignore"):
        for ins, (s0, s1) in zip(e.code, e.spans):
            op = ins[0]
            sub = e.text[s0:s1]
            if op == "num":
                stack.append(np.full(xv.shape, ins[1]))
                continue
            if op == "var":
                stack.append(xv)
                continue
            if op == "neg":
                stack.append(-stack.pop())
                continue
            if op == "call":
                name = ins[1]
                if name == "pow":
                    b = stack.pop()
                    a = stack.pop()
                    r = _power(a, b, xv, sub)
                else:
                    a = stack.pop()
                    if name == "ln":
                        _check(a <= 0, xv, sub, "logarithm of a non-positive number")
                        r = np.log(a)
                    elif name == "sqrt":
                        _check(a < 0, xv, sub, "square root of a negative number")
                        r = np.sqrt(a)
                    else:
                        r = getattr(np, name)(a)
            else:
                b = stack.pop()
                a = stack.pop()
                if op == "add":
                    r = a + b
                elif op == "sub":
                    r = a - b
                elif op == "mul":
                    r = a * b
                elif op == "div":
                    _check(b == 0, xv, sub, "division by zero")
                    r = a / b
                else:
                    r = _power(a, b, xv, sub)
            _check(~np.isfinite(r), xv, sub, "result is not finite")
            stack.append(r)
    out = stack[0]
    return float(out[0]) if scalar else out


def _power(a: np.ndarray, b: np.ndarray, x: np.ndarray, text: str) -> np.ndarray:
    _check((a == 0) & (b < 0), x, text, "division by zero")
    _check((a < 0) & (b != np.round(b)), x, text, "negative base with a non-integer exponent")
    return np.power(a, b)


# }}}
