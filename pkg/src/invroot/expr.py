"""A small expression language for functions of one variable ``x``.

Grammar (EBNF)::

    expression = term { ("+" | "-") term } ;
    term       = unary { ("*" | "/") unary } ;
    unary      = "-" unary | power ;
    power      = atom [ "^" exponent ] ;
    exponent   = "-" exponent | power ;          (* must not contain x *)
    atom       = number | "x" | func "(" expression ")" | "(" expression ")" ;
    func       = "ln" | "exp" | "sqrt" ;
    number     = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
               | "." digits [ ... ] ;

``^`` binds tighter than unary minus (``-x^2`` is ``-(x^2)``) and is right
associative; ``+ - * /`` are left associative. Exponents are restricted to
constant subexpressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EvaluationDomainError, ExprSyntaxError, LexicalError, NotMonotoneError
from .model import FunctionModel
from .numeric import NOT_MONOTONE, Interval, check_monotone

FUNCTIONS = ("ln", "exp", "sqrt")
VARIABLE = "x"
OPERATORS = "+-*/^"

NUMBER = "number"
IDENTIFIER = "identifier"
OPERATOR = "operator"
PAREN = "paren"
END = "end"


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    position: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    i, n = 0, len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        start = i
        if c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            while i < n and source[i].isdigit():
                i += 1
            if i < n and source[i] == ".":
                i += 1
                while i < n and source[i].isdigit():
                    i += 1
            # exponent only when digits follow, so "2exp" is not swallowed
            if i < n and source[i] in "eE":
                j = i + 1
                if j < n and source[j] in "+-":
                    j += 1
                if j < n and source[j].isdigit():
                    while j < n and source[j].isdigit():
                        j += 1
                    i = j
            lexeme = source[start:i]
            if not math.isfinite(float(lexeme)):
                raise LexicalError(f"number {lexeme!r} overflows", start)
            tokens.append(Token(NUMBER, lexeme, start))
        elif c.isalpha() or c == "_":
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            tokens.append(Token(IDENTIFIER, source[start:i], start))
        elif c in OPERATORS:
            tokens.append(Token(OPERATOR, c, start))
            i += 1
        elif c in "()":
            tokens.append(Token(PAREN, c, start))
            i += 1
        else:
            raise LexicalError(f"invalid character {c!r}", start)
    tokens.append(Token(END, "", n))
    return tokens


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


class Expr:
    __slots__ = ()

    def __str__(self):
        return print_ast(self)


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    arg: Expr


def contains_variable(e: Expr) -> bool:
    if isinstance(e, Var):
        return True
    if isinstance(e, Const):
        return False
    if isinstance(e, Neg):
        return contains_variable(e.operand)
    if isinstance(e, BinOp):
        return contains_variable(e.left) or contains_variable(e.right)
    return contains_variable(e.arg)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        if not tokens or tokens[-1].kind != END:
            raise ExprSyntaxError("token stream must end with an end token")
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, kind, lexeme=None) -> bool:
        t = self.tok
        return t.kind == kind and (lexeme is None or t.lexeme == lexeme)

    def advance(self) -> Token:
        t = self.tok
        if t.kind != END:
            self.i += 1
        return t

    def fail(self, expected: str):
        t = self.tok
        got = "end of input" if t.kind == END else repr(t.lexeme)
        raise ExprSyntaxError(f"expected {expected}, got {got}", t.position)

    def expect(self, kind, lexeme, expected):
        if not self.at(kind, lexeme):
            self.fail(expected)
        return self.advance()

    def parse(self) -> Expr:
        e = self.expression()
        if not self.at(END):
            self.fail("an operator or end of input")
        return e

    def expression(self) -> Expr:
        e = self.term()
        while self.at(OPERATOR, "+") or self.at(OPERATOR, "-"):
            op = self.advance().lexeme
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.at(OPERATOR, "*") or self.at(OPERATOR, "/"):
            op = self.advance().lexeme
            e = BinOp(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.at(OPERATOR, "-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at(OPERATOR, "^"):
            caret = self.advance()
            exponent = self.exponent()
            if contains_variable(exponent):
                raise ExprSyntaxError("expected a constant exponent after '^' (x is not allowed there)", caret.position)
            return BinOp("^", base, exponent)
        return base

    def exponent(self) -> Expr:
        if self.at(OPERATOR, "-"):
            self.advance()
            return Neg(self.exponent())
        return self.power()

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == NUMBER:
            self.advance()
            return Const(float(t.lexeme))
        if t.kind == IDENTIFIER:
            if t.lexeme == VARIABLE:
                self.advance()
                return Var()
            if t.lexeme in FUNCTIONS:
                self.advance()
                self.expect(PAREN, "(", f"'(' after {t.lexeme}")
                arg = self.expression()
                self.expect(PAREN, ")", "')'")
                return Call(t.lexeme, arg)
            raise ExprSyntaxError(
                f"unknown identifier {t.lexeme!r}; expected x or one of {', '.join(FUNCTIONS)}", t.position
            )
        if t.kind == PAREN and t.lexeme == "(":
            self.advance()
            e = self.expression()
            self.expect(PAREN, ")", "')'")
            return e
        self.fail("a number, x, a function call or '('")


def parse(tokens: list[Token]) -> Expr:
    return _Parser(tokens).parse()


def parse_expression(source: str) -> Expr:
    return parse(tokenize(source))


# ---------------------------------------------------------------------------
# Printing and evaluation
# ---------------------------------------------------------------------------


def print_ast(e: Expr) -> str:
    """Fully parenthesized source that parses back to an equal-valued tree."""
    if isinstance(e, Const):
        text = repr(e.value)
        return f"({text})" if text.startswith("-") else text
    if isinstance(e, Var):
        return VARIABLE
    if isinstance(e, Neg):
        return f"(-{print_ast(e.operand)})"
    if isinstance(e, BinOp):
        return f"({print_ast(e.left)} {e.op} {print_ast(e.right)})"
    if isinstance(e, Call):
        return f"{e.fn}({print_ast(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def _domain_error(msg: str, e: Expr, x: float):
    return EvaluationDomainError(f"{msg} in {print_ast(e)} at x = {x!r}", where=x, subexpr=print_ast(e))


def eval_ast(e: Expr, x: float) -> float:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -eval_ast(e.operand, x)
    if isinstance(e, BinOp):
        a = eval_ast(e.left, x)
        b = eval_ast(e.right, x)
        op = e.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if b == 0.0:
                raise _domain_error("division by zero", e, x)
            return a / b
        if op == "^":
            try:
                return math.pow(a, b)
            except OverflowError:
                return math.copysign(math.inf, a) if float(b).is_integer() and b % 2 == 1 else math.inf
            except (ValueError, ZeroDivisionError):
                raise _domain_error(f"power {a!r} ^ {b!r} is undefined", e, x) from None
        raise TypeError(f"unknown operator {op!r}")
    if isinstance(e, Call):
        a = eval_ast(e.arg, x)
        if e.fn == "ln":
            if not a > 0:
                raise _domain_error(f"ln of non-positive value {a!r}", e, x)
            return math.log(a)
        if e.fn == "exp":
            try:
                return math.exp(a)
            except OverflowError:
                return math.inf
        if e.fn == "sqrt":
            if a < 0:
                raise _domain_error(f"sqrt of negative value {a!r}", e, x)
            return math.sqrt(a)
        raise TypeError(f"unknown function {e.fn!r}")
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# Symbolic differentiation
# ---------------------------------------------------------------------------

ZERO = Const(0.0)
ONE = Const(1.0)


def _is(e: Expr, value: float) -> bool:
    return isinstance(e, Const) and e.value == value


def _neg(a):
    if isinstance(a, Const):
        return Const(-a.value)
    return Neg(a)


def _add(a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if _is(a, 0.0):
        return b
    if _is(b, 0.0):
        return a
    return BinOp("+", a, b)


def _sub(a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if _is(b, 0.0):
        return a
    if _is(a, 0.0):
        return _neg(b)
    return BinOp("-", a, b)


def _mul(a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if _is(a, 0.0) or _is(b, 0.0):
        return ZERO
    if _is(a, 1.0):
        return b
    if _is(b, 1.0):
        return a
    return BinOp("*", a, b)


def _div(a, b):
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0.0:
        return Const(a.value / b.value)
    if _is(a, 0.0):
        return ZERO
    if _is(b, 1.0):
        return a
    return BinOp("/", a, b)


def _pow(a, c: float):
    if c == 0.0:
        return ONE
    if c == 1.0:
        return a
    if isinstance(a, Const):
        return Const(math.pow(a.value, c))
    return BinOp("^", a, Const(c))


def derive_ast(e: Expr) -> Expr:
    """Derivative with respect to ``x`` (sum, product, quotient, chain and
    constant-power rules), with constant folding only."""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Neg):
        return _neg(derive_ast(e.operand))
    if isinstance(e, BinOp):
        u, v = e.left, e.right
        if e.op == "+":
            return _add(derive_ast(u), derive_ast(v))
        if e.op == "-":
            return _sub(derive_ast(u), derive_ast(v))
        if e.op == "*":
            return _add(_mul(derive_ast(u), v), _mul(u, derive_ast(v)))
        if e.op == "/":
            return _div(_sub(_mul(derive_ast(u), v), _mul(u, derive_ast(v))), _mul(v, v))
        if e.op == "^":
            du = derive_ast(u)
            if _is(du, 0.0):
                return ZERO
            c = eval_ast(v, 0.0)
            return _mul(_mul(Const(c), _pow(u, c - 1.0)), du)
    if isinstance(e, Call):
        u = e.arg
        du = derive_ast(u)
        if e.fn == "ln":
            return _div(du, u)
        if e.fn == "exp":
            return _mul(e, du)
        if e.fn == "sqrt":
            return _div(du, _mul(Const(2.0), e))
    raise TypeError(f"cannot differentiate {e!r}")


# ---------------------------------------------------------------------------
# Bridge to the function model
# ---------------------------------------------------------------------------


def to_function_model(e: Expr, domain: Interval, name: str | None = None) -> FunctionModel:
    """Wrap a parsed expression as a :class:`FunctionModel`.

    The derivative comes from :func:`derive_ast`; the inverse, antiderivative
    and inverse antiderivative are synthesized numerically.
    """
    name = print_ast(e) if name is None else name

    def f(x):
        return eval_ast(e, x)

    verdict = check_monotone(f, domain)
    if verdict == NOT_MONOTONE:
        raise NotMonotoneError(
            f"{name} is not admissible on {domain}: the function must be one-to-one "
            f"(strictly monotone) and smooth there, so that it has an inverse whose "
            f"antiderivative can be formed"
        )
    d = derive_ast(e)
    return FunctionModel(func=f, domain=domain, derivative_fn=lambda x: eval_ast(d, x), name=name)
