"""
Analytic expressions in one complex variable on the unit disk.

Texts are parsed with a small recursive-descent parser into sympy trees.
Derivatives are exact (``sympy.diff``) and evaluation goes through
``sympy.lambdify`` onto numpy, so a grid of points is one vectorised call.
"""

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, List, NamedTuple, Optional, Union

import numpy as np
import sympy as sp
from loguru import logger
from sympy.printing.precedence import PRECEDENCE
from sympy.printing.str import StrPrinter

from .constants import GridSpec, SELF_MAP_TOL
from .errors import (
    ExpressionSyntaxError,
    InvalidArgumentError,
    NonIntegerExponentError,
    SelfMapViolation,
    SingularityError,
    UnknownIdentifierError,
)

Z = sp.Symbol("z")

FUNCTIONS = {
    "exp": sp.exp,
    "log": sp.log,
    "sqrt": sp.sqrt,
    "sin": sp.sin,
    "cos": sp.cos,
}

CONSTANTS = {
    "i": sp.I,
    "pi": sp.pi,
    "e": sp.E,
}


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"(?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()−])"
    r"|(?P<space>[ \t\r]+)"
    r"|(?P<newline>\n)"
)


def tokenize(text: str) -> List[Token]:
    """
    Split an expression text into tokens.

    Args:
        text: Expression source

    Returns:
        Tokens, terminated by an ``end`` token
    """
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = match.lastgroup
        column = pos - line_start + 1
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind != "space":
            value = match.group()
            if kind == "op" and value == "−":
                value = "-"
            tokens.append(Token(kind, value, line, column))
        pos = match.end()
    tokens.append(Token("end", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    """
    Recursive-descent parser for the expression grammar.

        expr   := term (('+'|'-') term)*
        term   := factor (('*'|'/') factor)*
        factor := ('+'|'-') factor | power
        power  := base ('^' exponent)?
        base   := number ['i'] | 'i' | 'pi' | 'e' | 'z' | func '(' expr ')' | '(' expr ')'
    """

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.current
        if token.text != text:
            found = token.text or "end of input"
            raise ExpressionSyntaxError(f"expected {text!r}, found {found!r}", token.line, token.column)
        return self.advance()

    def parse(self) -> sp.Expr:
        expr = self.expr()
        token = self.current
        if token.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {token.text!r}", token.line, token.column)
        return expr

    def expr(self) -> sp.Expr:
        result = self.term()
        while self.current.text in ("+", "-"):
            op = self.advance().text
            right = self.term()
            result = result + right if op == "+" else result - right
        return result

    def term(self) -> sp.Expr:
        result = self.factor()
        while self.current.text in ("*", "/"):
            op = self.advance().text
            right = self.factor()
            result = result * right if op == "*" else result / right
        return result

    def factor(self) -> sp.Expr:
        if self.current.text in ("+", "-"):
            op = self.advance().text
            operand = self.factor()
            return -operand if op == "-" else operand
        return self.power()

    def power(self) -> sp.Expr:
        base = self.base()
        if self.current.text == "^":
            self.advance()
            return base ** self.exponent()
        return base

    def exponent(self) -> int:
        wrapped = self.current.text == "("
        if wrapped:
            self.advance()
        sign = 1
        if self.current.text in ("+", "-"):
            sign = -1 if self.advance().text == "-" else 1
        token = self.current
        if token.kind != "number":
            found = token.text or "end of input"
            raise ExpressionSyntaxError(f"expected integer exponent, found {found!r}", token.line, token.column)
        if not token.text.isdigit():
            raise NonIntegerExponentError(f"exponent {token.text!r} is not an integer", token.line, token.column)
        self.advance()
        if wrapped:
            self.expect(")")
        return sign * int(token.text)

    def base(self) -> sp.Expr:
        token = self.current
        if token.kind == "number":
            self.advance()
            value = sp.Integer(token.text) if token.text.isdigit() else sp.Float(token.text)
            # complex literal suffix, as in 0.5i
            nxt = self.current
            if nxt.kind == "name" and nxt.text == "i" and nxt.line == token.line \
                    and nxt.column == token.column + len(token.text):
                self.advance()
                return value * sp.I
            return value
        if token.kind == "name":
            self.advance()
            if token.text == "z":
                return Z
            if token.text in CONSTANTS:
                return CONSTANTS[token.text]
            if token.text in FUNCTIONS:
                self.expect("(")
                argument = self.expr()
                self.expect(")")
                return FUNCTIONS[token.text](argument)
            raise UnknownIdentifierError(f"unknown identifier {token.text!r}", token.line, token.column)
        if token.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        found = token.text or "end of input"
        raise ExpressionSyntaxError(f"unexpected {found!r}", token.line, token.column)


class CanonicalPrinter(StrPrinter):
    """Prints sympy trees back in the expression grammar."""

    def _print_ImaginaryUnit(self, expr):
        return "i"

    def _print_Exp1(self, expr):
        return "e"

    def _print_Pi(self, expr):
        return "pi"

    def _print_Pow(self, expr, rational=False):
        base, exp = expr.as_base_exp()
        if exp is sp.S.Half:
            return f"sqrt({self._print(base)})"
        if exp == -sp.S.Half:
            return f"1/sqrt({self._print(base)})"
        base_text = self.parenthesize(base, PRECEDENCE["Pow"], strict=False)
        if exp.is_Integer:
            if exp == -1:
                return f"1/{base_text}"
            if exp < 0:
                return f"{base_text}^({int(exp)})"
            return f"{base_text}^{int(exp)}"
        if exp.is_Rational and exp.q == 2:
            return f"sqrt({self._print(base)})^({int(exp.p)})"
        raise InvalidArgumentError(f"exponent {exp} has no form in the expression grammar")


_PRINTER = CanonicalPrinter()


@dataclass(frozen=True)
class AnalyticExpr:
    """
    Immutable analytic expression in the variable ``z``.

    Attributes:
        sym: sympy tree
    """
    sym: sp.Expr

    @property
    def text(self) -> str:
        """Canonical text; parses back to an equal function."""
        return _PRINTER.doprint(self.sym)

    def __str__(self) -> str:
        return self.text

    @cached_property
    def _compiled(self) -> Callable:
        return sp.lambdify(Z, self.sym, modules="numpy")

    @property
    def is_zero(self) -> bool:
        return self.sym == 0

    @property
    def is_constant(self) -> bool:
        return Z not in self.sym.free_symbols

    def evaluate(self, z: Union[complex, np.ndarray], check: bool = True) -> np.ndarray:
        """
        Evaluate at one point or an array of points.

        Args:
            z: Point(s) of the disk
            check: Raise on non-finite values

        Returns:
            complex128 array shaped like ``z``
        """
        points = np.asarray(z, dtype=np.complex128)
        with np.errstate(all="ignore"):
            values = self._compiled(points)
        values = np.broadcast_to(np.asarray(values, dtype=np.complex128), points.shape)
        if check:
            bad = ~np.isfinite(values)
            if bad.any():
                where = np.flatnonzero(bad.ravel())[0]
                raise SingularityError(f"{self.text} is not finite", points.ravel()[where], values.ravel()[where])
        return values

    def __call__(self, z: Union[complex, np.ndarray]) -> np.ndarray:
        return self.evaluate(z)

    def modulus(self, z: np.ndarray) -> np.ndarray:
        return np.abs(self.evaluate(z))

    def __add__(self, other: "AnalyticExpr") -> "AnalyticExpr":
        return AnalyticExpr(self.sym + _sym(other))

    def __sub__(self, other: "AnalyticExpr") -> "AnalyticExpr":
        return AnalyticExpr(self.sym - _sym(other))

    def __mul__(self, other: "AnalyticExpr") -> "AnalyticExpr":
        return product(self, other)

    def __rmul__(self, other) -> "AnalyticExpr":
        return product(constant(other), self)

    def __truediv__(self, other: "AnalyticExpr") -> "AnalyticExpr":
        return AnalyticExpr(self.sym / _sym(other))

    def __neg__(self) -> "AnalyticExpr":
        return AnalyticExpr(-self.sym)


def _sym(value) -> sp.Expr:
    if isinstance(value, AnalyticExpr):
        return value.sym
    return sp.sympify(value)


def parse(text: str) -> AnalyticExpr:
    """
    Parse an expression text.

    Args:
        text: Expression in the grammar of ``_Parser``

    Returns:
        The parsed expression
    """
    expr = AnalyticExpr(sp.sympify(_Parser(text).parse()))
    logger.debug(f"Parsed {text!r} as {expr.text}")
    return expr


def constant(value: Union[int, float, complex]) -> AnalyticExpr:
    return AnalyticExpr(sp.sympify(value))


def variable() -> AnalyticExpr:
    return AnalyticExpr(Z)


def monomial(n: int) -> AnalyticExpr:
    """g_n(z) = z^n, with g_0 = 1."""
    if n < 0:
        raise InvalidArgumentError(f"monomial degree must be >= 0, got {n}")
    return AnalyticExpr(Z ** n)


def product(*factors: AnalyticExpr) -> AnalyticExpr:
    """Product that keeps powers of composite bases unexpanded."""
    syms = [_sym(f) for f in factors]
    if any(s == 0 for s in syms):
        return constant(0)
    syms = [s for s in syms if s != 1]
    if not syms:
        return constant(1)
    if len(syms) == 1:
        return AnalyticExpr(syms[0])
    return AnalyticExpr(sp.Mul(*syms, evaluate=False))


def derivative(f: AnalyticExpr) -> AnalyticExpr:
    """Exact derivative in z."""
    return AnalyticExpr(sp.diff(f.sym, Z))


def power(f: AnalyticExpr, n: int) -> AnalyticExpr:
    """
    The n-th power of f, evaluated as value**n.

    Composite bases stay unexpanded so that phi**n of a Mobius map never
    splits into numerator and denominator powers that overflow separately.
    """
    if n < 0:
        raise InvalidArgumentError(f"power must be >= 0, got {n}")
    if n == 0:
        return constant(1)
    if n == 1:
        return f
    if f.sym.is_Atom:
        return AnalyticExpr(f.sym ** n)
    return AnalyticExpr(sp.Pow(f.sym, n, evaluate=False))


def dilate(f: AnalyticExpr, r: float) -> AnalyticExpr:
    """f_r(z) = f(r z) for 0 < r < 1."""
    if not 0.0 < r < 1.0:
        raise InvalidArgumentError(f"dilation radius must lie in (0, 1), got {r}")
    return AnalyticExpr(f.sym.subs(Z, sp.Float(r) * Z))


def compose(f: AnalyticExpr, g: AnalyticExpr) -> AnalyticExpr:
    """(f o g)(z) = f(g(z))."""
    return AnalyticExpr(f.sym.subs(Z, g.sym))


def interior_poles(f: AnalyticExpr) -> List[complex]:
    """
    Zeros inside the disk of polynomial denominators and log arguments.

    Only polynomial pieces are inspected; anything else is left to the
    finiteness check on the evaluation grid.
    """
    poles = []
    for node in sp.preorder_traversal(f.sym):
        candidates = []
        if isinstance(node, sp.Pow) and node.exp.is_negative:
            candidates.append(node.base)
        elif isinstance(node, sp.log):
            candidates.append(node.args[0])
        for piece in candidates:
            if Z not in piece.free_symbols or not piece.is_polynomial(Z):
                continue
            coeffs = [complex(c) for c in sp.Poly(piece, Z).all_coeffs()]
            if len(coeffs) < 2:
                continue
            roots = np.roots(coeffs)
            poles.extend(complex(root) for root in roots if abs(root) < 1.0)
    return poles


@dataclass(frozen=True)
class SelfMapCheck:
    """Outcome of the self-map estimate for phi."""
    phi_sup: float
    witness: complex


@dataclass(frozen=True)
class SymbolPair:
    """
    Validated symbols (u, phi) of a weighted composition operator.

    Attributes:
        u: Multiplier symbol
        phi: Self-map of the disk
        phi_sup: Estimated sup of |phi| over the disk
        witness: Point where the estimate was attained
    """
    u: AnalyticExpr
    phi: AnalyticExpr
    phi_sup: float
    witness: complex

    @property
    def touches_boundary(self) -> bool:
        """Whether |phi| gets arbitrarily close to 1 (up to the self-map tolerance)."""
        return self.phi_sup >= 1.0 - SELF_MAP_TOL


def validate_self_map(phi: AnalyticExpr, grid: Optional[GridSpec] = None) -> SelfMapCheck:
    """
    Estimate sup |phi| over the disk and accept phi when it stays in the closed disk.

    Args:
        phi: Candidate self-map
        grid: Polar grid for the sup-solver

    Returns:
        The estimate and the point attaining it

    Raises:
        SelfMapViolation: sup |phi| > 1 + tolerance, or phi is a unimodular constant
        SingularityError: phi has a pole inside the disk
    """
    from .norms import sup_modulus
    from .weights import weight_unit

    grid = grid or GridSpec()
    poles = interior_poles(phi)
    if poles:
        raise SingularityError(f"{phi.text} has a pole inside the disk", poles[0])

    result = sup_modulus(weight_unit(), phi.modulus, grid)
    if result.value > 1.0 + SELF_MAP_TOL:
        raise SelfMapViolation(result.argmax, result.value)
    if phi.is_constant and result.value >= 1.0 - SELF_MAP_TOL:
        raise SelfMapViolation(result.argmax, result.value, "constant phi lies on the unit circle")

    logger.debug(f"phi = {phi.text}: sup |phi| = {result.value:.12g}")
    return SelfMapCheck(phi_sup=min(result.value, 1.0), witness=result.argmax)


def make_pair(u: Union[str, AnalyticExpr], phi: Union[str, AnalyticExpr],
              grid: Optional[GridSpec] = None) -> SymbolPair:
    """
    Parse and validate a symbol pair.

    Args:
        u: Multiplier symbol (text or expression)
        phi: Self-map (text or expression)
        grid: Polar grid for validation

    Returns:
        The validated pair
    """
    from .norms import polar_grid

    grid = grid or GridSpec()
    u = parse(u) if isinstance(u, str) else u
    phi = parse(phi) if isinstance(phi, str) else phi

    poles = interior_poles(u)
    if poles:
        raise SingularityError(f"{u.text} has a pole inside the disk", poles[0])
    u.evaluate(polar_grid(grid).points)

    check = validate_self_map(phi, grid)
    logger.info(f"Validated pair u = {u.text}, phi = {phi.text} (sup |phi| = {check.phi_sup:.9g})")
    return SymbolPair(u=u, phi=phi, phi_sup=check.phi_sup, witness=check.witness)
