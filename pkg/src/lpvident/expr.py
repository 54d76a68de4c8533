"""Rational functions: quotients of polynomials in canonical form.

Invariant: gcd(num, den) = 1 and den is primitive with a positive leading
coefficient under the canonical order, so structurally equal expressions
are mathematically equal and vice versa.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import (DenominatorVanishes, NotPolynomialInVars,
                     ZeroPolynomialError)
from .indets import Indeterminate
from .poly import (ONE, ZERO, Polynomial, collect, exact_div, poly_gcd,
                   poly_lcm, poly_text)


class Expression:
    """num / den with exact rational-function arithmetic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _poly(num)
        den = ONE if den is None else _poly(den)
        if den.is_zero():
            raise ZeroPolynomialError("zero denominator")
        if num.is_zero():
            den = ONE
        else:
            g = poly_gcd(num, den)
            if g != ONE:
                num = exact_div(num, g)
                den = exact_div(den, g)
            dc = den.content()
            if dc != 1:
                num = num.scale(1 / dc)
                den = den.scale(1 / dc)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("Expression is immutable")

    @staticmethod
    def var(v: Indeterminate) -> "Expression":
        return Expression(Polynomial.var(v))

    # --- predicates ---

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == ONE

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def indeterminates(self) -> set:
        return self.num.indeterminates() | self.den.indeterminates()

    # --- field arithmetic ---

    def __add__(self, other) -> "Expression":
        other = _expr(other)
        return Expression(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "Expression":
        return Expression(-self.num, self.den)

    def __sub__(self, other) -> "Expression":
        return self + (-_expr(other))

    def __rsub__(self, other) -> "Expression":
        return _expr(other) + (-self)

    def __mul__(self, other) -> "Expression":
        other = _expr(other)
        return Expression(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Expression":
        other = _expr(other)
        if other.is_zero():
            raise ZeroPolynomialError("division by zero expression")
        return Expression(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "Expression":
        return _expr(other) / self

    def inverse(self) -> "Expression":
        if self.is_zero():
            raise ZeroPolynomialError("inverse of zero")
        return Expression(self.den, self.num)

    def __pow__(self, n: int) -> "Expression":
        if n < 0:
            return self.inverse() ** (-n)
        return Expression(self.num ** n, self.den ** n)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Polynomial)):
            other = _expr(other)
        if not isinstance(other, Expression):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # --- calculus and shifts ---

    def differentiate(self) -> "Expression":
        if self.is_polynomial():
            return Expression(self.num.differentiate())
        return Expression(
            self.num.differentiate() * self.den - self.num * self.den.differentiate(),
            self.den * self.den)

    def shift(self) -> "Expression":
        return Expression(self.num.shift(), self.den.shift())

    def evaluate(self, bindings: dict) -> Fraction:
        d = self.den.evaluate(bindings)
        if d == 0:
            raise DenominatorVanishes("denominator vanishes at the given point")
        return self.num.evaluate(bindings) / d

    def substitute(self, bindings: dict) -> "Expression":
        """Simultaneous substitution of indeterminates by expressions.

        Bound indeterminates must not occur in any replacement value.
        """
        bound = set(bindings)
        for val in bindings.values():
            if _expr(val).indeterminates() & bound:
                raise ValueError("substitution values mention bound indeterminates")
        num = substitute_poly(self.num, bindings)
        den = substitute_poly(self.den, bindings)
        if den.is_zero():
            raise DenominatorVanishes("denominator vanishes under substitution")
        return num / den

    def __repr__(self) -> str:
        return expr_text(self)


def _poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Polynomial")


def _expr(x) -> Expression:
    if isinstance(x, Expression):
        return x
    return Expression(_poly(x))


E_ZERO = Expression(ZERO)
E_ONE = Expression(ONE)


def substitute_poly(p: Polynomial, bindings: dict) -> Expression:
    """Substitute indeterminates by expressions inside a polynomial."""
    out = E_ZERO
    for m, c in p.terms.items():
        term = Expression(Polynomial.const(c))
        for v, e in m:
            if v in bindings:
                term = term * (_expr(bindings[v]) ** e)
            else:
                term = term * Expression(Polynomial.var(v, e))
        out = out + term
    return out


def collect_expr(e: Expression, vars_: set) -> dict:
    """Coefficients of e grouped by monomials over vars_.

    The denominator must not involve vars_; coefficients come back as
    Expressions sharing that denominator.
    """
    if e.den.indeterminates() & vars_:
        raise NotPolynomialInVars("denominator involves collection variables")
    return {m: Expression(c, e.den) for m, c in collect(e.num, vars_).items()}


def clear_denominators(exprs: list) -> tuple:
    """Common-denominator pass: returns (list of Polynomial, common den)."""
    common = ONE
    for e in exprs:
        common = poly_lcm(common, e.den)
    out = []
    for e in exprs:
        out.append(e.num * exact_div(common, e.den))
    return out, common


def expr_text(e: Expression, discrete: bool = False) -> str:
    if e.is_polynomial():
        return poly_text(e.num, discrete)
    return f"({poly_text(e.num, discrete)}) / ({poly_text(e.den, discrete)})"
