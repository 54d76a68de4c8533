"""Rational functions: field laws, calculus, substitution, denominators."""

import random
from fractions import Fraction

import pytest

from lpvident.errors import (DenominatorVanishes, NotPolynomialInVars,
                             ZeroPolynomialError)
from lpvident.expr import (E_ONE, E_ZERO, Expression, clear_denominators,
                           collect_expr, expr_text, substitute_poly)
from lpvident.indets import Role, parameter, signal
from lpvident.poly import Polynomial, exact_div

TH = parameter("theta", 1)
TH3 = parameter("theta3", 3)
U = signal("u", Role.INPUT)
UD = U.with_order(1)
Y = signal("y", Role.OUTPUT)
X = signal("x", Role.STATE)

P = Polynomial
E = Expression


def ev(v):
    return E.var(v)


def rand_expr(rng, indets):
    def poly():
        p = P()
        for _ in range(rng.randint(1, 3)):
            term = P.const(Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
            for v in indets:
                e = rng.randint(0, 1)
                if e:
                    term = term * P.var(v, e)
            p = p + term
        return p

    num = poly()
    den = P()
    while den.is_zero():
        den = poly()
    return E(num, den)


def test_field_laws_on_random_expressions():
    rng = random.Random(23)
    indets = [TH, U, Y]
    for _ in range(25):
        a = rand_expr(rng, indets)
        b = rand_expr(rng, indets)
        c = rand_expr(rng, indets)
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a - a == E_ZERO
        if not a.is_zero():
            assert a * a.inverse() == E_ONE
            assert a / a == E_ONE


def test_canonical_form_reduced_and_positive_denominator():
    rng = random.Random(29)
    for _ in range(25):
        e = rand_expr(rng, [TH, U])
        if e.is_zero():
            assert e.den == P.const(1)
            continue
        # numerator and denominator share no factor
        from lpvident.poly import poly_gcd
        g = poly_gcd(e.num, e.den)
        assert g.is_constant()
        # denominator content is normalized positive
        assert e.den.content() > 0


def test_same_value_same_representation():
    a = E(P.var(U) * P.var(Y), P.var(U, 2))            # y*u / u^2
    b = E(P.var(Y), P.var(U))
    assert a == b and a.num == b.num and a.den == b.den


def test_inverse_and_pow():
    e = ev(U) / (ev(Y) + 1)
    assert e ** -2 == (e.inverse()) ** 2
    assert e ** 0 == E_ONE
    assert e ** 3 == e * e * e
    with pytest.raises(ZeroPolynomialError):
        E_ZERO.inverse()


def test_differentiate_quotient_rule():
    rng = random.Random(31)
    for _ in range(15):
        a = rand_expr(rng, [TH, U, Y])
        b = rand_expr(rng, [TH, U, Y])
        if b.is_zero():
            continue
        lhs = (a / b).differentiate()
        rhs = (a.differentiate() * b - a * b.differentiate()) / (b * b)
        assert lhs == rhs


def test_differentiate_parameter_is_zero():
    assert ev(TH).differentiate() == E_ZERO
    assert ev(U).differentiate() == ev(UD)


def test_shift_homomorphism_on_quotients():
    e = (ev(TH) * ev(Y)) / ev(U)
    s = e.shift()
    assert s == (ev(TH) * ev(Y.with_order(1))) / ev(U.with_order(1))
    assert (e * e).shift() == s * s


def test_substitute_scalar():
    e = ev(TH) * ev(Y)
    out = e.substitute({TH: E(P.const(3))})
    assert out == ev(Y) * 3


def test_substitute_back_substitution_to_zero():
    # y := x, y' := theta*x collapses y' - theta*y
    e = ev(Y.with_order(1)) - ev(TH) * ev(Y)
    out = e.substitute({Y: ev(X), Y.with_order(1): ev(TH) * ev(X)})
    assert out == E_ZERO


def test_substitute_vanishing_denominator():
    e = E_ONE / ev(U)
    with pytest.raises(DenominatorVanishes):
        e.substitute({U: E_ZERO})


def test_substitute_rejects_recursive_bindings():
    e = ev(U) + ev(Y)
    with pytest.raises(ValueError):
        e.substitute({U: ev(U) + 1})


def test_evaluate_worked_example():
    e = (ev(UD) - ev(TH3) * ev(U)) / ev(U)
    val = e.evaluate({U: Fraction(1), UD: Fraction(5), TH3: Fraction(2)})
    assert val == 3


def test_evaluate_vanishing_denominator():
    with pytest.raises(DenominatorVanishes):
        (E_ONE / ev(U)).evaluate({U: Fraction(0)})


def test_substitute_poly_produces_expression():
    p = P.var(Y) - P.var(TH) * P.var(X)
    out = substitute_poly(p, {Y: ev(TH) * ev(X)})
    assert out == E_ZERO
    out2 = substitute_poly(P.var(Y, 2), {Y: E_ONE / ev(U)})
    assert out2 == E_ONE / (ev(U) * ev(U))


def test_collect_expr_groups_and_error():
    e = (ev(TH) * ev(U) + ev(Y)) / ev(TH)
    groups = collect_expr(e, {U, Y})
    mono_u = next(iter(P.var(U).terms))
    mono_y = next(iter(P.var(Y).terms))
    assert set(groups) == {mono_u, mono_y}
    assert groups[mono_u] == E_ONE
    assert groups[mono_y] == E_ONE / ev(TH)
    with pytest.raises(NotPolynomialInVars):
        collect_expr(E_ONE / ev(U), {U})


def test_clear_denominators_common_multiple():
    exprs = [ev(Y) / ev(U), ev(TH) / (ev(U) * ev(U)), ev(X) + 0]
    polys, den = clear_denominators(exprs)
    assert len(polys) == 3
    for p, e in zip(polys, exprs):
        # p / den == e exactly
        assert E(p, den) == e
    # den is the least common multiple u^2 up to a unit
    assert exact_div(den, P.var(U, 2)).is_constant()


def test_expr_text():
    e = (ev(TH) * ev(Y)) / (ev(U) - 1)
    assert expr_text(e) == "(theta*y) / (u - 1)"
    assert expr_text(ev(TH) + 2) == "theta + 2"
