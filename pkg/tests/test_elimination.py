"""Left null-space and rank over the rational-function field."""

import random
from fractions import Fraction

from conftest import random_models
from lpvident.elimination import left_nullspace, rank, rank_rational
from lpvident.expr import E_ONE, E_ZERO, expr_text
from lpvident.model import parse_model
from lpvident.stacking import build_stack


def _annihilates(omega, matrix):
    ncols = len(matrix[0])
    for j in range(ncols):
        acc = E_ZERO
        for i, w in enumerate(omega):
            acc = acc + w * matrix[i][j]
        if not acc.is_zero():
            return False
    return True


def test_single_state_row():
    m = parse_model("time: continuous\nparams: theta1\nA: [theta1]\nC: [1]")
    s = build_stack(m, 1)
    basis = left_nullspace(s.O)
    assert basis.rank == 2
    assert basis.dimension == 1
    assert [expr_text(e) for e in basis.rows[0]] == ["theta1", "-1", "1"]


def test_zero_row_gives_unit_vector():
    zero = E_ZERO
    one = E_ONE
    theta = parse_model("time: continuous\nparams: theta1\n"
                        "A: [theta1]\nC: [1]").A[0][0]
    M = [[one, theta], [zero, zero], [theta, one]]
    basis = left_nullspace(M)
    unit = [zero, one, zero]
    assert any(row == unit for row in basis.rows)


def test_empty_and_full_rank():
    assert rank([]) == 0
    one = E_ONE
    assert rank([[one]]) == 1
    assert left_nullspace([[one, one]]).dimension == 0


def test_product_coupling_rank(product_coupling):
    s = build_stack(product_coupling, 2)
    basis = left_nullspace(s.O)
    assert s.rows == 7
    assert basis.rank == 6
    assert basis.dimension == 1
    assert _annihilates(basis.rows[0], s.O)


def test_rank_matches_rational_specialization(goldens):
    rng = random.Random(7)
    for model in goldens.values():
        s = build_stack(model, 2)
        rk = rank(s.O)
        indets = set()
        for row in s.O:
            for e in row:
                indets |= e.indeterminates()
        env = {v: Fraction(rng.randint(2, 97), rng.randint(1, 5))
               for v in sorted(indets, key=lambda v: v.sort_key)}
        numeric = [[e.evaluate(env) for e in row] for row in s.O]
        assert rank_rational(numeric) == rk


def test_rank_rational_basics():
    assert rank_rational([[1, 2], [2, 4]]) == 1
    assert rank_rational([[1, 0], [0, 1], [1, 1]]) == 2
    assert rank_rational([[0, 0]]) == 0


def test_nullspace_annihilates_goldens(goldens):
    for model in goldens.values():
        for w in (1, 2):
            s = build_stack(model, w)
            basis = left_nullspace(s.O)
            assert basis.dimension == s.rows - basis.rank
            for omega in basis.rows:
                assert _annihilates(omega, s.O)


def test_nullspace_annihilates_random_models():
    checked = 0
    for model in random_models(50):
        s = build_stack(model, 1, size_cap=256)
        basis = left_nullspace(s.O)
        assert basis.dimension == s.rows - basis.rank
        for omega in basis.rows:
            assert _annihilates(omega, s.O)
            assert any(not e.is_zero() for e in omega)
        checked += basis.dimension
    assert checked > 0


def test_normalized_rows_are_polynomial_and_signed(goldens):
    for model in goldens.values():
        s = build_stack(model, 2)
        for omega in left_nullspace(s.O).rows:
            for e in omega:
                assert e.den.total_degree() == 0   # denominators cleared
            lead = next(e for e in omega if not e.is_zero())
            text = expr_text(lead, discrete=model.discrete)
            assert not text.startswith("-")


def test_deterministic_output(product_coupling):
    s = build_stack(product_coupling, 2)
    a = left_nullspace(s.O)
    b = left_nullspace(s.O)
    assert [[expr_text(e) for e in row] for row in a.rows] == \
           [[expr_text(e) for e in row] for row in b.rows]
