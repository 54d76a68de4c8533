"""Exact left null-space and rank over the rational-function field.

Forward elimination is fraction-free (Bareiss): every intermediate entry is
a polynomial, divisions are exact by the previous pivot, and pivot zero
tests are canonical-form tests, never numeric.  Rows with rational-function
entries are first scaled polynomial by their denominator product; the scale
is restored on the computed null-space vectors.  Returned basis rows are
cleared of denominators, divided by their full polynomial content (gcd
across entries) and sign-normalized, which pins a one-dimensional
null-space row uniquely up to nothing at all.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _igcd

from .expr import Expression, clear_denominators
from .poly import (ONE, ZERO, Polynomial, exact_div, poly_gcd, poly_text)


@dataclass
class NullspaceBasis:
    rows: list           # list of rows of Expression (polynomial-valued)
    rank: int            # rank of the input matrix
    dimension: int       # number of basis rows


def _pivot_weight(p: Polynomial) -> tuple:
    """Pivot preference: fewer/smaller first, deterministic tie-break."""
    return (p.total_degree(), len(p.terms), poly_text(p))


def _bareiss_echelon(M: list):
    """Fraction-free row echelon on a polynomial matrix, in place.

    Returns (pivots, rank) where pivots is a list of (row, col) in
    elimination order.  Column order is left to right; within a column the
    pivot row minimizes (total degree, term count, canonical text).
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    prev = ONE
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        cand = [i for i in range(r, rows) if not M[i][c].is_zero()]
        if not cand:
            continue
        best = min(cand, key=lambda i: _pivot_weight(M[i][c]))
        if best != r:
            M[r], M[best] = M[best], M[r]
        piv = M[r][c]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                num = piv * M[i][j] - M[i][c] * M[r][j]
                M[i][j] = exact_div(num, prev) if prev != ONE else num
            M[i][c] = ZERO
        pivots.append((r, c))
        prev = piv
        r += 1
    return pivots, len(pivots)


def rank_rational(rows: list) -> int:
    """Exact rank of a Fraction matrix by Gaussian elimination."""
    M = [list(map(Fraction, row)) for row in rows]
    nr = len(M)
    nc = len(M[0]) if nr else 0
    rank = 0
    for c in range(nc):
        piv = next((i for i in range(rank, nr) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        pr = M[rank]
        for i in range(rank + 1, nr):
            if M[i][c]:
                f = M[i][c] / pr[c]
                M[i] = [a - f * b for a, b in zip(M[i], pr)]
        rank += 1
    return rank


def _to_poly_rows(matrix: list) -> tuple:
    """Clear denominators row-wise; returns (poly rows, per-row scales)."""
    rows = []
    scales = []
    for row in matrix:
        cleared, common = clear_denominators(list(row))
        rows.append(cleared)
        scales.append(common)
    return rows, scales


def rank(matrix: list) -> int:
    """Rank over the rational-function field (matrix of Expression)."""
    if not matrix or not matrix[0]:
        return 0
    rows, _ = _to_poly_rows(matrix)
    _, rk = _bareiss_echelon(rows)
    return rk


def left_nullspace(matrix: list) -> NullspaceBasis:
    """Basis of {omega : omega M = 0} for a matrix of Expression entries.

    Computed as the kernel of M^T.  Basis rows are polynomial, content-free
    and sign-normalized; a zero row of M yields the corresponding unit
    vector.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    rows, row_scales = _to_poly_rows(matrix)
    # transpose: unknowns are the nrows components of omega
    T = [[rows[i][j] for i in range(nrows)] for j in range(ncols)]
    pivots, rk = _bareiss_echelon(T) if ncols else ([], 0)
    pivot_cols = [c for _, c in pivots]
    free_cols = [c for c in range(nrows) if c not in pivot_cols]

    basis = []
    for f in free_cols:
        # back-substitute in the echelon form with exact field arithmetic
        omega = [Expression(Polynomial()) for _ in range(nrows)]
        omega[f] = Expression(Polynomial.const(1))
        for (r, c) in reversed(pivots):
            acc = Expression(Polynomial())
            for j in range(c + 1, nrows):
                if not T[r][j].is_zero() and not omega[j].is_zero():
                    acc = acc + Expression(T[r][j]) * omega[j]
            omega[c] = -acc / Expression(T[r][c])
        # restore the row scaling of the original matrix
        omega = [w * Expression(row_scales[i]) for i, w in enumerate(omega)]
        basis.append(_normalize_row(omega))
    return NullspaceBasis(basis, rk, len(basis))


def _normalize_row(omega: list) -> list:
    cleared, _ = clear_denominators(omega)
    content = ZERO
    for p in cleared:
        content = poly_gcd(content, p)
        if content == ONE:
            break
    if not content.is_zero() and content != ONE:
        cleared = [exact_div(p, content) if not p.is_zero() else p for p in cleared]
    # joint rational content: make the row integer, primitive, and give the
    # first nonzero entry a positive leading coefficient
    nums, dens = 0, 1
    for p in cleared:
        for coef in p.terms.values():
            nums = _igcd(nums, coef.numerator)
            dens = dens * coef.denominator // _igcd(dens, coef.denominator)
    if nums:
        scale = Fraction(dens, nums)
        lead = next(p for p in cleared if not p.is_zero())
        if lead.content() < 0:
            scale = -scale
        cleared = [p.scale(scale) for p in cleared]
    return [Expression(p) for p in cleared]
