"""Independent checks on pipeline results.

Back-substitution rebuilds each output derivative or shift directly from
the state equations and substitutes it into the I-O-P equations; the result
must cancel to exactly zero, which certifies state elimination without
reusing any null-space computation.  For discrete models an exact rational
trajectory provides a second, purely numeric oracle.  Witness checks
evaluate the exhaustive summary at two parameter points.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DenominatorVanishes, LpvIdentError
from .expr import E_ZERO, Expression, expr_text
from .indets import Indeterminate, Kind, Role, signal
from .iop import ExhaustiveSummary, IopSet
from .model import LpvModel
from .poly import Polynomial
from .stacking import StackedSystem


def _entry_exprs(mat) -> list:
    return [e for row in mat for e in row]


def _output_free_matrices(model: LpvModel) -> dict:
    """Replace order-0 outputs in entries by C x + D u expressions."""
    for e in _entry_exprs(model.C) + _entry_exprs(model.D):
        if any(v.role is Role.OUTPUT for v in e.indeterminates()
               if v.kind is Kind.SIGNAL):
            raise LpvIdentError(
                "outputs inside C or D entries are not supported by the verifier")
    states = [Expression(Polynomial.var(s)) for s in model.states()]
    inputs = [Expression(Polynomial.var(u)) for u in model.inputs()]
    y0 = []
    for i in range(model.p):
        acc = E_ZERO
        for j, xs in enumerate(states):
            acc = acc + model.C[i][j] * xs
        for j, us in enumerate(inputs):
            acc = acc + model.D[i][j] * us
        y0.append(acc)
    ymap = {signal(name, Role.OUTPUT): y0[i]
            for i, name in enumerate(model.output_names)}

    def scrub(mat):
        out = []
        for row in mat:
            new_row = []
            for e in row:
                if any(v in ymap for v in e.indeterminates()):
                    e = e.substitute({v: ymap[v] for v in e.indeterminates()
                                      if v in ymap})
                new_row.append(e)
            out.append(tuple(new_row))
        return tuple(out)

    return {"A": scrub(model.A), "B": scrub(model.B),
            "C": scrub(model.C), "D": scrub(model.D)}


def output_closure(model: LpvModel, max_order: int) -> dict:
    """Map output indeterminates y^(j), j <= max_order, to expressions in
    states (order 0), inputs and scheduling signals only."""
    mats = _output_free_matrices(model)
    states = model.states()
    inputs = model.inputs()
    x_exprs = [Expression(Polynomial.var(s)) for s in states]
    closure: dict = {}

    if model.discrete:
        Xj = x_exprs
        for j in range(max_order + 1):
            shifted = {"A": mats["A"], "B": mats["B"],
                       "C": mats["C"], "D": mats["D"]}
            if j:
                shifted = {k: tuple(tuple(_nshift(e, j) for e in row)
                                    for row in mats[k]) for k in mats}
            # at j = 0 the order-0 states already are the closure variables
            bind = ({s.with_order(j): Xj[i] for i, s in enumerate(states)}
                    if j else {})
            Cj = _subst_matrix(shifted["C"], bind)
            Dj = _subst_matrix(shifted["D"], bind)
            for o in range(model.p):
                acc = E_ZERO
                for i in range(model.n):
                    acc = acc + Cj[o][i] * Xj[i]
                for i in range(model.m):
                    acc = acc + Dj[o][i] * Expression(
                        Polynomial.var(inputs[i].with_order(j)))
                closure[signal(model.output_names[o], Role.OUTPUT, j)] = acc
            if j < max_order:
                Aj = _subst_matrix(shifted["A"], bind)
                Bj = _subst_matrix(shifted["B"], bind)
                nxt = []
                for i in range(model.n):
                    acc = E_ZERO
                    for l in range(model.n):
                        acc = acc + Aj[i][l] * Xj[l]
                    for l in range(model.m):
                        acc = acc + Bj[i][l] * Expression(
                            Polynomial.var(inputs[l].with_order(j)))
                    nxt.append(acc)
                Xj = nxt
        return closure

    # continuous: close derivatives over xdot = A x + B u
    xdot = []
    for i in range(model.n):
        acc = E_ZERO
        for l in range(model.n):
            acc = acc + mats["A"][i][l] * x_exprs[l]
        for l in range(model.m):
            acc = acc + mats["B"][i][l] * Expression(Polynomial.var(inputs[l]))
        xdot.append(acc)
    dot_bind = {s.with_order(1): xdot[i] for i, s in enumerate(states)}

    def total_d(e: Expression) -> Expression:
        d = e.differentiate()
        hit = {v: dot_bind[v] for v in d.indeterminates() if v in dot_bind}
        return d.substitute(hit) if hit else d

    Yj = []
    for o in range(model.p):
        acc = E_ZERO
        for i in range(model.n):
            acc = acc + mats["C"][o][i] * x_exprs[i]
        for i in range(model.m):
            acc = acc + mats["D"][o][i] * Expression(Polynomial.var(inputs[i]))
        Yj.append(acc)
    for j in range(max_order + 1):
        for o in range(model.p):
            closure[signal(model.output_names[o], Role.OUTPUT, j)] = Yj[o]
        if j < max_order:
            Yj = [total_d(e) for e in Yj]
    return closure


def _nshift(e: Expression, times: int) -> Expression:
    for _ in range(times):
        e = e.shift()
    return e


def _subst_matrix(mat, bind: dict):
    if not bind:
        return mat
    out = []
    for row in mat:
        new_row = []
        for e in row:
            hit = {v: bind[v] for v in e.indeterminates() if v in bind}
            new_row.append(e.substitute(hit) if hit else e)
        out.append(tuple(new_row))
    return tuple(out)


@dataclass
class BacksubReport:
    ok: bool
    residuals: list   # Expression per equation


def backsubstitute_check(model: LpvModel, iop: IopSet) -> BacksubReport:
    """Substitute model-implied output expressions into each equation."""
    max_order = 0
    for psi in iop.equations:
        for v in psi.indeterminates():
            if v.kind is Kind.SIGNAL and v.role is Role.OUTPUT:
                max_order = max(max_order, v.order)
    closure = output_closure(model, max_order)
    residuals = []
    for psi in iop.equations:
        bind = {v: closure[v] for v in psi.indeterminates() if v in closure}
        res = Expression(psi).substitute(bind) if bind else Expression(psi)
        residuals.append(res)
    return BacksubReport(all(r.is_zero() for r in residuals), residuals)


def stack_substitution_check(model: LpvModel, stack: StackedSystem) -> bool:
    """Row-wise: Y0 + G U - O X vanishes under the model dynamics."""
    max_order = stack.order + 1
    closure = output_closure(model, max_order)
    # state stack closure: x^(j) expressions
    mats = _output_free_matrices(model)
    states = model.states()
    inputs = model.inputs()
    x_exprs = [Expression(Polynomial.var(s)) for s in states]
    xmaps = [x_exprs]
    if model.discrete:
        for j in range(stack.order):
            bind = ({s.with_order(j): xmaps[j][i] for i, s in enumerate(states)}
                    if j else {})
            Aj = _subst_matrix(tuple(tuple(_nshift(e, j) for e in row)
                                     for row in mats["A"]), bind)
            Bj = _subst_matrix(tuple(tuple(_nshift(e, j) for e in row)
                                     for row in mats["B"]), bind)
            nxt = []
            for i in range(model.n):
                acc = E_ZERO
                for l in range(model.n):
                    acc = acc + Aj[i][l] * xmaps[j][l]
                for l in range(model.m):
                    acc = acc + Bj[i][l] * Expression(
                        Polynomial.var(inputs[l].with_order(j)))
                nxt.append(acc)
            xmaps.append(nxt)
    else:
        xdot = []
        for i in range(model.n):
            acc = E_ZERO
            for l in range(model.n):
                acc = acc + mats["A"][i][l] * x_exprs[l]
            for l in range(model.m):
                acc = acc + mats["B"][i][l] * Expression(Polynomial.var(inputs[l]))
            xdot.append(acc)
        dot_bind = {s.with_order(1): xdot[i] for i, s in enumerate(states)}
        for j in range(stack.order):
            nxt = []
            for e in xmaps[j]:
                d = e.differentiate()
                hit = {v: dot_bind[v] for v in d.indeterminates() if v in dot_bind}
                nxt.append(d.substitute(hit) if hit else d)
            xmaps.append(nxt)

    bind = dict(closure)
    for j, xm in enumerate(xmaps):
        if j == 0:
            continue  # order-0 states stay free symbols
        for i, s in enumerate(states):
            bind[s.with_order(j)] = xm[i]

    known = stack.known_side()
    for r in range(stack.rows):
        acc = known[r]
        for c, xvar in enumerate(stack.X):
            o = stack.O[r][c]
            if not o.is_zero():
                acc = acc - o * Expression(Polynomial.var(xvar))
        hit = {v: bind[v] for v in acc.indeterminates() if v in bind}
        res = acc.substitute(hit) if hit else acc
        if not res.is_zero():
            return False
    return True


@dataclass
class TrajectoryReport:
    ok: bool
    windows: int
    max_residual: Fraction


def discrete_trajectory_check(model: LpvModel, iop: IopSet, theta: dict,
                              steps: int = 8, seed: int = 0) -> TrajectoryReport:
    """Iterate the exact rational dynamics and evaluate each equation on
    every window of the produced signals; residuals must be exactly zero."""
    if not model.discrete:
        raise ValueError("trajectory check applies to discrete models")
    rng = random.Random(seed)
    for attempt in range(25):
        try:
            return _trajectory_once(model, iop, theta, steps, rng)
        except DenominatorVanishes:
            continue
    raise DenominatorVanishes("could not draw a trajectory off singularities")


def _trajectory_once(model, iop, theta, steps, rng) -> TrajectoryReport:
    def draw():
        return Fraction(rng.randint(-6, 6), rng.randint(1, 4))

    x = [draw() for _ in range(model.n)]
    u_seq = [[draw() for _ in range(model.m)] for _ in range(steps)]
    r_seq = [[draw() for _ in range(len(model.sched_names))] for _ in range(steps)]
    y_seq = []

    outs = model.outputs()
    ins = model.inputs()
    scheds = model.scheduling()
    states = model.states()
    for k in range(steps):
        bind = dict(theta)
        for i, s in enumerate(ins):
            bind[s] = u_seq[k][i]
        for i, s in enumerate(scheds):
            bind[s] = r_seq[k][i]
        for i, s in enumerate(states):
            bind[s] = x[i]
        y = []
        for o in range(model.p):
            acc = Fraction(0)
            for i in range(model.n):
                e = model.C[o][i]
                if not e.is_zero():
                    acc += e.evaluate(bind) * x[i]
            for i in range(model.m):
                e = model.D[o][i]
                if not e.is_zero():
                    acc += e.evaluate(bind) * u_seq[k][i]
            y.append(acc)
        y_seq.append(y)
        for i, s in enumerate(outs):
            bind[s] = y[i]
        nxt = []
        for i in range(model.n):
            acc = Fraction(0)
            for l in range(model.n):
                e = model.A[i][l]
                if not e.is_zero():
                    acc += e.evaluate(bind) * x[l]
            for l in range(model.m):
                e = model.B[i][l]
                if not e.is_zero():
                    acc += e.evaluate(bind) * u_seq[k][l]
            nxt.append(acc)
        x = nxt

    w = iop.order
    windows = 0
    worst = Fraction(0)
    for k in range(steps - w):
        bind = dict(theta)
        for j in range(w + 1):
            for i, s in enumerate(outs):
                bind[s.with_order(j)] = y_seq[k + j][i]
            for i, s in enumerate(ins):
                bind[s.with_order(j)] = u_seq[k + j][i]
            for i, s in enumerate(scheds):
                bind[s.with_order(j)] = r_seq[k + j][i]
        for psi in iop.equations:
            val = psi.evaluate(bind)
            worst = max(worst, abs(val))
        windows += 1
    return TrajectoryReport(worst == 0, windows, worst)


def indistinguishability_witness(summary: ExhaustiveSummary, theta1: dict,
                                 theta2: dict) -> bool:
    """True when both points give identical summary values."""
    if theta1 == theta2:
        raise ValueError("witness requires two distinct parameter points")
    for e in summary.elements:
        if e.evaluate(theta1) != e.evaluate(theta2):
            return False
    return True


_GRID = [Fraction(v) for v in (1, 2, 3, 6, -1, -2)] + \
        [Fraction(1, 2), Fraction(3, 2), Fraction(1, 3), Fraction(2, 3)]


def find_witness(summary: ExhaustiveSummary, params: list, target,
                 base_point: dict, budget: int = 200000) -> dict | None:
    """Search a rational grid for theta' != base varying the target.

    Returns the witness point, or None when the budget is exhausted.
    """
    grids = []
    for p in params:
        vals = [base_point[p]] + [v for v in _GRID if v != base_point[p]]
        if p == target:
            vals = vals[1:]
        grids.append(vals)
    count = 0
    for combo in itertools.product(*grids):
        count += 1
        if count > budget:
            return None
        cand = dict(zip(params, combo))
        if cand == base_point:
            continue
        try:
            if indistinguishability_witness(summary, base_point, cand):
                return cand
        except DenominatorVanishes:
            continue
    return None
