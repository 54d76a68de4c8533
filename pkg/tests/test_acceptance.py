"""Acceptance suite: one test per published result or property bundle.

Each test prints one pass/fail line under pytest -v.  Literal-text
sub-assertions that cannot hold for the canonical expanded equations are
split out as strict xfails with companion equivalence checks inside the
main criterion tests.
"""

import random
import time
from fractions import Fraction

import pytest

from conftest import random_models
from lpvident.classify import (classify, draw_theta_ref, evaluate_summary,
                               jacobian_local_test)
from lpvident.elimination import NullspaceBasis, left_nullspace
from lpvident.errors import EmptyNullspace
from lpvident.expr import E_ZERO, Expression, expr_text
from lpvident.groebner import (gpoly_from_polynomial, groebner_basis,
                               is_groebner, reduce_gpoly)
from lpvident.indets import Role, signal
from lpvident.iop import extract_summary, form_iop
from lpvident.poly import (MonomialOrder, Polynomial, normalize_primitive,
                           poly_text)
from lpvident.stacking import build_stack
from lpvident.verify import backsubstitute_check, discrete_trajectory_check


def V(ind):
    return Polynomial.var(ind)


def C(n):
    return Polynomial.const(Fraction(n))


def _canon(p: Polynomial) -> str:
    prim, _ = normalize_primitive(p)
    return poly_text(prim)


def _canon_set(elements) -> set:
    return {_canon(e.num if isinstance(e, Expression) else e)
            for e in elements}


def _pipeline(model, w=2):
    s = build_stack(model, w)
    iop = form_iop(s, left_nullspace(s.O), discrete=model.discrete)
    return s, iop, extract_summary(iop)


def _first_iop(model, wmax=3):
    for w in range(1, wmax + 1):
        s = build_stack(model, w, size_cap=256)
        ns = left_nullspace(s.O)
        if not ns.rows:
            continue
        try:
            return form_iop(s, ns, discrete=model.discrete)
        except EmptyNullspace:
            continue
    return None


def _statuses(verdict):
    return {k: v.render() for k, v in verdict.per_param.items()}


def test_criterion_01_product_coupling_pipeline(product_coupling):
    t0 = time.perf_counter()
    model = product_coupling
    _, iop, summ = _pipeline(model, 2)
    t1, t2, t3 = (V(p) for p in model.params())
    u, y = V(signal("u", Role.INPUT)), V(signal("y", Role.OUTPUT))
    du, ddu = V(signal("u", Role.INPUT, 1)), V(signal("u", Role.INPUT, 2))
    dy, ddy = V(signal("y", Role.OUTPUT, 1)), V(signal("y", Role.OUTPUT, 2))
    printed = (t1 * u * u * y - C(3) * du * du * y - u * u * ddy
               - u * u * dy + t1 * u * u * dy + u * du * y
               + C(3) * u * du * dy + u * ddu * y
               - C(2) * t1 * u * du * y + t2 * t3 * u * u * u * y)
    assert _canon(iop.equations[0]) == _canon(printed)

    listed = [C(1) - C(2) * t1, t1 - C(1), t1, t2 * t3]
    assert _canon_set(summ.elements) == {_canon(p) for p in listed}

    params = list(model.params())
    gb = groebner_basis(evaluate_summary(summ, params),
                        MonomialOrder.lex(params))
    assert gb.texts() == ["theta1 - a", "theta2*theta3 - b*c"]

    for mode in ("symbolic", "numeric"):
        v = classify(summ, params, mode=mode)
        assert _statuses(v) == {"theta1": "Global",
                                "theta2": "NonIdentifiable",
                                "theta3": "NonIdentifiable"}
    assert time.perf_counter() - t0 < 10


def test_criterion_02_shared_gain_pipeline(shared_gain):
    t0 = time.perf_counter()
    model = shared_gain
    _, _, summ = _pipeline(model, 2)
    t1, t2, t3 = (V(p) for p in model.params())
    listed = [t3 - C(2) * t1, t1 - t3, t1 * t3, t2 * t2]
    assert _canon_set(summ.elements) == {_canon(p) for p in listed}

    params = list(model.params())
    gb = groebner_basis(evaluate_summary(summ, params),
                        MonomialOrder.lex(params))
    assert set(gb.texts()) == {"theta1 - a", "theta3 - c", "theta2^2 - b^2"}

    for mode in ("symbolic", "numeric"):
        v = classify(summ, params, mode=mode)
        assert _statuses(v) == {"theta1": "Global", "theta2": "Local(2)",
                                "theta3": "Global"}
    assert time.perf_counter() - t0 < 10


def _ahu_listed_elements(params):
    t1, t2, t3, t4 = (V(p) for p in params)
    return [C(3) - t4 - t2, t2 + t4 - C(2), t1, C(0) - t1,
            C(5) * t2 * t3, C(0) - t3, t3 - t2 * t3, t1 * t4,
            C(0) - t1, C(2) * t1 - t1 * t4, t1 * t3, C(0) - t1 * t3]


@pytest.mark.xfail(
    strict=True,
    reason="spellings from an unexpanded arrangement cannot all appear as"
           " coefficient ratios of the expanded primitive equation; the"
           " difference ideals agree and the numeric basis and verdicts are"
           " reproduced in the main criterion test")
def test_criterion_03_air_handling_unit_literal_summary(air_handling_unit):
    _, _, summ = _pipeline(air_handling_unit, 2)
    listed = _ahu_listed_elements(air_handling_unit.params())
    assert _canon_set(summ.elements) == {_canon(p) for p in listed}


def test_criterion_03_air_handling_unit_numeric(air_handling_unit):
    t0 = time.perf_counter()
    model = air_handling_unit
    _, _, summ = _pipeline(model, 2)
    params = list(model.params())

    # the listed and extracted summaries generate the same difference ideal
    from lpvident.indets import ref_parameter
    from lpvident.iop import ExhaustiveSummary
    listed = [Expression(p) for p in _ahu_listed_elements(params)]
    listed_summary = ExhaustiveSummary(listed, [(0, None)] * len(listed))
    order = MonomialOrder.lex(params + [ref_parameter(i)
                                        for i in range(1, 5)])
    gens_live = evaluate_summary(summ, params)
    gens_listed = evaluate_summary(listed_summary, params)
    gb_live = groebner_basis(gens_live, order)
    gb_listed = groebner_basis(gens_listed, order)
    assert all(reduce_gpoly(gpoly_from_polynomial(g, order),
                            gb_live.generators).is_zero()
               for g in gens_listed)
    assert all(reduce_gpoly(gpoly_from_polynomial(g, order),
                            gb_listed.generators).is_zero()
               for g in gens_live)

    ref = {p: Fraction(v) for p, v in zip(params, (1, 2, 3, 5))}
    gb = groebner_basis(evaluate_summary(summ, params, ref),
                        MonomialOrder.lex(params))
    assert set(gb.texts()) == {"theta2 - 2", "theta4 - 5",
                               "theta3 - 3", "theta1 - 1"}

    for seed in (0, 1, 2):
        v = classify(summ, params, mode="numeric", seed=seed)
        assert v.model_status == "Global"
        assert all(s.status == "Global" for s in v.per_param.values())
    assert time.perf_counter() - t0 < 60


@pytest.mark.xfail(
    strict=True,
    reason="the printed equation carries y_k^2 in the middle term; exact"
           " trajectory substitution refutes it (see the trajectory check"
           " in the main criterion test and the model tests)")
def test_criterion_04_henon_literal_printed_equation(henon):
    _, iop, _ = _pipeline(henon, 2)
    t1, t2, t3, t4 = (V(p) for p in henon.params())
    yk = V(signal("y", Role.OUTPUT))
    y1, y2 = V(signal("y", Role.OUTPUT, 1)), V(signal("y", Role.OUTPUT, 2))
    uk, u1 = V(signal("u", Role.INPUT)), V(signal("u", Role.INPUT, 1))
    printed = (C(0) - t2 * t3 * yk * yk - u1 + y2
               - uk * (t2 * t4 + t1 * y1) + t1 * y1 * (uk - y1))
    assert _canon(iop.equations[0]) == _canon(printed)


def test_criterion_04_henon_pipeline(henon):
    t0 = time.perf_counter()
    model = henon
    _, iop, summ = _pipeline(model, 2)
    t1, t2, t3, t4 = (V(p) for p in model.params())
    yk = V(signal("y", Role.OUTPUT))
    y1, y2 = V(signal("y", Role.OUTPUT, 1)), V(signal("y", Role.OUTPUT, 2))
    uk, u1 = V(signal("u", Role.INPUT)), V(signal("u", Role.INPUT, 1))
    corrected = (C(0) - t2 * t3 * yk - u1 + y2
                 - uk * (t2 * t4 + t1 * y1) + t1 * y1 * (uk - y1))
    assert _canon(iop.equations[0]) == _canon(corrected)

    listed = [t1, t2 * t4, t2 * t3]
    assert _canon_set(summ.elements) == {_canon(p) for p in listed}

    params = list(model.params())
    for mode in ("symbolic", "numeric"):
        v = classify(summ, params, mode=mode)
        assert _statuses(v) == {"theta1": "Global",
                                "theta2": "NonIdentifiable",
                                "theta3": "NonIdentifiable",
                                "theta4": "NonIdentifiable"}
    assert time.perf_counter() - t0 < 10


@pytest.mark.xfail(
    strict=True,
    reason="reachable from the canonical coefficients only after scaling by"
           " an invertible reference value; constraint-set equivalence and"
           " the Global verdicts are asserted in the main criterion test")
def test_criterion_05_burgers_literal_summary(burgers):
    _, _, summ = _pipeline(burgers, 2)
    t1, t2 = (V(p) for p in burgers.params())
    listed = [t1, t2, t1 - t2 - t1 * t2]
    assert _canon_set(summ.elements) == {_canon(p) for p in listed}


def test_criterion_05_burgers_pipeline(burgers):
    t0 = time.perf_counter()
    model = burgers
    _, iop, summ = _pipeline(model, 2)
    params = list(model.params())

    # the listed summary spans every extracted constraint
    from lpvident.indets import ref_parameter
    from lpvident.iop import ExhaustiveSummary
    t1, t2 = (V(p) for p in params)
    listed = [Expression(p) for p in (t1, t2, t1 - t2 - t1 * t2)]
    listed_summary = ExhaustiveSummary(listed, [(0, None)] * len(listed))
    order = MonomialOrder.lex(params + [ref_parameter(i) for i in (1, 2)])
    gb_listed = groebner_basis(evaluate_summary(listed_summary, params),
                               order)
    assert all(reduce_gpoly(gpoly_from_polynomial(g, order),
                            gb_listed.generators).is_zero()
               for g in evaluate_summary(summ, params))

    for mode in ("symbolic", "numeric"):
        v = classify(summ, params, mode=mode)
        assert v.model_status == "Global"
        assert _statuses(v) == {"theta1": "Global", "theta2": "Global"}

    jac = jacobian_local_test(iop, params)
    assert jac.model_status == "Local"
    assert jac.evidence[0]["max_rank"] == 2 == jac.evidence[0]["q"]
    assert time.perf_counter() - t0 < 10


def test_criterion_06_elimination_property(goldens):
    corpus = list(goldens.values()) + random_models(50)
    domains = {m.domain for m in corpus}
    assert domains == {"continuous", "discrete"}
    for model in corpus:
        for w in (1, 2):
            s = build_stack(model, w, size_cap=256)
            basis = left_nullspace(s.O)
            assert basis.dimension == s.rows - basis.rank
            for omega in basis.rows:
                for j in range(s.cols):
                    acc = E_ZERO
                    for i, om in enumerate(omega):
                        acc = acc + om * s.O[i][j]
                    assert acc.is_zero()


def test_criterion_07_backsubstitution_property(goldens):
    checked = 0
    for model in list(goldens.values()) + random_models(50):
        iop = _first_iop(model)
        if iop is None:
            continue
        rep = backsubstitute_check(model, iop)
        assert rep.ok, model.param_names
        checked += 1
    assert checked >= 45


def test_criterion_08_discrete_trajectories(henon, burgers):
    for model in (henon, burgers):
        _, iop, _ = _pipeline(model, 2)
        params = list(model.params())
        for seed in (0, 1, 2):
            theta = draw_theta_ref(params, random.Random(seed))
            rep = discrete_trajectory_check(model, iop, theta,
                                            steps=20, seed=seed)
            assert rep.ok
            assert rep.max_residual == 0
            assert rep.windows == 18


def test_criterion_09_groebner_property(goldens):
    for model in goldens.values():
        _, _, summ = _pipeline(model, 2)
        params = list(model.params())
        cases = []
        sym = evaluate_summary(summ, params)
        ref = draw_theta_ref(params, random.Random(1))
        num = evaluate_summary(summ, params, ref)
        for gens in (sym, num):
            cases.append((gens, MonomialOrder.lex(params)))
            for target in params:
                seq = [p for p in params if p != target] + [target]
                cases.append((gens, MonomialOrder.lex(seq)))
        for gens, order in cases:
            gb = groebner_basis(gens, order)
            assert is_groebner(gb.generators)
            for g in gens:
                gp = gpoly_from_polynomial(g, order)
                assert reduce_gpoly(gp, gb.generators).is_zero()


def _random_lambda(rng, model, stack):
    params = list(model.params())
    num = V(rng.choice(params)) + C(rng.randint(1, 4))
    den = V(rng.choice(params)) + C(rng.randint(5, 9))
    lam = Expression(num, den)
    sig = Expression.var(stack.U[0])
    power = rng.choice([-2, -1, 1, 2])
    mono = sig ** abs(power)
    return lam * mono if power > 0 else lam / mono


def test_criterion_10_scale_invariance(goldens):
    rng = random.Random(20260815)
    for model in goldens.values():
        s = build_stack(model, 2)
        ns = left_nullspace(s.O)
        base = extract_summary(form_iop(s, ns, discrete=model.discrete))
        params = list(model.params())
        base_verdict = classify(base, params, mode="symbolic")
        for _ in range(2):
            lam = _random_lambda(rng, model, s)
            scaled = NullspaceBasis([[w * lam for w in row]
                                     for row in ns.rows],
                                    ns.rank, ns.dimension)
            redone = extract_summary(
                form_iop(s, scaled, discrete=model.discrete))
            assert [expr_text(e) for e in redone.elements] == \
                   [expr_text(e) for e in base.elements]
            v = classify(redone, params, mode="symbolic")
            assert _statuses(v) == _statuses(base_verdict)
            assert v.model_status == base_verdict.model_status


def test_criterion_11_cross_engine_consistency(goldens):
    for name, model in goldens.items():
        _, iop, summ = _pipeline(model, 2)
        params = list(model.params())
        groeb = classify(summ, params, mode="symbolic")
        jac = jacobian_local_test(iop, params, trials=5, seed=0)
        ev = jac.evidence[0]
        if groeb.model_status in ("Global", "Local"):
            assert ev["max_rank"] == ev["q"], name
        if name == "product_coupling":
            assert ev["max_rank"] == 2 < ev["q"] == 3
