import json
import random
from fractions import Fraction

import pytest

from homlie.deform import expand_hom_jacobi, expand_jacobi
from homlie.errors import InputError
from homlie.homalg import BracketConstants, LinMap, check_hom_jacobi
from homlie.linsolve import solve, systems_equivalent
from homlie.paperverify import (
    COUNTEREXAMPLE_POINT,
    DEFORMATION_PARAMS,
    J1,
    K1,
    K2,
    K2_PARTIAL,
    SCENARIOS,
    SYSTEM_D,
    SYSTEM_H,
    Sl2Setup,
    infinitesimal_constraints,
    jacobiator_on_family,
    random_audit,
    render_json,
    render_text,
    run_all,
    scenario_constraint_H,
    scenario_counterexample_without_H,
    theorem_family,
    twist_constraints,
)

SETUP = Sl2Setup.build()


def point(**kw):
    return {n: Fraction(0) for n in DEFORMATION_PARAMS} | {k: Fraction(v) for k, v in kw.items()}


class TestScenarios:
    @pytest.mark.parametrize("scenario", SCENARIOS, ids=lambda s: s.__name__)
    def test_passes(self, scenario):
        rep = scenario()
        assert rep.overall, rep.render()
        assert rep.first_failure() is None

    def test_run_all(self):
        reports = run_all()
        assert len(reports) == 6 and all(r.overall for r in reports)
        assert render_text(reports).endswith("6/6 scenarios passed\n")

    def test_deterministic(self):
        assert render_json(run_all()) == render_json(run_all())
        assert render_text(run_all()) == render_text(run_all())

    def test_json_shape(self):
        doc = json.loads(render_json(run_all()))
        assert doc["overall"] == "pass"
        step = doc["scenarios"][0]["steps"][0]
        assert set(step) == {"step", "verdict", "expected", "computed"}

    def test_fault_injection_fails(self):
        reports = run_all(fault=True)
        assert not all(r.overall for r in reports)
        first = next(r for r in reports if not r.overall)
        assert first.scenario == "constraint_H"
        assert first.first_failure().name.startswith("hom-jacobiator")


class TestConstraintH:
    def test_three_constraints(self):
        assert len(twist_constraints(SETUP)) == 3

    def test_identity_alpha_is_vacuous(self):
        setup = Sl2Setup.build(alpha1=LinMap.identity(3))
        assert twist_constraints(setup) == []

    def test_permuted_order_same_row_space(self):
        rng = random.Random(3)
        order = list(DEFORMATION_PARAMS)
        rng.shuffle(order)
        setup = Sl2Setup.build(param_order=order)
        derived = setup.system(twist_constraints(setup), setup.map_unknowns())
        expected = setup.system(setup.equations(SYSTEM_H), setup.map_unknowns())
        assert systems_equivalent(derived, expected)
        assert len(solve(derived).free_params) == 6
        # the scenario names a fixed free set, so only the equivalence steps survive
        rep = scenario_constraint_H(setup)
        assert rep.steps[2].passed

    def test_bad_param_order(self):
        with pytest.raises(InputError):
            Sl2Setup.build(param_order=DEFORMATION_PARAMS[:-1])


class TestConditionD:
    def test_matches_display(self):
        derived = SETUP.system(infinitesimal_constraints(SETUP))
        assert systems_equivalent(derived, SETUP.system(SETUP.equations(SYSTEM_D)))
        assert [str(p) for p in infinitesimal_constraints(SETUP)] == list(J1)

    def test_undeformed(self):
        setup = Sl2Setup.build(alpha1=LinMap.zero(3), bracket1=BracketConstants.zero(3))
        assert infinitesimal_constraints(setup) == []

    def test_zero_bracket_reduces_to_h(self):
        setup = Sl2Setup.build(bracket1=BracketConstants.zero(3))
        derived = setup.system(infinitesimal_constraints(setup))
        # oracle: set p = q = r = 0 in the displayed system
        zero_pqr = {n: 0 for n in DEFORMATION_PARAMS if n[0] in "pqr"}
        via_subst = setup.system([p.substitute(zero_pqr) for p in setup.equations(SYSTEM_D)])
        assert systems_equivalent(derived, via_subst)
        assert systems_equivalent(derived, setup.system(setup.equations(SYSTEM_H)))


class TestLemmasK:
    def test_partial_substitution(self):
        k2 = expand_jacobi(SETUP.deformation()).order(2)
        partial = {"r2": -SETUP.registry.var("q1"), "r3": SETUP.registry.var("p1")}
        for got, text in zip(k2.coords, K2_PARTIAL):
            assert got.substitute(partial) == SETUP.polys([text])[0]

    def test_x2_partial_then_p2(self):
        k2_x2 = SETUP.polys(K2)[1]
        reg = SETUP.registry
        step = k2_x2.substitute({"r2": -reg.var("q1"), "r3": reg.var("p1")})
        assert step == (reg.var("p2") + reg.var("q3")) * reg.var("q1")
        assert step.substitute({"p2": -reg.var("q3")}) == 0

    def test_unsubstituted_x1_has_four_terms(self):
        assert len(SETUP.polys(K2)[0]) == 4


class TestTheorem:
    def test_family_dimension(self):
        assert len(theorem_family(SETUP).free_params) == 12

    def test_all_orders_vanish(self):
        assert all(not v for v in jacobiator_on_family(SETUP, theorem_family(SETUP), 5))

    def test_without_twist_constraint_fails_at_order_one(self):
        orders = jacobiator_on_family(SETUP, theorem_family(SETUP, include_twist=False))
        assert not orders[0]
        assert orders[1]

    def test_zero_bracket_trivial(self):
        setup = Sl2Setup.build(bracket1=BracketConstants.zero(3))
        assert all(not v for v in jacobiator_on_family(setup, theorem_family(setup)))


class TestCounterexample:
    def test_numbers(self):
        d = SETUP.deformation().substitute(point(**COUNTEREXAMPLE_POINT))
        assert not expand_hom_jacobi(d, max_order=1).order(1)
        assert expand_jacobi(d).order(1).format() == "-2*x1"
        assert not check_hom_jacobi(d.algebra(1)).holds

    def test_without_p2_not_a_deformation(self):
        d = SETUP.deformation().substitute(point(a22=1))
        assert [str(c) for c in expand_hom_jacobi(d, max_order=1).order(1).coords] == ["2", "0", "0"]

    def test_restored_h_forces_p2_zero(self):
        sub = {k: v for k, v in point(a22=1, a33=1).items() if k[0] == "a"}
        rows = [p.substitute(sub) for p in SETUP.equations(SYSTEM_D)]
        # the x1 row becomes 0 = p2 + q3; with q3 = 0 that pins p2
        assert str(rows[0]) == "-p2 - q3"
        assert rows[0].substitute({"q3": 0}).evaluate({"p2": 0}) == 0
        assert rows[0].substitute({"q3": 0}).evaluate({"p2": 2}) != 0

    def test_scenario_with_other_point_fails(self):
        rep = scenario_counterexample_without_H(point={"a22": 1})
        assert not rep.overall
        assert rep.first_failure().name.startswith("J1 at the instance")

    def test_displayed_formulas_oracle(self):
        pt = point(**COUNTEREXAMPLE_POINT)
        assert [p.evaluate(pt) for p in SETUP.polys(J1)] == [0, 0, 0]
        assert [p.evaluate(pt) for p in SETUP.polys(K1)] == [-2, 0, 0]


class TestAudit:
    def test_theorem_family(self):
        rep = random_audit(SETUP.deformation(), 1000, seed=42, family=theorem_family(SETUP))
        assert rep.passed and rep.samples == 1000 and rep.failed_samples == 0
        assert rep.checked == 1000 * 3 * 3

    def test_counterexample_fails_everywhere(self):
        d = SETUP.deformation().substitute(point(**COUNTEREXAMPLE_POINT))
        rep = random_audit(d, 50, seed=1)
        assert rep.failed_samples == 50
        f = rep.first_failure
        assert (f.order, f.coordinate, f.value) == (1, 1, -2)

    def test_unconstrained_family_fails(self):
        rep = random_audit(SETUP.deformation(), 20, seed=0)
        assert rep.failed_samples == 20

    def test_zero_samples(self):
        with pytest.raises(InputError):
            random_audit(SETUP.deformation(), 0)

    def test_deterministic(self):
        d = SETUP.deformation()
        a = random_audit(d, 30, seed=7, family=theorem_family(SETUP, include_twist=False))
        b = random_audit(d, 30, seed=7, family=theorem_family(SETUP, include_twist=False))
        assert a == b and not a.passed

    def test_hom_jacobi_identity(self):
        fam = theorem_family(SETUP)
        rep = random_audit(SETUP.deformation(), 100, seed=5, family=fam, identity="hom_jacobi")
        assert rep.passed
