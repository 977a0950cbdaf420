import pytest

from pvvi.bounds import (BoundReport, bound_for, bound_vop, bound_vvi,
                         check_bound, coste_bound, degree_param_vop,
                         degree_param_vvi, vop_bounds_agree)
from pvvi.model import (ConstraintSet, VopProblem, builtin_problem,
                        derive_vvi, problem_from_dict)
from pvvi.poly import parse_poly
from pvvi.topo import count_components


def slow_power(base, exp):
    """Oracle: repeated big-int multiplication, no pow()."""
    out = 1
    for _ in range(exp):
        out = out * base
    return out


def constant_vop():
    # affine objective: every derivative is constant, so d falls to 1
    return VopProblem(
        n=2, m=1,
        objectives=(parse_poly("x1", ("x1", "x2")),),
        constraints=ConstraintSet(n=2, convexity_asserted=True,
                                  acq_asserted=True))


class TestDegreeParams:
    def test_builtin_vvi(self):
        # operators affine, constraint quadratic: max degree 2, plus 1
        assert degree_param_vvi(builtin_problem("po")) == 3

    def test_builtin_vop(self):
        # steepest objective derivative is cubic, plus 1
        assert degree_param_vop(builtin_problem("vop")) == 4

    def test_constant_data_gives_one(self):
        assert degree_param_vop(constant_vop()) == 1

    def test_vvi_floor_is_two(self):
        # affine everything still gives max{1, ...} + 1 = 2
        prob = problem_from_dict({
            "kind": "vvi", "n": 1, "m": 1, "F": [["x1"]],
            "g": [], "h": [], "convex": True, "acq": True})
        assert degree_param_vvi(prob) == 2


class TestExactValues:
    def test_po_value(self):
        rep = bound_vvi(builtin_problem("po"))
        assert rep.d == 3 and rep.exponent == 12
        assert rep.bound == 732421875 == 3 * slow_power(5, 12)
        assert rep.inputs == {"m": 2, "n": 2, "ineq": 1, "eq": 0}

    def test_vop_value(self):
        rep = bound_vop(builtin_problem("vop"))
        assert rep.d == 4 and rep.exponent == 12
        assert rep.bound == 55365148804 == 4 * slow_power(7, 12)

    def test_random_shapes_vs_oracle(self):
        # vary counts; degree fixed by a cubic inequality constraint
        for m, n, ni, ne in [(1, 1, 1, 0), (2, 3, 2, 1), (3, 2, 0, 2)]:
            data = {
                "kind": "vvi", "n": n, "m": m,
                "F": [[f"x{k + 1}" for k in range(n)] for _ in range(m)],
                "g": ["x1^3 - 1"] * ni if ni else [],
                "h": ["x1 - 1"] * ne if ne else [],
                "convex": True, "acq": True,
            }
            rep = bound_vvi(problem_from_dict(data))
            d = 4 if ni else 2
            e = 2 * m + 2 * n + 3 * ni + 2 * ne + 1
            assert rep.d == d and rep.exponent == e
            assert rep.bound == d * slow_power(2 * d - 1, e)

    def test_degree_one_bound_is_one(self):
        rep = bound_vop(constant_vop())
        assert rep.d == 1 and rep.bound == 1
        assert any("degree parameter is 1" in note for note in rep.notes)

    def test_report_rejects_inconsistent_bound(self):
        with pytest.raises(ValueError):
            BoundReport(formula="vvi", d=2, exponent=3, bound=55)
        with pytest.raises(ValueError):
            BoundReport(formula="vvi", d=0, exponent=1, bound=0)


class TestCoste:
    def test_small_cases(self):
        assert coste_bound(3, 1, 1).bound == 3 * slow_power(5, 1) == 15
        assert coste_bound(2, 1, 1).bound == 2 * slow_power(3, 1) == 6
        assert coste_bound(2, 2, 2).bound == 2 * slow_power(3, 3) == 54
        assert coste_bound(2, 5, 4).bound == 2 * slow_power(3, 8) == 13122

    def test_validation(self):
        with pytest.raises(ValueError):
            coste_bound(0, 1, 1)
        with pytest.raises(ValueError):
            coste_bound(2, 0, 1)
        with pytest.raises(ValueError):
            coste_bound(2, 1, 0)


class TestDispatchAndAgreement:
    def test_bound_for_dispatch(self):
        assert bound_for(builtin_problem("po")).formula == "vvi"
        assert bound_for(builtin_problem("vop")).formula == "vop"

    def test_vop_agrees_with_derived_vvi(self):
        vop = builtin_problem("vop")
        assert vop_bounds_agree(vop)
        assert bound_vop(vop).bound == bound_vvi(derive_vvi(vop)).bound

    def test_hypothesis_warnings(self):
        data = {"kind": "vvi", "n": 1, "m": 1, "F": [["x1"]],
                "g": ["x1^2 - 1"], "h": [], "convex": False, "acq": False}
        rep = bound_vvi(problem_from_dict(data))
        assert len(rep.warnings) == 2
        assert any("convexity" in w for w in rep.warnings)
        assert any("qualification" in w for w in rep.warnings)
        assert bound_vvi(builtin_problem("po")).warnings == ()


class TestCheckBound:
    def test_ok_verdict(self):
        rep = bound_vvi(builtin_problem("po"))
        comps = count_components([[0, 0], [5, 5]], 0.5)
        verdict = check_bound(rep, comps)
        assert verdict.ok and verdict.count == 2
        assert "observed 2 component(s) <= bound" in verdict.message

    def test_violation_message(self):
        rep = coste_bound(1, 1, 1)   # bound 1
        comps = count_components([[0, 0], [5, 5]], 0.5)
        verdict = check_bound(rep, comps)
        assert not verdict.ok
        assert "BOUND VIOLATED" in verdict.message

    def test_to_dict_uses_decimal_strings(self):
        rep = bound_vop(builtin_problem("vop"))
        assert rep.to_dict()["bound"] == "55365148804"
        verdict = check_bound(rep, count_components([[0, 0]], 0.5))
        assert verdict.to_dict()["bound"] == "55365148804"
