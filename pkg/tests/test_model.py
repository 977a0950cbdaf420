import json

import numpy as np
import pytest

from pvvi.model import (ConstraintSet, ModelError, VopProblem, VviProblem,
                        builtin_problem, canonical_problem_bytes, derive_vvi,
                        load_problem, problem_from_dict, problem_to_dict,
                        save_problem, validate)
from pvvi.poly import PolyVector, parse_poly

N2 = ("x1", "x2")


def poly2(s):
    return parse_poly(s, N2)


class TestConstraintSet:
    def test_contains_and_mask_agree(self):
        K = ConstraintSet(n=2, inequalities=(poly2("x1^2 - x2 - 4"),))
        pts = np.array([[0.0, 0.0], [3.0, 0.0], [2.0, 0.0], [1.0, -3.5]])
        mask = K.feasible_mask(pts)
        assert mask.tolist() == [True, False, True, False]
        for row, ok in zip(pts, mask):
            assert K.contains(row) == ok

    def test_equality_must_be_affine(self):
        with pytest.raises(ModelError):
            ConstraintSet(n=2, equalities=(poly2("x1^2 - 1"),))
        ConstraintSet(n=2, equalities=(poly2("x1 + x2 - 1"),))  # fine

    def test_dimension_mismatch(self):
        with pytest.raises(ModelError):
            ConstraintSet(n=1, inequalities=(poly2("x1"),))


class TestProblems:
    def test_operator_arity_checked(self):
        K = ConstraintSet(n=2)
        with pytest.raises(ModelError):
            VviProblem(n=2, m=2, operators=(PolyVector((poly2("x1"), poly2("x2"))),),
                       constraints=K)

    def test_builtin_problems(self):
        po = builtin_problem("po")
        vop = builtin_problem("vop")
        assert (po.kind, po.n, po.m) == ("vvi", 2, 2)
        assert (vop.kind, vop.n, vop.m) == ("vop", 2, 2)
        assert len(po.constraints.inequalities) == 1
        assert len(vop.constraints.inequalities) == 1
        with pytest.raises(ModelError):
            builtin_problem("nosuch")

    def test_derive_vvi_takes_gradients(self):
        vop = builtin_problem("vop")
        vvi = derive_vvi(vop)
        assert vvi.kind == "vvi" and vvi.m == vop.m
        for f, F in zip(vop.objectives, vvi.operators):
            for k in range(vop.n):
                assert F[k] == f.partial(k)


class TestWireFormat:
    def test_round_trip(self):
        for name in ("po", "vop"):
            problem = builtin_problem(name)
            again = problem_from_dict(problem_to_dict(problem))
            assert again == problem

    def test_canonical_bytes_stable(self):
        po = builtin_problem("po")
        assert canonical_problem_bytes(po) == canonical_problem_bytes(
            problem_from_dict(problem_to_dict(po)))
        assert canonical_problem_bytes(po) != canonical_problem_bytes(
            builtin_problem("vop"))

    def test_save_load(self, tmp_path):
        path = tmp_path / "problem.json"
        save_problem(builtin_problem("po"), path)
        assert load_problem(path) == builtin_problem("po")

    def test_load_rejects_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{nope")
        with pytest.raises(ModelError):
            load_problem(path)

    def test_schema_errors(self):
        with pytest.raises(ModelError):
            problem_from_dict({"kind": "nope", "n": 1, "m": 1})
        with pytest.raises(ModelError):
            problem_from_dict({"kind": "vvi", "n": 0, "m": 1, "F": []})
        with pytest.raises(ModelError):
            problem_from_dict({"kind": "vvi", "n": 1, "m": 1, "F": [["x1 +"]]})
        with pytest.raises(ModelError):
            problem_from_dict({"kind": "vop", "n": 1, "m": 2, "f": ["x1"]})


class TestValidate:
    def test_builtin_problems_are_clean(self):
        for name in ("po", "vop"):
            findings = validate(builtin_problem(name))
            assert [f for f in findings if f.level == "error"] == []
            assert findings == []  # hypotheses asserted, constraints convex

    def test_unasserted_hypotheses_warn(self):
        K = ConstraintSet(n=2, inequalities=(poly2("x1^2 - x2"),))
        problem = VviProblem(
            n=2, m=1, operators=(PolyVector((poly2("x1"), poly2("x2"))),),
            constraints=K)
        messages = [f.message for f in validate(problem)]
        assert any("convexity" in msg for msg in messages)
        assert any("qualification" in msg for msg in messages)

    def test_convexity_probe_flags_concave_constraint(self):
        K = ConstraintSet(n=1, inequalities=(parse_poly("-x1^2 + 1", ("x1",)),),
                          convexity_asserted=True, acq_asserted=True)
        problem = VviProblem(
            n=1, m=1, operators=(PolyVector((parse_poly("x1", ("x1",)),)),),
            constraints=K)
        messages = [f.message for f in validate(problem)]
        assert any("nonconvex" in msg for msg in messages)
        assert validate(problem, probe_convexity=False) == []
