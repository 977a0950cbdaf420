import numpy as np
import pytest

from pvvi.formula import (FALSITY, FORMULA_TARGETS, TRUTH, And, Atom, Exists,
                          ForAll, Not, Or, UnboundVariableError, build_formula,
                          collect_atoms, eval_qf, export, export_smt,
                          export_text, formula_pareto, formula_proper,
                          free_variables, is_quantifier_free, joint_names,
                          normalize, parse_text, qf_of_K, strip_quantifiers)
from pvvi.model import builtin_problem, problem_from_dict
from pvvi.poly import parse_poly

XY = ("x1", "x2", "y1", "y2")


def atom(src, names=("x1",), rel=">"):
    return Atom(parse_poly(src, names), names, rel)


class TestBuiltinVviTargets:
    """Structure of the four solution-set formulas for the bundled
    inequality example (two affine operators, one quadratic constraint)."""

    def test_atom_counts(self):
        po = builtin_problem("po")
        want = {"weak": 5, "pareto": 7, "proper": 7, "graph": 7}
        for target, count in want.items():
            assert len(collect_atoms(build_formula(po, target))) == count

    def test_weak_structure(self):
        ast = build_formula(builtin_problem("po"), "weak")
        assert isinstance(ast, And) and len(ast.children) == 2
        qkx, quantified = ast.children
        assert isinstance(qkx, Atom) and qkx.relation == "<="
        assert isinstance(quantified, ForAll)
        assert quantified.block.name == "Y"
        assert quantified.block.variables == ("y1", "y2")
        matrix = quantified.child
        # (Q_K(Y) and some product nonnegative) or Y infeasible
        assert isinstance(matrix, Or) and len(matrix.children) == 2
        guarded, escape = matrix.children
        assert isinstance(guarded, And)
        qky, disjunction = guarded.children
        assert isinstance(qky, Atom) and qky.relation == "<="
        assert isinstance(disjunction, Or)
        assert [a.relation for a in disjunction.children] == [">=", ">="]
        assert isinstance(escape, Not) and escape.child == qky

    def test_weak_products_encode_operator(self):
        ast = build_formula(builtin_problem("po"), "weak")
        products = ast.children[1].child.children[0].children[1].children
        # <F_1(x), y-x> with F_1 = (x2, -x1-1) at x=(1,2), y=(3,5)
        val = products[0].poly.evaluate([1.0, 2.0, 3.0, 5.0])
        assert val == pytest.approx(2.0 * (3 - 1) + (-1.0 - 1) * (5 - 2))
        val2 = products[1].poly.evaluate([1.0, 2.0, 3.0, 5.0])
        assert val2 == pytest.approx(-2.0 * (3 - 1) + (1.0 - 1) * (5 - 2))

    def test_pareto_structure(self):
        ast = build_formula(builtin_problem("po"), "pareto")
        guarded = ast.children[1].child.children[0]
        split = guarded.children[1]
        assert isinstance(split, Or) and len(split.children) == 2
        strict, equal = split.children
        assert [a.relation for a in strict.children] == [">", ">"]
        assert [a.relation for a in equal.children] == ["=", "="]

    def test_proper_scopes_weight_over_universal(self):
        ast = build_formula(builtin_problem("po"), "proper")
        assert isinstance(ast, And)
        exists = ast.children[1]
        assert isinstance(exists, Exists)
        assert exists.block.name == "Theta"
        assert exists.block.variables == ("t1", "t2")
        interior, quantified = exists.child.children
        # strictly interior weight on the simplex
        assert [a.relation for a in interior.children] == [">", ">", "="]
        assert isinstance(quantified, ForAll)
        combined = quantified.child.children[0].children[1]
        assert combined.relation == ">="
        assert joint_names(ast) == ("t1", "t2", "x1", "x2", "y1", "y2")

    def test_graph_has_free_weight(self):
        ast = build_formula(builtin_problem("po"), "graph")
        assert isinstance(ast, And) and len(ast.children) == 3
        qkx, simplex, quantified = ast.children
        assert [a.relation for a in simplex.children] == [">=", ">=", "="]
        assert isinstance(quantified, ForAll)
        assert free_variables(ast) == ("t1", "t2", "x1", "x2")

    def test_free_variables(self):
        po = builtin_problem("po")
        assert free_variables(build_formula(po, "weak")) == ("x1", "x2")
        assert free_variables(build_formula(po, "proper")) == ("x1", "x2")

    def test_unknown_target(self):
        with pytest.raises(ValueError):
            build_formula(builtin_problem("po"), "strong")


class TestVopTargets:
    def test_weak_uses_objective_differences(self):
        vop = builtin_problem("vop")
        ast = build_formula(vop, "weak")
        assert len(collect_atoms(ast)) == 5
        diffs = ast.children[1].child.children[0].children[1].children
        # f_1(y) - f_1(x) with f_1 = x1^4/4 - x2
        x, y = (1.5, 2.0), (0.5, -1.0)
        want = (y[0] ** 4 / 4 - y[1]) - (x[0] ** 4 / 4 - x[1])
        assert diffs[0].poly.evaluate([*x, *y]) == pytest.approx(want)

    def test_pareto_count(self):
        assert len(collect_atoms(build_formula(builtin_problem("vop"),
                                               "pareto"))) == 7

    def test_proper_and_graph_via_derived_operator(self):
        vop = builtin_problem("vop")
        proper = build_formula(vop, "proper")
        graph = build_formula(vop, "graph")
        assert isinstance(proper.children[1], Exists)
        assert len(collect_atoms(proper)) == 7
        assert free_variables(graph) == ("t1", "t2", "x1", "x2")


class TestCollapsedCases:
    def test_single_objective_proper_inlines_weight(self):
        data = {"kind": "vvi", "n": 1, "m": 1, "F": [["x1"]],
                "g": ["x1^2 - 1"], "h": [], "convex": True, "acq": True}
        ast = formula_proper(problem_from_dict(data))
        assert not any(isinstance(n, Exists) for n in _all_nodes(ast))
        assert free_variables(ast) == ("x1",)

    def test_single_objective_pareto_keeps_split(self):
        data = {"kind": "vvi", "n": 1, "m": 1, "F": [["x1"]],
                "g": ["x1^2 - 1"], "h": [], "convex": True, "acq": True}
        ast = formula_pareto(problem_from_dict(data))
        split = ast.children[1].child.children[0].children[1]
        assert isinstance(split, Or) and len(split.children) == 2

    def test_unconstrained_drops_guard(self):
        data = {"kind": "vvi", "n": 1, "m": 2, "F": [["x1"], ["-x1"]],
                "g": [], "h": [], "convex": True, "acq": True}
        ast = build_formula(problem_from_dict(data), "weak")
        # no feasibility guard anywhere: the matrix is the bare disjunction
        assert isinstance(ast, ForAll)
        assert isinstance(ast.child, Or)
        assert all(isinstance(c, Atom) for c in ast.child.children)


def _all_nodes(ast):
    out = [ast]
    for node in out:
        if isinstance(node, (And, Or)):
            out.extend(node.children)
        elif isinstance(node, Not):
            out.append(node.child)
        elif isinstance(node, (ForAll, Exists)):
            out.append(node.child)
    return out


class TestMembershipFormula:
    def test_single_constraint_collapses(self):
        K = builtin_problem("po").constraints
        ast = qf_of_K(K)
        assert isinstance(ast, Atom) and ast.relation == "<="

    def test_eval_matches_direct_constraints(self):
        K = builtin_problem("po").constraints
        ast = qf_of_K(K)
        rng = np.random.default_rng(0)
        pts = rng.uniform(-5, 5, size=(1000, 2))
        for x1, x2 in pts:
            direct = x1 ** 2 - x2 - 4 <= 0
            assert eval_qf(ast, {"x1": x1, "x2": x2}) == direct

    def test_empty_set_is_truth(self):
        from pvvi.model import ConstraintSet

        assert qf_of_K(ConstraintSet(n=2)) == TRUTH
        assert eval_qf(TRUTH, {}) is True
        assert eval_qf(FALSITY, {}) is False


class TestEvalQf:
    def test_all_relations(self):
        for rel, val, want in [(">", 1.0, True), (">", 0.0, False),
                               (">=", 0.0, True), ("=", 0.0, True),
                               ("<", -0.5, True), ("<=", 0.0, True),
                               ("<=", 0.1, False)]:
            assert eval_qf(atom("x1", rel=rel), {"x1": val}) is want

    def test_connectives(self):
        f = And((atom("x1"), Not(atom("x1 - 5"))))
        assert eval_qf(f, {"x1": 1.0}) is True
        assert eval_qf(f, {"x1": 6.0}) is False

    def test_unbound_variable(self):
        with pytest.raises(UnboundVariableError):
            eval_qf(atom("x1"), {"y1": 1.0})

    def test_rejects_quantifiers(self):
        ast = build_formula(builtin_problem("po"), "weak")
        with pytest.raises(ValueError):
            eval_qf(ast, {"x1": 0.0, "x2": 0.0, "y1": 0.0, "y2": 0.0})
        assert is_quantifier_free(strip_quantifiers(ast))


class TestNormalize:
    def test_primitive_relations_only(self):
        for target in FORMULA_TARGETS:
            ast = normalize(build_formula(builtin_problem("po"), target))
            assert {a.relation for a in collect_atoms(ast)} <= {">", "="}

    def test_semantics_preserved_pointwise(self):
        rng = np.random.default_rng(4)
        formulas = [
            atom("x1^2 - 2", ("x1", "x2"), rel)
            for rel in (">", ">=", "=", "<", "<=")
        ]
        formulas.append(And((atom("x1", ("x1", "x2"), ">="),
                             Or((atom("x2", ("x1", "x2"), "<"),
                                 Not(atom("x1*x2 - 1", ("x1", "x2"), "<=")))))))
        for f in formulas:
            g = normalize(f)
            for x1, x2 in rng.uniform(-2, 2, size=(200, 2)):
                env = {"x1": x1, "x2": x2}
                assert eval_qf(f, env) == eval_qf(g, env)

    def test_boundary_cases_exact(self):
        # the rewrite must agree exactly on the zero set, not just generically
        f = atom("x1", rel=">=")
        assert eval_qf(f, {"x1": 0.0}) is eval_qf(normalize(f), {"x1": 0.0})
        f = atom("x1", rel="<=")
        assert eval_qf(f, {"x1": 0.0}) is eval_qf(normalize(f), {"x1": 0.0})


class TestTextDialect:
    def test_round_trip_identity_all_targets(self):
        for name in ("po", "vop"):
            problem = builtin_problem(name)
            for target in FORMULA_TARGETS:
                ast = build_formula(problem, target)
                assert parse_text(export_text(ast)) == ast

    def test_header_lists_joint_variables(self):
        text = export_text(build_formula(builtin_problem("po"), "graph"))
        assert text.splitlines()[0] == "# vars: t1, t2, x1, x2, y1, y2"

    def test_scope_note_only_when_weight_quantified(self):
        proper = export_text(build_formula(builtin_problem("po"), "proper"))
        weak = export_text(build_formula(builtin_problem("po"), "weak"))
        assert "# note:" in proper
        assert "# note:" not in weak

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_text("[x1 > 0")
        with pytest.raises(ValueError):
            parse_text("x1 > 0")


class TestSmtDialect:
    def test_weak_script_shape(self):
        src = export_smt(build_formula(builtin_problem("po"), "weak"))
        assert "(set-logic NRA)" in src
        assert "(declare-const x1 Real)" in src
        assert "(declare-const x2 Real)" in src
        assert "(declare-const y1" not in src     # bound, not free
        assert "(define-fun phi () Bool" in src
        assert "(forall ((y1 Real) (y2 Real))" in src
        assert src.rstrip().endswith("(check-sat)")

    def test_proper_has_exists_and_note(self):
        src = export_smt(build_formula(builtin_problem("po"), "proper"))
        assert "(exists ((t1 Real) (t2 Real))" in src
        assert "; note:" in src

    def test_export_dispatch(self):
        ast = build_formula(builtin_problem("po"), "weak")
        assert export(ast) == export_text(ast)
        assert export(ast, "smt", name="psi") == export_smt(ast, name="psi")
        with pytest.raises(ValueError):
            export(ast, "latex")
