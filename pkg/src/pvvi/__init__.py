"""Polynomial vector variational inequalities: solving, topology, bounds.

The package computes solution multifunctions of polynomial vector
variational inequalities (and vector optimization problems reduced to
them), counts connected components of the resulting solution clouds,
and reports exact upper bounds on how many components are possible.
"""

from .bounds import (
    BoundReport,
    BoundVerdict,
    bound_for,
    bound_vop,
    bound_vvi,
    check_bound,
    coste_bound,
)
from .formula import build_formula, export, export_smt, export_text, parse_text
from .kkt import ActiveSet, SimplexWeight, residual
from .model import (
    ConstraintSet,
    VopProblem,
    VviProblem,
    builtin_problem,
    derive_vvi,
    load_problem,
    problem_from_dict,
    problem_to_dict,
    save_problem,
    validate,
)
from .poly import Polynomial, PolyVector, parse_poly
from .solve import (
    BruteReport,
    KktSolution,
    SolverConfig,
    SolverGuardError,
    brute_force_vi,
    solve_vi_xi,
)
from .sweep import (
    MultifunctionGraph,
    SolutionCloud,
    assemble,
    graph_from_dict,
    graph_to_csv,
    graph_to_dict,
    run_sweep,
    sample_simplex,
    write_csv,
)
from .topo import ComponentReport, EpsSweep, count_components, eps_sweep
from .verify import VerifyReport, verify_example

__all__ = [
    "ActiveSet",
    "BoundReport",
    "BoundVerdict",
    "BruteReport",
    "ComponentReport",
    "ConstraintSet",
    "EpsSweep",
    "KktSolution",
    "MultifunctionGraph",
    "PolyVector",
    "Polynomial",
    "SimplexWeight",
    "SolutionCloud",
    "SolverConfig",
    "SolverGuardError",
    "VerifyReport",
    "VopProblem",
    "VviProblem",
    "assemble",
    "bound_for",
    "bound_vop",
    "bound_vvi",
    "brute_force_vi",
    "build_formula",
    "builtin_problem",
    "check_bound",
    "coste_bound",
    "count_components",
    "derive_vvi",
    "eps_sweep",
    "export",
    "export_smt",
    "export_text",
    "graph_from_dict",
    "graph_to_csv",
    "graph_to_dict",
    "load_problem",
    "parse_poly",
    "parse_text",
    "problem_from_dict",
    "problem_to_dict",
    "residual",
    "run_sweep",
    "sample_simplex",
    "save_problem",
    "solve_vi_xi",
    "validate",
    "verify_example",
    "write_csv",
]
