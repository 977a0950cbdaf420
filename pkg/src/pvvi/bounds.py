"""Exact component-count bounds of the form d*(2d-1)^e.

All arithmetic uses Python integers, so the bounds are exact no matter how
large the exponent gets; JSON output renders them as decimal strings.  The
degree parameter d comes from the problem data:

  inequality form:  d = max{1, deg g_i, deg F_lk} + 1
  optimization:     d = max{deg h_j, deg g_i, deg(df_l/dx_k)} + 1

with exponent 2m + 2n + 3|I| + 2|J| + 1 in both cases.  The optimization
convention has no constant 1 inside the max, so fully constant data gives
d = 1 and bound 1 (a convex description has one component); the report notes
when the two conventions disagree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import VopProblem, VviProblem, derive_vvi
from .topo import ComponentReport


@dataclass(frozen=True)
class BoundReport:
    formula: str                 # "vvi" | "vop" | "coste_generic"
    d: int
    exponent: int
    bound: int                   # exact, arbitrary precision
    inputs: dict = field(default_factory=dict)
    warnings: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("degree parameter must be >= 1")
        if self.bound != self.d * (2 * self.d - 1) ** self.exponent:
            raise ValueError("bound does not match d*(2d-1)^exponent")

    def to_dict(self) -> dict:
        return {
            "formula": self.formula,
            "d": self.d,
            "exponent": self.exponent,
            "bound": str(self.bound),
            "inputs": dict(self.inputs),
            "warnings": list(self.warnings),
            "notes": list(self.notes),
        }


def _exact_bound(d: int, exponent: int) -> int:
    return d * (2 * d - 1) ** exponent


def degree_param_vvi(problem: VviProblem) -> int:
    degrees = [1]
    degrees += [g.total_degree() for g in problem.constraints.inequalities]
    for F in problem.operators:
        degrees += [F[k].total_degree() for k in range(len(F))]
    return max(degrees) + 1


def degree_param_vop(problem: VopProblem) -> int:
    degrees = [h.total_degree() for h in problem.constraints.equalities]
    degrees += [g.total_degree() for g in problem.constraints.inequalities]
    for f in problem.objectives:
        degrees += [f.partial(k).total_degree() for k in range(problem.n)]
    return max(degrees, default=0) + 1


def _hypothesis_warnings(K) -> tuple[str, ...]:
    out = []
    if not K.convexity_asserted:
        out.append("unsupported hypotheses: convexity of the constraint "
                   "functions is not asserted")
    if not K.acq_asserted:
        out.append("unsupported hypotheses: the constraint qualification "
                   "is not asserted")
    return tuple(out)


def bound_vvi(problem: VviProblem) -> BoundReport:
    K = problem.constraints
    ni, ne = len(K.inequalities), len(K.equalities)
    d = degree_param_vvi(problem)
    exponent = 2 * problem.m + 2 * problem.n + 3 * ni + 2 * ne + 1
    return BoundReport(
        formula="vvi", d=d, exponent=exponent, bound=_exact_bound(d, exponent),
        inputs={"m": problem.m, "n": problem.n, "ineq": ni, "eq": ne},
        warnings=_hypothesis_warnings(K),
    )


def bound_vop(problem: VopProblem) -> BoundReport:
    K = problem.constraints
    ni, ne = len(K.inequalities), len(K.equalities)
    d = degree_param_vop(problem)
    exponent = 2 * problem.m + 2 * problem.n + 3 * ni + 2 * ne + 1
    notes = []
    if d < 2:
        notes.append(
            "degree parameter is 1 (all objective derivatives and constraints "
            "constant); the inequality-form convention would give d = 2; "
            "bound 1 is valid since a convex description has at most one "
            "component")
    return BoundReport(
        formula="vop", d=d, exponent=exponent, bound=_exact_bound(d, exponent),
        inputs={"m": problem.m, "n": problem.n, "ineq": ni, "eq": ne},
        warnings=_hypothesis_warnings(K),
        notes=tuple(notes),
    )


def bound_for(problem) -> BoundReport:
    """Dispatch on the problem kind."""
    if isinstance(problem, VopProblem):
        return bound_vop(problem)
    return bound_vvi(problem)


def coste_bound(d: int, relations: int, nvars: int) -> BoundReport:
    """Generic bound d*(2d-1)^(s+n-1) for a set cut out by s polynomial
    relations of degree at most d in n variables; d = 1 gives 1 exactly
    (degree-1 descriptions are convex)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if relations < 1:
        raise ValueError("relations must be >= 1")
    if nvars < 1:
        raise ValueError("nvars must be >= 1")
    exponent = relations + nvars - 1
    return BoundReport(
        formula="coste_generic", d=d, exponent=exponent,
        bound=_exact_bound(d, exponent),
        inputs={"d": d, "relations": relations, "vars": nvars},
    )


@dataclass(frozen=True)
class BoundVerdict:
    ok: bool
    count: int
    bound: int
    message: str

    def to_dict(self) -> dict:
        return {"ok": self.ok, "count": self.count,
                "bound": str(self.bound), "message": self.message}


def check_bound(report: BoundReport, components: ComponentReport) -> BoundVerdict:
    """Compare an observed component count against the bound.

    The bound is a theorem, so a violation can only mean a bug somewhere in
    the pipeline; the verdict says so explicitly.
    """
    ok = components.count <= report.bound
    if ok:
        msg = (f"observed {components.count} component(s) <= bound "
               f"{report.bound}")
    else:
        msg = (f"BOUND VIOLATED: observed {components.count} component(s) > "
               f"bound {report.bound}; this indicates a defect in the "
               f"solver or the count, not in the bound")
    return BoundVerdict(ok=ok, count=components.count,
                        bound=report.bound, message=msg)


def vop_bounds_agree(problem: VopProblem) -> bool:
    """The optimization bound equals the inequality bound of the derived
    problem whenever some datum is nonconstant (the conventions coincide)."""
    return bound_vop(problem).bound == bound_vvi(derive_vvi(problem)).bound
