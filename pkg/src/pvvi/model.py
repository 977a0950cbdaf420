"""Problem definitions: constrained vector variational inequalities and
vector optimization problems with polynomial data.

The feasible set is K = {x : g_i(x) <= 0, h_j(x) = 0} with affine h_j.
A VVI instance carries m operator vectors F_l : R^n -> R^n; a VOP instance
carries m objective polynomials f_l whose gradients induce the associated VVI.

Problems round-trip through a small JSON schema::

    {"kind": "vvi"|"vop", "n": int, "m": int,
     "F": [[poly, ...], ...] or "f": [poly, ...],
     "g": [poly, ...], "h": [poly, ...],
     "convex": bool, "acq": bool}

where every polynomial is text over variables x1..xn.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .poly import Polynomial, PolyVector, default_names, format_poly, parse_poly


class ModelError(ValueError):
    """Raised for structurally invalid problems or problem files."""


@dataclass(frozen=True)
class ConstraintSet:
    """Feasible set {x in R^n : g_i(x) <= 0, h_j(x) = 0}.

    Equality constraints must be affine; convexity of the g_i and the
    constraint-qualification hypothesis are caller-asserted flags, optionally
    probed numerically by :func:`validate`.
    """

    n: int
    inequalities: tuple[Polynomial, ...] = ()
    equalities: tuple[Polynomial, ...] = ()
    convexity_asserted: bool = False
    acq_asserted: bool = False

    def __post_init__(self):
        for g in self.inequalities:
            if g.nvars != self.n:
                raise ModelError(f"inequality over {g.nvars} variables, expected {self.n}")
        for h in self.equalities:
            if h.nvars != self.n:
                raise ModelError(f"equality over {h.nvars} variables, expected {self.n}")
            if h.total_degree() > 1:
                raise ModelError(
                    f"equality constraint must be affine, got degree {h.total_degree()}"
                )

    def contains(self, point: Sequence[float], tol: float = 1e-9) -> bool:
        return all(g.evaluate(point) <= tol for g in self.inequalities) and all(
            abs(h.evaluate(point)) <= tol for h in self.equalities
        )

    def feasible_mask(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        """Boolean mask of feasible rows in a (k, n) batch."""
        mask = np.ones(len(points), dtype=bool)
        for g in self.inequalities:
            mask &= g.eval_many(points) <= tol
        for h in self.equalities:
            mask &= np.abs(h.eval_many(points)) <= tol
        return mask


@dataclass(frozen=True)
class VviProblem:
    """Vector variational inequality with operators F_1..F_m over K."""

    n: int
    m: int
    operators: tuple[PolyVector, ...]
    constraints: ConstraintSet

    def __post_init__(self):
        if self.m != len(self.operators):
            raise ModelError(f"m={self.m} but {len(self.operators)} operators given")
        for F in self.operators:
            if len(F) != self.n or F.nvars != self.n:
                raise ModelError("each operator must map R^n to R^n")
        if self.constraints.n != self.n:
            raise ModelError("constraint dimension mismatch")

    @property
    def kind(self) -> str:
        return "vvi"


@dataclass(frozen=True)
class VopProblem:
    """Vector optimization problem with objectives f_1..f_m over K."""

    n: int
    m: int
    objectives: tuple[Polynomial, ...]
    constraints: ConstraintSet

    def __post_init__(self):
        if self.m != len(self.objectives):
            raise ModelError(f"m={self.m} but {len(self.objectives)} objectives given")
        for f in self.objectives:
            if f.nvars != self.n:
                raise ModelError("each objective must be a polynomial on R^n")
        if self.constraints.n != self.n:
            raise ModelError("constraint dimension mismatch")

    @property
    def kind(self) -> str:
        return "vop"


Problem = VviProblem | VopProblem


def derive_vvi(problem: VopProblem) -> VviProblem:
    """Associated VVI of a VOP: the l-th operator is the gradient of f_l."""
    return VviProblem(
        n=problem.n,
        m=problem.m,
        operators=tuple(f.gradient() for f in problem.objectives),
        constraints=problem.constraints,
    )


@dataclass
class Finding:
    level: str  # "error" | "warning"
    message: str


def _hessian(p: Polynomial) -> list[list[Polynomial]]:
    grads = [p.partial(i) for i in range(p.nvars)]
    return [[grads[i].partial(j) for j in range(p.nvars)] for i in range(p.nvars)]


def validate(problem: Problem, probe_convexity: bool = True, seed: int = 0) -> list[Finding]:
    """Structural and numerical sanity checks.

    Errors are produced for ill-formed data (most are already rejected at
    construction); warnings for unasserted hypotheses and for inequality
    constraints whose Hessian shows a negative eigenvalue on a random sample
    (convexity probe; a warning, never an error).
    """
    findings: list[Finding] = []
    K = problem.constraints
    if not K.convexity_asserted:
        findings.append(Finding("warning", "convexity of the constraint set is not asserted"))
    if not K.acq_asserted:
        findings.append(Finding("warning", "constraint qualification is not asserted"))
    if probe_convexity and K.inequalities:
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-5.0, 5.0, size=(200, problem.n))
        for gi, g in enumerate(K.inequalities):
            if g.total_degree() <= 1:
                continue
            H = _hessian(g)
            vals = np.stack(
                [np.stack([H[i][j].eval_many(pts) for j in range(problem.n)], axis=1)
                 for i in range(problem.n)],
                axis=1,
            )
            eig = np.linalg.eigvalsh((vals + np.transpose(vals, (0, 2, 1))) / 2.0)
            if eig.min() < -1e-8:
                findings.append(
                    Finding("warning", f"inequality constraint {gi} appears nonconvex on a random sample")
                )
    return findings


# -- JSON schema -----------------------------------------------------------


def _require(cond: bool, message: str):
    if not cond:
        raise ModelError(message)


def problem_from_dict(data: dict[str, Any]) -> Problem:
    """Build a problem from the JSON wire format (see module docstring)."""
    _require(isinstance(data, dict), "problem document must be an object")
    kind = data.get("kind")
    _require(kind in ("vvi", "vop"), f"kind must be 'vvi' or 'vop', got {kind!r}")
    n = data.get("n")
    m = data.get("m")
    _require(isinstance(n, int) and n >= 1, "n must be a positive integer")
    _require(isinstance(m, int) and m >= 1, "m must be a positive integer")
    names = default_names(n)

    def parse_list(key: str) -> tuple[Polynomial, ...]:
        raw = data.get(key, [])
        _require(isinstance(raw, list), f"{key} must be a list of polynomial strings")
        out = []
        for k, s in enumerate(raw):
            _require(isinstance(s, str), f"{key}[{k}] must be a string")
            try:
                out.append(parse_poly(s, names))
            except ValueError as exc:
                raise ModelError(f"{key}[{k}]: {exc}") from exc
        return tuple(out)

    constraints = ConstraintSet(
        n=n,
        inequalities=parse_list("g"),
        equalities=parse_list("h"),
        convexity_asserted=bool(data.get("convex", False)),
        acq_asserted=bool(data.get("acq", False)),
    )

    if kind == "vvi":
        raw_F = data.get("F")
        _require(isinstance(raw_F, list) and len(raw_F) == m, "F must be a list of m operator rows")
        operators = []
        for l, row in enumerate(raw_F):
            _require(isinstance(row, list) and len(row) == n, f"F[{l}] must list n polynomials")
            comps = []
            for k, s in enumerate(row):
                _require(isinstance(s, str), f"F[{l}][{k}] must be a string")
                try:
                    comps.append(parse_poly(s, names))
                except ValueError as exc:
                    raise ModelError(f"F[{l}][{k}]: {exc}") from exc
            operators.append(PolyVector(tuple(comps)))
        return VviProblem(n=n, m=m, operators=tuple(operators), constraints=constraints)

    raw_f = data.get("f")
    _require(isinstance(raw_f, list) and len(raw_f) == m, "f must be a list of m polynomials")
    objectives = []
    for l, s in enumerate(raw_f):
        _require(isinstance(s, str), f"f[{l}] must be a string")
        try:
            objectives.append(parse_poly(s, names))
        except ValueError as exc:
            raise ModelError(f"f[{l}]: {exc}") from exc
    return VopProblem(n=n, m=m, objectives=tuple(objectives), constraints=constraints)


def problem_to_dict(problem: Problem) -> dict[str, Any]:
    names = default_names(problem.n)
    doc: dict[str, Any] = {
        "kind": problem.kind,
        "n": problem.n,
        "m": problem.m,
    }
    if isinstance(problem, VviProblem):
        doc["F"] = [[format_poly(p, names) for p in F.components] for F in problem.operators]
    else:
        doc["f"] = [format_poly(f, names) for f in problem.objectives]
    doc["g"] = [format_poly(g, names) for g in problem.constraints.inequalities]
    doc["h"] = [format_poly(h, names) for h in problem.constraints.equalities]
    doc["convex"] = problem.constraints.convexity_asserted
    doc["acq"] = problem.constraints.acq_asserted
    return doc


def load_problem(path: str | Path) -> Problem:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid JSON in {path}: {exc}") from exc
    return problem_from_dict(data)


def save_problem(problem: Problem, path: str | Path) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(problem), indent=2) + "\n")


def canonical_problem_bytes(problem: Problem) -> bytes:
    """Canonical serialization used for hashing runs."""
    return json.dumps(problem_to_dict(problem), sort_keys=True, separators=(",", ":")).encode()


_BUILTIN_FILES = {"po": "po.vvi.json", "vop": "vop.vop.json"}


def builtin_problem(name: str) -> Problem:
    """Load a packaged problem by short name ('po' or 'vop')."""
    from importlib import resources

    if name not in _BUILTIN_FILES:
        raise ModelError(f"unknown builtin problem {name!r}; choose from {sorted(_BUILTIN_FILES)}")
    text = resources.files("pvvi.data").joinpath(_BUILTIN_FILES[name]).read_text()
    return problem_from_dict(json.loads(text))
