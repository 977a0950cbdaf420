"""HTTP service exposing the pipeline: validate, bound, sweep, components,
formula export, and golden verification.

The service is the single integration surface; the command-line tool is a
thin client that posts to these endpoints (in-process by default).  Request
and response bodies are pydantic models, so the wire schema is discoverable
from /docs.  Error convention: schema and lookup problems are HTTP 400 with
code "schema_error"; resource-guard refusals (for example too many
inequality constraints to enumerate) are HTTP 400 with code "solver_guard".
"""

from __future__ import annotations

from importlib.metadata import PackageNotFoundError, version
from typing import Any, Literal

from fastapi import FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, model_validator

from .bounds import bound_for
from .formula import build_formula, export
from .model import (ModelError, Problem, builtin_problem, problem_from_dict,
                    validate)
from .solve import SolverConfig, SolverGuardError
from .sweep import assemble, csv_to_points, graph_to_dict, run_sweep
from .topo import DEFAULT_EPS_GRID, count_components, eps_sweep, report_to_dict
from .verify import BUILTIN_EXAMPLES, verify_example

try:
    VERSION = version("pvvi")
except PackageNotFoundError:              # running from a source tree
    VERSION = "0.0.0.dev"

app = FastAPI(title="pvvi", version=VERSION)


@app.exception_handler(RequestValidationError)
async def _on_validation_error(request, exc):
    # One error shape for every client mistake, not pydantic's 422 list.
    first = exc.errors()[0] if exc.errors() else {}
    where = ".".join(str(p) for p in first.get("loc", ()) if p != "body")
    message = first.get("msg", "invalid request")
    if where:
        message = f"{where}: {message}"
    return JSONResponse(
        status_code=400,
        content={"detail": {"code": "schema_error", "message": message}})


def _schema_error(message: str) -> HTTPException:
    return HTTPException(status_code=400,
                         detail={"code": "schema_error", "message": message})


def _guard_error(message: str) -> HTTPException:
    return HTTPException(status_code=400,
                         detail={"code": "solver_guard", "message": message})


class ProblemRef(BaseModel):
    """A problem given inline (wire-format dict) or by builtin name."""

    builtin: str | None = None
    problem: dict[str, Any] | None = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.builtin is None) == (self.problem is None):
            raise ValueError("provide exactly one of 'builtin' or 'problem'")
        return self

    def resolve(self) -> Problem:
        try:
            if self.builtin is not None:
                return builtin_problem(self.builtin)
            return problem_from_dict(self.problem)
        except (ModelError, ValueError) as exc:
            raise _schema_error(str(exc)) from exc


class SweepOptions(ProblemRef):
    grid: int = Field(400, ge=1)
    seed: int = Field(42, ge=0)
    box: float = Field(10.0, gt=0.0)
    threads: int | None = Field(None, ge=1)

    def config(self) -> SolverConfig:
        return SolverConfig(rng_seed=self.seed, box=self.box)


class HealthResponse(BaseModel):
    status: str
    version: str


class FindingModel(BaseModel):
    level: str
    message: str


class ValidateRequest(ProblemRef):
    probe: bool = True


class ValidateResponse(BaseModel):
    kind: str
    n: int
    m: int
    findings: list[FindingModel]


class BoundResponse(BaseModel):
    formula: str
    d: int
    exponent: int
    bound: str                    # decimal string, exact
    inputs: dict[str, int]
    warnings: list[str]
    notes: list[str]


class ConfigModel(BaseModel):
    newton_tol: float
    residual_accept: float
    max_iter: int
    min_damp: float
    starts: int
    box: float
    dedupe_tol: float
    rng_seed: int


class SolutionModel(BaseModel):
    x: list[float]
    ineq_multipliers: list[float]
    eq_multipliers: list[float]
    active: list[int]
    residual: float


class EntryModel(BaseModel):
    weight: list[float]
    solutions: list[SolutionModel]


class SweepResponse(BaseModel):
    kind: str
    problem_hash: str
    n: int
    m: int
    resolution: int
    config: ConfigModel
    entries: list[EntryModel]


class ComponentsRequest(SweepOptions):
    builtin: str | None = None
    problem: dict[str, Any] | None = None
    csv: str | None = None
    eps: float = Field(0.5, gt=0.0)
    eps_list: list[float] | None = None
    cloud: Literal["weak", "proper"] = "weak"

    @model_validator(mode="after")
    def _exactly_one(self):
        given = [v is not None for v in (self.builtin, self.problem, self.csv)]
        if sum(given) != 1:
            raise ValueError("provide exactly one of 'builtin', 'problem', 'csv'")
        return self


class ComponentDetail(BaseModel):
    size: int
    bbox_min: list[float]
    bbox_max: list[float]
    possibly_unbounded: bool


class ComponentsResponse(BaseModel):
    eps: float
    count: int
    sizes: list[int]
    plateau: list[float] | None
    components: list[ComponentDetail]
    eps_sweep: list[tuple[float, int]] | None = None
    suggested_count: int | None = None


class FormulaRequest(ProblemRef):
    target: Literal["weak", "pareto", "proper", "graph"] = "weak"
    dialect: Literal["text", "smt"] = "text"


class FormulaResponse(BaseModel):
    target: str
    dialect: str
    content: str


class VerifyRequest(BaseModel):
    name: str
    grid: int = Field(400, ge=1)
    seed: int = Field(42, ge=0)
    box: float = Field(10.0, gt=0.0)
    eps: float = Field(0.5, gt=0.0)
    threads: int | None = Field(None, ge=1)


class CheckModel(BaseModel):
    name: str
    expected: str
    actual: str
    tolerance: str
    status: str


class VerifyResponse(BaseModel):
    example: str
    grid: int
    seed: int
    box: float
    eps: float
    passed: bool
    checks: list[CheckModel]
    table: str


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=VERSION)


@app.post("/validate", response_model=ValidateResponse)
def validate_endpoint(req: ValidateRequest) -> ValidateResponse:
    problem = req.resolve()
    findings = validate(problem, probe_convexity=req.probe)
    return ValidateResponse(
        kind=problem.kind, n=problem.n, m=problem.m,
        findings=[FindingModel(level=f.level, message=f.message)
                  for f in findings])


@app.post("/bound", response_model=BoundResponse)
def bound_endpoint(req: ProblemRef) -> BoundResponse:
    return BoundResponse(**bound_for(req.resolve()).to_dict())


@app.post("/sweep", response_model=SweepResponse)
def sweep_endpoint(req: SweepOptions) -> SweepResponse:
    problem = req.resolve()
    try:
        graph = run_sweep(problem, req.grid, req.config(), threads=req.threads)
    except SolverGuardError as exc:
        raise _guard_error(str(exc)) from exc
    return SweepResponse(**graph_to_dict(graph))


@app.post("/components", response_model=ComponentsResponse)
def components_endpoint(req: ComponentsRequest) -> ComponentsResponse:
    if req.csv is not None:
        try:
            cloud = csv_to_points(req.csv)
        except ValueError as exc:
            raise _schema_error(str(exc)) from exc
    else:
        problem = req.resolve()
        try:
            graph = run_sweep(problem, req.grid, req.config(),
                              threads=req.threads)
        except SolverGuardError as exc:
            raise _guard_error(str(exc)) from exc
        cloud = assemble(graph, req.cloud)
    report = count_components(cloud, req.eps)
    diag = None
    if req.eps_list is not None:
        eps_list = req.eps_list or list(DEFAULT_EPS_GRID)
        try:
            diag = eps_sweep(cloud, eps_list)
        except ValueError as exc:
            raise _schema_error(str(exc)) from exc
    return ComponentsResponse(**report_to_dict(report, diag))


@app.post("/formula", response_model=FormulaResponse)
def formula_endpoint(req: FormulaRequest) -> FormulaResponse:
    problem = req.resolve()
    ast = build_formula(problem, req.target)
    return FormulaResponse(target=req.target, dialect=req.dialect,
                           content=export(ast, req.dialect))


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest) -> VerifyResponse:
    if req.name not in BUILTIN_EXAMPLES:
        raise _schema_error(
            f"unknown example {req.name!r}; golden expectations exist for "
            f"{BUILTIN_EXAMPLES}")
    report = verify_example(req.name, grid=req.grid, seed=req.seed,
                            box=req.box, eps=req.eps, threads=req.threads)
    data = report.to_dict()
    return VerifyResponse(table=report.format_table(), **data)


__all__ = ["app", "VERSION"]
