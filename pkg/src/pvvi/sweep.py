"""Weight-grid sweeps: sample the simplex, solve every fiber, export.

The sweep output is the sampled graph of the solution map: one entry per
grid weight holding every verified first-order point found there (possibly
none).  Entries are kept in lexicographic weight order and each fiber is
sorted by point, so a sweep is byte-reproducible for a fixed problem,
resolution and configuration.
"""

from __future__ import annotations

import csv
import hashlib
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy.spatial import cKDTree

from .kkt import INTERIOR_MIN, ActiveSet, SimplexWeight
from .model import Problem, VopProblem, canonical_problem_bytes, derive_vvi
from .solve import KktSolution, SolverConfig, solve_vi_xi


def sample_simplex(m: int, resolution: int,
                   interior_only: bool = False) -> list[SimplexWeight]:
    """Uniform rational grid on the simplex: all (a_1/N, .., a_m/N) with
    nonnegative integers a_i summing to N, lexicographically ascending.
    ``interior_only`` keeps the points with every a_i >= 1."""
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    if m < 1:
        raise ValueError("m must be >= 1")

    def parts(total: int, slots: int):
        if slots == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in parts(total - first, slots - 1):
                yield (first,) + rest

    out = []
    for combo in parts(resolution, m):
        if interior_only and min(combo) < 1:
            continue
        out.append(SimplexWeight(tuple(a / resolution for a in combo)))
    return out


@dataclass(frozen=True)
class GraphEntry:
    weight: tuple[float, ...]
    solutions: tuple[KktSolution, ...]


@dataclass(frozen=True)
class MultifunctionGraph:
    """Sampled graph of the weight-to-solutions map."""

    kind: str                 # "vvi" or "vop", as the input problem was given
    problem_hash: str         # sha256 of the canonical problem serialization
    n: int
    m: int
    resolution: int
    config: SolverConfig
    entries: tuple[GraphEntry, ...]

    def fiber(self, weight: tuple[float, ...]) -> tuple[KktSolution, ...] | None:
        for e in self.entries:
            if e.weight == weight:
                return e.solutions
        return None


def problem_hash(problem: Problem) -> str:
    return hashlib.sha256(canonical_problem_bytes(problem)).hexdigest()


def _thread_count(explicit: int | None) -> int:
    if explicit is not None:
        return max(1, explicit)
    env = os.environ.get("PVVI_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def run_sweep(problem: Problem, resolution: int,
              cfg: SolverConfig | None = None,
              threads: int | None = None) -> MultifunctionGraph:
    """Solve every weight of the grid.  Vector optimization problems are
    first rewritten as inequality problems through objective gradients."""
    cfg = cfg or SolverConfig()
    vvi = derive_vvi(problem) if isinstance(problem, VopProblem) else problem
    weights = sample_simplex(problem.m, resolution)
    workers = _thread_count(threads)
    if workers == 1 or len(weights) == 1:
        fibers = [solve_vi_xi(vvi, w, cfg) for w in weights]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            fibers = list(pool.map(lambda w: solve_vi_xi(vvi, w, cfg), weights))
    entries = tuple(GraphEntry(weight=w.weights, solutions=tuple(sols))
                    for w, sols in zip(weights, fibers))
    return MultifunctionGraph(
        kind=problem.kind, problem_hash=problem_hash(problem),
        n=problem.n, m=problem.m, resolution=resolution,
        config=cfg, entries=entries,
    )


# Cloud kinds.  The "proper" kinds union over interior weights only; the
# "stationary" names mark VOP first-order clouds whose weak/proper Pareto
# meaning needs the convexity hypotheses.
CLOUD_KINDS = ("weak", "proper", "stationary", "proper_stationary")
_INTERIOR_KINDS = ("proper", "proper_stationary")


@dataclass(frozen=True, eq=False)
class SolutionCloud:
    """Deduplicated union of fibers, restricted to the start box."""

    kind: str
    points: np.ndarray               # (P, n), lexicographically sorted rows
    box: float
    dedupe_tol: float
    source: MultifunctionGraph

    def __len__(self) -> int:
        return int(self.points.shape[0])


def assemble(graph: MultifunctionGraph, kind: str = "weak",
             box: float | None = None,
             dedupe_tol: float | None = None) -> SolutionCloud:
    """Union of fibers as a point cloud, lexicographically sorted.

    Proper kinds use interior weights only.  Points outside [-box, box]^n
    are dropped (default: the solver start box), since coverage beyond the
    start box is not uniform; the box is recorded on the cloud.
    """
    if kind not in CLOUD_KINDS:
        raise ValueError(f"unknown cloud kind {kind!r}, expected one of {CLOUD_KINDS}")
    box = graph.config.box if box is None else box
    dedupe_tol = graph.config.dedupe_tol if dedupe_tol is None else dedupe_tol
    interior_only = kind in _INTERIOR_KINDS
    pts = []
    for e in graph.entries:
        if interior_only and min(e.weight) < INTERIOR_MIN:
            continue
        pts.extend(s.point for s in e.solutions)
    X = np.array(sorted(set(pts)), dtype=float) if pts else np.zeros((0, graph.n))
    if X.shape[0]:
        X = X[np.max(np.abs(X), axis=1) <= box + 1e-12]
    if X.shape[0] > 1:
        pairs = cKDTree(X).query_pairs(dedupe_tol, p=np.inf, output_type="ndarray")
        keep = np.ones(X.shape[0], dtype=bool)
        for a, b in pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]:
            if keep[a] and keep[b]:
                keep[b] = False      # lex-smaller representative wins
        X = X[keep]
    return SolutionCloud(kind=kind, points=X, box=box,
                         dedupe_tol=dedupe_tol, source=graph)


def _fmt(v: float) -> str:
    return repr(float(v))


def write_csv_rows(graph: MultifunctionGraph, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow([f"xi_{i+1}" for i in range(graph.m)]
               + [f"x_{j+1}" for j in range(graph.n)]
               + ["residual", "active_set"])
    for e in graph.entries:
        xi = [_fmt(v) for v in e.weight]
        if not e.solutions:
            w.writerow(xi + [""] * graph.n + ["", ""])
            continue
        for s in e.solutions:
            w.writerow(xi + [_fmt(v) for v in s.point]
                       + [_fmt(s.residual), s.active.label()])


def graph_to_csv(graph: MultifunctionGraph) -> str:
    buf = io.StringIO()
    write_csv_rows(graph, buf)
    return buf.getvalue()


def write_csv(graph: MultifunctionGraph, path: str) -> None:
    with open(path, "w", newline="") as fh:
        write_csv_rows(graph, fh)


def csv_to_points(text: str) -> np.ndarray:
    """Solution points of a sweep CSV (x_* columns; empty fibers skipped)."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        return np.zeros((0, 0))
    xcols = [i for i, h in enumerate(header)
             if h.startswith("x_") and h[2:].isdigit()]
    if not xcols:
        raise ValueError("CSV header has no x_<k> columns")
    pts = []
    for row in reader:
        if not row:
            continue
        vals = [row[i] for i in xcols]
        if any(v == "" for v in vals):
            continue
        pts.append([float(v) for v in vals])
    if not pts:
        return np.zeros((0, len(xcols)))
    return np.array(pts, dtype=float)


def graph_to_dict(graph: MultifunctionGraph) -> dict:
    return {
        "kind": graph.kind,
        "problem_hash": graph.problem_hash,
        "n": graph.n,
        "m": graph.m,
        "resolution": graph.resolution,
        "config": asdict(graph.config),
        "entries": [
            {
                "weight": list(e.weight),
                "solutions": [
                    {
                        "x": list(s.point),
                        "ineq_multipliers": list(s.ineq_multipliers),
                        "eq_multipliers": list(s.eq_multipliers),
                        "active": list(s.active.indices),
                        "residual": s.residual,
                    }
                    for s in e.solutions
                ],
            }
            for e in graph.entries
        ],
    }


def graph_from_dict(data: dict) -> MultifunctionGraph:
    cfg = SolverConfig(**data["config"])
    entries = []
    for e in data["entries"]:
        weight = tuple(float(v) for v in e["weight"])
        sols = tuple(
            KktSolution(
                weight=SimplexWeight(weight),
                point=tuple(float(v) for v in s["x"]),
                ineq_multipliers=tuple(float(v) for v in s["ineq_multipliers"]),
                eq_multipliers=tuple(float(v) for v in s["eq_multipliers"]),
                active=ActiveSet(tuple(int(i) for i in s["active"])),
                residual=float(s["residual"]),
            )
            for s in e["solutions"]
        )
        entries.append(GraphEntry(weight=weight, solutions=sols))
    return MultifunctionGraph(
        kind=data["kind"], problem_hash=data["problem_hash"],
        n=int(data["n"]), m=int(data["m"]), resolution=int(data["resolution"]),
        config=cfg, entries=tuple(entries),
    )
