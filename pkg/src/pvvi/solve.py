"""Numerical solution of the scalarized inequality at a fixed weight.

Strategy: enumerate active sets of the inequality constraints, build the
square KKT system for each, run a batched damped Newton iteration from a
deterministic scrambled low-discrepancy cloud of starting points, then keep
the roots that satisfy the sign conditions and re-verify the full
first-order residual directly against the problem data.

Also provides a slow grid/witness evaluator of the inequality itself,
independent of any KKT reasoning, for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .kkt import (ActiveSet, SimplexWeight, build_active_system,
                  enumerate_active_sets, residual)
from .model import VviProblem
from .poly import Polynomial

# Enumerating active sets is exponential in the inequality count.
MAX_ACTIVE_INEQ = 12
# Slack allowed on the sign conditions when filtering Newton roots.
SIGN_TOL = 1e-9


class SolverGuardError(Exception):
    """Raised when a problem exceeds a hard resource guard."""


@dataclass(frozen=True)
class SolverConfig:
    newton_tol: float = 1e-12        # relative step size declaring convergence
    residual_accept: float = 1e-8    # max full-system residual of a kept root
    max_iter: int = 100
    min_damp: float = 1e-4
    starts: int = 27                 # Newton starting points per active set
    box: float = 10.0                # starts drawn from [-box, box]^dim
    # Max-norm distance merging duplicate roots.  Needs to sit above the
    # stall radius of degenerate double roots: where an active constraint's
    # multiplier hits zero the active system's Jacobian is singular at the
    # solution and Newton stalls at O(sqrt(residual noise)) ~ 1e-6 from it.
    dedupe_tol: float = 1e-5
    rng_seed: int = 42


@dataclass(frozen=True)
class KktSolution:
    """One verified first-order point at a weight."""

    weight: SimplexWeight
    point: tuple[float, ...]
    ineq_multipliers: tuple[float, ...]
    eq_multipliers: tuple[float, ...]
    active: ActiveSet
    residual: float


def scalarized_operator(problem: VviProblem, weight: SimplexWeight) -> list[Polynomial]:
    """Components of sum_l xi_l F_l."""
    if weight.m != problem.m:
        raise ValueError(f"weight has {weight.m} entries, problem has m={problem.m}")
    out = []
    for k in range(problem.n):
        row = Polynomial.zero(problem.n)
        for l in range(problem.m):
            if weight[l] != 0.0:
                row = row + problem.operators[l][k] * weight[l]
        out.append(row)
    return out


def _active_bitmask(active: ActiveSet) -> int:
    return sum(1 << i for i in active.indices)


def halton_starts(dim: int, count: int, box: float, seed: int,
                  active: ActiveSet) -> np.ndarray:
    """Deterministic scrambled Halton cloud in [-box, box]^dim.

    Seeding depends only on (seed, active set), never on the weight, so the
    same starts are reused at every weight and refining a weight grid can
    only re-find the same roots at shared weights.
    """
    rng = np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(_active_bitmask(active),)))
    sampler = qmc.Halton(d=dim, scramble=True, seed=rng)
    u = sampler.random(count)
    return (2.0 * u - 1.0) * box


def newton_solve(equations: tuple[Polynomial, ...], starts: np.ndarray,
                 cfg: SolverConfig) -> np.ndarray:
    """Batched damped Newton on a square polynomial system.

    Returns the distinct iterates whose residual ended below the acceptance
    threshold (undeduplicated, one row per surviving start).
    """
    k = equations[0].nvars if equations else 0
    if len(equations) != k:
        raise ValueError(f"system is not square: {len(equations)} equations, {k} unknowns")
    grad = [[e.partial(v) for v in range(k)] for e in equations]
    Z = np.atleast_2d(np.asarray(starts, dtype=float)).copy()
    S = Z.shape[0]

    def f_batch(P: np.ndarray) -> np.ndarray:
        if P.shape[0] == 0:
            return np.zeros((0, k))
        return np.stack([e.eval_many(P) for e in equations], axis=1)

    def j_batch(P: np.ndarray) -> np.ndarray:
        out = np.empty((P.shape[0], k, k))
        for r in range(k):
            for c in range(k):
                out[:, r, c] = grad[r][c].eval_many(P)
        return out

    F = f_batch(Z)
    res = np.max(np.abs(F), axis=1)
    alive = np.isfinite(res)
    for _ in range(cfg.max_iter):
        work = np.flatnonzero(alive)
        if work.size == 0:
            break
        J = j_batch(Z[work])
        det = np.linalg.det(J)
        good = np.isfinite(det) & (np.abs(det) > 1e-300)
        alive[work[~good]] = False       # singular Jacobian, abandon the start
        work = work[good]
        if work.size == 0:
            break
        d = np.linalg.solve(J[good], F[work][..., None])[..., 0]
        dlen = np.max(np.abs(d), axis=1)
        t = np.ones(work.size)
        cur = res[work]
        trial = Z[work] - d
        new_res = np.max(np.abs(f_batch(trial)), axis=1)
        while True:
            worse = (~np.isfinite(new_res) | (new_res >= cur)) \
                & (t > cfg.min_damp) & (dlen > 0)
            if not worse.any():
                break
            t[worse] /= 2.0
            trial[worse] = Z[work[worse]] - t[worse, None] * d[worse]
            new_res[worse] = np.max(np.abs(f_batch(trial[worse])), axis=1)
        Z[work] = trial
        Fw = f_batch(trial)
        F[work] = Fw
        res[work] = np.max(np.abs(Fw), axis=1)
        alive[work] = np.isfinite(res[work])
        step = t * dlen
        settled = step < cfg.newton_tol * (1.0 + np.max(np.abs(Z[work]), axis=1))
        alive[work[settled]] = False
    keep = np.isfinite(res) & (res <= cfg.residual_accept)
    return Z[keep]


def solve_vi_xi(problem: VviProblem, weight: SimplexWeight,
                cfg: SolverConfig | None = None) -> list[KktSolution]:
    """All verified first-order points of the scalarized inequality at one weight.

    Deterministic for a fixed (problem, weight, config).  Roots are merged
    when closer than ``cfg.dedupe_tol`` in x (max-norm); the representative
    kept is the one with the smallest full residual, ties broken toward the
    smaller active set.
    """
    cfg = cfg or SolverConfig()
    K = problem.constraints
    ni = len(K.inequalities)
    if ni > MAX_ACTIVE_INEQ:
        raise SolverGuardError(
            f"{ni} inequality constraints exceeds the active-set "
            f"enumeration guard ({MAX_ACTIVE_INEQ})")
    candidates: list[KktSolution] = []
    for active in enumerate_active_sets(ni):
        system = build_active_system(problem, weight, active)
        starts = halton_starts(system.size, cfg.starts, cfg.box, cfg.rng_seed, active)
        roots = newton_solve(system.equations, starts, cfg)
        for z in roots:
            x, lam, mu = system.unpack(z)
            if any(lam[i] < -SIGN_TOL for i in active.indices):
                continue
            if any(g.evaluate(x) > SIGN_TOL for g in K.inequalities):
                continue
            r = residual(problem, weight, x, lam, mu)
            if not np.isfinite(r) or r > cfg.residual_accept:
                continue
            candidates.append(KktSolution(
                weight=weight,
                point=tuple(float(v) for v in x),
                ineq_multipliers=tuple(float(v) for v in lam),
                eq_multipliers=tuple(float(v) for v in mu),
                active=active,
                residual=float(r),
            ))
    candidates.sort(key=lambda s: (s.residual, len(s.active), _active_bitmask(s.active)))
    kept: list[KktSolution] = []
    for cand in candidates:
        dup = any(max(abs(a - b) for a, b in zip(cand.point, other.point))
                  <= cfg.dedupe_tol for other in kept)
        if not dup:
            kept.append(cand)
    kept.sort(key=lambda s: s.point)
    return kept


@dataclass(frozen=True, eq=False)
class BruteReport:
    """Grid evaluation of the inequality itself, no first-order reasoning."""

    weight: SimplexWeight
    box: float
    step: float
    points: np.ndarray            # feasible candidate grid points, (P, n)
    gaps: np.ndarray              # min_y <G(x), y - x> per candidate, (P,)
    operator_scale: float         # max |G| component over the candidates

    def best(self) -> tuple[np.ndarray, float]:
        """Candidate with the largest gap (closest to solving)."""
        if self.points.shape[0] == 0:
            raise ValueError("empty feasible grid")
        i = int(np.argmax(self.gaps))
        return self.points[i], float(self.gaps[i])

    def near_points(self, tol: float | None = None) -> np.ndarray:
        """Candidates whose gap is above -tol (default: the grid step)."""
        tol = self.step if tol is None else tol
        if self.points.shape[0] == 0:
            return self.points
        return self.points[self.gaps >= -tol]


def brute_force_vi(problem: VviProblem, weight: SimplexWeight,
                   box: float, step: float,
                   inflation: float = 2.0,
                   chunk: int = 4096) -> BruteReport:
    """Evaluate the inequality on a grid, independent of any KKT reasoning.

    Candidates x run over the near-feasible points (constraints within one
    grid step) of a uniform grid on [-box, box]^n.  For each, the gap
    min_y <G(x), y - x> is taken over the feasible points of the same grid
    inflated by ``inflation`` about the origin, so interior candidates are
    not certified merely because improving directions leave the window.
    Gaps near zero from below mark approximate solutions.
    """
    n = problem.n
    G = scalarized_operator(problem, weight)
    axis = np.arange(-box, box + 0.5 * step, step)
    X = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    X = X[problem.constraints.feasible_mask(X, tol=step)]
    if X.shape[0] == 0:
        return BruteReport(weight=weight, box=box, step=step, points=X,
                           gaps=np.zeros(0), operator_scale=0.0)
    waxis = np.arange(-box * inflation, box * inflation + 0.5 * step, step)
    Y = np.stack(np.meshgrid(*([waxis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    Y = Y[problem.constraints.feasible_mask(Y, tol=step)]
    Gx = np.stack([g.eval_many(X) for g in G], axis=1)       # (P, n)
    base = np.sum(Gx * X, axis=1)                            # <G(x), x>
    best = np.full(X.shape[0], np.inf)
    for i in range(0, Y.shape[0], chunk):
        best = np.minimum(best, (Y[i:i + chunk] @ Gx.T).min(axis=0))
    return BruteReport(weight=weight, box=box, step=step, points=X,
                       gaps=best - base,
                       operator_scale=float(np.max(np.abs(Gx), initial=0.0)))
