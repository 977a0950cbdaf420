"""KKT systems for the scalarized variational inequality at a fixed weight.

For a weight xi on the standard simplex, a point x solves the scalarized
inequality over K = {g <= 0, h = 0} iff there are multipliers (lambda, mu)
with

    sum_l xi_l F_lk(x) + sum_i lambda_i dg_i/dx_k + sum_j mu_j dh_j/dx_k = 0
    lambda_i g_i(x) = 0   for every inequality separately
    g(x) <= 0, h(x) = 0, lambda >= 0.

Systems are assembled as polynomials over the joint variable space
(x_1..x_n, lambda_1.., mu_1..) so they can be differentiated symbolically
and handed to the Newton solver.  ``build_active_system`` restricts to an
active set A: multipliers outside A are fixed to zero and the complementarity
rows are replaced by g_i = 0 for i in A, which yields a square system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import VviProblem
from .poly import Polynomial, PolyVector

# Weights closer than this to the simplex boundary are treated as boundary.
INTERIOR_MIN = 1e-9
# Sum-to-one tolerance for weights.
WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class SimplexWeight:
    """A point of the standard simplex: nonnegative entries summing to one."""

    weights: tuple[float, ...]

    def __post_init__(self):
        if not self.weights:
            raise ValueError("weight vector must be nonempty")
        if any(w < 0.0 for w in self.weights):
            raise ValueError(f"weights must be nonnegative, got {self.weights}")
        if abs(sum(self.weights) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights must sum to 1, got sum {sum(self.weights)!r}")

    @property
    def m(self) -> int:
        return len(self.weights)

    @property
    def interior(self) -> bool:
        """True if strictly inside the simplex (up to the boundary tolerance)."""
        return min(self.weights) >= INTERIOR_MIN

    def __getitem__(self, i: int) -> float:
        return self.weights[i]


@dataclass(frozen=True)
class ActiveSet:
    """Sorted subset of inequality-constraint indices treated as tight."""

    indices: tuple[int, ...]

    def __post_init__(self):
        if tuple(sorted(set(self.indices))) != self.indices:
            raise ValueError("active set indices must be sorted and unique")

    def __contains__(self, i: int) -> bool:
        return i in self.indices

    def __len__(self) -> int:
        return len(self.indices)

    def label(self) -> str:
        """Compact text form used in CSV output, e.g. '0;2' ('' when empty)."""
        return ";".join(str(i) for i in self.indices)


def _joint_names(n: int, ineq: int, eq: int) -> tuple[str, ...]:
    return tuple(
        [f"x{i+1}" for i in range(n)]
        + [f"lam{i+1}" for i in range(ineq)]
        + [f"mu{j+1}" for j in range(eq)]
    )


def _stationarity(problem: VviProblem, weight: SimplexWeight,
                  lam_slots: Sequence[int | None]) -> list[Polynomial]:
    """Stationarity rows over the joint space.

    ``lam_slots[i]`` is the joint-variable index carrying lambda_i, or None
    when that multiplier is pinned to zero (inactive constraint).
    """
    n = problem.n
    K = problem.constraints
    total = n + sum(1 for s in lam_slots if s is not None) + len(K.equalities)
    embed = list(range(n))
    mu_base = n + sum(1 for s in lam_slots if s is not None)
    rows = []
    for k in range(n):
        row = Polynomial.zero(total)
        for l in range(problem.m):
            if weight[l] != 0.0:
                row = row + problem.operators[l][k].remap(total, embed) * weight[l]
        for i, g in enumerate(K.inequalities):
            slot = lam_slots[i]
            if slot is None:
                continue
            lam_var = Polynomial.variable(total, slot)
            row = row + lam_var * g.partial(k).remap(total, embed)
        for j, h in enumerate(K.equalities):
            mu_var = Polynomial.variable(total, mu_base + j)
            row = row + mu_var * h.partial(k).remap(total, embed)
        rows.append(row)
    return rows


@dataclass(frozen=True)
class KktSystem:
    """Full first-order system at a weight (not square: inequalities recorded
    separately as sign conditions)."""

    weight: SimplexWeight
    n: int
    ineq_count: int
    eq_count: int
    equations: tuple[Polynomial, ...]          # stationarity, complementarity, h
    sign_lower: tuple[Polynomial, ...]         # polynomials required >= 0 (the lambdas)
    sign_upper: tuple[Polynomial, ...]         # polynomials required <= 0 (the g_i)

    @property
    def total_vars(self) -> int:
        return self.n + self.ineq_count + self.eq_count

    def names(self) -> tuple[str, ...]:
        return _joint_names(self.n, self.ineq_count, self.eq_count)


def build_full_system(problem: VviProblem, weight: SimplexWeight) -> KktSystem:
    """Assemble the full KKT system over (x, lambda, mu)."""
    if weight.m != problem.m:
        raise ValueError(f"weight has {weight.m} entries, problem has m={problem.m}")
    K = problem.constraints
    n, ni, ne = problem.n, len(K.inequalities), len(K.equalities)
    total = n + ni + ne
    embed = list(range(n))
    lam_slots = [n + i for i in range(ni)]
    equations = _stationarity(problem, weight, lam_slots)
    for i, g in enumerate(K.inequalities):
        equations.append(Polynomial.variable(total, n + i) * g.remap(total, embed))
    for j, h in enumerate(K.equalities):
        equations.append(h.remap(total, embed))
    sign_lower = tuple(Polynomial.variable(total, n + i) for i in range(ni))
    sign_upper = tuple(g.remap(total, embed) for g in K.inequalities)
    return KktSystem(
        weight=weight, n=n, ineq_count=ni, eq_count=ne,
        equations=tuple(equations), sign_lower=sign_lower, sign_upper=sign_upper,
    )


@dataclass(frozen=True)
class ActiveSystem:
    """Square Newton target for one active set.

    Unknown layout: x_1..x_n, then lambda_i for i in the active set (sorted),
    then mu_1..mu_|J|.
    """

    weight: SimplexWeight
    active: ActiveSet
    n: int
    ineq_count: int
    eq_count: int
    equations: tuple[Polynomial, ...]

    @property
    def size(self) -> int:
        return self.n + len(self.active) + self.eq_count

    def unpack(self, z: Sequence[float]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Split a solution vector into (x, full lambda, mu)."""
        z = np.asarray(z, dtype=float)
        x = z[: self.n]
        lam = np.zeros(self.ineq_count)
        for slot, i in enumerate(self.active.indices):
            lam[i] = z[self.n + slot]
        mu = z[self.n + len(self.active):]
        return x, lam, mu


def build_active_system(problem: VviProblem, weight: SimplexWeight,
                        active: ActiveSet) -> ActiveSystem:
    """Square system for one active set: stationarity + g_A = 0 + h = 0."""
    if weight.m != problem.m:
        raise ValueError(f"weight has {weight.m} entries, problem has m={problem.m}")
    K = problem.constraints
    n, ni, ne = problem.n, len(K.inequalities), len(K.equalities)
    if any(i < 0 or i >= ni for i in active.indices):
        raise ValueError(f"active set {active.indices} out of range for {ni} inequalities")
    total = n + len(active) + ne
    embed = list(range(n))
    lam_slots: list[int | None] = [None] * ni
    for slot, i in enumerate(active.indices):
        lam_slots[i] = n + slot
    equations = _stationarity(problem, weight, lam_slots)
    for i in active.indices:
        equations.append(K.inequalities[i].remap(total, embed))
    for h in K.equalities:
        equations.append(h.remap(total, embed))
    return ActiveSystem(
        weight=weight, active=active, n=n, ineq_count=ni, eq_count=ne,
        equations=tuple(equations),
    )


def enumerate_active_sets(ineq_count: int) -> list[ActiveSet]:
    """All subsets of inequality indices, ordered by size then lexicographic."""
    from itertools import combinations

    out = []
    for size in range(ineq_count + 1):
        for combo in combinations(range(ineq_count), size):
            out.append(ActiveSet(tuple(combo)))
    return out


def residual(problem: VviProblem, weight: SimplexWeight,
             x: Sequence[float], lam: Sequence[float],
             mu: Sequence[float] = ()) -> float:
    """Max-norm violation of the full first-order conditions at (x, lam, mu).

    Components: stationarity rows, |lambda_i g_i(x)| per constraint,
    |h_j(x)|, the positive parts of g_i(x), and the negative parts of
    lambda_i.  Evaluated directly from the problem data.
    """
    K = problem.constraints
    x = list(map(float, x))
    lam = list(map(float, lam))
    mu = list(map(float, mu))
    if len(lam) != len(K.inequalities) or len(mu) != len(K.equalities):
        raise ValueError("multiplier lengths must match the constraint counts")
    worst = 0.0
    for k in range(problem.n):
        val = sum(weight[l] * problem.operators[l][k].evaluate(x) for l in range(problem.m))
        val += sum(lam[i] * K.inequalities[i].partial(k).evaluate(x)
                   for i in range(len(K.inequalities)))
        val += sum(mu[j] * K.equalities[j].partial(k).evaluate(x)
                   for j in range(len(K.equalities)))
        worst = max(worst, abs(val))
    for i, g in enumerate(K.inequalities):
        gv = g.evaluate(x)
        worst = max(worst, abs(lam[i] * gv), gv, -lam[i])
    for h in K.equalities:
        worst = max(worst, abs(h.evaluate(x)))
    return worst
