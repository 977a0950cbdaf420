"""Connected-component estimation on sampled solution clouds.

A cloud is a finite sample of a semi-algebraic set, so its topology is
estimated, not certified: two points are joined when their Euclidean
distance is at most eps, and graph components stand in for connected
components of the underlying set.  The estimate is trustworthy when the
sample spacing is well below eps and eps is well below the separation
between true components; ``eps_sweep`` makes that choice auditable by
reporting the count across a whole range of eps and flagging the longest
plateau.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .sweep import SolutionCloud

# Default eps range scanned by eps_sweep when the caller gives none.
DEFAULT_EPS_GRID = tuple(round(0.05 * k, 10) for k in range(1, 41))


def _as_points(cloud) -> tuple[np.ndarray, float | None]:
    if isinstance(cloud, SolutionCloud):
        return cloud.points, cloud.box
    pts = np.asarray(cloud, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1) if pts.size else pts.reshape(0, 1)
    return pts, None


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller index wins the root, keeping labels order-independent
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass(frozen=True, eq=False)
class ComponentReport:
    """Partition of a cloud into eps-connected pieces.

    Labels are stable: components are numbered by their smallest member
    after sorting the points, so shuffling the input cannot relabel them.
    ``possibly_unbounded`` flags components reaching within eps of the
    cloud's clipping box, where truncation may hide a larger set.
    """

    eps: float
    count: int
    labels: np.ndarray               # (P,), component id per point
    component_sizes: tuple[int, ...]
    bbox_min: np.ndarray             # (count, n)
    bbox_max: np.ndarray             # (count, n)
    possibly_unbounded: tuple[bool, ...]


def count_components(cloud, eps: float) -> ComponentReport:
    """Label eps-neighborhood graph components (Euclidean metric)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    pts, box = _as_points(cloud)
    P = pts.shape[0]
    if P == 0:
        return ComponentReport(
            eps=eps, count=0, labels=np.zeros(0, dtype=int),
            component_sizes=(), bbox_min=np.zeros((0, pts.shape[1] if pts.ndim == 2 else 0)),
            bbox_max=np.zeros((0, pts.shape[1] if pts.ndim == 2 else 0)),
            possibly_unbounded=())
    order = np.lexsort(pts.T[::-1])      # sort rows lexicographically
    sorted_pts = pts[order]
    uf = _UnionFind(P)
    pairs = cKDTree(sorted_pts).query_pairs(eps, output_type="ndarray")
    for a, b in pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]:
        uf.union(int(a), int(b))
    roots = [uf.find(i) for i in range(P)]
    label_of_root: dict[int, int] = {}
    sorted_labels = np.empty(P, dtype=int)
    for i, r in enumerate(roots):        # roots appear in smallest-member order
        if r not in label_of_root:
            label_of_root[r] = len(label_of_root)
        sorted_labels[i] = label_of_root[r]
    count = len(label_of_root)
    labels = np.empty(P, dtype=int)
    labels[order] = sorted_labels
    sizes = np.bincount(sorted_labels, minlength=count)
    n = pts.shape[1]
    bbox_min = np.full((count, n), np.inf)
    bbox_max = np.full((count, n), -np.inf)
    for lab in range(count):
        member = sorted_pts[sorted_labels == lab]
        bbox_min[lab] = member.min(axis=0)
        bbox_max[lab] = member.max(axis=0)
    if box is None:
        flagged = (False,) * count
    else:
        near = np.maximum(np.abs(bbox_min), np.abs(bbox_max)) >= box - eps
        flagged = tuple(bool(v) for v in near.any(axis=1))
    return ComponentReport(
        eps=eps, count=count, labels=labels,
        component_sizes=tuple(int(s) for s in sizes),
        bbox_min=bbox_min, bbox_max=bbox_max,
        possibly_unbounded=flagged)


@dataclass(frozen=True)
class EpsSweep:
    """Component counts across an ascending eps range."""

    pairs: tuple[tuple[float, int], ...]
    plateau: tuple[float, float]     # eps span of the chosen plateau
    suggested_count: int


def eps_sweep(cloud, eps_list=DEFAULT_EPS_GRID) -> EpsSweep:
    """Count components at each eps; suggest the longest-plateau count.

    Counts are nonincreasing in eps.  Plateau length is measured as the eps
    span of a maximal constant run; ties go to the larger-eps run, since
    fine-scale counts are dominated by sample spacing artifacts.
    """
    eps_list = [float(e) for e in eps_list]
    if not eps_list:
        raise ValueError("eps_list must be nonempty")
    if any(b <= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly ascending")
    pairs = tuple((e, count_components(cloud, e).count) for e in eps_list)
    runs: list[tuple[float, float, int]] = []
    for e, c in pairs:
        if runs and runs[-1][2] == c:
            runs[-1] = (runs[-1][0], e, c)
        else:
            runs.append((e, e, c))
    # Round the span so float noise in the grid cannot decide a tie; equal
    # spans go to the larger-eps run (small-eps counts track sample spacing).
    best = max(runs, key=lambda r: (round(r[1] - r[0], 9), r[0]))
    return EpsSweep(pairs=pairs, plateau=(best[0], best[1]),
                    suggested_count=best[2])


def report_to_dict(report: ComponentReport, sweep: EpsSweep | None = None) -> dict:
    out = {
        "eps": report.eps,
        "count": report.count,
        "sizes": list(report.component_sizes),
        "plateau": list(sweep.plateau) if sweep is not None else None,
        "components": [
            {
                "size": report.component_sizes[i],
                "bbox_min": [float(v) for v in report.bbox_min[i]],
                "bbox_max": [float(v) for v in report.bbox_max[i]],
                "possibly_unbounded": report.possibly_unbounded[i],
            }
            for i in range(report.count)
        ],
    }
    if sweep is not None:
        out["eps_sweep"] = [[e, c] for e, c in sweep.pairs]
        out["suggested_count"] = sweep.suggested_count
    return out
