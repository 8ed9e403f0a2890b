"""(k, ell)-center and (k, ell)-median on sets of curves.

Both objectives are meant to be evaluated on curves that were already mapped
to low dimension; every distance here is a continuous Fréchet distance in
whatever dimension the inputs live in.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .curves import Curve
from .errors import CandidateBudgetExceeded, ParamOutOfRange, TooFewCurves
from .frechet import frechet_distance
from .simplify import simplify_curve

OBJECTIVES = ("center", "median")
MEDIAN_BUDGET = 10**6


@dataclass
class ClusteringResult:
    """Centers, the nearest-center index of every input (in input order) and the cost."""

    centers: List[Curve]
    assignment: Tuple[int, ...]
    cost: float
    objective: str
    ids: Tuple[str, ...] = ()
    extras: Dict[str, object] = field(default_factory=dict)

    @property
    def assignment_by_id(self) -> Dict[str, int]:
        return dict(zip(self.ids, self.assignment))

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "cost": self.cost,
            "centers": [{"id": c.id, "vertices": c.vertices.tolist()} for c in self.centers],
            "assignment": {i: a for i, a in zip(self.ids, self.assignment)},
        }


def _natural_key(s: str):
    return [(0, int(t), "") if t.isdigit() else (1, 0, t) for t in re.split(r"(\d+)", s) if t]


def id_order(curves: Sequence[Curve]) -> List[int]:
    """Input positions sorted by id (numeric runs compared as numbers), position breaking ties."""
    return sorted(range(len(curves)), key=lambda i: (_natural_key(curves[i].id), i))


def _distance_matrix(curves: Sequence[Curve], centers: Sequence[Curve]) -> np.ndarray:
    return np.array([[frechet_distance(c, z) for z in centers] for c in curves], dtype=np.float64).reshape(
        len(curves), len(centers)
    )


def clustering_cost(curves: Sequence[Curve], centers: Sequence[Curve], objective: str = "center") -> float:
    """Max (``center``) or sum (``median``) over the inputs of the distance to the nearest center."""
    if objective not in OBJECTIVES:
        raise ParamOutOfRange(f"unknown objective {objective!r}")
    if not centers:
        raise ParamOutOfRange("need at least one center")
    if not curves:
        return 0.0
    near = _distance_matrix(curves, centers).min(axis=1)
    return float(near.max() if objective == "center" else near.sum())


def _check_k(curves, k, ell):
    if k < 1:
        raise ParamOutOfRange("k must be at least 1")
    if ell < 2:
        raise ParamOutOfRange("ell must be at least 2")
    if len(curves) < k:
        raise TooFewCurves(f"k = {k} exceeds the number of curves ({len(curves)})")


def kl_center(curves: Sequence[Curve], k: int, ell: int) -> ClusteringResult:
    """Farthest-first traversal with simplified centers.

    Starts from the simplification of the curve with the lowest id; each of
    the next ``k - 1`` rounds adds the simplification of the curve farthest
    from the current centers (ties to the lowest id).
    """
    curves = list(curves)
    _check_k(curves, k, ell)
    order = id_order(curves)
    rank = {i: r for r, i in enumerate(order)}
    first = order[0]
    centers = [simplify_curve(curves[first], ell)]
    near = np.array([frechet_distance(c, centers[0]) for c in curves])
    assign = np.zeros(len(curves), dtype=np.int64)
    chosen = [first]
    for step in range(1, k):
        far = max(order, key=lambda i: (near[i], -rank[i]))
        chosen.append(far)
        z = simplify_curve(curves[far], ell)
        centers.append(z)
        dz = np.array([frechet_distance(c, z) for c in curves])
        closer = dz < near
        assign[closer] = step
        near = np.minimum(near, dz)
    return ClusteringResult(
        centers,
        tuple(int(a) for a in assign),
        float(near.max()),
        "center",
        tuple(c.id for c in curves),
        {"chosen": [curves[i].id for i in chosen]},
    )


def median_candidates(curves: Sequence[Curve], ell: int) -> List[Curve]:
    """Inputs themselves when ``ell`` covers every complexity, else their simplifications."""
    if ell >= max(len(c) for c in curves):
        return list(curves)
    return [simplify_curve(c, ell) for c in curves]


def _local_search(dist: np.ndarray, k: int) -> Tuple[float, Tuple[int, ...]]:
    single = dist.sum(axis=0)
    current = sorted(np.argsort(single, kind="stable")[:k].tolist())
    best = float(dist[:, current].min(axis=1).sum())
    improved = True
    while improved:
        improved = False
        for pos in range(k):
            for cand in range(dist.shape[1]):
                if cand in current:
                    continue
                trial = current.copy()
                trial[pos] = cand
                cost = float(dist[:, trial].min(axis=1).sum())
                if cost < best * (1 - 1e-12) - 1e-15:
                    best, current = cost, sorted(trial)
                    improved = True
                    break
            if improved:
                break
    return best, tuple(current)


def kl_median(curves: Sequence[Curve], k: int, ell: int, mode: str = "exhaustive") -> ClusteringResult:
    """Best (``exhaustive``) or single-swap locally optimal (``local_search``) candidate medians."""
    curves = list(curves)
    _check_k(curves, k, ell)
    if mode not in ("exhaustive", "local_search"):
        raise ParamOutOfRange(f"unknown mode {mode!r}")
    cands = median_candidates(curves, ell)
    dist = _distance_matrix(curves, cands)
    if mode == "exhaustive":
        if math.comb(len(cands), k) > MEDIAN_BUDGET:
            raise CandidateBudgetExceeded(f"C({len(cands)}, {k}) exceeds {MEDIAN_BUDGET}")
        best, best_set = math.inf, ()
        for subset in itertools.combinations(range(len(cands)), k):
            cost = float(dist[:, list(subset)].min(axis=1).sum())
            if cost < best:
                best, best_set = cost, subset
    else:
        best, best_set = _local_search(dist, k)
    sub = dist[:, list(best_set)]
    return ClusteringResult(
        [cands[i] for i in best_set],
        tuple(int(a) for a in sub.argmin(axis=1)),
        float(sub.min(axis=1).sum()),
        "median",
        tuple(c.id for c in curves),
        {"mode": mode, "candidate_indices": list(best_set)},
    )


def kl_median_cost(curves: Sequence[Curve], k: int, ell: int, mode: str = "exhaustive") -> float:
    return kl_median(curves, k, ell, mode).cost


@dataclass
class SandwichReport:
    r_original: float
    r_embedded: float
    lower: float
    upper: float
    factor: float
    ell_covers: bool

    @property
    def passed(self) -> bool:
        tol = 1e-9 * max(1.0, self.r_original)
        return self.lower - tol <= self.r_embedded <= self.upper + tol

    def to_dict(self) -> dict:
        return {
            "r_original": self.r_original,
            "r_embedded": self.r_embedded,
            "lower": self.lower,
            "upper": self.upper,
            "factor": self.factor,
            "ell_covers_complexity": self.ell_covers,
            "passed": self.passed,
        }


def median_sandwich_check(original: Sequence[Curve], embedded: Sequence[Curve], k: int, ell: int,
                          eps: float) -> SandwichReport:
    """Compare candidate-restricted median optima before and after a certified map.

    With ``r`` the optimum on the original curves, the embedded optimum must
    lie in ``[c * r / 2, 2 (1 + eps) r]`` where ``c = (1 - eps) / 2`` if
    ``ell`` is at least the largest complexity and
    ``c = (1 - eps) / (6 (1 + eps))`` otherwise.  The factor 2 on either side
    absorbs the restriction to candidate centers.
    """
    if not 0 <= eps < 1:
        raise ParamOutOfRange("eps must lie in [0, 1)")
    original, embedded = list(original), list(embedded)
    if len(original) != len(embedded):
        raise ParamOutOfRange("original and embedded sets differ in size")
    r = kl_median_cost(original, k, ell)
    rf = kl_median_cost(embedded, k, ell)
    covers = ell >= max(len(c) for c in original)
    factor = (1 - eps) / 2 if covers else (1 - eps) / (6 * (1 + eps))
    return SandwichReport(r, rf, factor * r / 2, 2 * (1 + eps) * r, factor, covers)
