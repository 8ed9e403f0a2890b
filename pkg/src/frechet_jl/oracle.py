"""Brute-force ground truth used by the test-suite.

Nothing here shares distance code with the modules it checks beyond the
primitives of :mod:`frechet_jl.curves`.  Every routine is exponential or
otherwise slow and refuses instances above a hard cap.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .curves import TANGENCY_SLACK, Curve, Segment, ball_segment_intersection
from .errors import CapExceeded

LAMBDA_SLACK = 1e-12


@dataclass(frozen=True)
class OracleBand:
    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= x <= self.upper + tol


def _verts(c) -> np.ndarray:
    return c.vertices if isinstance(c, Curve) else np.asarray(c, dtype=np.float64)


def _dist(p, q) -> float:
    return math.sqrt(sum((x - y) * (x - y) for x, y in zip(p, q)))


def brute_discrete_frechet(a, b) -> float:
    """Min over all monotone vertex couplings of the largest paired distance.

    Plain recursion without memoisation, so every coupling is visited.
    """
    va, vb = _verts(a).tolist(), _verts(b).tolist()
    if len(va) + len(vb) > 14:
        raise CapExceeded("brute_discrete_frechet is capped at |a| + |b| <= 14")
    p, q = len(va), len(vb)

    def walk(i, j, worst):
        worst = max(worst, _dist(va[i], vb[j]))
        if i == p - 1 and j == q - 1:
            return worst
        best = math.inf
        if i + 1 < p:
            best = min(best, walk(i + 1, j, worst))
        if j + 1 < q:
            best = min(best, walk(i, j + 1, worst))
        if i + 1 < p and j + 1 < q:
            best = min(best, walk(i + 1, j + 1, worst))
        return best

    return walk(0, 0, 0.0)


def resample(c, delta: float) -> np.ndarray:
    """Insert vertices so that consecutive vertices are at most ``delta`` apart."""
    v = _verts(c)
    out = [v[0]]
    for a, b in zip(v[:-1], v[1:]):
        n = max(1, int(math.ceil(_dist(a, b) / delta)))
        for s in range(1, n + 1):
            out.append(a + (b - a) * (s / n))
    return np.array(out)


def _dp_discrete(a: np.ndarray, b: np.ndarray) -> float:
    # anti-diagonal sweep; independent of the compiled kernels
    p, q = len(a), len(b)
    d = np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2))
    ca = np.full((p, q), np.inf)
    for s in range(p + q - 1):
        i = np.arange(max(0, s - q + 1), min(p, s + 1))
        j = s - i
        if s == 0:
            ca[0, 0] = d[0, 0]
            continue
        best = np.full(i.shape, np.inf)
        m = i > 0
        best[m] = np.minimum(best[m], ca[i[m] - 1, j[m]])
        m = j > 0
        best[m] = np.minimum(best[m], ca[i[m], j[m] - 1])
        m = (i > 0) & (j > 0)
        best[m] = np.minimum(best[m], ca[i[m] - 1, j[m] - 1])
        ca[i, j] = np.maximum(best, d[i, j])
    return float(ca[-1, -1])


def resampled_frechet_band(a, b, delta: float) -> OracleBand:
    """Band ``[max(U - 2 delta, 0), U]`` around the continuous Fréchet distance.

    ``U`` is the discrete Fréchet distance of both curves resampled at
    spacing at most ``delta``.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    u = _dp_discrete(resample(a, delta), resample(b, delta))
    return OracleBand(max(u - 2.0 * delta, 0.0), u)


def enumerate_valid_sequences(na: int, nb: int, monotone: bool) -> List[Tuple[Tuple[int, int], ...]]:
    """All cell walks from ``(1, 1)`` to ``(na - 1, nb - 1)`` without repeated cells.

    ``na`` and ``nb`` are vertex counts.  Monotone walks use right/up steps
    only.
    """
    cap = 7 if monotone else 5
    if max(na, nb) > cap:
        raise CapExceeded(f"sequence enumeration capped at {cap} vertices per curve")
    if min(na, nb) < 2:
        raise ValueError("curves need at least 2 vertices")
    ni, nj = na - 1, nb - 1
    target = (ni, nj)
    steps = ((1, 0), (0, 1)) if monotone else ((1, 0), (0, 1), (-1, 0), (0, -1))
    out = []
    path = [(1, 1)]
    on_path = {(1, 1)}

    def extend():
        cur = path[-1]
        if cur == target:
            out.append(tuple(path))
            return
        for di, dj in steps:
            nxt = (cur[0] + di, cur[1] + dj)
            if 1 <= nxt[0] <= ni and 1 <= nxt[1] <= nj and nxt not in on_path:
                path.append(nxt)
                on_path.add(nxt)
                extend()
                path.pop()
                on_path.discard(nxt)

    extend()
    return out


class _Predicates:
    """Memoised truth values of the distance predicates at one radius."""

    def __init__(self, a: np.ndarray, b: np.ndarray, r: float):
        self.a, self.b, self.r = a, b, r
        self.cache: Dict[tuple, bool] = {}

    def _iv(self, seg_pts, k, center):
        return ball_segment_intersection(Segment(seg_pts[k - 1], seg_pts[k]), center, self.r)

    def __call__(self, *key) -> bool:
        if key not in self.cache:
            self.cache[key] = self._eval(*key)
        return self.cache[key]

    def _eval(self, kind, *idx) -> bool:
        a, b, r = self.a, self.b, self.r
        if kind == 1:
            return _dist(a[0], b[0]) <= r + TANGENCY_SLACK
        if kind == 2:
            return _dist(a[-1], b[-1]) <= r + TANGENCY_SLACK
        if kind == 3:  # edge i of a, vertex j of b
            i, j = idx
            return bool(self._iv(a, i, b[j - 1]))
        if kind == 4:  # vertex i of a, edge j of b
            i, j = idx
            return bool(self._iv(b, j, a[i - 1]))
        if kind == 5:  # vertices i < k of b on edge j of a
            i, j, k = idx
            first, second = self._iv(a, j, b[i - 1]), self._iv(a, j, b[k - 1])
        else:  # vertices j < k of a on edge i of b
            i, j, k = idx
            first, second = self._iv(b, i, a[j - 1]), self._iv(b, i, a[k - 1])
        return bool(first) and bool(second) and first.lo <= second.hi + LAMBDA_SLACK


def _sequence_holds(seq, pred: _Predicates, monotone: bool) -> bool:
    if not (pred(1) and pred(2)):
        return False
    cells = set(seq)
    if monotone:
        # index sets by membership; for monotone walks these are exactly the crossings
        for i, j in cells:
            if (i, j - 1) in cells and not pred(3, i, j):
                return False
            if (i - 1, j) in cells and not pred(4, i, j):
                return False
        for (i, j_prev), (i2, k) in itertools.product(cells, cells):
            # (i, j - 1) and (i, k) in the walk with j < k
            if i == i2 and j_prev + 1 < k and not pred(5, j_prev + 1, i, k):
                return False
        for (i_prev, j), (k, j2) in itertools.product(cells, cells):
            if j == j2 and i_prev + 1 < k and not pred(6, j, i_prev + 1, k):
                return False
        return True
    for (i0, j0), (i1, j1) in zip(seq, seq[1:]):
        if i0 == i1:
            if not pred(3, i0, max(j0, j1)):
                return False
        elif not pred(4, max(i0, i1), j0):
            return False
    return True


def predicate_oracle_decision(a, b, r: float, monotone: bool = True) -> bool:
    """Decide by trying every (monotone) cell walk against the predicate system."""
    va, vb = _verts(a), _verts(b)
    seqs = enumerate_valid_sequences(len(va), len(vb), monotone)
    pred = _Predicates(va, vb, float(r))
    return any(_sequence_holds(s, pred, monotone) for s in seqs)


def brute_min_bottleneck(weights: np.ndarray, ell: int) -> Tuple[float, Tuple[int, ...]]:
    """Exhaustive minimum over index subsequences with at most ``ell`` vertices.

    ``weights[i, j]`` (0-based, ``i < j``) is the shortcut weight.  Returns
    the optimal cost and the 1-based path, preferring fewer vertices and then
    the lexicographically smallest sequence.
    """
    n = weights.shape[0]
    if n > 12:
        raise CapExceeded("brute_min_bottleneck is capped at 12 vertices")
    best = (math.inf, 0, ())
    for size in range(2, min(ell, n) + 1):
        for inner in itertools.combinations(range(1, n - 1), size - 2):
            idx = (0,) + inner + (n - 1,)
            cost = max(float(weights[i, j]) for i, j in zip(idx, idx[1:]))
            cand = (cost, size, tuple(i + 1 for i in idx))
            if cand < best:
                best = cand
    return best[0], best[2]


def brute_kl_center_candidate(curves: Sequence[Curve], k: int, ell: int) -> float:
    """Best center cost over all ``k``-subsets of the inputs' simplifications."""
    from .frechet import frechet_distance
    from .simplify import simplify_curve

    if math.comb(len(curves), k) > 10**5:
        raise CapExceeded("too many candidate subsets")
    cands = [simplify_curve(c, ell) for c in curves]
    dist = np.array([[frechet_distance(c, s) for s in cands] for c in curves])
    best = math.inf
    for subset in itertools.combinations(range(len(cands)), k):
        best = min(best, float(dist[:, list(subset)].min(axis=1).max()))
    return best


def grid_search_segment_center(c, xs: Sequence[float], ys: Sequence[float]) -> float:
    """Smallest Fréchet distance from planar curve ``c`` to a segment with grid endpoints."""
    from .frechet import frechet_distance

    grid = [(x, y) for x in xs for y in ys]
    best = math.inf
    for p in grid:
        for q in grid:
            if p == q:
                continue
            best = min(best, frechet_distance(c, np.array([p, q], dtype=float)))
    return best
