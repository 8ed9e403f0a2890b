"""Vertex-restricted minimum-error simplification.

Shortcut graph over the vertices of a curve, weighted by the Fréchet distance
between each sub-curve and the segment joining its end vertices; the
simplification is the start-to-end path with at most ``ell`` vertices whose
largest weight is minimal.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .curves import Curve
from .errors import ParamOutOfRange
from .frechet import _vertices, frechet_distance


@dataclass(frozen=True)
class SimplificationGraph:
    """Upper-triangular shortcut weights, ``weights[i, j]`` for 0-based ``i < j``."""

    weights: np.ndarray

    @property
    def n_vertices(self) -> int:
        return self.weights.shape[0]

    def edge_weight(self, i: int, j: int) -> float:
        """Weight of the shortcut ``v_i v_j`` (1-based, ``i < j``)."""
        if not 1 <= i < j <= self.n_vertices:
            raise IndexError(f"need 1 <= i < j <= {self.n_vertices}")
        return float(self.weights[i - 1, j - 1])


@dataclass(frozen=True)
class Simplification:
    curve: Curve
    indices: Tuple[int, ...]
    bottleneck: float
    error: float


def build_simplification_graph(c) -> SimplificationGraph:
    v = _vertices(c)
    n = len(v)
    w = np.full((n, n), np.nan)
    for i in range(n - 1):
        w[i, i + 1] = 0.0
        for j in range(i + 2, n):
            w[i, j] = frechet_distance(v[i : j + 1], v[[i, j]])
    w.setflags(write=False)
    return SimplificationGraph(w)


def _hops_to_end(w: np.ndarray, thr: float) -> np.ndarray:
    n = w.shape[0]
    hops = np.full(n, np.iinfo(np.int64).max // 2, dtype=np.int64)
    hops[n - 1] = 0
    for i in range(n - 2, -1, -1):
        ok = w[i, i + 1 :] <= thr
        if np.any(ok):
            hops[i] = hops[i + 1 :][ok].min() + 1
    return hops


def min_bottleneck_path(g: SimplificationGraph, ell: int) -> Tuple[Tuple[int, ...], float]:
    """Bottleneck-optimal path from ``v_1`` to ``v_n`` with at most ``ell`` vertices.

    Ties go to fewer vertices, then to the lexicographically smallest index
    sequence.  Returns the 1-based path and its cost.
    """
    if ell < 2:
        raise ParamOutOfRange("ell must be at least 2")
    w = g.weights
    n = w.shape[0]
    if n == 2:
        return (1, 2), 0.0
    cand = np.unique(w[np.isfinite(w)])
    lo, hi = 0, len(cand) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _hops_to_end(w, cand[mid])[0] <= ell - 1:
            hi = mid
        else:
            lo = mid + 1
    thr = float(cand[lo])
    hops = _hops_to_end(w, thr)
    path = [0]
    i = 0
    while i != n - 1:
        for j in range(i + 1, n):
            if w[i, j] <= thr and hops[j] == hops[i] - 1:
                path.append(j)
                i = j
                break
    cost = max(float(w[a, b]) for a, b in zip(path, path[1:]))
    return tuple(k + 1 for k in path), cost


def simplify(c, ell: int, graph: SimplificationGraph | None = None) -> Simplification:
    """Simplify ``c`` to at most ``ell`` vertices and report the exact error."""
    if ell < 2:
        raise ParamOutOfRange("ell must be at least 2")
    v = _vertices(c)
    cid = c.id if isinstance(c, Curve) else ""
    if ell >= len(v):
        curve = c if isinstance(c, Curve) else Curve(v, id=cid)
        return Simplification(curve, tuple(range(1, len(v) + 1)), 0.0, 0.0)
    g = graph if graph is not None else build_simplification_graph(v)
    path, cost = min_bottleneck_path(g, ell)
    out = Curve(v[[k - 1 for k in path]], id=cid)
    return Simplification(out, path, cost, frechet_distance(v, out))


def simplify_curve(c, ell: int) -> Curve:
    return simplify(c, ell).curve
