"""Discrete, weak and continuous Fréchet distances.

Decisions run on the free-space diagram (``kernels``); distance values are
found by binary search over the sorted list of critical radii, which always
contains the exact distance.  The predicate layer (``eval_predicate``,
``eval_predicate_system``) expresses the same decision through cell sequences
and is used for certification witnesses and cross-checks.

Index conventions (1-based, as in ``v_1 .. v_m``):

* a cell ``(i, j)`` pairs edge ``i`` of ``a`` with edge ``j`` of ``b``;
* ``P3 (i, j)``: edge ``i`` of ``a`` against vertex ``j`` of ``b``;
* ``P4 (i, j)``: vertex ``i`` of ``a`` against edge ``j`` of ``b``;
* ``P5 (i, j, k)``: vertices ``i`` and ``k`` of ``b`` against edge ``j`` of ``a``,
  with ordered parameters ``t1 <= t2``;
* ``P6 (i, j, k)``: vertices ``j`` and ``k`` of ``a`` against edge ``i`` of ``b``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import kernels
from .curves import (
    EMPTY,
    TANGENCY_SLACK,
    Curve,
    Interval,
    Segment,
    ball_segment_intersection,
    point_on_segment,
)
from .errors import BadIndices, DimensionMismatch, Infeasible, InvalidSequence

LAMBDA_SLACK = 1e-12

Cell = Tuple[int, int]


def _vertices(c) -> np.ndarray:
    if isinstance(c, Curve):
        return c.vertices
    arr = np.asarray(c, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 2:
        raise ValueError(f"expected an (m, d) vertex array with m >= 2, got shape {arr.shape}")
    return arr


def _pair(a, b):
    va, vb = _vertices(a), _vertices(b)
    if va.shape[1] != vb.shape[1]:
        raise DimensionMismatch(f"curves live in different dimensions: {va.shape[1]} vs {vb.shape[1]}")
    return va, vb


# --------------------------------------------------------------------------
# distances


def discrete_frechet(a, b) -> float:
    va, vb = _pair(a, b)
    return float(kernels.discrete_frechet(va, vb))


def decide_frechet(a, b, r: float) -> bool:
    """True iff the Fréchet distance of ``a`` and ``b`` is at most ``r``."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    va, vb = _pair(a, b)
    return bool(kernels.decide_frechet(va, vb, float(r)))


def decide_weak_frechet(a, b, r: float) -> bool:
    """True iff the weak Fréchet distance of ``a`` and ``b`` is at most ``r``."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    va, vb = _pair(a, b)
    return bool(kernels.decide_weak_frechet(va, vb, float(r)))


def _point_segment_distances(pts: np.ndarray, curve: np.ndarray) -> np.ndarray:
    sa, sb = curve[:-1], curve[1:]
    d = sb - sa
    dd = np.einsum("ij,ij->i", d, d)
    rel = pts[:, None, :] - sa[None, :, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.einsum("pij,ij->pi", rel, d) / dd[None, :]
    t = np.where(dd[None, :] > 0, np.clip(t, 0.0, 1.0), 0.0)
    foot = sa[None, :, :] + t[:, :, None] * d[None, :, :]
    return np.linalg.norm(pts[:, None, :] - foot, axis=2).ravel()


def _bisector_values(curve: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Distances at which two vertices' balls meet on an edge of ``curve``."""
    m = pts.shape[0]
    if m < 2:
        return np.empty(0)
    ku, kw = np.triu_indices(m, k=1)
    u, w = pts[ku], pts[kw]
    diff = w - u
    mid = 0.5 * (u + w)
    out = []
    for a0, a1 in zip(curve[:-1], curve[1:]):
        e = a1 - a0
        denom = diff @ e
        num = np.einsum("ij,ij->i", mid - a0, diff)
        ok = np.abs(denom) > 0
        lam = np.full(denom.shape, np.nan)
        lam[ok] = num[ok] / denom[ok]
        sel = ok & (lam >= 0.0) & (lam <= 1.0)
        if np.any(sel):
            foot = a0[None, :] + lam[sel, None] * e[None, :]
            out.append(np.linalg.norm(u[sel] - foot, axis=1))
    return np.concatenate(out) if out else np.empty(0)


def critical_values(a, b) -> np.ndarray:
    """Sorted candidate radii; the Fréchet and weak Fréchet distances are among them.

    Contains the endpoint distances, all vertex-to-edge distances in both
    directions, and every radius at which two vertices of one curve reach a
    common point of an edge of the other (bisector hyperplane meets the edge).
    Exact duplicates are removed.
    """
    va, vb = _pair(a, b)
    vals = np.concatenate(
        [
            [np.linalg.norm(va[0] - vb[0]), np.linalg.norm(va[-1] - vb[-1])],
            _point_segment_distances(va, vb),
            _point_segment_distances(vb, va),
            _bisector_values(va, vb),
            _bisector_values(vb, va),
        ]
    )
    return np.unique(vals)


def _search(decide, va, vb) -> float:
    vals = critical_values(va, vb)
    lo, hi = 0, len(vals) - 1
    if not decide(va, vb, float(vals[hi])):
        # numerically unreachable; fall back to bisection above the list
        lo_r, hi_r = float(vals[hi]), float(vals[hi]) * 2 + 1.0
        while not decide(va, vb, hi_r):
            hi_r *= 2
        for _ in range(200):
            mid = 0.5 * (lo_r + hi_r)
            if mid in (lo_r, hi_r):
                break
            if decide(va, vb, mid):
                hi_r = mid
            else:
                lo_r = mid
        return hi_r
    while lo < hi:
        mid = (lo + hi) // 2
        if decide(va, vb, float(vals[mid])):
            hi = mid
        else:
            lo = mid + 1
    return float(vals[lo])


def frechet_distance(a, b) -> float:
    """Continuous Fréchet distance between two polygonal curves."""
    va, vb = _pair(a, b)
    return _search(kernels.decide_frechet, va, vb)


def weak_frechet_distance(a, b) -> float:
    """Weak Fréchet distance between two polygonal curves."""
    va, vb = _pair(a, b)
    return _search(kernels.decide_weak_frechet, va, vb)


# --------------------------------------------------------------------------
# free space


def _interval(lo: float, hi: float) -> Interval:
    if lo != lo:
        return EMPTY
    return Interval(float(lo), float(hi))


@dataclass(frozen=True)
class FreeSpaceDiagram:
    """Boundary feasibility intervals of every free-space cell at ``radius``.

    ``left(i, j)`` is the interval on edge ``j`` of ``b`` within ``radius`` of
    vertex ``i`` of ``a`` (``1 <= i <= |a|``); ``bottom(i, j)`` is the interval
    on edge ``i`` of ``a`` within ``radius`` of vertex ``j`` of ``b``
    (``1 <= j <= |b|``).  The rows ``i = |a|`` and ``j = |b|`` are the right
    and top boundaries of the diagram.
    """

    radius: float
    vert_lo: np.ndarray
    vert_hi: np.ndarray
    horiz_lo: np.ndarray
    horiz_hi: np.ndarray

    @property
    def shape(self) -> Cell:
        """Number of cells along ``a`` and ``b``."""
        return self.horiz_lo.shape[0], self.vert_lo.shape[1]

    def left(self, i: int, j: int) -> Interval:
        return _interval(self.vert_lo[i - 1, j - 1], self.vert_hi[i - 1, j - 1])

    def bottom(self, i: int, j: int) -> Interval:
        return _interval(self.horiz_lo[i - 1, j - 1], self.horiz_hi[i - 1, j - 1])


def build_free_space(a, b, r: float) -> FreeSpaceDiagram:
    if r < 0:
        raise ValueError("radius must be non-negative")
    va, vb = _pair(a, b)
    return FreeSpaceDiagram(float(r), *kernels.free_space(va, vb, float(r)))


# --------------------------------------------------------------------------
# predicates and cell sequences


_ARITY = {"P1": 0, "P2": 0, "P3": 2, "P4": 2, "P5": 3, "P6": 3}


@dataclass(frozen=True, order=True)
class PredicateId:
    kind: str
    indices: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise BadIndices(f"unknown predicate kind {self.kind!r}")
        if len(self.indices) != _ARITY[self.kind]:
            raise BadIndices(f"{self.kind} takes {_ARITY[self.kind]} indices, got {self.indices}")


@dataclass(frozen=True)
class ValidSequence:
    """Walk over free-space cells, 1-based ``(edge of a, edge of b)`` pairs."""

    cells: Tuple[Cell, ...]

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple((int(i), int(j)) for i, j in self.cells))

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    @property
    def is_monotone(self) -> bool:
        return all((i1 - i0, j1 - j0) in ((0, 1), (1, 0)) for (i0, j0), (i1, j1) in zip(self.cells, self.cells[1:]))

    def check(self, na: int, nb: int, monotone: bool = False) -> None:
        """Raise :class:`InvalidSequence` unless valid for curves with ``na``/``nb`` vertices."""
        cells = self.cells
        if not cells:
            raise InvalidSequence("empty sequence")
        if cells[0] != (1, 1) or cells[-1] != (na - 1, nb - 1):
            raise InvalidSequence(f"sequence must run from (1, 1) to ({na - 1}, {nb - 1})")
        if len(set(cells)) != len(cells):
            raise InvalidSequence("a cell appears more than once")
        for i, j in cells:
            if not (1 <= i <= na - 1 and 1 <= j <= nb - 1):
                raise InvalidSequence(f"cell {(i, j)} outside the grid")
        steps = {(0, 1), (1, 0)} if monotone else {(0, 1), (1, 0), (0, -1), (-1, 0)}
        for (i0, j0), (i1, j1) in zip(cells, cells[1:]):
            if (i1 - i0, j1 - j0) not in steps:
                raise InvalidSequence(f"illegal step {(i0, j0)} -> {(i1, j1)}")


def _check_predicate_indices(pid: PredicateId, na: int, nb: int) -> None:
    idx = pid.indices
    if pid.kind == "P3":
        ok = 1 <= idx[0] <= na - 1 and 1 <= idx[1] <= nb
    elif pid.kind == "P4":
        ok = 1 <= idx[0] <= na and 1 <= idx[1] <= nb - 1
    elif pid.kind == "P5":
        ok = 1 <= idx[0] <= nb and 1 <= idx[1] <= na - 1 and 1 <= idx[2] <= nb
    elif pid.kind == "P6":
        ok = 1 <= idx[0] <= nb - 1 and 1 <= idx[1] <= na and 1 <= idx[2] <= na
    else:
        ok = True
    if not ok:
        raise BadIndices(f"{pid.kind}{idx} out of range for curves of {na} and {nb} vertices")


def _ordered_pair(edge: Segment, first, second, r: float) -> bool:
    i1 = ball_segment_intersection(edge, first, r)
    i2 = ball_segment_intersection(edge, second, r)
    return bool(i1) and bool(i2) and i1.lo <= i2.hi + LAMBDA_SLACK


def eval_predicate(pid: PredicateId, a, b, r: float) -> bool:
    """Truth value of one closed distance predicate at radius ``r``."""
    va, vb = _pair(a, b)
    _check_predicate_indices(pid, len(va), len(vb))
    slack_r = r + TANGENCY_SLACK
    idx = pid.indices
    if pid.kind == "P1":
        return float(np.linalg.norm(va[0] - vb[0])) <= slack_r
    if pid.kind == "P2":
        return float(np.linalg.norm(va[-1] - vb[-1])) <= slack_r
    if pid.kind == "P3":
        i, j = idx
        return bool(ball_segment_intersection(Segment(va[i - 1], va[i]), vb[j - 1], r))
    if pid.kind == "P4":
        i, j = idx
        return bool(ball_segment_intersection(Segment(vb[j - 1], vb[j]), va[i - 1], r))
    if pid.kind == "P5":
        i, j, k = idx
        return _ordered_pair(Segment(va[j - 1], va[j]), vb[i - 1], vb[k - 1], r)
    i, j, k = idx
    return _ordered_pair(Segment(vb[i - 1], vb[i]), va[j - 1], va[k - 1], r)


def system_predicates(seq: ValidSequence, monotone: bool) -> List[PredicateId]:
    """Predicates whose conjunction decides the sequence at a radius.

    Every boundary actually crossed by the walk contributes a ``P3``/``P4``;
    for monotone walks each pair of crossings inside one column (row) adds the
    ordering predicate ``P5`` (``P6``).
    """
    preds = [PredicateId("P1"), PredicateId("P2")]
    column_cross: Dict[int, List[int]] = {}
    row_cross: Dict[int, List[int]] = {}
    for (i0, j0), (i1, j1) in zip(seq.cells, seq.cells[1:]):
        if i0 == i1:
            # crossing vertex max(j0, j1) of b on edge i0 of a
            j = max(j0, j1)
            preds.append(PredicateId("P3", (i0, j)))
            column_cross.setdefault(i0, []).append(j)
        else:
            i = max(i0, i1)
            preds.append(PredicateId("P4", (i, j0)))
            row_cross.setdefault(j0, []).append(i)
    if monotone:
        for col, js in column_cross.items():
            for x in range(len(js)):
                for y in range(x + 1, len(js)):
                    preds.append(PredicateId("P5", (js[x], col, js[y])))
        for row, is_ in row_cross.items():
            for x in range(len(is_)):
                for y in range(x + 1, len(is_)):
                    preds.append(PredicateId("P6", (row, is_[x], is_[y])))
    return preds


def eval_predicate_system(a, b, r: float, seq: ValidSequence, monotone: bool = True) -> bool:
    va, vb = _pair(a, b)
    seq.check(len(va), len(vb), monotone=monotone)
    return all(eval_predicate(pid, va, vb, r) for pid in system_predicates(seq, monotone))


# --------------------------------------------------------------------------
# realizing sequences and witness points


@dataclass
class RealizingSequence:
    """A monotone cell walk feasible at ``radius`` plus concrete witnesses.

    ``witnesses`` maps each predicate of the walk's system to the points that
    make it true: the vertex pair for ``P1``/``P2``, one point on the relevant
    edge for ``P3``/``P4`` and an ordered pair of edge points for ``P5``/``P6``.
    """

    sequence: ValidSequence
    radius: float
    witnesses: Dict[PredicateId, Tuple[np.ndarray, ...]] = field(default_factory=dict)
    params: Dict[PredicateId, Tuple[float, ...]] = field(default_factory=dict)

    def points(self) -> List[np.ndarray]:
        """Witness points lying on edges (the ``P3`` .. ``P6`` witnesses)."""
        out = []
        for pid, pts in sorted(self.witnesses.items()):
            if pid.kind in ("P1", "P2"):
                continue
            out.extend(pts)
        return out


def _walk_back(left: np.ndarray, bottom: np.ndarray) -> List[Tuple[Cell, str, float]]:
    """Backtrack a monotone walk from the reach arrays (0-based cells).

    Returns ``(cell, entry, param)`` triples in forward order, where ``entry``
    is ``"start"``, ``"left"`` or ``"bottom"`` and ``param`` the crossing
    parameter on that boundary.
    """
    i, j = left.shape[0] - 2, bottom.shape[1] - 2
    exit_side = "corner"
    out = []
    while True:
        if i == 0 and j == 0:
            out.append(((0, 0), "start", 0.0))
            break
        la, lb = left[i, j], bottom[i, j]
        has_left = i > 0 and la == la
        has_bottom = j > 0 and lb == lb
        # the entry must be the one the forward pass used for this exit
        if exit_side == "right":
            side = "bottom" if has_bottom else "left"
        elif exit_side == "top":
            side = "left" if has_left else "bottom"
        else:
            side = "left" if has_left else "bottom"
        if side == "left":
            out.append(((i, j), "left", float(la)))
            i -= 1
            exit_side = "right"
        else:
            out.append(((i, j), "bottom", float(lb)))
            j -= 1
            exit_side = "top"
    out.reverse()
    return out


def extract_realizing_sequence(a, b, r: float) -> RealizingSequence:
    """Monotone cell walk witnessing ``d_F(a, b) <= r``, with witness points.

    Crossing points are the lowest reachable parameters on each boundary, so
    they are non-decreasing inside every column and row.
    """
    va, vb = _pair(a, b)
    if not kernels.decide_frechet(va, vb, float(r)):
        raise Infeasible(f"Fréchet distance exceeds r={r}")
    left, bottom = kernels.reach_frechet(va, vb, float(r))
    walk = _walk_back(left, bottom)
    seq = ValidSequence(tuple((i + 1, j + 1) for (i, j), _, _ in walk))
    res = RealizingSequence(seq, float(r))
    res.witnesses[PredicateId("P1")] = (va[0].copy(), vb[0].copy())
    res.witnesses[PredicateId("P2")] = (va[-1].copy(), vb[-1].copy())
    column: Dict[int, List[Tuple[int, float]]] = {}
    row: Dict[int, List[Tuple[int, float]]] = {}
    for (i, j), entry, t in walk:
        if entry == "bottom":
            # vertex j of b (0-based) on edge i of a
            pid = PredicateId("P3", (i + 1, j + 1))
            res.witnesses[pid] = (point_on_segment(Segment(va[i], va[i + 1]), t),)
            res.params[pid] = (t,)
            column.setdefault(i, []).append((j, t))
        elif entry == "left":
            pid = PredicateId("P4", (i + 1, j + 1))
            res.witnesses[pid] = (point_on_segment(Segment(vb[j], vb[j + 1]), t),)
            res.params[pid] = (t,)
            row.setdefault(j, []).append((i, t))
    for i, crossings in column.items():
        edge = Segment(va[i], va[i + 1])
        for x in range(len(crossings)):
            for y in range(x + 1, len(crossings)):
                (j1, t1), (j2, t2) = crossings[x], crossings[y]
                pid = PredicateId("P5", (j1 + 1, i + 1, j2 + 1))
                res.witnesses[pid] = (point_on_segment(edge, t1), point_on_segment(edge, t2))
                res.params[pid] = (t1, t2)
    for j, crossings in row.items():
        edge = Segment(vb[j], vb[j + 1])
        for x in range(len(crossings)):
            for y in range(x + 1, len(crossings)):
                (i1, t1), (i2, t2) = crossings[x], crossings[y]
                pid = PredicateId("P6", (j + 1, i1 + 1, i2 + 1))
                res.witnesses[pid] = (point_on_segment(edge, t1), point_on_segment(edge, t2))
                res.params[pid] = (t1, t2)
    return res


def extract_weak_witnesses(a, b, r: float) -> RealizingSequence:
    """Cell walk (not necessarily monotone) witnessing ``d_wF(a, b) <= r``.

    Found by breadth-first search over cells joined by non-empty boundaries;
    each crossed boundary contributes the low end of its interval.
    """
    va, vb = _pair(a, b)
    if not kernels.decide_weak_frechet(va, vb, float(r)):
        raise Infeasible(f"weak Fréchet distance exceeds r={r}")
    vlo, _, hlo, _ = kernels.free_space(va, vb, float(r))
    ni, nj = len(va) - 1, len(vb) - 1
    parent: Dict[Cell, Cell] = {(0, 0): (0, 0)}
    frontier = [(0, 0)]
    while frontier:
        nxt = []
        for i, j in frontier:
            for di, dj in ((1, 0), (0, 1), (-1, 0), (0, -1)):
                c = (i + di, j + dj)
                if not (0 <= c[0] < ni and 0 <= c[1] < nj) or c in parent:
                    continue
                lo = vlo[max(i, c[0]), j] if di else hlo[i, max(j, c[1])]
                if lo == lo:
                    parent[c] = (i, j)
                    nxt.append(c)
        frontier = nxt
    path = [(ni - 1, nj - 1)]
    while path[-1] != (0, 0):
        path.append(parent[path[-1]])
    path.reverse()
    seq = ValidSequence(tuple((i + 1, j + 1) for i, j in path))
    res = RealizingSequence(seq, float(r))
    res.witnesses[PredicateId("P1")] = (va[0].copy(), vb[0].copy())
    res.witnesses[PredicateId("P2")] = (va[-1].copy(), vb[-1].copy())
    for (i0, j0), (i1, j1) in zip(path, path[1:]):
        if i0 == i1:
            j = max(j0, j1)
            t = float(hlo[i0, j])
            pid = PredicateId("P3", (i0 + 1, j + 1))
            res.witnesses[pid] = (point_on_segment(Segment(va[i0], va[i0 + 1]), t),)
        else:
            i = max(i0, i1)
            t = float(vlo[i, j0])
            pid = PredicateId("P4", (i + 1, j0 + 1))
            res.witnesses[pid] = (point_on_segment(Segment(vb[j0], vb[j0 + 1]), t),)
        res.params[pid] = (t,)
    return res
