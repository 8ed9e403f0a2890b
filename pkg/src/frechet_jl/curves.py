"""Points, segments and polygonal curves.

Everything here works in double precision on numpy arrays.  Points are plain
1-d ``float64`` arrays; a :class:`Curve` wraps an ``(m, d)`` read-only vertex
array.  Vertex indices in the public API are 1-based wherever they refer to
the ``v_1 .. v_m`` numbering of a curve (``subcurve``, predicate indices,
cell sequences); numpy storage is 0-based as usual.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateCurve, DimensionMismatch

# Absolute slack for closed-ball decisions.  Keeps every decision monotone in r.
TANGENCY_SLACK = 1e-12
COLLINEAR_REL_TOL = 1e-12


def as_point(p) -> np.ndarray:
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionMismatch(f"a point must be a non-empty 1-d sequence, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


class Segment(NamedTuple):
    a: np.ndarray
    b: np.ndarray

    @classmethod
    def of(cls, a, b) -> "Segment":
        a, b = as_point(a), as_point(b)
        if a.shape != b.shape:
            raise DimensionMismatch(f"segment endpoints differ in dimension: {a.size} vs {b.size}")
        return cls(a, b)

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.b - self.a))


@dataclass(frozen=True)
class Interval:
    """Closed sub-interval of [0, 1]; ``empty`` marks the empty set."""

    lo: float = 0.0
    hi: float = 0.0
    empty: bool = False

    def __post_init__(self):
        if not self.empty and not (0.0 <= self.lo <= self.hi <= 1.0):
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    def __bool__(self):
        return not self.empty

    def contains(self, t: float, slack: float = 0.0) -> bool:
        return not self.empty and self.lo - slack <= t <= self.hi + slack


EMPTY = Interval(empty=True)


class Curve:
    """Polygonal curve given by an ordered vertex list.

    Instances are immutable; the vertex array is flagged read-only.
    """

    __slots__ = ("_vertices", "id")

    def __init__(self, vertices, id: str = ""):
        arr = np.array(vertices, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionMismatch(f"vertices must form an (m, d) array, got shape {arr.shape}")
        if arr.shape[0] < 2:
            raise DegenerateCurve("a curve needs at least 2 vertices")
        if arr.shape[1] < 1:
            raise DimensionMismatch("vertices must have at least one coordinate")
        if not np.all(np.isfinite(arr)):
            raise ValueError("vertex coordinates must be finite")
        arr.setflags(write=False)
        self._vertices = arr
        self.id = str(id)

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def dim(self) -> int:
        return self._vertices.shape[1]

    def __len__(self) -> int:
        return self._vertices.shape[0]

    def __getitem__(self, i):
        return self._vertices[i]

    def __iter__(self):
        return iter(self._vertices)

    def __repr__(self):
        return f"Curve(id={self.id!r}, m={len(self)}, d={self.dim})"

    def __eq__(self, other):
        if not isinstance(other, Curve):
            return NotImplemented
        return self.id == other.id and np.array_equal(self._vertices, other._vertices)

    def __hash__(self):
        return hash((self.id, self._vertices.tobytes()))

    def edge(self, i: int) -> Segment:
        """Edge ``v_i v_{i+1}`` (1-based ``i``)."""
        if not 1 <= i < len(self):
            raise IndexError(f"edge index {i} out of range for a curve with {len(self)} vertices")
        return Segment(self._vertices[i - 1], self._vertices[i])

    def edges(self):
        return [Segment(self._vertices[k], self._vertices[k + 1]) for k in range(len(self) - 1)]

    def arclength(self) -> float:
        return float(np.linalg.norm(np.diff(self._vertices, axis=0), axis=1).sum())

    def with_id(self, id: str) -> "Curve":
        return Curve(self._vertices, id=id)


def _check_dims(*arrays):
    dims = {a.shape[-1] for a in arrays}
    if len(dims) > 1:
        raise DimensionMismatch(f"mixed dimensions: {sorted(dims)}")


def make_curve(points: Sequence, normalize: bool = False, id: str = "") -> Curve:
    """Build a curve, dropping repeated consecutive vertices.

    With ``normalize=True`` interior vertices lying (within
    ``1e-12 * bbox diameter``) on the segment joining their neighbours are
    removed until none is left; the traced image is unchanged.
    """
    pts = []
    for p in points:
        arr = np.asarray(p, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise DimensionMismatch(f"points must be non-empty 1-d sequences, got shape {arr.shape}")
        pts.append(arr)
    if pts:
        dims = {p.size for p in pts}
        if len(dims) > 1:
            raise DimensionMismatch(f"mixed dimensions: {sorted(dims)}")
    kept = []
    for p in pts:
        if kept and np.array_equal(kept[-1], p):
            continue
        kept.append(p)
    if len(kept) < 2:
        raise DegenerateCurve("fewer than 2 distinct points")

    if normalize:
        arr = np.array(kept)
        tol = COLLINEAR_REL_TOL * float(np.linalg.norm(arr.max(axis=0) - arr.min(axis=0)))
        changed = True
        while changed and len(kept) > 2:
            changed = False
            for k in range(1, len(kept) - 1):
                if point_segment_distance(kept[k], Segment(kept[k - 1], kept[k + 1])) <= tol:
                    del kept[k]
                    changed = True
                    break
    return Curve(np.array(kept), id=id)


def point_on_segment(s: Segment, lam: float) -> np.ndarray:
    """The point ``(1 - lam) a + lam b``; any real ``lam`` addresses the supporting line."""
    a, b = s
    return (1.0 - lam) * a + lam * b


def subcurve(c: Curve, i: int, j: int) -> Curve:
    """Sub-curve on vertices ``v_i .. v_j`` (1-based, inclusive)."""
    if not (1 <= i < j <= len(c)):
        raise IndexError(f"need 1 <= i < j <= {len(c)}, got ({i}, {j})")
    return Curve(c.vertices[i - 1 : j], id=f"{c.id}[{i},{j}]")


def _projection_parameter(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    d = b - a
    dd = float(d @ d)
    if dd == 0.0:
        return 0.0
    t = float((p - a) @ d) / dd
    return min(1.0, max(0.0, t))


def point_segment_distance(p, s: Segment) -> float:
    """Euclidean distance from ``p`` to the closed segment ``s``."""
    p = np.asarray(p, dtype=np.float64)
    a, b = s
    _check_dims(p, a, b)
    t = _projection_parameter(p, a, b)
    return float(np.linalg.norm(p - ((1.0 - t) * a + t * b)))


def ball_segment_intersection(s: Segment, center, r: float) -> Interval:
    """Parameters ``lam`` in [0, 1] with ``|center - s(lam)| <= r``.

    The ball is closed and the test carries an absolute slack of
    ``TANGENCY_SLACK`` so tangent configurations count as feasible.
    Zero-length segments behave like their single point.
    """
    if r < 0:
        raise ValueError("radius must be non-negative")
    c = np.asarray(center, dtype=np.float64)
    a, b = s
    _check_dims(c, a, b)
    d = b - a
    dd = float(d @ d)
    if dd == 0.0:
        return Interval(0.0, 1.0) if float(np.linalg.norm(c - a)) <= r + TANGENCY_SLACK else EMPTY
    lam0 = float((c - a) @ d) / dd
    h = float(np.linalg.norm(c - (a + lam0 * d)))
    r_eff = r + TANGENCY_SLACK
    if h > r_eff:
        return EMPTY
    half = math.sqrt(max(r * r - h * h, 0.0) / dd)
    lo = lam0 - half
    hi = lam0 + half
    # endpoint touches may round just outside [0, 1]
    if hi < 0.0:
        return Interval(0.0, 0.0) if float(np.linalg.norm(c - a)) <= r_eff else EMPTY
    if lo > 1.0:
        return Interval(1.0, 1.0) if float(np.linalg.norm(c - b)) <= r_eff else EMPTY
    return Interval(max(0.0, lo), min(1.0, hi))
