"""Pure-Python/numpy implementation of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable, or when
``FRECHET_JL_PURE=1`` is set.  Both modules expose the same functions with the
same semantics; ``tests/test_kernels.py`` checks them against each other.

Layout of the free space for curves ``a`` (p vertices) and ``b`` (q vertices),
0-based:

* ``vert[i, j]``  -- parameters on b-edge ``j`` within ``r`` of a-vertex ``i``
  (left boundary of cell ``(i, j)``), shape ``(p, q - 1)``;
* ``horiz[i, j]`` -- parameters on a-edge ``i`` within ``r`` of b-vertex ``j``
  (bottom boundary of cell ``(i, j)``), shape ``(p - 1, q)``.

Empty intervals are encoded as ``lo = hi = nan``.
"""
import math
from collections import deque

import numpy as np

TANGENCY_SLACK = 1e-12
LAMBDA_SLACK = 1e-12


def _intervals(points, seg_a, seg_b, r):
    """Ball/segment intervals for every (point, segment) pair.

    Mirrors :func:`frechet_jl.curves.ball_segment_intersection`.
    """
    n, s = points.shape[0], seg_a.shape[0]
    lo = np.full((n, s), np.nan)
    hi = np.full((n, s), np.nan)
    r_eff = r + TANGENCY_SLACK
    for k in range(s):
        a = seg_a[k]
        b = seg_b[k]
        d = b - a
        dd = float(d @ d)
        for i in range(n):
            c = points[i]
            if dd == 0.0:
                if math.sqrt(float((c - a) @ (c - a))) <= r_eff:
                    lo[i, k], hi[i, k] = 0.0, 1.0
                continue
            lam0 = float((c - a) @ d) / dd
            foot = c - (a + lam0 * d)
            h = math.sqrt(float(foot @ foot))
            if h > r_eff:
                continue
            half = math.sqrt(max(r * r - h * h, 0.0) / dd)
            l, u = lam0 - half, lam0 + half
            if u < 0.0:
                if math.sqrt(float((c - a) @ (c - a))) <= r_eff:
                    lo[i, k], hi[i, k] = 0.0, 0.0
            elif l > 1.0:
                if math.sqrt(float((c - b) @ (c - b))) <= r_eff:
                    lo[i, k], hi[i, k] = 1.0, 1.0
            else:
                lo[i, k], hi[i, k] = max(0.0, l), min(1.0, u)
    return lo, hi


def free_space(a, b, r):
    """Return ``(vert_lo, vert_hi, horiz_lo, horiz_hi)``."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    vert_lo, vert_hi = _intervals(a, b[:-1], b[1:], r)
    h_lo, h_hi = _intervals(b, a[:-1], a[1:], r)
    return vert_lo, vert_hi, np.ascontiguousarray(h_lo.T), np.ascontiguousarray(h_hi.T)


def _endpoints_ok(a, b, r):
    r_eff = r + TANGENCY_SLACK
    return (
        math.sqrt(float((a[0] - b[0]) @ (a[0] - b[0]))) <= r_eff
        and math.sqrt(float((a[-1] - b[-1]) @ (a[-1] - b[-1]))) <= r_eff
    )


def reach_frechet(a, b, r):
    """Lowest monotonically reachable parameter on every cell boundary.

    Returns ``(left, bottom)`` shaped like ``vert`` and ``horiz``; ``nan``
    marks unreachable boundaries.  Cell ``(0, 0)`` is entered at its corner
    and has ``left[0, 0] = bottom[0, 0] = 0`` when the start is feasible.
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    p, q = a.shape[0], b.shape[0]
    vlo, vhi, hlo, hhi = free_space(a, b, r)
    left = np.full((p, q - 1), np.nan)
    bottom = np.full((p - 1, q), np.nan)
    r_eff = r + TANGENCY_SLACK
    if math.sqrt(float((a[0] - b[0]) @ (a[0] - b[0]))) > r_eff:
        return left, bottom
    left[0, 0] = 0.0
    bottom[0, 0] = 0.0
    for i in range(p - 1):
        for j in range(q - 1):
            la = left[i, j]
            lb = bottom[i, j]
            from_left = la == la
            from_bottom = lb == lb
            if not (from_left or from_bottom):
                continue
            lo, hi = vlo[i + 1, j], vhi[i + 1, j]
            if lo == lo:
                if from_bottom:
                    left[i + 1, j] = lo
                else:
                    x = max(la, lo)
                    if x <= hi + LAMBDA_SLACK:
                        left[i + 1, j] = min(x, hi)
            lo, hi = hlo[i, j + 1], hhi[i, j + 1]
            if lo == lo:
                if from_left:
                    bottom[i, j + 1] = lo
                else:
                    x = max(lb, lo)
                    if x <= hi + LAMBDA_SLACK:
                        bottom[i, j + 1] = min(x, hi)
    return left, bottom


def decide_frechet(a, b, r):
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if not _endpoints_ok(a, b, r):
        return False
    left, bottom = reach_frechet(a, b, r)
    i, j = a.shape[0] - 2, b.shape[0] - 2
    return bool(left[i, j] == left[i, j] or bottom[i, j] == bottom[i, j])


def decide_weak_frechet(a, b, r):
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if not _endpoints_ok(a, b, r):
        return False
    p, q = a.shape[0], b.shape[0]
    vlo, _, hlo, _ = free_space(a, b, r)
    nc_i, nc_j = p - 1, q - 1
    seen = np.zeros((nc_i, nc_j), dtype=bool)
    seen[0, 0] = True
    queue = deque([(0, 0)])
    while queue:
        i, j = queue.popleft()
        # the four cell boundaries: right, left, top, bottom
        nbrs = []
        if i + 1 < nc_i and vlo[i + 1, j] == vlo[i + 1, j]:
            nbrs.append((i + 1, j))
        if i > 0 and vlo[i, j] == vlo[i, j]:
            nbrs.append((i - 1, j))
        if j + 1 < nc_j and hlo[i, j + 1] == hlo[i, j + 1]:
            nbrs.append((i, j + 1))
        if j > 0 and hlo[i, j] == hlo[i, j]:
            nbrs.append((i, j - 1))
        for c in nbrs:
            if not seen[c]:
                seen[c] = True
                queue.append(c)
    return bool(seen[nc_i - 1, nc_j - 1])


def discrete_frechet(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    p, q = a.shape[0], b.shape[0]
    dist = np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2))
    ca = [[0.0] * q for _ in range(p)]
    for i in range(p):
        row = ca[i]
        for j in range(q):
            dij = float(dist[i, j])
            if i == 0 and j == 0:
                best = dij
            elif i == 0:
                best = max(row[j - 1], dij)
            elif j == 0:
                best = max(ca[i - 1][0], dij)
            else:
                best = max(min(ca[i - 1][j], ca[i - 1][j - 1], row[j - 1]), dij)
            row[j] = best
    return ca[p - 1][q - 1]
