# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the free-space kernels.

Same functions and semantics as ``_pykernels``; see there for the layout of
the free-space arrays.
"""
import numpy as np

from libc.math cimport sqrt, NAN, isnan, fmax, fmin

cdef double TANGENCY_SLACK = 1e-12
cdef double LAMBDA_SLACK = 1e-12


cdef inline double _dist(const double[:, ::1] x, Py_ssize_t i,
                         const double[:, ::1] y, Py_ssize_t j) noexcept nogil:
    cdef Py_ssize_t k
    cdef double s = 0.0, t
    for k in range(x.shape[1]):
        t = x[i, k] - y[j, k]
        s += t * t
    return sqrt(s)


cdef inline bint _interval(const double[:, ::1] pts, Py_ssize_t i,
                           const double[:, ::1] seg, Py_ssize_t k,
                           double r, double* lo, double* hi) noexcept nogil:
    """Interval on segment ``seg[k] seg[k+1]`` within ``r`` of ``pts[i]``."""
    cdef Py_ssize_t m, dim = pts.shape[1]
    cdef double dd = 0.0, dot = 0.0, h2 = 0.0, dm, lam0, t, h, half, l, u
    cdef double r_eff = r + TANGENCY_SLACK
    for m in range(dim):
        dm = seg[k + 1, m] - seg[k, m]
        dd += dm * dm
        dot += (pts[i, m] - seg[k, m]) * dm
    if dd == 0.0:
        if _dist(pts, i, seg, k) <= r_eff:
            lo[0] = 0.0
            hi[0] = 1.0
            return True
        return False
    lam0 = dot / dd
    for m in range(dim):
        t = pts[i, m] - (seg[k, m] + lam0 * (seg[k + 1, m] - seg[k, m]))
        h2 += t * t
    h = sqrt(h2)
    if h > r_eff:
        return False
    half = sqrt(fmax(r * r - h * h, 0.0) / dd)
    l = lam0 - half
    u = lam0 + half
    if u < 0.0:
        if _dist(pts, i, seg, k) <= r_eff:
            lo[0] = 0.0
            hi[0] = 0.0
            return True
        return False
    if l > 1.0:
        if _dist(pts, i, seg, k + 1) <= r_eff:
            lo[0] = 1.0
            hi[0] = 1.0
            return True
        return False
    lo[0] = fmax(0.0, l)
    hi[0] = fmin(1.0, u)
    return True


def free_space(a, b, double r):
    cdef const double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, ::1] B = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t p = A.shape[0], q = B.shape[0], i, j
    cdef double lo, hi
    vlo_arr = np.full((p, q - 1), np.nan)
    vhi_arr = np.full((p, q - 1), np.nan)
    hlo_arr = np.full((p - 1, q), np.nan)
    hhi_arr = np.full((p - 1, q), np.nan)
    cdef double[:, ::1] vlo = vlo_arr, vhi = vhi_arr, hlo = hlo_arr, hhi = hhi_arr
    with nogil:
        for i in range(p):
            for j in range(q - 1):
                if _interval(A, i, B, j, r, &lo, &hi):
                    vlo[i, j] = lo
                    vhi[i, j] = hi
        for i in range(p - 1):
            for j in range(q):
                if _interval(B, j, A, i, r, &lo, &hi):
                    hlo[i, j] = lo
                    hhi[i, j] = hi
    return vlo_arr, vhi_arr, hlo_arr, hhi_arr


cdef void _reach(const double[:, ::1] A, const double[:, ::1] B, double r,
                 double[:, ::1] left, double[:, ::1] bottom) noexcept nogil:
    cdef Py_ssize_t p = A.shape[0], q = B.shape[0], i, j
    cdef double la, lb, lo, hi, x
    cdef bint from_left, from_bottom
    left[0, 0] = 0.0
    bottom[0, 0] = 0.0
    for i in range(p - 1):
        for j in range(q - 1):
            la = left[i, j]
            lb = bottom[i, j]
            from_left = not isnan(la)
            from_bottom = not isnan(lb)
            if not (from_left or from_bottom):
                continue
            if _interval(A, i + 1, B, j, r, &lo, &hi):
                if from_bottom:
                    left[i + 1, j] = lo
                else:
                    x = fmax(la, lo)
                    if x <= hi + LAMBDA_SLACK:
                        left[i + 1, j] = fmin(x, hi)
            if _interval(B, j + 1, A, i, r, &lo, &hi):
                if from_left:
                    bottom[i, j + 1] = lo
                else:
                    x = fmax(lb, lo)
                    if x <= hi + LAMBDA_SLACK:
                        bottom[i, j + 1] = fmin(x, hi)


def reach_frechet(a, b, double r):
    cdef const double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, ::1] B = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t p = A.shape[0], q = B.shape[0]
    left_arr = np.full((p, q - 1), np.nan)
    bottom_arr = np.full((p - 1, q), np.nan)
    cdef double[:, ::1] left = left_arr, bottom = bottom_arr
    if _dist(A, 0, B, 0) > r + TANGENCY_SLACK:
        return left_arr, bottom_arr
    with nogil:
        _reach(A, B, r, left, bottom)
    return left_arr, bottom_arr


def decide_frechet(a, b, double r):
    cdef const double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, ::1] B = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t p = A.shape[0], q = B.shape[0]
    cdef double r_eff = r + TANGENCY_SLACK
    if _dist(A, 0, B, 0) > r_eff or _dist(A, p - 1, B, q - 1) > r_eff:
        return False
    left_arr = np.full((p, q - 1), np.nan)
    bottom_arr = np.full((p - 1, q), np.nan)
    cdef double[:, ::1] left = left_arr, bottom = bottom_arr
    with nogil:
        _reach(A, B, r, left, bottom)
    return not isnan(left[p - 2, q - 2]) or not isnan(bottom[p - 2, q - 2])


def decide_weak_frechet(a, b, double r):
    cdef const double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, ::1] B = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t p = A.shape[0], q = B.shape[0]
    cdef Py_ssize_t ni = p - 1, nj = q - 1, head = 0, tail = 0, i, j, c
    cdef double r_eff = r + TANGENCY_SLACK
    cdef double lo, hi
    if _dist(A, 0, B, 0) > r_eff or _dist(A, p - 1, B, q - 1) > r_eff:
        return False
    seen_arr = np.zeros(ni * nj, dtype=np.uint8)
    queue_arr = np.empty(ni * nj, dtype=np.intp)
    cdef unsigned char[::1] seen = seen_arr
    cdef Py_ssize_t[::1] queue = queue_arr
    with nogil:
        seen[0] = 1
        queue[tail] = 0
        tail += 1
        while head < tail:
            c = queue[head]
            head += 1
            i = c // nj
            j = c % nj
            if i + 1 < ni and not seen[c + nj] and _interval(A, i + 1, B, j, r, &lo, &hi):
                seen[c + nj] = 1
                queue[tail] = c + nj
                tail += 1
            if i > 0 and not seen[c - nj] and _interval(A, i, B, j, r, &lo, &hi):
                seen[c - nj] = 1
                queue[tail] = c - nj
                tail += 1
            if j + 1 < nj and not seen[c + 1] and _interval(B, j + 1, A, i, r, &lo, &hi):
                seen[c + 1] = 1
                queue[tail] = c + 1
                tail += 1
            if j > 0 and not seen[c - 1] and _interval(B, j, A, i, r, &lo, &hi):
                seen[c - 1] = 1
                queue[tail] = c - 1
                tail += 1
    return seen[ni * nj - 1] == 1


def discrete_frechet(a, b):
    cdef const double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, ::1] B = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t p = A.shape[0], q = B.shape[0], i, j
    cdef double dij, best
    ca_arr = np.empty((p, q))
    cdef double[:, ::1] ca = ca_arr
    with nogil:
        for i in range(p):
            for j in range(q):
                dij = _dist(A, i, B, j)
                if i == 0 and j == 0:
                    best = dij
                elif i == 0:
                    best = fmax(ca[i, j - 1], dij)
                elif j == 0:
                    best = fmax(ca[i - 1, j], dij)
                else:
                    best = fmax(fmin(fmin(ca[i - 1, j], ca[i - 1, j - 1]), ca[i, j - 1]), dij)
                ca[i, j] = best
    return ca[p - 1, q - 1]
