"""Random linear maps for curves and certification of their distortion.

A sampled map is applied vertex-wise to every curve.  Whether it preserves
Fréchet distances depends on it being a (1 ± eps)-embedding of a finite,
curve-determined point set; the ``certify_*`` functions check that property
(and the inner-product and point-to-line consequences of it) explicitly
instead of relying on the success probability.
"""
from __future__ import annotations

import json
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .curves import Curve
from .errors import DimensionMismatch, ParamOutOfRange, PreconditionFailed, RetriesExhausted
from .frechet import (
    _pair,
    extract_realizing_sequence,
    extract_weak_witnesses,
    frechet_distance,
    weak_frechet_distance,
)

log = logging.getLogger(__name__)

SCHEMES = ("gaussian", "orthogonal")
# Below this relative squared separation pair distances are recomputed directly.
_CANCELLATION_GUARD = 1e-6
WITNESS_SLACK = 1e-9


@dataclass(frozen=True)
class LinearMap:
    """A ``d_prime x d`` matrix acting on points of R^d."""

    matrix: np.ndarray
    seed: int = 0
    scheme: str = "gaussian"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
            raise ValueError(f"matrix must be 2-d and non-empty, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def d(self) -> int:
        return self.matrix.shape[1]

    @property
    def d_prime(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        if pts.shape[-1] != self.d:
            raise DimensionMismatch(f"map expects dimension {self.d}, got {pts.shape[-1]}")
        return pts @ self.matrix.T

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "seed": int(self.seed),
            "d": self.d,
            "d_prime": self.d_prime,
            "matrix": self.matrix.ravel().tolist(),
        }

    @classmethod
    def from_dict(cls, rec: dict) -> "LinearMap":
        m = np.array(rec["matrix"], dtype=np.float64).reshape(rec["d_prime"], rec["d"])
        return cls(m, seed=int(rec["seed"]), scheme=rec["scheme"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "LinearMap":
        return cls.from_dict(json.loads(text))


def target_dimension(eps: float, n_points: int, beta: float = 2.0) -> int:
    """Gaussian JL dimension for all pairs of ``n_points`` with failure prob. ``n_points**-beta``.

    ``ceil((4 + 2 beta) ln n / (eps^2 / 2 - eps^3 / 3))``.
    """
    if not 0 < eps < 1:
        raise ParamOutOfRange(f"eps must lie in (0, 1), got {eps}")
    if n_points < 2:
        raise ParamOutOfRange(f"need at least 2 points, got {n_points}")
    if beta < 1:
        raise ParamOutOfRange(f"beta must be at least 1, got {beta}")
    return int(math.ceil((4 + 2 * beta) * math.log(n_points) / (eps**2 / 2 - eps**3 / 3)))


def sample_map(d: int, d_prime: int, seed: int, scheme: str = "gaussian") -> LinearMap:
    """Sample a random linear map, deterministic in ``seed``.

    ``gaussian``: i.i.d. N(0, 1/d_prime) entries.  ``orthogonal``: rows are
    orthonormal (Haar-distributed), so for ``d_prime == d`` the map is an
    isometry; used when the requested target dimension is not below ``d``.
    """
    if d < 1 or d_prime < 1:
        raise ParamOutOfRange("dimensions must be positive")
    if scheme not in SCHEMES:
        raise ParamOutOfRange(f"unknown scheme {scheme!r}")
    rng = np.random.default_rng(seed)
    if scheme == "gaussian":
        if d_prime > d:
            warnings.warn(f"target dimension {d_prime} exceeds source dimension {d}", stacklevel=2)
        m = rng.standard_normal((d_prime, d)) / math.sqrt(d_prime)
    else:
        if d_prime > d:
            raise ParamOutOfRange("orthogonal maps need d_prime <= d")
        g = rng.standard_normal((d, d))
        q, r = np.linalg.qr(g)
        q = q * np.sign(np.diag(r))[None, :]
        m = q[:, :d_prime].T
    return LinearMap(m, seed=seed, scheme=scheme)


def apply_map(f: LinearMap, c: Curve) -> Curve:
    """Image curve: the map applied to every vertex, vertex count preserved."""
    if c.dim != f.d:
        raise DimensionMismatch(f"map expects dimension {f.d}, curve has {c.dim}")
    img = f(c.vertices)
    if np.any(np.all(img[1:] == img[:-1], axis=1)):
        warnings.warn(f"image of curve {c.id!r} has coincident consecutive vertices", stacklevel=2)
    return Curve(img, id=c.id)


# --------------------------------------------------------------------------
# augmented point sets


def _line_params(points: np.ndarray, pairs) -> Tuple[np.ndarray, np.ndarray]:
    us, ts = [], []
    for a, b in pairs:
        d = b - a
        n = float(np.linalg.norm(d))
        if n == 0.0:
            warnings.warn("zero-length edge skipped", stacklevel=3)
            continue
        u = d / n
        us.append(u)
        ts.append(a - (a @ u) * u)
    dim = points.shape[1]
    return np.array(us).reshape(-1, dim), np.array(ts).reshape(-1, dim)


def _line_pairs(curves: Sequence[Curve], all_pairs: bool):
    for c in curves:
        v = c.vertices
        if all_pairs:
            for i in range(len(v)):
                for j in range(i + 1, len(v)):
                    yield v[i], v[j]
        else:
            for i in range(len(v) - 1):
                yield v[i], v[i + 1]


def augmentation_lower(curves: Sequence[Curve], all_pairs: bool = False) -> np.ndarray:
    """Points a map must embed well for the Fréchet distances not to shrink.

    The origin, both unit directions ``u, -u`` of every edge line, and for
    every vertex ``x`` and every edge line ``{t + lam u}`` (``t`` the foot of
    the origin) the residual ``x - (t + <x, u> u)``.  With ``all_pairs`` the
    lines through every two vertices of a curve are used, which covers all
    shortcut segments, sub-curves and vertex-restricted simplifications.
    Rows are unique.
    """
    curves = list(curves)
    if not curves:
        raise ValueError("need at least one curve")
    dims = {c.dim for c in curves}
    if len(dims) > 1:
        raise DimensionMismatch(f"mixed dimensions: {sorted(dims)}")
    verts = np.concatenate([c.vertices for c in curves])
    u, t = _line_params(verts, _line_pairs(curves, all_pairs))
    proj = verts @ u.T  # (n_vertices, n_lines)
    resid = verts[:, None, :] - t[None, :, :] - proj[:, :, None] * u[None, :, :]
    pts = np.concatenate([np.zeros((1, verts.shape[1])), u, -u, resid.reshape(-1, verts.shape[1])])
    return np.unique(pts, axis=0)


def augmentation_upper(a: Curve, b: Curve) -> np.ndarray:
    """Witness points of the monotone and the weak predicate systems at the optimum.

    Taken at ``d_F + 1e-9`` and ``d_wF + 1e-9``; every point lies on an edge of
    ``a`` or ``b``.
    """
    va, vb = _pair(a, b)
    pts: List[np.ndarray] = []
    r = frechet_distance(va, vb) + WITNESS_SLACK
    pts.extend(extract_realizing_sequence(va, vb, r).points())
    rw = weak_frechet_distance(va, vb) + WITNESS_SLACK
    pts.extend(extract_weak_witnesses(va, vb, rw).points())
    if not pts:
        return np.empty((0, va.shape[1]))
    return np.unique(np.array(pts), axis=0)


# --------------------------------------------------------------------------
# certification


@dataclass
class CertReport:
    """Outcome of a pairwise distortion check.

    ``failures`` keeps at most ``max_recorded`` offending pairs as
    ``((i, j), ratio)`` with row indices into the checked point array;
    ``failure_count`` is the exact total.
    """

    eps: float
    max_expansion: float
    max_contraction: float
    pair_count: int
    failure_count: int = 0
    failures: List[Tuple[Tuple[int, int], float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "max_expansion": self.max_expansion,
            "max_contraction": self.max_contraction,
            "pair_count": self.pair_count,
            "failure_count": self.failure_count,
            "failures": [[list(p), r] for p, r in self.failures],
            "passed": self.passed,
        }


def _pair_ratios_block(f: LinearMap, pts: np.ndarray, block: int):
    """Yield ``(rows, cols, ratio)`` for all pairs ``i < j`` in blocks of rows."""
    m = f.matrix
    e_mat = m.T @ m - np.eye(f.d)
    pe = pts @ e_mat
    quad = np.einsum("ij,ij->i", pe, pts)
    sq = np.einsum("ij,ij->i", pts, pts)
    n = pts.shape[0]
    for i0 in range(0, n - 1, block):
        i1 = min(i0 + block, n - 1)
        rows = np.arange(i0, i1)
        cols = np.arange(i0 + 1, n)
        g = pts[i0:i1] @ pts[i0 + 1 :].T
        h = pe[i0:i1] @ pts[i0 + 1 :].T
        x2 = sq[i0:i1, None] + sq[None, i0 + 1 :] - 2 * g
        q = quad[i0:i1, None] + quad[None, i0 + 1 :] - 2 * h
        mask = cols[None, :] > rows[:, None]
        guard = x2 <= _CANCELLATION_GUARD * (sq[i0:i1, None] + sq[None, i0 + 1 :])
        if np.any(guard & mask):
            ri, ci = np.nonzero(guard & mask)
            diff = pts[rows[ri]] - pts[cols[ci]]
            x2[ri, ci] = np.einsum("ij,ij->i", diff, diff)
            img = diff @ m.T
            q[ri, ci] = np.einsum("ij,ij->i", img, img) - x2[ri, ci]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.sqrt(np.maximum(1.0 + q / x2, 0.0))
        valid = mask & (x2 > 0)
        yield rows, cols, ratio, valid


def certify_embedding(f: LinearMap, pts, eps: float, max_recorded: int = 100, block: int = 512) -> CertReport:
    """Check ``(1 - eps) |p - q| <= |f(p) - f(q)| <= (1 + eps) |p - q|`` for all pairs.

    Coincident points are skipped.  Pairwise distances come from Gram
    matrices computed block-wise; pairs close enough for cancellation to
    matter are recomputed from explicit differences.
    """
    pts = np.unique(np.asarray(pts, dtype=np.float64), axis=0)
    if pts.ndim != 2 or pts.shape[1] != f.d:
        raise DimensionMismatch(f"points must be (n, {f.d})")
    rep = CertReport(float(eps), 1.0, 1.0, 0)
    if pts.shape[0] < 2:
        return rep
    hi_ratio, lo_ratio = -np.inf, np.inf
    for rows, cols, ratio, valid in _pair_ratios_block(f, pts, block):
        vals = ratio[valid]
        if vals.size == 0:
            continue
        rep.pair_count += int(vals.size)
        hi_ratio = max(hi_ratio, float(vals.max()))
        lo_ratio = min(lo_ratio, float(vals.min()))
        bad = valid & ((ratio > 1 + eps) | (ratio < 1 - eps))
        nbad = int(bad.sum())
        if nbad:
            rep.failure_count += nbad
            room = max_recorded - len(rep.failures)
            if room > 0:
                ri, ci = np.nonzero(bad)
                for a, b in list(zip(ri, ci))[:room]:
                    rep.failures.append(((int(rows[a]), int(cols[b])), float(ratio[a, b])))
    if rep.pair_count:
        rep.max_expansion, rep.max_contraction = hi_ratio, lo_ratio
    return rep


@dataclass
class InnerProductReport:
    pair_count: int
    violations: int
    worst_upper_margin: float
    worst_lower_margin: float

    @property
    def passed(self) -> bool:
        return self.violations == 0


def certify_inner_products(f: LinearMap, pts, eps: float) -> InnerProductReport:
    """Check ``<p,q> - 16 eps |p||q| <= <f(p), f(q)> <= <p,q> + 14 eps |p||q|``.

    The map must first pass :func:`certify_embedding` on the points, the
    origin and the normalised points; otherwise :class:`PreconditionFailed`.
    Margins are the smallest slack (bound minus value, scaled by ``|p||q|``)
    over all pairs; negative means violated.
    """
    pts = np.asarray(pts, dtype=np.float64)
    norms = np.linalg.norm(pts, axis=1)
    unit = pts[norms > 0] / norms[norms > 0, None]
    pre = certify_embedding(f, np.vstack([np.zeros((1, f.d)), pts, unit]), eps)
    if not pre.passed:
        raise PreconditionFailed(f"map is not a (1 ± {eps})-embedding of the point set")
    img = f(pts)
    g = pts @ pts.T
    gf = img @ img.T
    scale = np.outer(norms, norms)
    iu = np.triu_indices(len(pts), k=0)
    g, gf, scale = g[iu], gf[iu], scale[iu]
    upper = (g + 14 * eps * scale) - gf
    lower = gf - (g - 16 * eps * scale)
    tol = 1e-12 * np.maximum(scale, 1.0)
    viol = int(np.sum((upper < -tol) | (lower < -tol)))
    with np.errstate(divide="ignore", invalid="ignore"):
        um = np.where(scale > 0, upper / scale, np.inf)
        lm = np.where(scale > 0, lower / scale, np.inf)
    return InnerProductReport(len(g), viol, float(um.min()), float(lm.min()))


def point_line_ratios(f: LinearMap, x, t, u, lambdas) -> np.ndarray:
    """``|f(x) - f(t + lam u)| / |x - (t + lam u)|`` for every ``lam``; nan where undefined."""
    x, t, u = (np.asarray(v, dtype=np.float64) for v in (x, t, u))
    lam = np.asarray(lambdas, dtype=np.float64)
    diff = x[None, :] - t[None, :] - lam[:, None] * u[None, :]
    fx, ft, fu = f(x), f(t), f(u)
    img = fx[None, :] - ft[None, :] - lam[:, None] * fu[None, :]
    num = np.linalg.norm(img, axis=1)
    den = np.linalg.norm(diff, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > 0, num / den, np.nan)


def certify_point_line(f: LinearMap, x, line, eps: float, lambdas=()) -> bool:
    """Verify ``|f(x) - f(t + lam u)| >= (1 - 3 eps) |x - (t + lam u)|``.

    ``line = (t, u)`` with ``|u| = 1`` and ``<u, t> = 0``.  The map must be a
    ``(1 ± eps/16)``-embedding of ``{0, u, -u, x - (t + <x,u> u)}``.  Besides
    ``lambdas`` the check includes the projection parameter ``<x, u>`` and
    ``<x, u> ± |x - (t + <x,u> u)|``.
    """
    t, u = (np.asarray(v, dtype=np.float64) for v in line)
    x = np.asarray(x, dtype=np.float64)
    if abs(float(np.linalg.norm(u)) - 1.0) > 1e-9 or abs(float(u @ t)) > 1e-9 * max(1.0, float(np.linalg.norm(t))):
        raise PreconditionFailed("need |u| = 1 and <u, t> = 0")
    proj = float(x @ u)
    resid = x - (t + proj * u)
    pre = certify_embedding(f, np.vstack([np.zeros_like(u), u, -u, resid]), eps / 16)
    if not pre.passed:
        raise PreconditionFailed(f"map is not a (1 ± {eps / 16})-embedding of the point-line set")
    rn = float(np.linalg.norm(resid))
    lam = np.concatenate([np.asarray(lambdas, dtype=np.float64).ravel(), [proj, proj - rn, proj + rn]])
    ratios = point_line_ratios(f, x, t, u, lam)
    ok = np.isnan(ratios) | (ratios >= (1 - 3 * eps) - 1e-12)
    return bool(np.all(ok))


# --------------------------------------------------------------------------
# end-to-end embedding


@dataclass
class EmbeddingJob:
    curves: List[Curve]
    epsilon: float
    epsilon_point: float
    target_dim: int
    augmented_points: np.ndarray
    no_reduction: bool = False


@dataclass
class EmbeddingResult:
    linear_map: LinearMap
    curves: List[Curve]
    report: Optional[CertReport]
    job: EmbeddingJob
    attempts: int = 1


def certified_point_set(curves: Sequence[Curve], certify: str = "lower", all_pairs: bool = False) -> np.ndarray:
    """Vertices plus the augmentation required by ``certify`` (``lower`` or ``full``)."""
    curves = list(curves)
    parts = [np.concatenate([c.vertices for c in curves]), augmentation_lower(curves, all_pairs=all_pairs)]
    if certify == "full":
        for x in range(len(curves)):
            for y in range(x + 1, len(curves)):
                up = augmentation_upper(curves[x], curves[y])
                if len(up):
                    parts.append(up)
    return np.unique(np.concatenate(parts), axis=0)


def plan_embedding(curves: Sequence[Curve], eps: float, beta: float = 2.0, certify: str = "lower",
                   all_pairs: bool = False, target_dim: Optional[int] = None) -> EmbeddingJob:
    """Point set, point-level budget ``eps / 48`` and target dimension for a curve set."""
    curves = list(curves)
    if not 0 < eps < 1:
        raise ParamOutOfRange(f"eps must lie in (0, 1), got {eps}")
    if len(curves) < 2:
        raise ParamOutOfRange("need at least 2 curves")
    dims = {c.dim for c in curves}
    if len(dims) > 1:
        raise DimensionMismatch(f"mixed dimensions: {sorted(dims)}")
    d = dims.pop()
    pts = certified_point_set(curves, "full" if certify == "full" else "lower", all_pairs)
    eps_pt = eps / 48
    k = target_dim if target_dim is not None else target_dimension(eps_pt, max(len(pts), 2), beta)
    no_reduction = k >= d
    return EmbeddingJob(curves, eps, eps_pt, min(k, d), pts, no_reduction)


def embed_curve_set(curves: Sequence[Curve], eps: float, seed: int, certify: str | bool = "lower",
                    beta: float = 2.0, max_retries: int = 16, all_pairs: bool = False,
                    target_dim: Optional[int] = None) -> EmbeddingResult:
    """Embed a set of curves, resampling the map until it is certified.

    The point set is the vertices together with ``augmentation_lower`` (and,
    for ``certify="full"``, the pairwise ``augmentation_upper`` witnesses);
    the map is certified at ``eps / 48`` on it.  If the target dimension is
    not below ``d`` there is nothing to reduce and a random rotation of
    ``R^d`` is used instead of a Gaussian map.  On failure the seed is
    incremented, up to ``max_retries`` times, before :class:`RetriesExhausted`.
    """
    if certify is True:
        certify = "lower"
    elif certify is False:
        certify = "off"
    if certify not in ("off", "lower", "full"):
        raise ParamOutOfRange(f"unknown certification mode {certify!r}")
    job = plan_embedding(curves, eps, beta, certify, all_pairs, target_dim)
    d = job.curves[0].dim
    scheme = "orthogonal" if job.no_reduction else "gaussian"
    report = None
    f = None
    for attempt in range(max_retries + 1):
        f = sample_map(d, job.target_dim, seed + attempt, scheme=scheme)
        if certify == "off":
            break
        report = certify_embedding(f, job.augmented_points, job.epsilon_point)
        log.info("seed %d: certificate %s (%d pairs)", seed + attempt,
                 "passed" if report.passed else "failed", report.pair_count)
        if report.passed:
            break
    else:
        raise RetriesExhausted(f"no certified map after {max_retries + 1} attempts", report, f)
    embedded = [apply_map(f, c) for c in job.curves]
    return EmbeddingResult(f, embedded, report, job, attempt + 1)
