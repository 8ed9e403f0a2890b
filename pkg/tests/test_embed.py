import math
import warnings

import numpy as np
import pytest

from frechet_jl import (
    Curve,
    LinearMap,
    apply_map,
    augmentation_lower,
    augmentation_upper,
    certify_embedding,
    certify_inner_products,
    certify_point_line,
    embed_curve_set,
    frechet_distance,
    sample_map,
    target_dimension,
    weak_frechet_distance,
)
from frechet_jl.curves import Segment, point_on_segment, point_segment_distance
from frechet_jl.datasets import generate
from frechet_jl.embed import certified_point_set, plan_embedding, point_line_ratios
from frechet_jl.errors import DimensionMismatch, ParamOutOfRange, PreconditionFailed, RetriesExhausted


def test_target_dimension_examples():
    assert target_dimension(0.5, 100, 2) == 443
    assert target_dimension(0.5, 100, 1) == 332
    assert target_dimension(0.25, 100, 2) > target_dimension(0.5, 100, 2)


@pytest.mark.parametrize("args", [(0.0, 10, 2), (1.0, 10, 2), (0.5, 1, 2), (0.5, 10, 0.5)])
def test_target_dimension_errors(args):
    with pytest.raises(ParamOutOfRange):
        target_dimension(*args)


def test_sample_map_deterministic_and_linear(rng):
    f, g = sample_map(10, 4, 3), sample_map(10, 4, 3)
    assert np.array_equal(f.matrix, g.matrix)
    assert not np.array_equal(f.matrix, sample_map(10, 4, 4).matrix)
    assert np.all(f(np.zeros(10)) == 0)
    p, q = rng.normal(size=10), rng.normal(size=10)
    al, be = 1.7, -0.3
    assert np.allclose(f(al * p + be * q), al * f(p) + be * f(q), atol=1e-12)


def test_sample_map_warns_when_expanding():
    with pytest.warns(UserWarning):
        sample_map(3, 5, 0)


def test_expected_squared_norm(rng):
    x = rng.normal(size=20)
    vals = [float(np.sum(sample_map(20, 5, s)(x) ** 2)) for s in range(1000)]
    assert abs(np.mean(vals) / float(x @ x) - 1) < 0.05


def test_orthogonal_map_is_isometry(rng):
    f = sample_map(12, 12, 5, scheme="orthogonal")
    assert np.allclose(f.matrix @ f.matrix.T, np.eye(12), atol=1e-12)
    p = rng.normal(size=(6, 12))
    rep = certify_embedding(f, p, 1e-9)
    assert rep.passed


def test_map_json_roundtrip_bit_exact(tmp_path):
    f = sample_map(7, 3, 11)
    g = LinearMap.from_json(f.to_json())
    assert g.matrix.tobytes() == f.matrix.tobytes()
    assert (g.seed, g.scheme) == (f.seed, f.scheme)


def test_map_rejects_non_finite():
    with pytest.raises(ValueError):
        LinearMap(np.array([[np.inf, 0.0]]))


def test_apply_map_identity_and_interpolation(rng):
    c = Curve(rng.normal(size=(5, 3)), id="x")
    ident = LinearMap(np.eye(3))
    assert apply_map(ident, c) == c
    f = sample_map(3, 2, 0)
    img = apply_map(f, c)
    assert len(img) == len(c) and img.id == "x"
    s = c.edge(2)
    lam = 0.37
    assert np.allclose(f(point_on_segment(s, lam)), point_on_segment(img.edge(2), lam), atol=1e-12)
    with pytest.raises(DimensionMismatch):
        apply_map(sample_map(4, 2, 0), c)


def test_apply_zero_map_flags_degenerate():
    c = Curve([(0, 0), (1, 1), (2, 0)])
    with pytest.warns(UserWarning):
        img = apply_map(LinearMap(np.zeros((2, 2))), c)
    assert np.all(img.vertices == 0)


def test_augmentation_lower_examples():
    pts = augmentation_lower([Curve([(0, 0), (2, 0)]), Curve([(1, 1), (3, 1)])])
    rows = {tuple(p) for p in pts}
    assert (0.0, 1.0) in rows  # residual of (1, 1) against the x-axis
    assert (0.0, 0.0) in rows and (1.0, 0.0) in rows and (-1.0, 0.0) in rows


def test_augmentation_lower_residuals_orthogonal(rng):
    curves = [Curve(rng.normal(size=(4, 3))) for _ in range(3)]
    pts = augmentation_lower(curves)
    verts = np.concatenate([c.vertices for c in curves])
    edges = [(c.vertices[k], c.vertices[k + 1]) for c in curves for k in range(len(c) - 1)]
    full = 1 + 2 * len(edges) + len(verts) * len(edges)
    # a vertex on its own edge line has residual 0 up to rounding, which may merge with the origin
    assert full - 2 * len(edges) <= len(pts) <= full
    for a, b in edges:
        u = (b - a) / np.linalg.norm(b - a)
        t = a - (a @ u) * u
        assert abs(t @ u) < 1e-12
        x = verts[0]
        res = x - (t + (x @ u) * u)
        assert np.min(np.linalg.norm(pts - res, axis=1)) < 1e-12
        assert abs(res @ u) < 1e-9


def test_augmentation_lower_point_on_line_has_zero_residual():
    c = Curve([(0, 0), (1, 1), (3, 3)])
    pts = augmentation_lower([c])
    assert np.sum(np.all(pts == 0, axis=1)) == 1


def test_augmentation_lower_skips_zero_edges():
    c = Curve([(0, 0), (0, 0), (1, 0)])
    with pytest.warns(UserWarning):
        augmentation_lower([c])


def test_augmentation_upper_identical_and_parallel():
    c = Curve([(0, 0), (1, 0), (1, 1)])
    pts = augmentation_upper(c, c)
    assert len(pts) > 0
    for p in pts:
        # witnesses are taken at radius d_F + 1e-9, hence only within 1e-9 of the vertices
        assert np.min(np.linalg.norm(c.vertices - p, axis=1)) <= 1e-8
    a, b = Curve([(0, 0), (1, 0)]), Curve([(0, 1), (1, 1)])
    assert len(augmentation_upper(a, b)) == 0


def test_augmentation_upper_points_on_edges(rng):
    for _ in range(10):
        a, b = Curve(rng.normal(size=(4, 2))), Curve(rng.normal(size=(3, 2)))
        for p in augmentation_upper(a, b):
            d = min(point_segment_distance(p, s) for s in a.edges() + b.edges())
            assert d < 1e-9


def test_certify_identity_and_zero(rng):
    pts = rng.normal(size=(10, 4))
    rep = certify_embedding(LinearMap(np.eye(4)), pts, 0.1)
    assert rep.passed and rep.max_expansion == pytest.approx(1.0) and rep.max_contraction == pytest.approx(1.0)
    assert rep.pair_count == 45
    rep = certify_embedding(LinearMap(np.zeros((2, 4))), pts, 0.1)
    assert not rep.passed and rep.failure_count == 45
    assert all(r == 0.0 for _, r in rep.failures)


def test_certify_matches_direct_computation(rng):
    pts = rng.normal(size=(40, 6)) * 5
    pts[1] = pts[0] + 1e-7  # close pair exercises the direct recomputation
    f = sample_map(6, 4, 2)
    rep = certify_embedding(f, pts, 0.3, block=7)
    ratios = []
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            ratios.append(np.linalg.norm(f(pts[i]) - f(pts[j])) / np.linalg.norm(pts[i] - pts[j]))
    ratios = np.array(ratios)
    assert rep.max_expansion == pytest.approx(ratios.max(), rel=1e-9)
    assert rep.max_contraction == pytest.approx(ratios.min(), rel=1e-6)
    assert rep.failure_count == int(np.sum((ratios > 1.3) | (ratios < 0.7)))


def test_certify_records_bounded_failures(rng):
    rep = certify_embedding(LinearMap(np.zeros((1, 3))), rng.normal(size=(30, 3)), 0.1, max_recorded=5)
    assert len(rep.failures) == 5 and rep.failure_count == 435


def test_gaussian_pass_rate(rng):
    pts = rng.normal(size=(20, 400))
    k = target_dimension(0.5, len(pts), 2)
    passed = sum(certify_embedding(sample_map(400, k, s), pts, 0.5).passed for s in range(50))
    assert passed / 50 >= 1 - 1 / len(pts)


def test_inner_products_identity_and_rotation(rng):
    pts = rng.normal(size=(8, 5))
    rep = certify_inner_products(LinearMap(np.eye(5)), pts, 0.1)
    assert rep.passed and rep.worst_upper_margin >= 1.4 - 1e-9 and rep.worst_lower_margin >= 1.6 - 1e-9
    rep = certify_inner_products(sample_map(5, 5, 3, scheme="orthogonal"), pts, 0.1)
    assert rep.passed


def test_inner_products_precondition(rng):
    with pytest.raises(PreconditionFailed):
        certify_inner_products(LinearMap(np.zeros((2, 5))), rng.normal(size=(3, 5)), 0.1)


def test_point_line_identity():
    t, u = np.zeros(3), np.array([1.0, 0, 0])
    x = np.array([0.5, 2.0, -1.0])
    assert certify_point_line(LinearMap(np.eye(3)), x, (t, u), 0.1, np.linspace(-10, 10, 201))
    ratios = point_line_ratios(LinearMap(np.eye(3)), x, t, u, [0.0, 1.0])
    assert np.allclose(ratios, 1.0)


def test_point_line_on_line_and_preconditions():
    t, u = np.array([0.0, 1.0]), np.array([1.0, 0.0])
    x = np.array([3.0, 1.0])
    assert certify_point_line(LinearMap(np.eye(2)), x, (t, u), 0.2, [0.0, 3.0, 5.0])
    with pytest.raises(PreconditionFailed):
        certify_point_line(LinearMap(np.eye(2)), x, (t, 2 * u), 0.2)
    with pytest.raises(PreconditionFailed):
        certify_point_line(LinearMap(np.eye(2)), x, (np.array([1.0, 1.0]), u), 0.2)
    with pytest.raises(PreconditionFailed):
        certify_point_line(LinearMap(np.diag([1.0, 0.5])), x + [0, 1], (t, u), 0.2)


def test_embed_identical_curves():
    c = Curve([(0, 0, 0), (1, 2, 0), (2, 0, 1)], id="a")
    res = embed_curve_set([c, c.with_id("b")], 0.3, 0)
    assert frechet_distance(*res.curves) == 0.0


def test_embed_errors():
    c = Curve([(0, 0), (1, 1)])
    with pytest.raises(ParamOutOfRange):
        embed_curve_set([c, c], 1.0, 0)
    with pytest.raises(ParamOutOfRange):
        embed_curve_set([c], 0.5, 0)
    with pytest.raises(ParamOutOfRange):
        embed_curve_set([c, c], 0.5, 0, certify="maybe")


def test_embed_retries_exhausted():
    curves = generate("random_walk", 4, 0, m=4, d=30).curves
    with pytest.raises(RetriesExhausted) as info:
        embed_curve_set(curves, 0.5, 0, target_dim=3, max_retries=2)
    assert info.value.report is not None and not info.value.report.passed


def test_embed_plan_budget():
    curves = generate("random_walk", 3, 0, m=4, d=500).curves
    job = plan_embedding(curves, 0.4)
    assert job.epsilon_point == pytest.approx(0.4 / 48)
    expected = target_dimension(0.4 / 48, len(job.augmented_points), 2)
    assert job.target_dim == min(expected, 500)
    assert job.no_reduction == (expected >= 500)


def test_embed_no_reduction_uses_rotation():
    curves = generate("random_walk", 5, 2, m=5, d=20).curves
    res = embed_curve_set(curves, 0.2, 0)
    assert res.job.no_reduction and res.linear_map.scheme == "orthogonal"
    assert res.report.passed and res.attempts == 1


def test_embed_reduction_certified_distortion():
    # high ambient dimension with few points so the map really reduces
    curves = generate("random_walk", 2, 5, m=3, d=20000).curves
    res = embed_curve_set(curves, 0.9, 1, certify="off", target_dim=3000)
    assert res.linear_map.d_prime == 3000 and res.report is None


def test_certified_maps_respect_conditional_bounds(rng):
    # explicit small instance: certify vertices plus both augmentations at eps/48
    eps = 0.2
    for seed in range(3):
        a, b = Curve(rng.normal(size=(3, 6))), Curve(rng.normal(size=(3, 6)))
        pts = certified_point_set([a, b], "full")
        f = sample_map(6, 6, seed, scheme="orthogonal")
        assert certify_embedding(f, pts, eps / 48).passed
        fa, fb = apply_map(f, a), apply_map(f, b)
        for dist in (frechet_distance, weak_frechet_distance):
            before, after = dist(a, b), dist(fa, fb)
            assert (1 - eps) * before - 1e-9 <= after <= (1 + eps) * before + 1e-9
