import numpy as np
import pytest

from flattwistor.errors import StepTooLarge, VectorInPlane, ZeroCovector
from flattwistor.grassmannian import (alpha_image_residual, alpha_surface_through, beta_surface_sample,
                                      beta_surface_through, beta_tangency_residual, chart_point, chart_tangent_maps,
                                      containment_residual, coordinate_charts, random_plane, tangent_map, tangent_rank)
from flattwistor.projective import OrientedPlane


def test_random_plane_properties():
    for n in (1, 2, 4):
        p = random_plane(n, n)
        assert np.abs(p.frame.T @ p.frame - np.eye(2)).max() < 1e-14
    assert abs(np.trace(random_plane(1, 3).projector()) - 2.0) < 1e-14
    assert random_plane(2, 1) != random_plane(2, 2)


def test_chart_point_basics():
    base = random_plane(3, 0)
    chart = coordinate_charts(base)[1]
    assert chart_point(chart, 0.0) is base
    p = chart_point(chart, 0.2)
    assert np.abs(p.frame.T @ p.frame - np.eye(2)).max() < 1e-14
    with pytest.raises(StepTooLarge):
        chart_point(chart, 0.5)


def test_chart_first_order_consistency():
    base = random_plane(2, 4)
    chart = coordinate_charts(base)[0]
    diffs = [(chart_point(chart, h).projector() - base.projector()) / h for h in (1e-2, 1e-3, 1e-4)]
    e1 = np.linalg.norm(diffs[0] - diffs[1])
    e2 = np.linalg.norm(diffs[1] - diffs[2])
    assert 5.0 < e1 / e2 < 20.0


def test_chart_tangents_span_full_space():
    for n in (1, 2, 3):
        base = random_plane(n, 10 + n)
        assert tangent_rank(chart_tangent_maps(base)) == 2 * n


def test_beta_surface_examples():
    e = np.eye(4)
    plane = OrientedPlane(e[0], e[1])
    surf = beta_surface_through(plane, [0.0, 1.0])
    assert np.allclose(np.abs(surf.line), e[0])
    assert surf.contains(plane)
    for m in beta_surface_sample(surf, 30, 1):
        assert containment_residual(surf, m) < 1e-12
    with pytest.raises(ZeroCovector):
        beta_surface_through(plane, [0.0, 0.0])


def test_beta_surface_dimension_and_tangency():
    n = 3
    surf = beta_surface_through(random_plane(n, 5), [0.3, -1.2])
    for member in beta_surface_sample(surf, 4, 2):
        maps = [tangent_map(c) for c in surf.member_curves(member)]
        assert tangent_rank(maps) == n
        assert beta_tangency_residual(surf, member) < 1e-8


def test_alpha_surface():
    plane = random_plane(3, 8)
    rng = np.random.default_rng(1)
    surf = alpha_surface_through(plane, rng.standard_normal(5))
    assert surf.contains(plane)
    members = surf.sample(20, 3)
    assert max(surf.residual(m) for m in members) < 1e-12
    maps = [tangent_map(c) for c in surf.member_curves(members[0])]
    assert tangent_rank(maps) == 2
    assert alpha_image_residual(surf, members[0]) < 1e-8
    with pytest.raises(VectorInPlane):
        alpha_surface_through(plane, plane.u + 2 * plane.v)
