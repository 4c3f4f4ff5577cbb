import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invsurf import exprlang
from invsurf.errors import ExcludedPoint, SingularPoint
from invsurf.surfaces import (
    SurfaceModel,
    christoffel,
    curvatures,
    expression_surface,
    fund_forms,
    helicoid,
    metric_christoffel,
    plane,
    sphere,
    surface_from_components,
    weingarten,
)

R2 = math.sqrt(0.5)


def test_plane():
    f = fund_forms(plane(), 0.3, -2.0)
    assert (f.E, f.F, f.G, f.e, f.f, f.g) == (1, 0, 1, 0, 0, 0)
    assert np.allclose(weingarten(f).matrix, 0)
    assert christoffel(plane(), 1.0, 2.0).as_tuple() == (0,) * 6


@pytest.mark.parametrize("v", [0.0, 0.7, -2.0])
def test_helicoid_forms(v):
    f = fund_forms(helicoid(2.0), 1.0, v)
    assert (f.E, f.F, f.G) == pytest.approx((1, 0, 5))


def test_helicoid_curvature_and_christoffel():
    c = curvatures(fund_forms(helicoid(2.0), 0.0, 0.3))
    assert (c.K, c.H) == pytest.approx((-0.25, 0.0))
    for u in (0.0, 0.5, 1.0, 3.0):
        assert curvatures(fund_forms(helicoid(2.0), u, 0.1)).K == pytest.approx(-4 / (4 + u * u) ** 2)
    assert christoffel(helicoid(2.0), 1.0, 0.4).g1_22 == pytest.approx(-1.0)


def test_sphere():
    f = fund_forms(sphere(2.0), 0.4, 0.3)
    c = curvatures(f)
    assert c.K == pytest.approx(0.25) and abs(c.H) == pytest.approx(0.5)
    assert np.dot(f.U, sphere(2.0)(0.4, 0.3)) > 0  # outward
    assert np.allclose(weingarten(f).matrix, -0.5 * np.eye(2))


def test_tangent_developable_of_helix(helix_model):
    surf = helix_model.as_surface()
    f = fund_forms(surf, 0.0, 1.0)
    assert (f.E, f.F, f.G, f.e, f.f, f.g) == pytest.approx((1.25, 1, 1, -0.25, 0, 0))
    assert np.allclose(f.U, (0, R2, -R2))
    c = curvatures(f)
    assert abs(c.K) < 1e-8 and c.H == pytest.approx(-0.5)
    S = weingarten(f)
    assert np.allclose(S.matrix, [[-1, 0], [1, 0]])
    assert S.trace == pytest.approx(-1.0) and S.det == pytest.approx(0.0)
    chris = christoffel(surf, 0.0, 1.0)
    assert chris.as_tuple() == pytest.approx((1.0, -1.25, 1.0, -1.0, 0.0, 0.0))


def test_singular_and_excluded(helix_model):
    with pytest.raises(SingularPoint):
        fund_forms(SurfaceModel(helix_model.as_surface().jet), 0.0, 0.0)  # edge of regression
    with pytest.raises(ExcludedPoint):
        fund_forms(helix_model.as_surface(), 0.0, 0.0)


SURFACES = [
    helicoid(2.0),
    sphere(1.5),
    surface_from_components(lambda s, u: (s, u, s * s - u * u + s * u * u), "cubic graph"),
    expression_surface(exprlang.parse("(2 + cos(u))*cos(s), (2 + cos(u))*sin(s), sin(u)")),
    expression_surface(exprlang.parse("s, u, exp(-(s^2 + u^2))")),
]
IDS = ["helicoid", "sphere", "cubic", "torus", "gaussian"]


@pytest.mark.parametrize("surface", SURFACES, ids=IDS)
def test_trace_det_and_discriminant(surface):
    rng = np.random.default_rng(4)
    for s, u in rng.uniform(-1.2, 1.2, size=(200, 2)):
        f = fund_forms(surface, s, u)
        c = curvatures(f)
        S = weingarten(f)
        assert abs(S.trace - 2 * c.H) <= 1e-9 * max(1, abs(c.H))
        assert abs(S.det - c.K) <= 1e-9 * max(1, abs(c.K))
        assert c.H ** 2 - c.K >= -1e-9
        assert abs(np.linalg.norm(f.U) - 1) < 1e-12
        assert f.E > 0 and f.G > 0 and f.det_first > 0


@pytest.mark.parametrize("surface", SURFACES, ids=IDS)
def test_christoffel_matches_metric_derivatives(surface):
    rng = np.random.default_rng(5)
    for s, u in rng.uniform(-1.2, 1.2, size=(25, 2)):
        a = np.array(christoffel(surface, s, u).as_tuple())
        b = np.array(metric_christoffel(surface, s, u).as_tuple())
        assert np.all(np.abs(a - b) < 1e-4 * np.maximum(1, np.abs(a)))


@pytest.mark.parametrize("surface", SURFACES, ids=IDS)
def test_swapping_parameters_flips_orientation(surface):
    swapped = SurfaceModel(lambda a, b: _swap(surface.jet(b, a)))
    for s, u in [(0.3, 0.2), (-0.7, 1.1)]:
        f, g = fund_forms(surface, s, u), fund_forms(swapped, u, s)
        assert np.allclose(g.U, -f.U)
        assert (g.e, g.f, g.g) == pytest.approx((-f.g, -f.f, -f.e))
        assert (g.E, g.F, g.G) == pytest.approx((f.G, f.F, f.E))


def _swap(j):
    return j.__class__(j.p, j.p_u, j.p_s, j.p_uu, j.p_su, j.p_ss)


@settings(max_examples=100, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.5, 4))
def test_helicoid_gauss_curvature_property(u, v, c):
    K = curvatures(fund_forms(helicoid(c), u, v)).K
    assert K == pytest.approx(-c * c / (c * c + u * u) ** 2, rel=1e-9, abs=1e-12)
