"""Generic differential geometry of a parametric surface from its 2-jet.

Everything here works for any immersion ``x(s, u)`` and knows nothing
about developables or inversions; it is the independent side of every
closed-form check in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ExcludedPoint, SingularPoint
from .exprlang import CompiledMap
from .jets import ScalarJet2, SurfaceJet2, fd_jet_surface
from . import jets

SINGULAR_TOL = 1e-12

SurfaceJetFn = Callable[[float, float], SurfaceJet2]


def _never(s: float, u: float) -> bool:
    return False


@dataclass(frozen=True)
class SurfaceModel:
    """An immersion over a rectangular domain.

    ``exclude(s, u)`` marks points that must not be evaluated (edge of
    regression, inversion centre, ...).
    """

    jet: SurfaceJetFn
    domain: tuple[tuple[float, float], tuple[float, float]] = (
        (-math.inf, math.inf),
        (-math.inf, math.inf),
    )
    exclude: Callable[[float, float], bool] = _never
    name: str = "surface"

    def __call__(self, s: float, u: float) -> np.ndarray:
        return self.jet(s, u).p

    def jet_at(self, s: float, u: float) -> SurfaceJet2:
        if self.exclude(s, u):
            raise ExcludedPoint(f"({s!r}, {u!r}) is excluded from {self.name}")
        return self.jet(s, u)


def surface_from_components(
    fn: Callable[[ScalarJet2, ScalarJet2], tuple], name: str = "surface", **kw
) -> SurfaceModel:
    """Build a model from a function written in jet arithmetic."""

    def jet(s: float, u: float) -> SurfaceJet2:
        xs = fn(ScalarJet2.variable(s, 0), ScalarJet2.variable(u, 1))
        return SurfaceJet2.from_components(
            [x if isinstance(x, ScalarJet2) else ScalarJet2.constant(float(x)) for x in xs]
        )

    return SurfaceModel(jet, name=name, **kw)


def expression_surface(cmap: CompiledMap, **kw) -> SurfaceModel:
    if cmap.arity != 2:
        raise ValueError("a surface expression needs two parameters")
    return SurfaceModel(cmap.eval_jet, name=kw.pop("name", cmap.source.strip()), **kw)


def plane() -> SurfaceModel:
    return surface_from_components(lambda s, u: (s, u, 0.0), "plane")


def sphere(R: float) -> SurfaceModel:
    """Sphere of radius ``R``; with this parameter order the normal points outward."""
    return surface_from_components(
        lambda s, u: (R * jets.cos(u) * jets.cos(s), R * jets.cos(u) * jets.sin(s), R * jets.sin(u)),
        f"sphere({R:g})",
    )


def helicoid(pitch: float = 2.0) -> SurfaceModel:
    """``(u cos v, u sin v, pitch * v)`` with parameters in the order (u, v)."""
    return surface_from_components(
        lambda u, v: (u * jets.cos(v), u * jets.sin(v), pitch * v), f"helicoid({pitch:g})"
    )


# --- pointwise quantities ----------------------------------------------------

@dataclass(frozen=True)
class FundForms:
    E: float
    F: float
    G: float
    e: float
    f: float
    g: float
    U: np.ndarray | None = None  # unit normal; None for predicted coefficients

    @property
    def first(self) -> np.ndarray:
        return np.array([[self.E, self.F], [self.F, self.G]])

    @property
    def second(self) -> np.ndarray:
        return np.array([[self.e, self.f], [self.f, self.g]])

    @property
    def det_first(self) -> float:
        return self.E * self.G - self.F * self.F

    def coefficients(self) -> tuple[float, ...]:
        return (self.E, self.F, self.G, self.e, self.f, self.g)


@dataclass(frozen=True)
class CurvatureData:
    K: float
    H: float


@dataclass(frozen=True)
class Weingarten:
    """Shape operator in the coordinate basis, acting on column vectors."""

    matrix: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix))

    @property
    def det(self) -> float:
        m = self.matrix
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


@dataclass(frozen=True)
class Christoffels:
    """Symbols of the second kind; ``g1_12`` is Gamma^1_{12} = Gamma^1_{21}."""

    g1_11: float
    g2_11: float
    g1_12: float
    g2_12: float
    g1_22: float
    g2_22: float

    NAMES = ("g1_11", "g2_11", "g1_12", "g2_12", "g1_22", "g2_22")

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, n) for n in self.NAMES)


def forms_from_jet(j: SurfaceJet2) -> FundForms:
    xs, xu = j.p_s, j.p_u
    E, F, G = float(xs @ xs), float(xs @ xu), float(xu @ xu)
    det = E * G - F * F
    if not det > SINGULAR_TOL:
        raise SingularPoint(f"EG - F^2 = {det:.3g}")
    n = np.cross(xs, xu)
    U = n / np.linalg.norm(n)
    return FundForms(E, F, G, float(j.p_ss @ U), float(j.p_su @ U), float(j.p_uu @ U), U)


def fund_forms(surface: SurfaceModel, s: float, u: float) -> FundForms:
    """First and second fundamental forms with normal ``x_s x x_u / |x_s x x_u|``."""
    return forms_from_jet(surface.jet_at(s, u))


def curvatures(forms: FundForms) -> CurvatureData:
    det = forms.det_first
    K = (forms.e * forms.g - forms.f ** 2) / det
    H = (forms.e * forms.G - 2.0 * forms.f * forms.F + forms.g * forms.E) / (2.0 * det)
    return CurvatureData(K, H)


def weingarten(forms: FundForms) -> Weingarten:
    """I^{-1} II, trace 2H and determinant K."""
    E, F, G, det = forms.E, forms.F, forms.G, forms.det_first
    inv = np.array([[G, -F], [-F, E]]) / det
    return Weingarten(inv @ forms.second)


def christoffel_from_jet(j: SurfaceJet2) -> Christoffels:
    xs, xu = j.p_s, j.p_u
    E, F, G = float(xs @ xs), float(xs @ xu), float(xu @ xu)
    det = E * G - F * F
    if not det > SINGULAR_TOL:
        raise SingularPoint(f"EG - F^2 = {det:.3g}")
    inv = np.array([[G, -F], [-F, E]]) / det
    out = []
    for x_ij in (j.p_ss, j.p_su, j.p_uu):
        gamma = inv @ np.array([x_ij @ xs, x_ij @ xu])
        out.extend(float(g) for g in gamma)
    return Christoffels(*out)


def christoffel(surface: SurfaceModel, s: float, u: float) -> Christoffels:
    """Gamma^k_ij = sum_l g^{kl} <x_ij, x_l>."""
    return christoffel_from_jet(surface.jet_at(s, u))


def metric_christoffel(surface: SurfaceModel, s: float, u: float, h: float = 1e-4) -> Christoffels:
    """Christoffel symbols from central differences of E, F, G.

    Uses only first derivatives of the immersion at neighbouring points, so
    it shares no formula with ``christoffel``.  Accuracy is O(h^2).
    """

    def metric(a: float, b: float) -> np.ndarray:
        j = fd_jet_surface(surface, a, b)
        return np.array([[j.p_s @ j.p_s, j.p_s @ j.p_u], [j.p_s @ j.p_u, j.p_u @ j.p_u]])

    g = metric(s, u)
    dg = [
        (metric(s + h, u) - metric(s - h, u)) / (2 * h),
        (metric(s, u + h) - metric(s, u - h)) / (2 * h),
    ]
    ginv = np.linalg.inv(g)
    out = []
    for i, j in ((0, 0), (0, 1), (1, 1)):
        lowered = np.array([0.5 * (dg[i][l, j] + dg[j][l, i] - dg[l][i, j]) for l in range(2)])
        out.extend(float(x) for x in ginv @ lowered)
    return Christoffels(*out)
