"""Tangent developables ``M(s, u) = gamma(s) + u T(s)`` and their inverses.

The ``td_*`` functions evaluate the closed forms in terms of the Frenet
data of an arc-length curve; ``inv_td_*`` do the same for the inverse
surface ``N = Phi o M``.  ``as_surface`` builds the same immersion from the
raw curve jets for the generic pipeline, so the two never share code
beyond the curve itself.

Throughout, ``w = u * kappa`` and ``sgn = sign(w)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .curves import CurveModel, FrenetData, frenet
from .errors import DomainError
from .inversion import (
    LITERAL_DELTA_WEIGHT,
    ConformalFactors,
    InversionSpec,
    conformal_factors,
    predict_weingarten,
)
from .jets import SurfaceJet2
from .surfaces import (
    Christoffels,
    CurvatureData,
    FundForms,
    SurfaceModel,
    Weingarten,
    weingarten,
)

U_MIN = 1e-3


@dataclass(frozen=True)
class TangentDevelopableModel:
    """Tangent developable of ``curve``.

    Any regular curve can be meshed through ``as_surface``; the closed forms
    need an arc-length curve and raise ``CurveNotArcLength`` otherwise.
    """

    curve: CurveModel
    u_min: float = U_MIN

    def check(self, u: float) -> None:
        if abs(u) < self.u_min:
            raise DomainError(f"|u| = {abs(u):.3g} is inside the edge-of-regression band (u_min={self.u_min})")

    def excluded(self, s: float, u: float) -> bool:
        return abs(u) < self.u_min

    def as_surface(self) -> SurfaceModel:
        """Generic-pipeline immersion built from the curve jets, ``gamma + u gamma'``.

        For a curve that is not arc-length parametrized this is still the
        tangent developable, with the ruling coordinate scaled by the speed.
        """

        def jet(s: float, u: float) -> SurfaceJet2:
            g, d1, d2, d3 = self.curve.derivatives(s)
            return SurfaceJet2(g + u * d1, d1 + u * d2, d1.copy(), d2 + u * d3, d2.copy(), np.zeros(3))

        return SurfaceModel(jet, exclude=self.excluded, name=f"tangent developable of {self.curve.describe()}")


@dataclass(frozen=True)
class _Local:
    fr: FrenetData
    w: float
    sgn: float


def _local(model: TangentDevelopableModel, s: float, u: float) -> _Local:
    model.curve.require_arc_length()
    model.check(u)
    fr = frenet(model.curve, s)
    w = u * fr.kappa
    return _Local(fr, w, math.copysign(1.0, w))


def td_point(model: TangentDevelopableModel, s: float, u: float) -> np.ndarray:
    g, d1, _, _ = model.curve.derivatives(s)
    return g + u * d1


def td_jet(model: TangentDevelopableModel, s: float, u: float) -> SurfaceJet2:
    """2-jet of ``M`` written with the Frenet formulas."""
    loc = _local(model, s, u)
    fr = loc.fr
    T, N, B, k = fr.T, fr.N, fr.B, fr.kappa
    M_ss = k * N + u * (fr.kappa_s * N + k * (-k * T + fr.tau * B))
    return SurfaceJet2(td_point(model, s, u), T + u * k * N, T, M_ss, k * N, np.zeros(3))


def td_forms(model: TangentDevelopableModel, s: float, u: float) -> FundForms:
    loc = _local(model, s, u)
    w, tau = loc.w, loc.fr.tau
    return FundForms(1.0 + w * w, 1.0, 1.0, -loc.sgn * w * tau, 0.0, 0.0, -loc.sgn * loc.fr.B)


def td_mean_curvature(model: TangentDevelopableModel, s: float, u: float) -> float:
    loc = _local(model, s, u)
    return -loc.sgn * loc.fr.tau / (2.0 * loc.w)


def td_curvatures(
    model: TangentDevelopableModel, s: float, u: float
) -> tuple[CurvatureData, Weingarten, Weingarten]:
    """``(K, H)``, the shape operator ``I^-1 II`` and the literal matrix.

    The literal matrix ``H [[1, 1], [0, 0]]`` has trace ``H`` rather than
    ``2H``; it is returned for comparison only.
    """
    H = td_mean_curvature(model, s, u)
    standard = weingarten(td_forms(model, s, u))
    literal = Weingarten(H * np.array([[1.0, 1.0], [0.0, 0.0]]))
    return CurvatureData(0.0, H), standard, literal


def td_christoffel(model: TangentDevelopableModel, s: float, u: float) -> Christoffels:
    loc = _local(model, s, u)
    k, ks, w = loc.fr.kappa, loc.fr.kappa_s, loc.w
    return Christoffels(
        (u * ks + k) / w,
        (-k * (1.0 + w * w) - u * ks) / w,
        1.0 / u,
        -1.0 / u,
        0.0,
        0.0,
    )


def td_factors(model: TangentDevelopableModel, spec: InversionSpec, s: float, u: float) -> ConformalFactors:
    return conformal_factors(spec, td_point(model, s, u), td_forms(model, s, u).U)


def inv_td_forms(
    model: TangentDevelopableModel,
    spec: InversionSpec,
    s: float,
    u: float,
    delta_weight: float = LITERAL_DELTA_WEIGHT,
) -> FundForms:
    """Forms of the inverse surface.

    ``delta_weight=2`` gives the literal coefficients
    ``l = sgn lambda w tau - 2 delta (1 + w^2)``, ``m = n = -2 delta``;
    ``delta_weight=1`` gives the coefficients that actually hold.
    """
    loc = _local(model, s, u)
    fac = td_factors(model, spec, s, u)
    lam, d = fac.lam, delta_weight * fac.delta
    w, tau = loc.w, loc.fr.tau
    l2 = lam * lam
    return FundForms(
        l2 * (1.0 + w * w),
        l2,
        l2,
        loc.sgn * lam * w * tau - d * (1.0 + w * w),
        -d,
        -d,
        None,
    )


def _ratio(loc: _Local, lam: float) -> float:
    # sgn(w) tau / (2 lambda w)
    return loc.sgn * loc.fr.tau / (2.0 * lam * loc.w)


def inv_td_curvatures(model: TangentDevelopableModel, spec: InversionSpec, s: float, u: float) -> CurvatureData:
    loc = _local(model, s, u)
    fac = td_factors(model, spec, s, u)
    r2 = spec.r ** 2
    q = _ratio(loc, fac.lam)
    K = (4.0 / r2) * fac.eta * (-q + fac.eta / r2)
    H = q - 2.0 * fac.eta / r2
    return CurvatureData(K, H)


def inv_td_weingarten(
    model: TangentDevelopableModel, spec: InversionSpec, s: float, u: float
) -> tuple[Weingarten, Weingarten]:
    """Predicted shape operator ``-S_M / lambda - (2 eta / r^2) I`` and the literal matrix.

    The literal matrix writes ``sgn(v kappa) tau / (lambda v kappa)`` in
    its top-right entry; ``v`` is read as ``u``.
    """
    loc = _local(model, s, u)
    fac = td_factors(model, spec, s, u)
    _, standard, _ = td_curvatures(model, s, u)
    predicted = predict_weingarten(standard, fac, spec.r)
    a = 2.0 * _ratio(loc, fac.lam)
    b = 2.0 * fac.eta / spec.r ** 2
    literal = Weingarten(np.array([[a - b, a], [0.0, -b]]))
    return predicted, literal


def lambda_sq_gradient(model: TangentDevelopableModel, spec: InversionSpec, s: float, u: float) -> tuple[float, float, float]:
    """``(lambda^2, d lambda^2/ds, d lambda^2/du)`` from ``M_s = T + w N`` and ``M_u = T``."""
    loc = _local(model, s, u)
    d = td_point(model, s, u) - spec.c
    n2 = float(d @ d)
    r4 = spec.r ** 4
    M_s = loc.fr.T + loc.w * loc.fr.N
    M_u = loc.fr.T
    k = -4.0 * r4 / n2 ** 3
    return r4 / n2 ** 2, k * float(d @ M_s), k * float(d @ M_u)


def inv_td_christoffel(
    model: TangentDevelopableModel,
    spec: InversionSpec,
    s: float,
    u: float,
    corrected: bool = False,
) -> Christoffels:
    """Christoffel symbols of the inverse surface.

    With ``corrected=False`` the literal expressions are used verbatim.
    Those give Gamma^2_11 a ``+ (1 + w^2)^2 d(lambda^2)/du`` term; the
    conformal change of metric ``lambda^2 I`` yields ``-`` there, which is
    what ``corrected=True`` evaluates.  The other five agree.
    """
    base = td_christoffel(model, s, u)
    loc = _local(model, s, u)
    phi, ps, pu = lambda_sq_gradient(model, spec, s, u)
    w2 = loc.w * loc.w
    E = 1.0 + w2
    den = 2.0 * phi * w2
    sign_211 = -1.0 if corrected else 1.0
    return Christoffels(
        base.g1_11 + ((w2 - 1.0) * ps + E * pu) / den,
        base.g2_11 + (E * ps + sign_211 * E * E * pu) / den,
        base.g1_12 + (E * pu - ps) / den,
        base.g2_12 + E * (ps - pu) / den,
        (pu - ps) / den,
        ((w2 - 1.0) * pu + ps) / den,
    )


class FlatReason(str, enum.Enum):
    NOT_FLAT = "not_flat"
    TANGENT_PLANE_THROUGH_CENTER = "tangent_plane_through_center"
    NORMAL_FACTOR_VANISHES = "normal_factor_vanishes"
    BOTH = "both"


@dataclass(frozen=True)
class ClassificationResult:
    flat_reason: FlatReason
    minimal: bool
    normal_line_through_center: bool
    K_N: float
    H_N: float
    eta: float
    flat_factor: float  # sgn tau / (2 lambda w) - eta / r^2
    minimal_factor: float  # sgn tau / (2 lambda w) - 2 eta / r^2, equal to H_N


def flatness_factors(model: TangentDevelopableModel, spec: InversionSpec, s: float, u: float) -> tuple[float, float]:
    """The two factors of ``K_N = (4/r^2) * eta * (-(second))``: ``(eta, q - eta/r^2)``."""
    loc = _local(model, s, u)
    fac = td_factors(model, spec, s, u)
    return fac.eta, _ratio(loc, fac.lam) - fac.eta / spec.r ** 2


def classify_point(
    model: TangentDevelopableModel, spec: InversionSpec, s: float, u: float, tol: float = 1e-9
) -> ClassificationResult:
    """Pointwise flatness / minimality of the inverse surface.

    The point is flat when ``|K_N| < tol``.  ``K_N`` factors as
    ``-(4/r^2) * eta * (q - eta/r^2)``; the reason names the factor(s)
    responsible, a factor being negligible when it alone pushes the
    product under ``tol`` (see ``_vanishes``).  If the product is small
    only because both factors are, the reason is ``both``.

    The geometric test ``|U_M x (M - c)| < tol |M - c|`` for the normal
    line through the centre is reported independently.
    """
    loc = _local(model, s, u)
    fac = td_factors(model, spec, s, u)
    r2 = spec.r ** 2
    eta, other = flatness_factors(model, spec, s, u)
    curv = inv_td_curvatures(model, spec, s, u)
    scale = 4.0 / r2
    if abs(curv.K) < tol:
        eta_zero = _vanishes(abs(eta), abs(other), scale, tol)
        other_zero = _vanishes(abs(other), abs(eta), scale, tol)
        if eta_zero == other_zero:
            reason = FlatReason.BOTH
        elif eta_zero:
            reason = FlatReason.TANGENT_PLANE_THROUGH_CENTER
        else:
            reason = FlatReason.NORMAL_FACTOR_VANISHES
    else:
        reason = FlatReason.NOT_FLAT

    d = td_point(model, s, u) - spec.c
    U = td_forms(model, s, u).U
    through = float(np.linalg.norm(np.cross(U, d))) < tol * float(np.linalg.norm(d))
    return ClassificationResult(
        flat_reason=reason,
        minimal=abs(curv.H) < tol,
        normal_line_through_center=through,
        K_N=curv.K,
        H_N=curv.H,
        eta=eta,
        flat_factor=other,
        minimal_factor=_ratio(loc, fac.lam) - 2.0 * fac.eta / r2,
    )


def _vanishes(x: float, other: float, scale: float, tol: float) -> bool:
    """Whether factor ``x`` is negligible: ``scale * x * max(other, 1) < tol``.

    ``max(other, 1)`` keeps a factor from being declared zero merely
    because its partner is tiny.
    """
    return scale * x * max(other, 1.0) < tol
