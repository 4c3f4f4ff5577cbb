"""Inversion in the sphere of centre ``c`` and radius ``r``.

Besides the map itself this module holds the conformal scalars

    lambda = r^2 / |X - c|^2
    eta    = <U_X, X - c>
    delta  = 2 r^2 eta / |X - c|^4   (= 2 eta lambda^2 / r^2)

and predictors that transport fundamental forms, curvatures and the
shape operator of a surface ``X`` to its inverse ``Y = Phi o X``.

Orientation: the composed immersion ``Y(s, u)`` carries the normal
``Y_s x Y_u / |.|``.  Because inversion reverses orientation this equals
``-Phi_*(U_X) / lambda``, i.e. minus the mirror image of ``U_X`` in the
plane orthogonal to ``X - c``.  All predictors refer to that orientation;
``orientation_sign`` measures it for a given generic normal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CenterHit
from .jets import ScalarJet2, SurfaceJet2
from .surfaces import CurvatureData, FundForms, SurfaceModel, Weingarten

CENTER_TOL = 1e-12
SURFACE_CENTER_TOL = 1e-9

# Coefficient of delta * I in the second-form law.  The literal form of the
# law carries 2; the value consistent with the curvature laws is 1.
LITERAL_DELTA_WEIGHT = 2.0
CONSISTENT_DELTA_WEIGHT = 1.0


@dataclass(frozen=True)
class InversionSpec:
    c: np.ndarray
    r: float

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(3)
        if not np.all(np.isfinite(c)):
            raise ValueError("inversion centre must be finite")
        if not self.r > 0:
            raise ValueError(f"inversion radius must be positive, got {self.r!r}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "r", float(self.r))

    @property
    def tol(self) -> float:
        return CENTER_TOL * max(1.0, float(np.linalg.norm(self.c)))

    def describe(self) -> str:
        return f"c=({', '.join(f'{x:g}' for x in self.c)}) r={self.r:g}"


UNIT_SPHERE = InversionSpec(np.zeros(3), 1.0)


@dataclass(frozen=True)
class ConformalFactors:
    lam: float
    eta: float
    delta: float


def _offset(spec: InversionSpec, p) -> tuple[np.ndarray, float]:
    d = np.asarray(p, dtype=float) - spec.c
    n2 = float(d @ d)
    if not np.sqrt(n2) > spec.tol:
        raise CenterHit(f"point {np.asarray(p).tolist()} coincides with the inversion centre")
    return d, n2


def invert_point(spec: InversionSpec, p) -> np.ndarray:
    d, n2 = _offset(spec, p)
    return spec.c + (spec.r ** 2 / n2) * d


def pushforward(spec: InversionSpec, p, v) -> np.ndarray:
    """Differential of the inversion at ``p`` applied to ``v``."""
    d, n2 = _offset(spec, p)
    v = np.asarray(v, dtype=float)
    r2 = spec.r ** 2
    return (r2 / n2) * v - (2.0 * r2 * float(d @ v) / n2 ** 2) * d


def conformal_factors(spec: InversionSpec, point, normal) -> ConformalFactors:
    d, n2 = _offset(spec, point)
    lam = spec.r ** 2 / n2
    eta = float(np.asarray(normal, dtype=float) @ d)
    delta = 2.0 * spec.r ** 2 * eta / n2 ** 2
    return ConformalFactors(lam, eta, delta)


def predicted_normal(spec: InversionSpec, point, normal) -> np.ndarray:
    """Unit normal of the inverse surface in the orientation used by the predictors."""
    w = pushforward(spec, point, normal)
    return -w / np.linalg.norm(w)


def orientation_sign(spec: InversionSpec, point, normal_X, normal_Y) -> float:
    """+1 if ``normal_Y`` agrees with ``predicted_normal``, else -1."""
    return 1.0 if float(np.dot(normal_Y, predicted_normal(spec, point, normal_X))) >= 0 else -1.0


def invert_surface(spec: InversionSpec, surface: SurfaceModel) -> SurfaceModel:
    """The inverse surface ``Phi o X`` with exact jets by jet composition."""
    r2 = spec.r ** 2
    cx, cy, cz = (float(x) for x in spec.c)

    def jet(s: float, u: float) -> SurfaceJet2:
        j = surface.jet(s, u)
        _offset(spec, j.p)
        X = j.components()
        d = (X[0] - cx, X[1] - cy, X[2] - cz)
        scale = r2 / (d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
        return SurfaceJet2.from_components([scale * d[0] + cx, scale * d[1] + cy, scale * d[2] + cz])

    def exclude(s: float, u: float) -> bool:
        if surface.exclude(s, u):
            return True
        p = surface.jet(s, u).p
        return float(np.linalg.norm(p - spec.c)) < SURFACE_CENTER_TOL

    return SurfaceModel(jet, surface.domain, exclude, f"inverse of {surface.name} ({spec.describe()})")


# --- transformation-law predictors --------------------------------------------

def predict_forms(
    forms_X: FundForms, factors: ConformalFactors, delta_weight: float = LITERAL_DELTA_WEIGHT
) -> FundForms:
    """Fundamental forms of the inverse surface from those of ``X``.

    First form: ``lambda^2 I_X``.  Second form: ``-lambda II_X - w delta I_X``
    with ``w = delta_weight``.  The default ``w = 2`` is the literal law;
    ``w = 1`` is the version that agrees with the curvature laws and with
    direct computation.  The result carries no normal.
    """
    lam, delta = factors.lam, factors.delta
    l2 = lam * lam
    w = delta_weight * delta
    return FundForms(
        l2 * forms_X.E,
        l2 * forms_X.F,
        l2 * forms_X.G,
        -lam * forms_X.e - w * forms_X.E,
        -lam * forms_X.f - w * forms_X.F,
        -lam * forms_X.g - w * forms_X.G,
        None,
    )


def predict_curvatures(K_X: float, H_X: float, factors: ConformalFactors, r: float) -> CurvatureData:
    lam, eta = factors.lam, factors.eta
    K = K_X / lam ** 2 + (4.0 / r ** 2) * eta * H_X / lam + (4.0 / r ** 4) * eta ** 2
    H = -H_X / lam - 2.0 * eta / r ** 2
    return CurvatureData(K, H)


def predict_weingarten(S_X: Weingarten, factors: ConformalFactors, r: float) -> Weingarten:
    """``-S_X / lambda - (2 eta / r^2) I``."""
    return Weingarten(-S_X.matrix / factors.lam - (2.0 * factors.eta / r ** 2) * np.eye(2))
