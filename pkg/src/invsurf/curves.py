"""Space curves and their Frenet apparatus."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    CurveNotArcLength,
    DegenerateCurvature,
    InvalidParam,
    IrregularPoint,
    UnknownCurve,
)
from .exprlang import CompiledMap
from .jets import ScalarJet3

KAPPA_MIN = 1e-9
SPEED_MIN = 1e-12
ARC_LENGTH_TOL = 1e-9

CurveJetFn = Callable[[float], tuple[ScalarJet3, ScalarJet3, ScalarJet3]]


@dataclass(frozen=True)
class CurveModel:
    """A regular space curve given by exact coordinate jets.

    ``jet(t)`` returns three ``ScalarJet3`` (value plus three derivatives
    per coordinate).  ``arc_length`` asserts unit speed; closed-form
    tangent-developable formulas refuse curves without it.
    """

    jet: CurveJetFn
    interval: tuple[float, float] = (-math.inf, math.inf)
    arc_length: bool = False
    name: str = "curve"
    params: tuple[float, ...] = field(default=())

    def __call__(self, t: float) -> np.ndarray:
        return np.array([c.f for c in self.jet(t)])

    def derivatives(self, t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(gamma, gamma', gamma'', gamma''') at ``t``."""
        rows = np.array([c.as_tuple() for c in self.jet(t)])
        return rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3]

    def describe(self) -> str:
        if self.params:
            return f"{self.name}({', '.join(f'{p:g}' for p in self.params)})"
        return self.name

    def sample_points(self, n: int = 33) -> np.ndarray:
        lo, hi = self.interval
        if not (math.isfinite(lo) and math.isfinite(hi)):
            lo, hi = -10.0, 10.0
        return np.linspace(lo, hi, n)

    def check_arc_length(self, n: int = 33) -> float:
        """Largest deviation of the speed from 1 over ``n`` samples."""
        return max(abs(np.linalg.norm(self.derivatives(t)[1]) - 1.0) for t in self.sample_points(n))

    def require_arc_length(self) -> None:
        if not self.arc_length:
            raise CurveNotArcLength(f"{self.describe()} is not declared arc-length parametrized")


@dataclass(frozen=True)
class FrenetData:
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: float
    tau: float
    kappa_s: float  # d(kappa)/d(arc length)


def frenet(curve: CurveModel, t: float) -> FrenetData:
    """Frenet frame, curvature, torsion and d(kappa)/ds at parameter ``t``.

    General-parameter formulas are used, so ``t`` need not be arc length.
    ``kappa_s`` is exact: with ``c = g' x g''`` one has ``c' = g' x g'''``,
    hence

        dk/dt = <c, g' x g'''> / (|c| |g'|^3) - 3 |c| <g', g''> / |g'|^5

    and ``kappa_s = (dk/dt) / |g'|``.
    """
    _, d1, d2, d3 = curve.derivatives(t)
    speed = float(np.linalg.norm(d1))
    if speed < SPEED_MIN:
        raise IrregularPoint(f"|gamma'| = {speed:.3g} at t={t!r}")
    c = np.cross(d1, d2)
    cn = float(np.linalg.norm(c))
    kappa = cn / speed ** 3
    if kappa < KAPPA_MIN:
        raise DegenerateCurvature(f"kappa = {kappa:.3g} at t={t!r}; torsion undefined")
    tau = float(np.dot(c, d3)) / cn ** 2
    T = d1 / speed
    B = c / cn
    N = np.cross(B, T)
    dkappa_dt = float(np.dot(c, np.cross(d1, d3))) / (cn * speed ** 3) - 3.0 * cn * float(
        np.dot(d1, d2)
    ) / speed ** 5
    return FrenetData(T=T, N=N, B=B, kappa=kappa, tau=tau, kappa_s=dkappa_dt / speed)


# --- builtins --------------------------------------------------------------

def _helix(a: float, b: float) -> CurveJetFn:
    c = math.hypot(a, b)

    def jet(s: float):
        w = s / c
        cw, sw = math.cos(w), math.sin(w)
        k1, k2, k3 = 1.0 / c, 1.0 / c ** 2, 1.0 / c ** 3
        return (
            ScalarJet3(a * cw, -a * sw * k1, -a * cw * k2, a * sw * k3),
            ScalarJet3(a * sw, a * cw * k1, -a * sw * k2, -a * cw * k3),
            ScalarJet3(b * w, b * k1, 0.0, 0.0),
        )

    return jet


def _circle(R: float) -> CurveJetFn:
    def jet(s: float):
        w = s / R
        cw, sw = math.cos(w), math.sin(w)
        return (
            ScalarJet3(R * cw, -sw, -cw / R, sw / R ** 2),
            ScalarJet3(R * sw, cw, -sw / R, -cw / R ** 2),
            ScalarJet3(0.0),
        )

    return jet


def _twisted_cubic(t: float):
    return (
        ScalarJet3(t, 1.0, 0.0, 0.0),
        ScalarJet3(t * t, 2.0 * t, 2.0, 0.0),
        ScalarJet3(t ** 3, 3.0 * t * t, 6.0 * t, 6.0),
    )


_TWO_PI = 2.0 * math.pi


def builtin_curve(name: str, params: tuple[float, ...] | list[float] = ()) -> CurveModel:
    """``helix(a, b)``, ``circle(R)`` or ``twisted_cubic``.

    The helix and circle are arc-length parametrized; the twisted cubic
    ``(t, t^2, t^3)`` is not.
    """
    params = tuple(float(p) for p in params)
    if name == "helix":
        if len(params) != 2:
            raise InvalidParam("helix takes two parameters (a, b)")
        a, b = params
        if not (a > 0 and b > 0):
            raise InvalidParam(f"helix parameters must be positive, got {params}")
        return CurveModel(_helix(a, b), (0.0, _TWO_PI * math.hypot(a, b)), True, "helix", params)
    if name == "circle":
        if len(params) != 1:
            raise InvalidParam("circle takes one parameter (R)")
        (R,) = params
        if not R > 0:
            raise InvalidParam(f"circle radius must be positive, got {R}")
        return CurveModel(_circle(R), (0.0, _TWO_PI * R), True, "circle", params)
    if name == "twisted_cubic":
        if params:
            raise InvalidParam("twisted_cubic takes no parameters")
        return CurveModel(_twisted_cubic, (-1.0, 1.0), False, "twisted_cubic")
    raise UnknownCurve(f"unknown curve {name!r}; expected helix, circle or twisted_cubic")


def expression_curve(
    cmap: CompiledMap, interval: tuple[float, float], arc_length: bool = False
) -> CurveModel:
    """Wrap a parsed one-parameter map.  A claimed arc-length flag is checked."""
    if cmap.arity != 1:
        raise InvalidParam("a curve expression must use one parameter (t or s)")
    curve = CurveModel(cmap.eval_jet, tuple(interval), arc_length, cmap.source.strip())
    if arc_length:
        dev = curve.check_arc_length()
        if dev > ARC_LENGTH_TOL:
            raise CurveNotArcLength(
                f"curve claims arc-length parametrization but | |gamma'| - 1 | reaches {dev:.3g}"
            )
    return curve
