"""Cross-check battery: closed forms against the generic pipeline.

Residuals are *scaled*: ``|a - b| / max(1, |b|)`` with ``b`` the reference
(generic) value, i.e. absolute for small quantities and relative for large
ones.  Each row of the report is the maximum over the grid.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import developable as dev
from .curves import frenet
from .errors import (
    CenterHit,
    DegenerateCurvature,
    DomainError,
    EmptyGrid,
    ExcludedPoint,
    IrregularPoint,
    SingularPoint,
)
from .inversion import (
    CONSISTENT_DELTA_WEIGHT,
    LITERAL_DELTA_WEIGHT,
    InversionSpec,
    conformal_factors,
    invert_surface,
    orientation_sign,
    predict_curvatures,
    predict_forms,
)
from .jets import fd_jet_curve
from .scene import SceneConfig
from .surfaces import (
    Christoffels,
    Weingarten,
    christoffel_from_jet,
    curvatures,
    forms_from_jet,
    weingarten,
)

ANALYTIC_TOL = 1e-8
FD_TOL = 1e-5
FRAME_TOL = 1e-9
CURVATURE_ZERO_TOL = 1e-9

_SKIP = (CenterHit, DegenerateCurvature, DomainError, ExcludedPoint, IrregularPoint, SingularPoint)


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    FLAGGED = "flagged_convention_mismatch"


@dataclass(frozen=True)
class CheckResult:
    name: str
    grid_points_evaluated: int
    points_skipped: int
    max_abs_residual: float
    tolerance: float
    status: Status
    note: str = ""


@dataclass
class VerificationReport:
    scene: str
    checks: list[CheckResult] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def overall(self) -> Status:
        return Status.FAIL if any(c.status is Status.FAIL for c in self.checks) else Status.PASS

    @property
    def passed(self) -> bool:
        return self.overall is Status.PASS

    def by_name(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_text(self) -> str:
        lines = [
            "# invsurf verification report",
            f"scene: {self.scene}",
            f"overall: {self.overall.value}",
            f"elapsed_seconds: {self.elapsed:.3f}",
            "",
            f"{'check':<48} {'status':<28} {'evaluated':>9} {'skipped':>7} {'max_residual':>24} {'tolerance':>10}",
        ]
        for c in self.checks:
            lines.append(
                f"{c.name:<48} {c.status.value:<28} {c.grid_points_evaluated:>9d} {c.points_skipped:>7d} "
                f"{c.max_abs_residual:>24.17g} {c.tolerance:>10.3g}"
            )
        notes = [c for c in self.checks if c.note]
        if notes:
            lines += ["", "notes:"]
            lines += [f"  {c.name}: {c.note}" for c in notes]
        return "\n".join(lines) + "\n"


def scaled(a, b) -> float:
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


def compare_matrices(a: Weingarten, b: Weingarten, tol: float, mode: str = "strict", name: str = "matrices") -> CheckResult:
    """Entry-wise (``strict``) or invariant-only (``trace_det_only``) comparison."""
    if mode == "strict":
        res = float(np.max(np.abs(a.matrix - b.matrix)))
    elif mode == "trace_det_only":
        res = max(abs(a.trace - b.trace), abs(a.det - b.det))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return CheckResult(name, 1, 0, res, tol, Status.PASS if res <= tol else Status.FAIL)


# --- per-point evaluation ----------------------------------------------------

@dataclass
class _Point:
    s: float
    u: float
    data: dict


def _evaluate_point(model: dev.TangentDevelopableModel, spec: InversionSpec, base, inverse, s: float, u: float) -> dict:
    jX = base.jet_at(s, u)
    jN = inverse.jet_at(s, u)
    fX = forms_from_jet(jX)
    fN = forms_from_jet(jN)
    sigma = orientation_sign(spec, jX.p, fX.U, fN.U)
    fac = conformal_factors(spec, jX.p, fX.U)
    cX = curvatures(fX)
    cN = curvatures(fN)
    td_curv, td_standard, td_literal = dev.td_curvatures(model, s, u)
    predicted_S, literal_S = dev.inv_td_weingarten(model, spec, s, u)
    return dict(
        fr=frenet(model.curve, s),
        jX=jX,
        fX=fX,
        fN=fN,
        sigma=sigma,
        fac=fac,
        cX=cX,
        cN=cN,
        SX=weingarten(fX),
        SN=weingarten(fN),
        chrX=christoffel_from_jet(jX),
        chrN=christoffel_from_jet(jN),
        td_forms=dev.td_forms(model, s, u),
        td_curv=td_curv,
        td_standard=td_standard,
        td_literal=td_literal,
        td_chr=dev.td_christoffel(model, s, u),
        inv_forms=dev.inv_td_forms(model, spec, s, u, LITERAL_DELTA_WEIGHT),
        inv_forms_1=dev.inv_td_forms(model, spec, s, u, CONSISTENT_DELTA_WEIGHT),
        inv_curv=dev.inv_td_curvatures(model, spec, s, u),
        inv_S=predicted_S,
        inv_literal=literal_S,
        inv_chr=dev.inv_td_christoffel(model, spec, s, u),
        inv_chr_fixed=dev.inv_td_christoffel(model, spec, s, u, corrected=True),
        factors=dev.flatness_factors(model, spec, s, u),
        r=spec.r,
    )


def _frenet_residual(curve, s: float, h: float = 1e-3) -> float:
    """Finite-difference Frenet system residual at arc length ``s``."""

    def frame(which):
        return lambda t: getattr(frenet(curve, t), which)

    fr = frenet(curve, s)
    dT, dN, dB = (np.array([c.f_t for c in fd_jet_curve(frame(w), s, h)]) for w in "TNB")
    return max(
        float(np.linalg.norm(dT - fr.kappa * fr.N)),
        float(np.linalg.norm(dN + fr.kappa * fr.T - fr.tau * fr.B)),
        float(np.linalg.norm(dB + fr.tau * fr.N)),
    )


def _frame_residual(fr) -> float:
    T, N, B = fr.T, fr.N, fr.B
    return max(
        abs(T @ T - 1), abs(N @ N - 1), abs(B @ B - 1),
        abs(T @ N), abs(T @ B), abs(N @ B),
        float(np.max(np.abs(B - np.cross(T, N)))),
    )


def _second(f) -> tuple[float, float, float]:
    return (f.e, f.f, f.g)


def _first(f) -> tuple[float, float, float]:
    return (f.E, f.F, f.G)


def _flat_mismatch(d: dict) -> float:
    K = d["cN"].K
    eta, other = d["factors"]
    scale = 4.0 / d["r"] ** 2
    by_factors = scale * abs(eta) * abs(other) < CURVATURE_ZERO_TOL
    return float((abs(K) < CURVATURE_ZERO_TOL) != by_factors)


def _minimal_mismatch(d: dict) -> float:
    H = d["sigma"] * d["cN"].H
    q_minus = d["inv_curv"].H  # sgn tau / (2 lambda w) - 2 eta / r^2
    return float((abs(H) < CURVATURE_ZERO_TOL) != (abs(q_minus) < CURVATURE_ZERO_TOL))


# name, tolerance, residual(point data), status when failing
_Check = tuple[str, float, Callable[[dict], float], Status]


def _christoffel_checks() -> list[_Check]:
    out = []
    for attr in Christoffels.NAMES:
        out.append((
            f"inverse_developable.christoffel.{attr}",
            ANALYTIC_TOL,
            (lambda a: lambda d: scaled(getattr(d["inv_chr"], a), getattr(d["chrN"], a)))(attr),
            Status.FAIL,
        ))
    out.append((
        "inverse_developable.christoffel.g2_11.sign_corrected",
        ANALYTIC_TOL,
        lambda d: scaled(d["inv_chr_fixed"].g2_11, d["chrN"].g2_11),
        Status.FAIL,
    ))
    return out


CHECKS: list[_Check] = [
    # base tangent developable, closed forms vs generic
    ("developable.first_form", ANALYTIC_TOL, lambda d: scaled(_first(d["td_forms"]), _first(d["fX"])), Status.FAIL),
    ("developable.second_form", ANALYTIC_TOL, lambda d: scaled(_second(d["td_forms"]), _second(d["fX"])), Status.FAIL),
    ("developable.normal", ANALYTIC_TOL, lambda d: scaled(d["td_forms"].U, d["fX"].U), Status.FAIL),
    ("developable.gauss_curvature_zero", ANALYTIC_TOL, lambda d: abs(d["cX"].K), Status.FAIL),
    ("developable.mean_curvature", ANALYTIC_TOL, lambda d: scaled(d["td_curv"].H, d["cX"].H), Status.FAIL),
    ("developable.christoffel", ANALYTIC_TOL, lambda d: scaled(d["td_chr"].as_tuple(), d["chrX"].as_tuple()), Status.FAIL),
    ("developable.shape_operator", ANALYTIC_TOL, lambda d: scaled(d["td_standard"].matrix, d["SX"].matrix), Status.FAIL),
    (
        "developable.shape_operator.trace_det",
        FRAME_TOL,
        lambda d: max(scaled(d["td_standard"].trace, 2 * d["td_curv"].H), scaled(d["td_standard"].det, d["td_curv"].K)),
        Status.FAIL,
    ),
    # transformation laws: predictors from generic X vs generic N
    (
        "inversion_law.first_form",
        ANALYTIC_TOL,
        lambda d: scaled(_first(predict_forms(d["fX"], d["fac"])), _first(d["fN"])),
        Status.FAIL,
    ),
    (
        "inversion_law.second_form",
        ANALYTIC_TOL,
        lambda d: scaled(_second(predict_forms(d["fX"], d["fac"])), np.multiply(d["sigma"], _second(d["fN"]))),
        Status.FAIL,
    ),
    (
        "inversion_law.second_form.delta_weight_1",
        ANALYTIC_TOL,
        lambda d: scaled(
            _second(predict_forms(d["fX"], d["fac"], CONSISTENT_DELTA_WEIGHT)),
            np.multiply(d["sigma"], _second(d["fN"])),
        ),
        Status.FAIL,
    ),
    (
        "inversion_law.gauss_curvature",
        ANALYTIC_TOL,
        lambda d: scaled(predict_curvatures(d["cX"].K, d["cX"].H, d["fac"], d["r"]).K, d["cN"].K),
        Status.FAIL,
    ),
    (
        "inversion_law.mean_curvature",
        ANALYTIC_TOL,
        lambda d: scaled(predict_curvatures(d["cX"].K, d["cX"].H, d["fac"], d["r"]).H, d["sigma"] * d["cN"].H),
        Status.FAIL,
    ),
    # inverse of the developable, closed forms vs generic
    ("inverse_developable.first_form", ANALYTIC_TOL, lambda d: scaled(_first(d["inv_forms"]), _first(d["fN"])), Status.FAIL),
    (
        "inverse_developable.second_form",
        ANALYTIC_TOL,
        lambda d: scaled(_second(d["inv_forms"]), np.multiply(d["sigma"], _second(d["fN"]))),
        Status.FAIL,
    ),
    (
        "inverse_developable.second_form.delta_weight_1",
        ANALYTIC_TOL,
        lambda d: scaled(_second(d["inv_forms_1"]), np.multiply(d["sigma"], _second(d["fN"]))),
        Status.FAIL,
    ),
    ("inverse_developable.gauss_curvature", ANALYTIC_TOL, lambda d: scaled(d["inv_curv"].K, d["cN"].K), Status.FAIL),
    ("inverse_developable.mean_curvature", ANALYTIC_TOL, lambda d: scaled(d["inv_curv"].H, d["sigma"] * d["cN"].H), Status.FAIL),
    (
        "inverse_developable.shape_operator",
        ANALYTIC_TOL,
        lambda d: scaled(d["inv_S"].matrix, d["sigma"] * d["SN"].matrix),
        Status.FAIL,
    ),
    (
        "inverse_developable.shape_operator.trace_det",
        FRAME_TOL,
        lambda d: max(scaled(d["inv_S"].trace, 2 * d["inv_curv"].H), scaled(d["inv_S"].det, d["inv_curv"].K)),
        Status.FAIL,
    ),
    *_christoffel_checks(),
    ("inverse_developable.flat_iff_factor_vanishes", 0.0, _flat_mismatch, Status.FAIL),
    ("inverse_developable.minimal_iff_factor_vanishes", 0.0, _minimal_mismatch, Status.FAIL),
    # literal shape-operator matrices; disagreement is a convention issue, not a failure
    (
        "developable.literal_matrix.entrywise",
        ANALYTIC_TOL,
        lambda d: float(np.max(np.abs(d["td_literal"].matrix - d["SX"].matrix))),
        Status.FLAGGED,
    ),
    (
        "inverse_developable.literal_matrix.entrywise",
        ANALYTIC_TOL,
        lambda d: float(np.max(np.abs(d["inv_literal"].matrix - d["sigma"] * d["SN"].matrix))),
        Status.FLAGGED,
    ),
    (
        "inverse_developable.literal_matrix.trace_det",
        ANALYTIC_TOL,
        lambda d: max(scaled(d["inv_literal"].trace, 2 * d["inv_curv"].H), scaled(d["inv_literal"].det, d["inv_curv"].K)),
        Status.FAIL,
    ),
]


def _row(name: str, tol: float, residuals: Iterable[float], skipped: int, fail_status: Status, note: str = "") -> CheckResult:
    residuals = list(residuals)
    worst = max(residuals) if residuals else 0.0
    status = Status.PASS if worst <= tol else fail_status
    return CheckResult(name, len(residuals), skipped, worst, tol, status, note)


def run_suite(scene: SceneConfig) -> VerificationReport:
    """Run every check over the scene grid; deterministic for a given scene."""
    t0 = time.perf_counter()
    points = scene.grid.points()
    if not points or scene.grid.first.count < 1 or scene.grid.second.count < 1:
        raise EmptyGrid("scene grid has no points")
    model = scene.developable()
    model.curve.require_arc_length()
    spec = scene.inversion()
    base = model.as_surface()
    inverse = invert_surface(spec, base)

    evaluated: list[_Point] = []
    skipped = 0
    for s, u in points:
        try:
            evaluated.append(_Point(s, u, _evaluate_point(model, spec, base, inverse, s, u)))
        except _SKIP:
            skipped += 1

    report = VerificationReport(scene.describe())

    s_values = sorted({p.s for p in evaluated})
    report.checks.append(_row("frenet.orthonormality", FRAME_TOL, (_frame_residual(frenet(model.curve, s)) for s in s_values), 0, Status.FAIL))
    report.checks.append(_row("frenet.system_residual", FD_TOL, (_frenet_residual(model.curve, s) for s in s_values), 0, Status.FAIL))
    report.checks.append(_row(
        "frenet.kappa_s_vs_fd",
        FD_TOL,
        (abs(frenet(model.curve, s).kappa_s - fd_jet_curve(lambda t: (frenet(model.curve, t).kappa, 0.0, 0.0), s)[0].f_t) for s in s_values),
        0,
        Status.FAIL,
    ))

    for name, tol, fn, fail_status in CHECKS:
        report.checks.append(_row(name, tol, (fn(p.data) for p in evaluated), skipped, fail_status))

    _annotate(report, evaluated)
    report.elapsed = time.perf_counter() - t0
    return report


def _annotate(report: VerificationReport, evaluated: list[_Point]) -> None:
    """Attach explanatory notes to rows whose formulas are known to disagree."""
    notes: dict[str, str] = {}
    if evaluated:
        trace36 = max(abs(p.data["td_literal"].trace - 2 * p.data["td_curv"].H) for p in evaluated)
        det36 = max(abs(p.data["td_literal"].det - p.data["td_curv"].K) for p in evaluated)
        notes["developable.literal_matrix.entrywise"] = (
            f"literal S_M has trace H, not 2H: max |tr - 2H| = {trace36:.17g}, max |det - K| = {det36:.17g}"
        )
        notes["inverse_developable.literal_matrix.entrywise"] = (
            "top-right entry read with u for v; trace and determinant agree with 2H_N and K_N, entries do not"
        )
        flat = sum(abs(p.data["cN"].K) < CURVATURE_ZERO_TOL for p in evaluated)
        minimal = sum(abs(p.data["cN"].H) < CURVATURE_ZERO_TOL for p in evaluated)
        notes["inverse_developable.flat_iff_factor_vanishes"] = f"{flat} flat point(s); residual counts disagreeing points"
        notes["inverse_developable.minimal_iff_factor_vanishes"] = f"{minimal} minimal point(s); residual counts disagreeing points"
    notes["inversion_law.second_form"] = "law with weight 2: -lambda II - 2 delta I"
    notes["inverse_developable.second_form"] = "coefficients with -2 delta"
    notes["inverse_developable.christoffel.g2_11"] = "literal form, + (1 + (u kappa)^2)^2 d(lambda^2)/du"
    notes["inverse_developable.christoffel.g2_11.sign_corrected"] = "same with - (1 + (u kappa)^2)^2 d(lambda^2)/du"
    for i, c in enumerate(report.checks):
        if c.name in notes:
            report.checks[i] = CheckResult(**{**c.__dict__, "note": notes[c.name]})
