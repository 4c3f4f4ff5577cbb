"""Acceptance criteria, each run at its stated tolerance.

Every test records one line ``criterion N [part]: PASS|FAIL  detail`` that
is printed in the pytest terminal summary (and when this file is run as a
script).  A criterion whose measured residual exceeds its tolerance fails;
nothing here is relaxed to make a line green.
"""

import math
import random
import subprocess
import sys

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, grid_20x20
from exprgen import random_map
from invsurf import developable as dev
from invsurf import exprlang
from invsurf.cli import main as cli_main
from invsurf.cli import read_obj
from invsurf.curves import builtin_curve
from invsurf.developable import FlatReason, TangentDevelopableModel
from invsurf.errors import ArityError, ExpressionError, ExpressionSyntaxError, UnknownIdentifier
from invsurf.inversion import (
    UNIT_SPHERE,
    InversionSpec,
    conformal_factors,
    invert_point,
    invert_surface,
    orientation_sign,
    predict_curvatures,
    predict_forms,
    predict_weingarten,
    pushforward,
)
from invsurf.jets import fd_jet_surface
from invsurf.scene import default_scene
from invsurf.surfaces import christoffel_from_jet, curvatures, forms_from_jet, helicoid, weingarten
from invsurf.verify import Status, run_suite


def record(label: str, ok: bool, detail: str) -> None:
    line = f"criterion {label}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def rel(a, b) -> float:
    """Largest ``|a - b| / max(1, |b|)``."""
    a, b = np.atleast_1d(np.asarray(a, float)), np.atleast_1d(np.asarray(b, float))
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


HELIX = builtin_curve("helix", (1.0, 1.0))
MODEL = TangentDevelopableModel(HELIX)
BASE = MODEL.as_surface()
INVERSE = invert_surface(UNIT_SPHERE, BASE)


def generic_point(s, u, spec=UNIT_SPHERE, base=BASE, inverse=INVERSE):
    """Generic-pipeline quantities of ``X`` and of its inverse ``N`` at (s, u)."""
    jX, jN = base.jet_at(s, u), inverse.jet_at(s, u)
    fX, fN = forms_from_jet(jX), forms_from_jet(jN)
    return dict(
        jX=jX,
        fX=fX,
        fN=fN,
        cX=curvatures(fX),
        cN=curvatures(fN),
        SX=weingarten(fX),
        SN=weingarten(fN),
        chrX=christoffel_from_jet(jX),
        chrN=christoffel_from_jet(jN),
        fac=conformal_factors(spec, jX.p, fX.U),
        sigma=orientation_sign(spec, jX.p, fX.U, fN.U),
    )


@pytest.fixture(scope="module")
def grid_data():
    return [(s, u, generic_point(s, u)) for s, u in grid_20x20()]


# --- 1 -------------------------------------------------------------------------

def test_criterion_1_inversion_invariants():
    rng = np.random.default_rng(20261016)
    worst_inv = worst_fix = worst_conf = 0.0
    for _ in range(1000):
        spec = InversionSpec(rng.uniform(-2, 2, 3), rng.uniform(0.5, 3.0))
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        p = spec.c + rng.uniform(0.1, 10.0) * direction
        worst_inv = max(worst_inv, np.linalg.norm(invert_point(spec, invert_point(spec, p)) - p) / max(1.0, np.linalg.norm(p)))
        on_sphere = spec.c + spec.r * direction
        worst_fix = max(worst_fix, np.linalg.norm(invert_point(spec, on_sphere) - on_sphere))
        v = rng.normal(size=3)
        lam = spec.r ** 2 / float((p - spec.c) @ (p - spec.c))
        worst_conf = max(worst_conf, abs(np.linalg.norm(pushforward(spec, p, v)) / (lam * np.linalg.norm(v)) - 1.0))
    ok = worst_inv < 1e-10 and worst_fix < 1e-12 and worst_conf < 1e-12
    record(
        "1",
        ok,
        f"involution {worst_inv:.2e} (<1e-10), sphere fixity {worst_fix:.2e} (<1e-12), "
        f"conformality {worst_conf:.2e} (<1e-12) over 1000 samples",
    )
    assert ok


# --- 2 -------------------------------------------------------------------------

def test_criterion_2_helicoid_demo(tmp_path):
    inv = invert_surface(UNIT_SPHERE, helicoid(2.0))
    us, vs = np.linspace(0.5, 2.0, 50), np.linspace(-1.5, 1.5, 50)

    def closed(u, v):
        return np.array([u * math.cos(v), u * math.sin(v), 2 * v]) / (u * u + 4 * v * v)

    worst_lib = max(float(np.max(np.abs(inv(u, v) - closed(u, v)))) for u in us for v in vs)
    assert cli_main(["demo-helicoid", "--out", str(tmp_path)]) == 0
    verts, faces = read_obj(tmp_path / "inverse_helicoid.obj")
    expected = np.array([closed(u, v) for u in us for v in vs])
    worst_obj = float(np.max(np.abs(verts - expected))) if verts.shape == expected.shape else math.inf
    ok = worst_lib < 1e-12 and worst_obj < 1e-12 and (tmp_path / "helicoid.obj").exists()
    record("2", ok, f"50x50 inverse helicoid: library {worst_lib:.2e}, exported OBJ {worst_obj:.2e} (<1e-12)")
    assert ok


# --- 3 -------------------------------------------------------------------------

def test_criterion_3_closed_forms_vs_generic(grid_data):
    forms = curv = chris = kzero = 0.0
    for s, u, g in grid_data:
        f = dev.td_forms(MODEL, s, u)
        c, _, _ = dev.td_curvatures(MODEL, s, u)
        forms = max(forms, rel([f.E, f.F, f.G, f.e, f.f, f.g], g["fX"].coefficients()))
        curv = max(curv, rel([c.K, c.H], [g["cX"].K, g["cX"].H]))
        kzero = max(kzero, abs(g["cX"].K))
        chris = max(chris, rel(dev.td_christoffel(MODEL, s, u).as_tuple(), g["chrX"].as_tuple()))
    ok = max(forms, curv, chris) < 1e-8 and kzero < 1e-8
    record(
        "3",
        ok,
        f"forms {forms:.2e}, curvatures {curv:.2e}, max |K_M| {kzero:.2e}, Christoffels {chris:.2e} (<1e-8)",
    )
    assert ok


# --- 4 -------------------------------------------------------------------------

TOL4 = 1e-6


def test_criterion_4_forms(grid_data):
    law = closed = 0.0
    worst_at = None
    for s, u, g in grid_data:
        target = [g["fN"].E, g["fN"].F, g["fN"].G, *(g["sigma"] * np.array([g["fN"].e, g["fN"].f, g["fN"].g]))]
        p = predict_forms(g["fX"], g["fac"])
        q = dev.inv_td_forms(MODEL, UNIT_SPHERE, s, u)
        r1 = rel([p.E, p.F, p.G, p.e, p.f, p.g], target)
        r2 = rel([q.E, q.F, q.G, q.e, q.f, q.g], target)
        if max(r1, r2) > max(law, closed):
            worst_at = (s, u)
        law, closed = max(law, r1), max(closed, r2)
    ok = max(law, closed) < TOL4
    record(
        "4 (fundamental forms)",
        ok,
        f"general law {law:.3g}, tangent-developable closed form {closed:.3g} (<{TOL4:g}); "
        f"worst at (s,u)={tuple(round(x, 4) for x in worst_at)}",
    )
    assert ok


def test_criterion_4_curvatures(grid_data):
    law = closed = 0.0
    for s, u, g in grid_data:
        target = [g["cN"].K, g["sigma"] * g["cN"].H]
        p = predict_curvatures(g["cX"].K, g["cX"].H, g["fac"], UNIT_SPHERE.r)
        q = dev.inv_td_curvatures(MODEL, UNIT_SPHERE, s, u)
        law = max(law, rel([p.K, p.H], target))
        closed = max(closed, rel([q.K, q.H], target))
    ok = max(law, closed) < TOL4
    record("4 (curvatures)", ok, f"general law {law:.2e}, closed form {closed:.2e} (<{TOL4:g})")
    assert ok


def test_criterion_4_weingarten(grid_data):
    law = closed = 0.0
    for s, u, g in grid_data:
        K, H = g["cN"].K, g["sigma"] * g["cN"].H
        p = predict_weingarten(g["SX"], g["fac"], UNIT_SPHERE.r)
        q, _ = dev.inv_td_weingarten(MODEL, UNIT_SPHERE, s, u)
        law = max(law, rel([p.trace, p.det], [2 * H, K]))
        closed = max(closed, rel([q.trace, q.det], [2 * H, K]))
    ok = max(law, closed) < TOL4
    record("4 (shape operator trace/det)", ok, f"general law {law:.2e}, closed form {closed:.2e} (<{TOL4:g})")
    assert ok


def test_criterion_4_christoffels(grid_data):
    names = ("g1_11", "g2_11", "g1_12", "g2_12", "g1_22", "g2_22")
    worst = dict.fromkeys(names, 0.0)
    for s, u, g in grid_data:
        pred = dev.inv_td_christoffel(MODEL, UNIT_SPHERE, s, u)
        for n in names:
            worst[n] = max(worst[n], rel(getattr(pred, n), getattr(g["chrN"], n)))
    ok = max(worst.values()) < TOL4
    record(
        "4 (Christoffel symbols)",
        ok,
        ", ".join(f"{n} {w:.3g}" for n, w in worst.items()) + f" (<{TOL4:g})",
    )
    assert ok


# --- 5 -------------------------------------------------------------------------

def test_criterion_5_spot_values():
    g0, g2 = generic_point(0.0, 1.0), generic_point(2.0, 1.0)
    checks = [
        ("lambda(0,1)", g0["fac"].lam, 0.5),
        ("eta(0,1)", g0["fac"].eta, 0.0),
        ("K_N(0,1)", g0["cN"].K, 0.0),
        ("H_N(0,1)", g0["sigma"] * g0["cN"].H, 1.0),
        ("G1_11_N(0,1)", g0["chrN"].g1_11, -2.5),
        ("G1_22_N(0,1)", g0["chrN"].g1_22, -2.0),
        ("lambda(2,1)", g2["fac"].lam, 1.0 / 6.0),
        ("eta(2,1)", g2["fac"].eta, -1.0),
        ("K_N(2,1)", g2["cN"].K, 16.0),
        ("H_N(2,1)", g2["sigma"] * g2["cN"].H, 5.0),
    ]
    worst = max(abs(got - want) / max(1.0, abs(want)) for _, got, want in checks)
    bad = [name for name, got, want in checks if abs(got - want) / max(1.0, abs(want)) >= 1e-6]
    ok = not bad
    record("5", ok, f"10 spot values via the generic pipeline, worst {worst:.2e} (<1e-6)" + (f"; off: {bad}" if bad else ""))
    assert ok


# --- 6 -------------------------------------------------------------------------

def test_criterion_6_flat_and_minimal_equivalences():
    tol = 1e-9
    flat_mismatch = minimal_mismatch = flat_points = 0
    for s, u in grid_20x20():
        g = generic_point(s, u)
        eta, other = dev.flatness_factors(MODEL, UNIT_SPHERE, s, u)
        factor_zero = 4.0 / UNIT_SPHERE.r ** 2 * abs(eta) * abs(other) < tol
        flat = abs(g["cN"].K) < tol
        flat_points += flat
        flat_mismatch += flat != factor_zero
        minimal_expr = dev.inv_td_curvatures(MODEL, UNIT_SPHERE, s, u).H
        minimal_mismatch += (abs(g["cN"].H) < tol) != (abs(minimal_expr) < tol)
        cls = dev.classify_point(MODEL, UNIT_SPHERE, s, u, tol)
        flat_mismatch += (cls.flat_reason is not FlatReason.NOT_FLAT) != flat

    s0, u0 = 1.0, 1.0
    M = dev.td_point(MODEL, s0, u0)
    U = dev.td_forms(MODEL, s0, u0).U
    on_normal = InversionSpec(M - 2.0 * U, 1.0)
    flagged = dev.classify_point(MODEL, on_normal, s0, u0).normal_line_through_center
    not_flagged = not dev.classify_point(MODEL, UNIT_SPHERE, s0, u0).normal_line_through_center
    ok = flat_mismatch == 0 and minimal_mismatch == 0 and flagged and not_flagged
    record(
        "6",
        ok,
        f"flatness mismatches {flat_mismatch} ({flat_points} flat points), minimality mismatches {minimal_mismatch}, "
        f"normal-line flag fires: {flagged}",
    )
    assert ok


# --- 7 -------------------------------------------------------------------------

@pytest.fixture(scope="module")
def default_report():
    return run_suite(default_scene())


def test_criterion_7_two_flagged_rows(default_report):
    flagged = [c.name for c in default_report.checks if c.status is Status.FLAGGED]
    ok = flagged == ["developable.literal_matrix.entrywise", "inverse_developable.literal_matrix.entrywise"]
    record("7 (flagged rows)", ok, f"flagged_convention_mismatch rows: {flagged}")
    assert ok


def test_criterion_7_literal_trace_det(grid_data):
    base_res = inv_res = 0.0
    for s, u, g in grid_data:
        _, _, lit_M = dev.td_curvatures(MODEL, s, u)
        _, lit_N = dev.inv_td_weingarten(MODEL, UNIT_SPHERE, s, u)
        base_res = max(base_res, rel([lit_M.trace, lit_M.det], [2 * g["cX"].H, g["cX"].K]))
        inv_res = max(inv_res, rel([lit_N.trace, lit_N.det], [2 * g["sigma"] * g["cN"].H, g["cN"].K]))
    ok = max(base_res, inv_res) < 1e-8
    record(
        "7 (literal matrices: trace/det vs 2H, K)",
        ok,
        f"base-surface literal matrix {base_res:.3g}, inverse-surface literal matrix {inv_res:.2e} (<1e-8)",
    )
    assert ok


# --- 8 -------------------------------------------------------------------------

ACCEPT = [
    ("u*cos(v), u*sin(v), 2*v", (1.0, 0.5), (math.cos(0.5), math.sin(0.5), 1.0)),
    ("cos(s), sin(s), 0", (0.0,), (1.0, 0.0, 0.0)),
    ("s^2*u, s, u", (2.0, 3.0), (12.0, 2.0, 3.0)),
    ("-s^2, u, 1", (3.0, 1.0), (-9.0, 1.0, 1.0)),
    ("2^3^2, s, u", (1.0, 1.0), (512.0, 1.0, 1.0)),
    ("1.5e-3*s, sqrt(s*s + u*u), exp(-u)", (3.0, 4.0), (4.5e-3, 5.0, math.exp(-4.0))),
    ("pi*s, s/u/2, (s + u)*(s − u)", (2.0, 1.0), (2 * math.pi, 1.0, 3.0)),
    ("sin(cos(s)), 1 - -u, 3", (0.0, 2.0), (math.sin(1.0), 3.0, 3.0)),
    ("  s ,u,   s*u  ", (2.0, 5.0), (2.0, 5.0, 10.0)),
    ("t, t^2, t^3", (2.0,), (2.0, 4.0, 8.0)),
]

REJECT = [
    ("1/(s −", ExpressionSyntaxError, 2),
    ("u cos v, 0, 0", ExpressionSyntaxError, 2),
    ("foo(s), 0, 0", UnknownIdentifier, 0),
    ("s^u, 0, 0", ExpressionSyntaxError, 2),
    ("s + , 0, 0", ExpressionSyntaxError, 4),
]


def _golden_failures() -> list[str]:
    failures = []
    for text, point, expected in ACCEPT:
        try:
            m = exprlang.parse(text)
            got = m(*point)
            again = exprlang.parse(m.to_source(), m.params)
        except ExpressionError as exc:
            failures.append(f"{text!r} rejected: {exc}")
            continue
        if rel(got, expected) > 1e-12:
            failures.append(f"{text!r} evaluates to {got}")
        if [exprlang.strip_offsets(c) for c in again.components] != [exprlang.strip_offsets(c) for c in m.components]:
            failures.append(f"{text!r} does not survive print/parse")
    for text, err, offset in REJECT:
        try:
            exprlang.parse(text)
            failures.append(f"{text!r} accepted")
        except err as exc:
            if exc.offset != offset:
                failures.append(f"{text!r} reported at byte {exc.offset}, expected {offset}")
    try:
        exprlang.parse("s, u")
        failures.append("two components accepted")
    except ArityError:
        pass
    return failures


def _random_oracle(n: int = 500, seed: int = 8) -> tuple[float, float]:
    rng = random.Random(seed)
    first = second = 0.0
    for _ in range(n):
        m = exprlang.parse(random_map(rng, 5), ("s", "u"))
        s, u = rng.uniform(-1, 1), rng.uniform(-1, 1)
        j = m.eval_jet(s, u)
        f = fd_jet_surface(lambda a, b: np.array(m(a, b)), s, u)
        first = max(first, rel(j.p_s, f.p_s), rel(j.p_u, f.p_u))
        second = max(second, rel(j.p_ss, f.p_ss), rel(j.p_su, f.p_su), rel(j.p_uu, f.p_uu))
    return first, second


def test_criterion_8_expression_language():
    failures = _golden_failures()
    first, second = _random_oracle()
    ok = not failures and first < 1e-5 and second < 1e-3
    record(
        "8",
        ok,
        f"goldens {len(ACCEPT)} accept / {len(REJECT)} reject, {len(failures)} failure(s); "
        f"500 random maps vs finite differences: first order {first:.2e} (<1e-5), second order {second:.2e} (<1e-3)",
    )
    assert ok, failures


# --- 9 -------------------------------------------------------------------------

def test_criterion_9_mesh_counts(tmp_path):
    code = cli_main(["mesh", "--out", str(tmp_path), "--grid", "10x10"])
    verts, faces = read_obj(tmp_path / "surface.obj")
    ok = code == 0 and len(verts) == 100 and len(faces) == 162 and all(len(f) == 3 for f in faces)
    record("9 (mesh 10x10)", ok, f"exit {code}, {len(verts)} vertices, {len(faces)} triangles")
    assert ok


def test_criterion_9_verify_exit_status(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "invsurf.cli", "verify", "--out", str(tmp_path)], capture_output=True, text=True
    )
    report = (tmp_path / "report.txt").read_text()
    failing = [line.split()[0] for line in report.splitlines() if " fail " in line]
    ok = proc.returncode == 0
    record("9 (verify default scene)", ok, f"exit {proc.returncode}; failing rows: {failing}")
    assert ok


def test_criterion_9_malformed_scene(tmp_path):
    scene = tmp_path / "bad.ini"
    scene.write_text("[surface]\nkind = expression\nexpr = 1/(s -\n")
    proc = subprocess.run(
        [sys.executable, "-m", "invsurf.cli", "mesh", "--scene", str(scene), "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    ok = proc.returncode == 2 and "byte" in proc.stderr
    record("9 (malformed scene)", ok, f"exit {proc.returncode}: {proc.stderr.strip()}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
