"""Command-line front end.

Subcommands::

    mesh           OBJ + per-vertex CSV of the scene surface
    invert         the same for the inverse surface
    verify         run the cross-check battery, write report.txt
    classify       CSV of pointwise flatness / minimality of the inverse surface
    demo-helicoid  helicoid (u cos v, u sin v, 2v) and its inverse in the unit sphere

Exit status: 0 on success, 1 when verification fails, 2 on configuration or
parse errors.
"""

from __future__ import annotations

import argparse
import csv
import math
import re
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import developable as dev
from .errors import GeometryError
from .inversion import UNIT_SPHERE, InversionSpec, conformal_factors, invert_surface
from .scene import SCENE_HELP, Axis, Grid, SceneConfig, default_scene, load_scene
from .surfaces import SurfaceModel, curvatures, forms_from_jet, helicoid
from .verify import run_suite

CSV_HEADER = ("s", "u", "x", "y", "z", "K", "H", "eta", "lambda")
CLASSIFY_HEADER = (
    "s",
    "u",
    "flat_reason",
    "minimal",
    "normal_line_through_center",
    "K_N",
    "H_N",
    "eta",
    "flat_factor",
    "minimal_factor",
)
HELICOID_GRID = Grid(Axis(0.5, 2.0, 50), Axis(-1.5, 1.5, 50), ("u", "v"))
NAN = float("nan")


def fmt(x: float) -> str:
    """Floats with 17 significant digits (bit-faithful round trip)."""
    return format(float(x), ".17g")


# --- tessellation ------------------------------------------------------------

def triangle_faces(n: int, m: int) -> list[tuple[int, int, int]]:
    """1-based triangles of an ``n x m`` vertex grid, each quad split along the
    diagonal from ``(i, j)`` to ``(i+1, j+1)``.  Vertex ``(i, j)`` has index
    ``i * m + j + 1``."""
    faces = []
    for i in range(n - 1):
        for j in range(m - 1):
            a = i * m + j + 1
            b = a + m
            faces.append((a, b, b + 1))
            faces.append((a, b + 1, a + 1))
    return faces


def write_obj(path: Path, vertices: np.ndarray, n: int, m: int, comment: str = "") -> None:
    with path.open("w", encoding="utf-8") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        for x, y, z in vertices:
            fh.write(f"v {fmt(x)} {fmt(y)} {fmt(z)}\n")
        for a, b, c in triangle_faces(n, m):
            fh.write(f"f {a} {b} {c}\n")


def read_obj(path: Path) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    """Minimal reader for the files written by ``write_obj``."""
    vertices, faces = [], []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            vertices.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            faces.append(tuple(int(x.split("/")[0]) for x in parts[1:]))
    return np.array(vertices, dtype=float).reshape(-1, 3), faces


def _point_or_nan(surface: SurfaceModel, s: float, u: float) -> np.ndarray:
    try:
        p = surface.jet(s, u).p
    except GeometryError:
        return np.full(3, NAN)
    return p if np.all(np.isfinite(p)) else np.full(3, NAN)


def sample_fields(
    surface: SurfaceModel, source: SurfaceModel, spec: InversionSpec, grid: Grid
) -> list[tuple[float, ...]]:
    """Rows ``(s, u, x, y, z, K, H, eta, lambda)`` over the grid.

    Position and curvatures are those of ``surface``; ``eta`` and
    ``lambda`` are the conformal factors of ``spec`` at the corresponding
    point of ``source`` (which is ``surface`` itself for ``mesh``).  Any
    quantity that cannot be evaluated at a point (singular, excluded,
    inversion centre) is NaN.
    """
    rows = []
    for s, u in grid.points():
        p = _point_or_nan(surface, s, u)
        K = H = eta = lam = NAN
        try:
            c = curvatures(forms_from_jet(surface.jet_at(s, u)))
            K, H = c.K, c.H
        except GeometryError:
            pass
        try:
            jx = source.jet_at(s, u)
            fac = conformal_factors(spec, jx.p, forms_from_jet(jx).U)
            eta, lam = fac.eta, fac.lam
        except GeometryError:
            pass
        rows.append((s, u, *p, K, H, eta, lam))
    return rows


def write_csv(path: Path, header: Sequence[str], rows) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) if isinstance(x, float) else x for x in row])


def export_surface(out: Path, stem: str, surface: SurfaceModel, source: SurfaceModel, spec: InversionSpec, grid: Grid) -> tuple[Path, Path]:
    rows = sample_fields(surface, source, spec, grid)
    vertices = np.array([r[2:5] for r in rows])
    obj, table = out / f"{stem}.obj", out / f"{stem}.csv"
    write_obj(obj, vertices, grid.first.count, grid.second.count, f"{surface.name}; {grid.describe()}")
    write_csv(table, CSV_HEADER, rows)
    return obj, table


# --- commands ------------------------------------------------------------------

def _scene(args) -> SceneConfig:
    scene = load_scene(args.scene) if args.scene else default_scene()
    if args.grid:
        scene = replace(scene, grid=scene.grid.with_counts(*args.grid))
    return scene


def cmd_mesh(args) -> int:
    scene = _scene(args)
    surface = scene.build_surface()
    paths = export_surface(args.out, "surface", surface, surface, scene.inversion(), scene.grid)
    _report_paths(paths)
    return 0


def cmd_invert(args) -> int:
    scene = _scene(args)
    surface = scene.build_surface()
    spec = scene.inversion()
    paths = export_surface(args.out, "inverse_surface", invert_surface(spec, surface), surface, spec, scene.grid)
    _report_paths(paths)
    return 0


def cmd_verify(args) -> int:
    scene = _scene(args)
    report = run_suite(scene)
    path = args.out / "report.txt"
    text = report.to_text()
    path.write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    _report_paths((path,))
    return 0 if report.passed else 1


def cmd_classify(args) -> int:
    scene = _scene(args)
    model = scene.developable()
    model.curve.require_arc_length()
    spec = scene.inversion()
    rows = []
    for s, u in scene.grid.points():
        try:
            r = dev.classify_point(model, spec, s, u, args.tol)
        except GeometryError:
            rows.append((s, u, "skipped", "", "", NAN, NAN, NAN, NAN, NAN))
            continue
        rows.append((
            s, u, r.flat_reason.value, str(r.minimal).lower(), str(r.normal_line_through_center).lower(),
            r.K_N, r.H_N, r.eta, r.flat_factor, r.minimal_factor,
        ))
    path = args.out / "classification.csv"
    write_csv(path, CLASSIFY_HEADER, rows)
    _report_paths((path,))
    return 0


def cmd_demo_helicoid(args) -> int:
    grid = HELICOID_GRID.with_counts(*args.grid) if args.grid else HELICOID_GRID
    surface = helicoid(2.0)
    paths = export_surface(args.out, "helicoid", surface, surface, UNIT_SPHERE, grid)
    paths += export_surface(args.out, "inverse_helicoid", invert_surface(UNIT_SPHERE, surface), surface, UNIT_SPHERE, grid)
    _report_paths(paths)
    return 0


def _report_paths(paths) -> None:
    for p in paths:
        print(f"wrote {p}")


# --- argument parsing ----------------------------------------------------------

def _grid_arg(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"grid must look like NxM, got {text!r}")
    n, k = int(m.group(1)), int(m.group(2))
    if n < 2 or k < 2:
        raise argparse.ArgumentTypeError("grid counts must be at least 2")
    return n, k


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError("tolerance must be a positive finite number")
    return x


COMMANDS = {
    "mesh": (cmd_mesh, "tessellate the scene surface (surface.obj, surface.csv)"),
    "invert": (cmd_invert, "tessellate the inverse surface (inverse_surface.obj, inverse_surface.csv)"),
    "verify": (cmd_verify, "run the verification battery (report.txt); exit 1 on failure"),
    "classify": (cmd_classify, "flatness/minimality of the inverse tangent developable (classification.csv)"),
    "demo-helicoid": (cmd_demo_helicoid, "helicoid and its unit-sphere inverse (helicoid.obj, inverse_helicoid.obj)"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invsurf",
        description="Differential geometry of surfaces under inversion in a sphere.",
        epilog="Scene file format:\n" + SCENE_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, (func, help_text) in COMMANDS.items():
        p = sub.add_parser(
            name,
            help=help_text,
            description=help_text,
            epilog="Scene file format:\n" + SCENE_HELP,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        p.add_argument("--scene", type=Path, help="scene file (default: helix(1,1) tangent developable, unit sphere, 20x20)")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory (created if missing)")
        p.add_argument("--grid", type=_grid_arg, metavar="NxM", help="override the grid point counts")
        p.add_argument("--tol", type=_positive_float, default=1e-9, help="zero tolerance for classify (default 1e-9)")
        p.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        return args.func(args)
    except (GeometryError, OSError) as exc:
        print(f"invsurf: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
