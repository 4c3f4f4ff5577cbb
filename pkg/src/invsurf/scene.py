"""Scene files: which curve/surface, which inversion, which grid.

A scene is an INI-style text file with one section per concern::

    [curve]
    builtin = helix          # helix | circle | twisted_cubic
    params = 1, 1
    # or an expression curve:
    # expr = cos(s), sin(s), 0
    # arc_length = true
    # interval = 0, 2*pi

    [surface]
    kind = tangent_developable   # or: expression
    # expr = u*cos(v), u*sin(v), 2*v

    [inversion]
    center = 0, 0, 0
    radius = 1

    [grid]
    s = 0, 2*pi, 20              # lo, hi, count  (axis keys follow the
    u = 0.2, 1.5, 20             # surface parameters: s,u or u,v)

Numeric values may be constant expressions (``2*pi``, ``-1.5``).
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import exprlang
from .curves import CurveModel, builtin_curve, expression_curve
from .developable import TangentDevelopableModel
from .errors import ExpressionError, GeometryError, SceneError
from .inversion import InversionSpec
from .surfaces import SurfaceModel, expression_surface

SCENE_HELP = __doc__.split("::", 1)[1]


@dataclass(frozen=True)
class Axis:
    lo: float
    hi: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class Grid:
    first: Axis
    second: Axis
    names: tuple[str, str] = ("s", "u")

    @property
    def size(self) -> int:
        return self.first.count * self.second.count

    def points(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a in self.first.values() for b in self.second.values()]

    def with_counts(self, n: int, m: int) -> "Grid":
        return replace(self, first=replace(self.first, count=n), second=replace(self.second, count=m))

    def describe(self) -> str:
        return ", ".join(
            f"{name} in [{ax.lo:.17g}, {ax.hi:.17g}] x {ax.count}"
            for name, ax in zip(self.names, (self.first, self.second))
        )


@dataclass(frozen=True)
class SceneConfig:
    curve_builtin: str | None = "helix"
    curve_params: tuple[float, ...] = (1.0, 1.0)
    curve_expr: str | None = None
    curve_arc_length: bool = False
    curve_interval: tuple[float, float] = (0.0, 2.0 * math.pi)
    surface_kind: str = "tangent_developable"
    surface_expr: str | None = None
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    radius: float = 1.0
    grid: Grid = field(
        default_factory=lambda: Grid(Axis(0.0, 2.0 * math.pi, 20), Axis(0.2, 1.5, 20))
    )

    def build_curve(self) -> CurveModel:
        if self.curve_expr is not None:
            cmap = exprlang.parse(self.curve_expr)
            return expression_curve(cmap, self.curve_interval, self.curve_arc_length)
        return builtin_curve(self.curve_builtin, self.curve_params)

    def developable(self) -> TangentDevelopableModel:
        if self.surface_kind != "tangent_developable":
            raise SceneError(f"surface kind {self.surface_kind!r} is not a tangent developable")
        return TangentDevelopableModel(self.build_curve())

    def build_surface(self) -> SurfaceModel:
        if self.surface_kind == "tangent_developable":
            return self.developable().as_surface()
        return expression_surface(exprlang.parse(self.surface_expr))

    def inversion(self) -> InversionSpec:
        return InversionSpec(np.array(self.center), self.radius)

    def describe(self) -> str:
        if self.surface_kind == "tangent_developable":
            if self.curve_expr is not None:
                curve = f"curve=[{self.curve_expr}]"
            else:
                curve = f"curve={self.curve_builtin}({', '.join(f'{p:g}' for p in self.curve_params)})"
            surf = f"surface=tangent_developable {curve}"
        else:
            surf = f"surface=[{self.surface_expr}]"
        inv = f"inversion=c({', '.join(f'{x:g}' for x in self.center)}) r={self.radius:g}"
        return f"{surf} {inv} grid: {self.grid.describe()}"


def default_scene() -> SceneConfig:
    """Helix(1, 1) tangent developable, unit sphere at the origin, 20x20 grid."""
    return SceneConfig()


# --- loading ---------------------------------------------------------------

def _number(text: str, where: str) -> float:
    try:
        return float(exprlang.evaluate(exprlang.parse_expr(text, ()), {}))
    except ExpressionError as exc:
        raise SceneError(f"{where}: {exc}") from None


def _numbers(text: str, where: str, n: int | None = None) -> tuple[float, ...]:
    parts = [p for p in text.split(",")]
    if n is not None and len(parts) != n:
        raise SceneError(f"{where}: expected {n} comma-separated values, got {len(parts)}")
    return tuple(_number(p.strip(), where) for p in parts)


def _axis(text: str, where: str) -> Axis:
    lo, hi, count = _numbers(text, where, 3)
    if not float(count).is_integer():
        raise SceneError(f"{where}: grid count must be an integer")
    count = int(count)
    if count < 2:
        raise SceneError(f"{where}: grid count must be at least 2, got {count}")
    if not hi > lo:
        raise SceneError(f"{where}: need lo < hi")
    return Axis(lo, hi, count)


_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def parse_scene(text: str, source: str = "<scene>") -> SceneConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise SceneError(str(exc)) from None

    known = {"curve", "surface", "inversion", "grid"}
    extra = set(cp.sections()) - known
    if extra:
        raise SceneError(f"{source}: unknown section(s) {sorted(extra)}")
    kw: dict = {}

    if cp.has_section("curve"):
        sec = cp["curve"]
        if "expr" in sec:
            if "builtin" in sec:
                raise SceneError(f"{source}: [curve] takes either 'builtin' or 'expr', not both")
            kw["curve_expr"] = sec["expr"]
            kw["curve_builtin"] = None
            kw["curve_arc_length"] = _BOOL.get(sec.get("arc_length", "false").lower())
            if kw["curve_arc_length"] is None:
                raise SceneError(f"{source}: [curve] arc_length must be true or false")
            if "interval" in sec:
                kw["curve_interval"] = _numbers(sec["interval"], f"{source}: [curve] interval", 2)
        elif "builtin" in sec:
            kw["curve_builtin"] = sec["builtin"].strip()
            kw["curve_params"] = (
                _numbers(sec["params"], f"{source}: [curve] params") if sec.get("params", "").strip() else ()
            )
        _no_extra(sec, {"expr", "builtin", "params", "arc_length", "interval"}, source)

    surface_params = ("s", "u")
    if cp.has_section("surface"):
        sec = cp["surface"]
        kind = sec.get("kind", "tangent_developable").strip()
        if kind not in ("tangent_developable", "expression"):
            raise SceneError(f"{source}: [surface] kind must be tangent_developable or expression")
        kw["surface_kind"] = kind
        if kind == "expression":
            if "expr" not in sec:
                raise SceneError(f"{source}: [surface] kind=expression needs 'expr'")
            kw["surface_expr"] = sec["expr"]
            try:
                cmap = exprlang.parse(sec["expr"])
            except ExpressionError as exc:
                raise SceneError(f"{source}: [surface] expr: {exc}") from None
            if cmap.arity != 2:
                raise SceneError(f"{source}: [surface] expr must use two parameters")
            surface_params = cmap.params
        _no_extra(sec, {"kind", "expr"}, source)

    if cp.has_section("inversion"):
        sec = cp["inversion"]
        if "center" in sec:
            kw["center"] = _numbers(sec["center"], f"{source}: [inversion] center", 3)
        if "radius" in sec:
            r = _number(sec["radius"], f"{source}: [inversion] radius")
            if not r > 0:
                raise SceneError(f"{source}: [inversion] radius must be positive")
            kw["radius"] = r
        _no_extra(sec, {"center", "radius"}, source)

    if cp.has_section("grid"):
        sec = cp["grid"]
        missing = [p for p in surface_params if p not in sec]
        if missing:
            raise SceneError(f"{source}: [grid] needs axes {list(surface_params)}, missing {missing}")
        _no_extra(sec, set(surface_params), source)
        kw["grid"] = Grid(
            _axis(sec[surface_params[0]], f"{source}: [grid] {surface_params[0]}"),
            _axis(sec[surface_params[1]], f"{source}: [grid] {surface_params[1]}"),
            surface_params,
        )
    elif surface_params != ("s", "u"):
        raise SceneError(f"{source}: an expression surface needs a [grid] section")

    scene = SceneConfig(**kw)
    # build once so that bad curves/expressions are reported at load time
    try:
        if scene.surface_kind == "tangent_developable":
            scene.developable()
        else:
            scene.build_surface()
    except GeometryError as exc:
        if isinstance(exc, SceneError):
            raise
        raise SceneError(f"{source}: {exc}") from None
    return scene


def _no_extra(sec, allowed: set[str], source: str) -> None:
    extra = set(sec.keys()) - allowed
    if extra:
        raise SceneError(f"{source}: [{sec.name}] unknown key(s) {sorted(extra)}")


def load_scene(path: str | Path) -> SceneConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SceneError(f"cannot read scene {path}: {exc}") from None
    return parse_scene(text, str(path))
