"""Truncated Taylor jets and a finite-difference oracle.

Two jet flavours cover everything the geometry needs:

* ``ScalarJet2`` carries a function of two parameters ``(s, u)`` together
  with its first and second partials.
* ``ScalarJet3`` carries a function of one parameter with derivatives up
  to order three (torsion needs the third).

Arithmetic on jets applies the product and chain rules exactly, so no
truncation error enters the production path.  ``fd_jet_curve`` and
``fd_jet_surface`` estimate the same quantities by central differences;
they exist only to cross-check the jets.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DivisionByZero, DomainError, NonFiniteSample

ZERO_DENOMINATOR = 1e-300

Number = Union[int, float]


class _JetOps:
    """Operator plumbing shared by both jet types.

    Subclasses provide ``constant``, ``_add``, ``_neg``, ``_scale``,
    ``_mul`` and ``_compose``; everything else is derived here.
    """

    __slots__ = ()

    @classmethod
    def constant(cls, value: float):
        raise NotImplementedError

    def _lift(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, (int, float)):
            return self.constant(float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._add(other)

    __radd__ = __add__

    def __neg__(self):
        return self._neg()

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._add(other._neg())

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other._add(self._neg())

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return self._scale(float(other))
        if isinstance(other, type(self)):
            return self._mul(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            if abs(other) < ZERO_DENOMINATOR:
                raise DivisionByZero("division by zero")
            return self._scale(1.0 / other)
        if isinstance(other, type(self)):
            return self._mul(reciprocal(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, float)):
            return reciprocal(self)._scale(float(other))
        return NotImplemented

    def __pow__(self, n):
        return ipow(self, n)


@dataclass(frozen=True, slots=True)
class ScalarJet2(_JetOps):
    """Value and partials up to order two of a function of ``(s, u)``.

    The mixed partial is stored once, so ``f_su == f_us`` by construction.
    """

    f: float
    f_s: float = 0.0
    f_u: float = 0.0
    f_ss: float = 0.0
    f_su: float = 0.0
    f_uu: float = 0.0

    @classmethod
    def constant(cls, value: float) -> "ScalarJet2":
        return cls(value)

    @classmethod
    def variable(cls, value: float, which: int) -> "ScalarJet2":
        """Jet of the coordinate function ``s`` (``which=0``) or ``u`` (``which=1``)."""
        if which == 0:
            return cls(value, 1.0, 0.0)
        return cls(value, 0.0, 1.0)

    def as_tuple(self) -> tuple[float, ...]:
        return (self.f, self.f_s, self.f_u, self.f_ss, self.f_su, self.f_uu)

    def _add(self, o: "ScalarJet2") -> "ScalarJet2":
        return ScalarJet2(self.f + o.f, self.f_s + o.f_s, self.f_u + o.f_u,
                          self.f_ss + o.f_ss, self.f_su + o.f_su, self.f_uu + o.f_uu)

    def _neg(self) -> "ScalarJet2":
        return ScalarJet2(-self.f, -self.f_s, -self.f_u, -self.f_ss, -self.f_su, -self.f_uu)

    def _scale(self, k: float) -> "ScalarJet2":
        return ScalarJet2(k * self.f, k * self.f_s, k * self.f_u,
                          k * self.f_ss, k * self.f_su, k * self.f_uu)

    def _mul(self, o: "ScalarJet2") -> "ScalarJet2":
        return ScalarJet2(
            self.f * o.f,
            self.f_s * o.f + self.f * o.f_s,
            self.f_u * o.f + self.f * o.f_u,
            self.f_ss * o.f + 2.0 * self.f_s * o.f_s + self.f * o.f_ss,
            self.f_su * o.f + self.f_s * o.f_u + self.f_u * o.f_s + self.f * o.f_su,
            self.f_uu * o.f + 2.0 * self.f_u * o.f_u + self.f * o.f_uu,
        )

    def _compose(self, g0: float, g1: float, g2: float, g3: float) -> "ScalarJet2":
        # g3 is unused at order two
        fs, fu = self.f_s, self.f_u
        return ScalarJet2(
            g0,
            g1 * fs,
            g1 * fu,
            g2 * fs * fs + g1 * self.f_ss,
            g2 * fs * fu + g1 * self.f_su,
            g2 * fu * fu + g1 * self.f_uu,
        )


@dataclass(frozen=True, slots=True)
class ScalarJet3(_JetOps):
    """Value and first three derivatives of a function of one variable."""

    f: float
    f_t: float = 0.0
    f_tt: float = 0.0
    f_ttt: float = 0.0

    @classmethod
    def constant(cls, value: float) -> "ScalarJet3":
        return cls(value)

    @classmethod
    def variable(cls, value: float) -> "ScalarJet3":
        return cls(value, 1.0)

    def as_tuple(self) -> tuple[float, ...]:
        return (self.f, self.f_t, self.f_tt, self.f_ttt)

    def _add(self, o: "ScalarJet3") -> "ScalarJet3":
        return ScalarJet3(self.f + o.f, self.f_t + o.f_t, self.f_tt + o.f_tt, self.f_ttt + o.f_ttt)

    def _neg(self) -> "ScalarJet3":
        return ScalarJet3(-self.f, -self.f_t, -self.f_tt, -self.f_ttt)

    def _scale(self, k: float) -> "ScalarJet3":
        return ScalarJet3(k * self.f, k * self.f_t, k * self.f_tt, k * self.f_ttt)

    def _mul(self, o: "ScalarJet3") -> "ScalarJet3":
        a, b = self, o
        return ScalarJet3(
            a.f * b.f,
            a.f_t * b.f + a.f * b.f_t,
            a.f_tt * b.f + 2.0 * a.f_t * b.f_t + a.f * b.f_tt,
            a.f_ttt * b.f + 3.0 * (a.f_tt * b.f_t + a.f_t * b.f_tt) + a.f * b.f_ttt,
        )

    def _compose(self, g0: float, g1: float, g2: float, g3: float) -> "ScalarJet3":
        # Faa di Bruno to third order
        d1, d2, d3 = self.f_t, self.f_tt, self.f_ttt
        return ScalarJet3(
            g0,
            g1 * d1,
            g2 * d1 * d1 + g1 * d2,
            g3 * d1 ** 3 + 3.0 * g2 * d1 * d2 + g1 * d3,
        )


Jet = Union[ScalarJet2, ScalarJet3]


def _is_jet(x) -> bool:
    return isinstance(x, (ScalarJet2, ScalarJet3))


def sin(x):
    if not _is_jet(x):
        return math.sin(x)
    s, c = math.sin(x.f), math.cos(x.f)
    return x._compose(s, c, -s, -c)


def cos(x):
    if not _is_jet(x):
        return math.cos(x)
    s, c = math.sin(x.f), math.cos(x.f)
    return x._compose(c, -s, -c, s)


def exp(x):
    if not _is_jet(x):
        return math.exp(x)
    e = math.exp(x.f)
    return x._compose(e, e, e, e)


def sqrt(x):
    v = x.f if _is_jet(x) else float(x)
    if v < 0.0:
        raise DomainError(f"sqrt of negative value {v!r}")
    if not _is_jet(x):
        return math.sqrt(v)
    if v == 0.0:
        raise DomainError("sqrt is not differentiable at 0")
    y = math.sqrt(v)
    return x._compose(y, 0.5 / y, -0.25 / (y * v), 0.375 / (y * v * v))


def reciprocal(x):
    v = x.f if _is_jet(x) else float(x)
    if abs(v) < ZERO_DENOMINATOR:
        raise DivisionByZero(f"division by {v!r}")
    if not _is_jet(x):
        return 1.0 / v
    r = 1.0 / v
    return x._compose(r, -r * r, 2.0 * r ** 3, -6.0 * r ** 4)


def ipow(x, n):
    """Integer power.  Non-integral exponents are rejected."""
    if isinstance(n, float):
        if not n.is_integer():
            raise DomainError(f"only integer exponents are supported, got {n!r}")
        n = int(n)
    if not isinstance(n, int):
        raise DomainError(f"only integer exponents are supported, got {n!r}")
    v = x.f if _is_jet(x) else float(x)
    if n < 0 and abs(v) < ZERO_DENOMINATOR:
        raise DivisionByZero(f"{v!r} raised to negative power {n}")
    if not _is_jet(x):
        return v ** n
    coeffs = []
    falling = 1.0
    for k in range(4):
        coeffs.append(0.0 if falling == 0.0 else falling * v ** (n - k))
        falling *= n - k
    return x._compose(*coeffs)


_PRIMITIVES: dict[str, Callable] = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
    "neg": operator.neg,
    "pow": ipow,
    "sqrt": sqrt,
    "sin": sin,
    "cos": cos,
    "exp": exp,
}

PRIMITIVE_NAMES = frozenset(_PRIMITIVES)


def jet_apply(op: str, *args):
    """Apply primitive ``op`` to jets (or plain numbers).

    >>> jet_apply("sin", ScalarJet3.variable(0.0)).as_tuple()
    (0.0, 1.0, 0.0, -1.0)
    """
    try:
        fn = _PRIMITIVES[op]
    except KeyError:
        raise ValueError(f"unknown primitive {op!r}") from None
    return fn(*args)


@dataclass(frozen=True)
class SurfaceJet2:
    """Position and partials to order two of a map ``(s, u) -> R^3``."""

    p: np.ndarray
    p_s: np.ndarray
    p_u: np.ndarray
    p_ss: np.ndarray
    p_su: np.ndarray
    p_uu: np.ndarray

    @classmethod
    def from_components(cls, xs: Sequence[ScalarJet2]) -> "SurfaceJet2":
        rows = np.array([x.as_tuple() for x in xs], dtype=float)
        cols = [rows[:, k].copy() for k in range(6)]
        for c in cols:
            c.flags.writeable = False
        return cls(*cols)

    def components(self) -> tuple[ScalarJet2, ScalarJet2, ScalarJet2]:
        return tuple(
            ScalarJet2(*(float(v[i]) for v in self.as_arrays())) for i in range(3)
        )

    def as_arrays(self) -> tuple[np.ndarray, ...]:
        return (self.p, self.p_s, self.p_u, self.p_ss, self.p_su, self.p_uu)

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in self.as_arrays())


# --- finite-difference oracle -------------------------------------------

# fourth-order central stencils, offsets -3..3
_D1 = np.array([0.0, 1.0, -8.0, 0.0, 8.0, -1.0, 0.0]) / 12.0
_D2 = np.array([0.0, -1.0, 16.0, -30.0, 16.0, -1.0, 0.0]) / 12.0
_D3 = np.array([1.0, -8.0, 13.0, 0.0, -13.0, 8.0, -1.0]) / 8.0
_OFFSETS = np.arange(-3, 4)


def default_step(t: float, order: int) -> float:
    """Step size used when the caller does not supply one."""
    base = 1e-3 if order >= 3 else 1e-4
    return base * max(1.0, abs(t))


def _sample(fn, args) -> np.ndarray:
    val = np.asarray(fn(*args), dtype=float)
    if not np.all(np.isfinite(val)):
        raise NonFiniteSample(f"non-finite sample at {args}")
    return val


def fd_jet_curve(
    fn: Callable[[float], Sequence[float]], t: float, h: float | None = None
) -> tuple[ScalarJet3, ScalarJet3, ScalarJet3]:
    """Central-difference jets of a curve ``t -> R^3``.

    The stencils are fourth order in ``h`` (exact on quintics up to
    rounding).  With ``h=None`` first and second derivatives use
    ``default_step(t, 2)`` and the third uses ``default_step(t, 3)``.
    """
    if h is not None and not h > 0:
        raise ValueError("step must be positive")
    h12 = h if h is not None else default_step(t, 2)
    h3 = h if h is not None else default_step(t, 3)

    centre = _sample(fn, (t,))
    lo = np.array([_sample(fn, (t + k * h12,)) for k in _OFFSETS])
    d1 = _D1 @ lo / h12
    d2 = _D2 @ lo / h12 ** 2
    if h3 != h12:
        lo = np.array([_sample(fn, (t + k * h3,)) for k in _OFFSETS])
    d3 = _D3 @ lo / h3 ** 3
    return tuple(ScalarJet3(*(float(x) for x in (centre[i], d1[i], d2[i], d3[i]))) for i in range(3))


def fd_jet_surface(
    fn: Callable[[float, float], Sequence[float]], s: float, u: float, h: float | None = None
) -> SurfaceJet2:
    """Central-difference ``SurfaceJet2`` of a map ``(s, u) -> R^3``.

    The mixed partial uses the tensor product of the first-derivative
    stencil, so every entry is fourth order in ``h``.
    """
    if h is not None and not h > 0:
        raise ValueError("step must be positive")
    hs = h if h is not None else default_step(s, 2)
    hu = h if h is not None else default_step(u, 2)

    p = _sample(fn, (s, u))
    along_s = np.array([_sample(fn, (s + k * hs, u)) for k in _OFFSETS])
    along_u = np.array([_sample(fn, (s, u + k * hu)) for k in _OFFSETS])
    w = _D1[1:-1]
    mixed = np.zeros(3)
    for i, wi in zip(range(-2, 3), w):
        if wi == 0.0:
            continue
        for j, wj in zip(range(-2, 3), w):
            if wj == 0.0:
                continue
            mixed += wi * wj * _sample(fn, (s + i * hs, u + j * hu))
    return SurfaceJet2(
        p=p,
        p_s=_D1 @ along_s / hs,
        p_u=_D1 @ along_u / hu,
        p_ss=_D2 @ along_s / hs ** 2,
        p_su=mixed / (hs * hu),
        p_uu=_D2 @ along_u / hu ** 2,
    )
