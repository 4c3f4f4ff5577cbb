"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class GeometryError(Exception):
    """Base class for all errors raised by invsurf."""


class DivisionByZero(GeometryError, ZeroDivisionError):
    """A denominator vanished while propagating a jet."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class DomainError(GeometryError, ValueError):
    """An argument lies outside the domain of a primitive or a model."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class NonFiniteSample(GeometryError):
    """A finite-difference stencil produced NaN or infinity."""


class ExpressionError(GeometryError):
    """Base for expression-language errors; ``offset`` is a byte offset."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class ExpressionSyntaxError(ExpressionError):
    pass


class UnknownIdentifier(ExpressionError):
    pass


class ArityError(ExpressionError):
    pass


class UnknownCurve(GeometryError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class InvalidParam(GeometryError, ValueError):
    pass


class DegenerateCurvature(GeometryError):
    """Curvature below threshold: normal and torsion are undefined."""


class IrregularPoint(GeometryError):
    """The curve velocity vanishes."""


class CurveNotArcLength(GeometryError):
    pass


class SingularPoint(GeometryError):
    """EG - F^2 is not safely positive."""


class ExcludedPoint(GeometryError):
    """The point is removed from the surface domain by its exclusion predicate."""


class CenterHit(GeometryError):
    """A point coincides with the center of inversion."""


class EmptyGrid(GeometryError):
    pass


class SceneError(GeometryError):
    """Malformed scene file or inconsistent scene configuration."""
