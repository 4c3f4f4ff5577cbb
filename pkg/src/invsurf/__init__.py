"""Differential geometry of parametric surfaces under inversion in a sphere.

Exact Taylor-jet derivatives feed a generic surface pipeline (fundamental
forms, curvatures, shape operator, Christoffel symbols); closed forms for
tangent developables and their inverse surfaces are cross-checked against
it by ``verify.run_suite``.
"""

from .curves import CurveModel, FrenetData, builtin_curve, expression_curve, frenet
from .developable import (
    ClassificationResult,
    FlatReason,
    TangentDevelopableModel,
    classify_point,
    inv_td_christoffel,
    inv_td_curvatures,
    inv_td_forms,
    inv_td_weingarten,
    td_christoffel,
    td_curvatures,
    td_forms,
    td_point,
)
from .errors import GeometryError
from .exprlang import CompiledMap, parse
from .inversion import (
    ConformalFactors,
    InversionSpec,
    conformal_factors,
    invert_point,
    invert_surface,
    predict_curvatures,
    predict_forms,
    predict_weingarten,
    pushforward,
)
from .scene import SceneConfig, default_scene, load_scene, parse_scene
from .surfaces import (
    Christoffels,
    CurvatureData,
    FundForms,
    SurfaceModel,
    Weingarten,
    christoffel,
    curvatures,
    fund_forms,
    weingarten,
)
from .verify import CheckResult, Status, VerificationReport, compare_matrices, run_suite

__all__ = [name for name in dir() if not name.startswith("_")]
