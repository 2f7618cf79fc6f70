"""Dual quermassintegrals and dual section functions of star bodies.

Computes radial/gauge geometry of ellipsoids, lp-balls, and polytopes, the
m-th dual section function of hyperplane sections, Funk-Hecke multipliers in
numeric and exact rational form, fractional derivatives at zero, and a
numerical detector for polynomially integrable section functions.
"""

from .bodies import (
    Body,
    Ellipsoid,
    LpBall,
    Polytope,
    RadialSum,
    Translate,
    ellipsoid_spec,
    gauge,
    lp_ball_spec,
    make_body,
    max_radial,
    min_radial,
    polytope_spec,
    radial,
    radial_from_point,
    radial_sum,
    spec_from_json,
    spec_to_json,
    translate,
)
from .detector import (
    ClassificationReport,
    DetectionConfig,
    EllipsoidFitReport,
    PolynomialFitReport,
    detect_body,
    detect_direction,
    ellipsoid_fit,
    fit_polynomial,
)
from .fracderiv import ProfileFn, frac_deriv, frac_deriv_integer, frac_deriv_strip
from .harmonics import (
    MultiplierTable,
    ZonalKernel,
    build_multiplier_table,
    funk_hecke_multiplier,
    lambda_continuation,
    lambda_exact,
    lambda_numeric,
    operator_norm_check,
    vanishing_predicate,
)
from .quadrature import (
    GrassmannSampler,
    IntervalRule,
    SphereRule,
    SubsphereRule,
    gauss_jacobi,
    gauss_legendre,
    grassmann_sphere_split_check,
    haar_frames,
    sphere_rule,
    subsphere_rule,
)
from .sections import (
    KubotaReport,
    SectionFunctionSamples,
    SectionQuery,
    SteinerReport,
    dual_kubota_check,
    dual_steiner_check,
    dual_volume,
    frac_deriv_of_section,
    moment_identity_check,
    section_dual_volume,
    section_function,
)
from .special import (
    BallConstants,
    DimLegendre,
    RationalPoly,
    ball_constants,
    kappa,
    kernel_poly,
    legendre_nd,
    sphere_surface,
)

__version__ = "0.1.0"
