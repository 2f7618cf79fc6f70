"""Numerical detection of polynomial section functions and ellipsoid-ness.

A body passes the polynomial test in a direction when some fit of degree at
most ``max_degree`` reproduces the sampled section function to a relative
residual below the threshold.  The body-level verdict requires every direction
of a seeded ensemble to pass with a common degree bound.  Verdicts are a
numerical surrogate, not a proof: residuals are always reported so borderline
bodies surface as such instead of being silently classified.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bodies import Body
from .errors import DegenerateGrid, ValidationError
from .quadrature import GrassmannSampler, haar_frames, sphere_rule
from .sections import SectionFunctionSamples, section_function


@dataclass(frozen=True)
class DetectionConfig:
    """Knobs of the polynomial-integrability detector.

    The residual threshold is calibrated two orders of magnitude above the
    quadrature noise floor of the section sampler, so verdicts do not flip on
    integration error.
    """

    max_degree: int = 16
    grid_size: int = 64
    margin_factor: float = 1e-3
    residual_threshold: float = 1e-6
    ensemble_size: int = 40
    seed: int = 2024
    quad_degree: int = 24
    threads: int = 1

    def __post_init__(self):
        if self.max_degree >= self.grid_size:
            raise ValidationError("max_degree must be smaller than grid_size")
        if self.residual_threshold <= 0.0:
            raise ValidationError("residual threshold must be positive")
        if self.ensemble_size < 1:
            raise ValidationError("ensemble size must be >= 1")


@dataclass(frozen=True)
class PolynomialFitReport:
    xi: tuple
    degree: int
    coefficients: tuple  # monomial basis in t, ascending
    residual: float
    is_polynomial: bool


@dataclass(frozen=True)
class EllipsoidFitReport:
    residual: float
    quadratic_form: np.ndarray
    positive_definite: bool


@dataclass(frozen=True)
class ClassificationReport:
    m: int
    per_direction: tuple
    is_polynomial: bool
    degree_bound: int
    ellipsoid: EllipsoidFitReport


def fit_polynomial(
    samples: SectionFunctionSamples, degree: int, threshold: float = 1e-6
) -> PolynomialFitReport:
    """Least-squares fit in the Chebyshev basis of the sample interval.

    The residual is the RMS misfit divided by the RMS sample value; reported
    coefficients are converted to the monomial basis in t.
    """
    t = np.asarray(samples.t_grid, dtype=float)
    y = np.asarray(samples.values, dtype=float)
    if degree < 0:
        raise ValidationError(f"degree must be >= 0, got {degree}")
    if len(t) <= degree:
        raise DegenerateGrid(f"{len(t)} samples cannot support degree {degree}")
    lo, hi = samples.interval
    if not hi > lo:
        raise DegenerateGrid("sample interval is degenerate")
    x = (2.0 * t - (lo + hi)) / (hi - lo)
    coeffs = np.polynomial.chebyshev.chebfit(x, y, degree)
    fitted = np.polynomial.chebyshev.chebval(x, coeffs)
    scale = float(np.sqrt(np.mean(y * y)))
    misfit = float(np.sqrt(np.mean((y - fitted) ** 2)))
    residual = misfit / scale if scale > 0.0 else misfit
    series = np.polynomial.Chebyshev(coeffs, domain=[lo, hi])
    mono = series.convert(kind=np.polynomial.Polynomial).coef
    return PolynomialFitReport(
        xi=samples.xi,
        degree=degree,
        coefficients=tuple(float(c) for c in mono),
        residual=residual,
        is_polynomial=residual <= threshold,
    )


def detect_direction(
    body: Body, m: int, xi, config: DetectionConfig | None = None
) -> PolynomialFitReport:
    """Degree sweep 0..max_degree; returns the smallest passing degree,
    or the max-degree report flagged non-polynomial."""
    config = config or DetectionConfig()
    samples = section_function(
        body,
        m,
        xi,
        grid_size=config.grid_size,
        margin_factor=config.margin_factor,
        degree=config.quad_degree,
    )
    last = None
    for degree in range(config.max_degree + 1):
        last = fit_polynomial(samples, degree, threshold=config.residual_threshold)
        if last.is_polynomial:
            return last
    return last


def direction_ensemble(n: int, config: DetectionConfig) -> np.ndarray:
    """Coordinate axes, the main diagonal, and seeded quasi-uniform directions.

    The diagonal is always present because axis-aligned bodies can be
    polynomial along every axis while failing off-axis.
    """
    dirs = [np.eye(n)[j] for j in range(n)]
    dirs.append(np.ones(n) / np.sqrt(n))
    extra = config.ensemble_size - len(dirs)
    if extra > 0:
        frames = haar_frames(GrassmannSampler(n=n, i=1, count=extra, seed=config.seed))
        dirs.extend(frame[:, 0] for frame in frames)
    return np.array(dirs[: config.ensemble_size])


def detect_body(body: Body, m: int, config: DetectionConfig | None = None) -> ClassificationReport:
    """Run the per-direction detector over the ensemble and merge the verdicts."""
    config = config or DetectionConfig()
    dirs = direction_ensemble(body.n, config)

    def run(idx: int) -> PolynomialFitReport:
        return detect_direction(body, m, dirs[idx], config)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            reports = list(pool.map(run, range(len(dirs))))
    else:
        reports = [run(idx) for idx in range(len(dirs))]

    all_poly = all(r.is_polynomial for r in reports)
    degree_bound = max(r.degree for r in reports)
    ell = ellipsoid_fit(body, degree=config.quad_degree)
    return ClassificationReport(
        m=m,
        per_direction=tuple(reports),
        is_polynomial=all_poly,
        degree_bound=degree_bound,
        ellipsoid=ell,
    )


def ellipsoid_fit(body: Body, degree: int = 20) -> EllipsoidFitReport:
    """Least-squares quadratic form Q with gauge(theta)^2 ~ theta^T Q theta.

    Zero residual characterizes origin-centered ellipsoids within the body
    families implemented; an indefinite fitted form is reported, not fatal.
    """
    rule = sphere_rule(body.n, degree)
    theta = rule.nodes
    target = 1.0 / body.radial(theta) ** 2
    n = body.n
    columns = []
    index_pairs = [(a, b) for a in range(n) for b in range(a, n)]
    for a, b in index_pairs:
        col = theta[:, a] * theta[:, b]
        if a != b:
            col = 2.0 * col
        columns.append(col)
    design = np.column_stack(columns)
    coeffs, *_ = np.linalg.lstsq(design, target, rcond=None)
    q = np.zeros((n, n))
    for (a, b), val in zip(index_pairs, coeffs):
        q[a, b] = val
        q[b, a] = val
    fitted = design @ coeffs
    residual = float(
        np.sqrt(np.mean((target - fitted) ** 2)) / np.sqrt(np.mean(target**2))
    )
    positive_definite = bool(np.min(np.linalg.eigvalsh(q)) > 0.0)
    return EllipsoidFitReport(
        residual=residual, quadratic_form=q, positive_definite=positive_definite
    )
