"""Dual quermassintegrals, dual section functions, and integral identity checks.

The central object is the m-th dual section function

    A(t) = (1/(n-1)) * int over S^(n-1) cap xi^perp of rho_{K - t xi}^m,

the m-th dual volume of the hyperplane section at offset t taken about the
point t*xi, for t strictly inside (-rho_K(-xi), rho_K(xi)).  Polytope sections
are integrated by the exact facet decomposition; all other bodies go through
sub-sphere product quadrature of the off-center radial function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodies import Body, Polytope, radial_sum as _radial_sum_bodies, make_body
from .bodies import lp_ball_spec
from .errors import PointNotInterior, TOutOfRange, ValidationError
from .fracderiv import ProfileFn, frac_deriv, frac_deriv_integer
from .polysections import (
    polytope_sphere_moment,
    section_sphere_moment,
    surface_profile_integral,
)
from .quadrature import (
    GrassmannSampler,
    _sphere_rule_any,
    antipodal_half_rule,
    as_direction,
    complement_basis,
    haar_frames,
    sphere_rule,
)
from .special import kappa


@dataclass(frozen=True)
class SectionQuery:
    """One evaluation point of the m-th dual section function."""

    body: Body
    m: int
    xi: tuple
    t: float


@dataclass(frozen=True)
class SectionFunctionSamples:
    """Section function sampled on Chebyshev nodes of its admissible interval."""

    xi: tuple
    m: int
    t_grid: np.ndarray
    values: np.ndarray
    interval: tuple


@dataclass(frozen=True)
class SteinerReport:
    """Fitted radial-Steiner expansion against directly computed dual volumes."""

    epsilons: np.ndarray
    volumes: np.ndarray
    coefficients: np.ndarray  # fitted, ascending powers of epsilon
    targets: np.ndarray  # binom(n, i) * W~_i on the same quadrature rule
    residual: float


@dataclass(frozen=True)
class KubotaReport:
    lhs: float
    rhs: float
    stderr: float
    samples: int


def _validate_m(body: Body, m: int):
    if not 1 <= m <= body.n - 1:
        raise ValidationError(f"m must be in 1..{body.n - 1}, got {m}")


def dual_volume(body: Body, i: int, degree: int = 28) -> float:
    """Dual volume V~_i(K) = W~_{n-i}(K) = (1/n) int rho_K^i over the sphere."""
    if not 0 <= i <= body.n:
        raise ValidationError(f"i must be in 0..{body.n}, got {i}")
    if isinstance(body.spec, Polytope):
        return polytope_sphere_moment(body.spec.normals, body.spec.offsets, i) / body.n
    rule = sphere_rule(body.n, degree)
    rho = body.radial(rule.nodes)
    return float(np.dot(rule.weights, rho**i)) / body.n


def section_dual_volume(query: SectionQuery, degree: int = 24) -> float:
    """m-th dual volume of the section K cap {xi^perp + t xi} about the point t xi."""
    body, m, t = query.body, query.m, float(query.t)
    _validate_m(body, m)
    xi = as_direction(query.xi, body.n)
    if body.gauge(t * xi) >= 1.0:
        raise PointNotInterior(
            f"offset t = {t} leaves the admissible interval of the section"
        )
    return _section_value(body, m, xi, t, degree)


def _section_value(body: Body, m: int, xi: np.ndarray, t: float, degree: int) -> float:
    n = body.n
    if isinstance(body.spec, Polytope) and n >= 3:
        total = section_sphere_moment(body.spec.normals, body.spec.offsets, xi, t, m)
        return total / (n - 1)
    basis = complement_basis(xi)
    embedded = _sphere_rule_any(n - 1, degree)
    nodes = embedded.nodes @ basis.T
    r = body.radial_from_point(t * xi, nodes)
    return float(np.dot(embedded.weights, r**m)) / (n - 1)


def _admissible_interval(body: Body, xi: np.ndarray, margin_factor: float):
    rho_plus = float(body.radial(xi))
    rho_minus = float(body.radial(-xi))
    delta = margin_factor * body.min_radial_bound
    lo, hi = -rho_minus + delta, rho_plus - delta
    if not lo < hi:
        raise ValidationError("empty admissible interval; margin too large")
    return lo, hi


def section_function(
    body: Body,
    m: int,
    xi,
    grid_size: int = 64,
    margin_factor: float = 1e-3,
    degree: int = 24,
) -> SectionFunctionSamples:
    """Sample the section function on Chebyshev nodes of the admissible interval."""
    _validate_m(body, m)
    if grid_size < 8:
        raise ValidationError(f"grid size must be >= 8, got {grid_size}")
    xi = as_direction(xi, body.n)
    lo, hi = _admissible_interval(body, xi, margin_factor)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    angles = (2.0 * np.arange(grid_size) + 1.0) * math.pi / (2.0 * grid_size)
    t_grid = mid - half * np.cos(angles)
    t_grid.sort()

    if isinstance(body.spec, Polytope) and body.n >= 3:
        values = np.array(
            [_section_value(body, m, xi, float(t), degree) for t in t_grid]
        )
    else:
        basis = complement_basis(xi)
        embedded = _sphere_rule_any(body.n - 1, degree)
        nodes = embedded.nodes @ basis.T
        points = t_grid[:, None, None] * xi  # (T, 1, n)
        r = body.radial_from_point(points, nodes[None, :, :])
        values = (r**m) @ embedded.weights / (body.n - 1)
    return SectionFunctionSamples(
        xi=tuple(xi), m=m, t_grid=t_grid, values=values, interval=(lo, hi)
    )


def moment_identity_check(
    body: Body,
    m: int,
    t: float,
    degree: int = 20,
    outer_degree: int | None = None,
    rhs_degree: int | None = None,
    origin_symmetric: bool = False,
) -> tuple:
    """Two-path check of the spherical average of the section function.

    LHS integrates A(t) over all axis directions by nested quadrature; RHS is
    kappa_{n-1} times the single sphere integral of (rho^2 - t^2)^(m/2).  Both
    are returned for comparison.  ``origin_symmetric`` may be set for bodies
    with K = -K to fold the outer rule onto a half sphere.
    """
    _validate_m(body, m)
    n = body.n
    if abs(t) >= body.min_radial_bound:
        raise TOutOfRange(
            f"|t| = {abs(t)} must stay below the minimal radius "
            f"{body.min_radial_bound}"
        )
    outer_degree = degree if outer_degree is None else outer_degree
    rhs_degree = max(48, 2 * degree) if rhs_degree is None else rhs_degree

    if origin_symmetric:
        outer = antipodal_half_rule(n, outer_degree)
    else:
        outer = sphere_rule(n, outer_degree)

    is_poly = isinstance(body.spec, Polytope) and n >= 3
    if is_poly:
        values = np.array(
            [
                section_sphere_moment(body.spec.normals, body.spec.offsets, xi, t, m)
                for xi in outer.nodes
            ]
        ) / (n - 1)
        lhs = float(np.dot(outer.weights, values))
    else:
        embedded = _sphere_rule_any(n - 1, degree)
        inner_count = len(embedded.weights)
        chunk = max(1, 2_000_000 // inner_count)
        lhs = 0.0
        for start in range(0, len(outer.weights), chunk):
            xis = outer.nodes[start : start + chunk]
            bases = np.stack([complement_basis(xi) for xi in xis])  # (B, n, n-1)
            dirs = embedded.nodes[None, :, :] @ bases.transpose(0, 2, 1)
            points = (t * xis)[:, None, :]
            r = body.radial_from_point(points, dirs)
            vals = (r**m) @ embedded.weights / (n - 1)
            lhs += float(np.dot(outer.weights[start : start + chunk], vals))

    coeff = kappa(n - 1)
    if isinstance(body.spec, Polytope):
        normals = np.asarray(body.spec.normals, dtype=float)
        offsets = np.asarray(body.spec.offsets, dtype=float)
        rhs = coeff * surface_profile_integral(
            normals, offsets, lambda r: (r * r - t * t) ** (m / 2.0)
        )
    else:
        rule = sphere_rule(n, rhs_degree)
        rho = body.radial(rule.nodes)
        rhs = coeff * float(np.dot(rule.weights, (rho**2 - t * t) ** (m / 2.0)))
    return float(lhs), float(rhs)


def dual_steiner_check(body: Body, eps_grid, degree: int = 28) -> SteinerReport:
    """Fit the radial Steiner polynomial V(K + eps B) and compare coefficients.

    The targets binom(n, i) * W~_i(K) are computed on the same sphere rule, so
    the comparison isolates the polynomial structure of the expansion rather
    than quadrature truncation.
    """
    eps = np.asarray(eps_grid, dtype=float)
    if np.any(eps <= 0.0):
        raise ValidationError("epsilon grid must be positive")
    n = body.n
    rule = sphere_rule(n, degree)
    rho = body.radial(rule.nodes)
    volumes = np.array(
        [float(np.dot(rule.weights, (rho + e) ** n)) / n for e in eps]
    )
    targets = np.array(
        [
            math.comb(n, i) * float(np.dot(rule.weights, rho ** (n - i))) / n
            for i in range(n + 1)
        ]
    )
    fit = np.polynomial.Polynomial.fit(eps, volumes, deg=n).convert()
    coefficients = np.zeros(n + 1)
    coefficients[: len(fit.coef)] = fit.coef
    fitted = fit(eps)
    residual = float(
        np.sqrt(np.mean((volumes - fitted) ** 2)) / np.sqrt(np.mean(volumes**2))
    )
    return SteinerReport(
        epsilons=eps,
        volumes=volumes,
        coefficients=coefficients,
        targets=targets,
        residual=residual,
    )


def steiner_ball(n: int) -> Body:
    """Unit Euclidean ball used as the radial-Steiner structuring body."""
    return make_body(lp_ball_spec(2.0, np.ones(n)))


def radial_sum(k: Body, l: Body, alpha: float, beta: float) -> Body:
    return _radial_sum_bodies(k, l, alpha, beta)


def dual_kubota_check(
    body: Body, i: int, samples: int = 10_000, seed: int = 0, degree: int = 24
) -> KubotaReport:
    """Monte-Carlo test of V~_i(K) = (kappa_n / kappa_i) E_H [ V_i(K cap H) ].

    Sections K cap H are star bodies about the origin inside H, so their
    i-volume is the in-plane dual volume (1/i) int rho_K^i over S^(i-1) in H.
    """
    n = body.n
    if not 1 <= i <= n - 1:
        raise ValidationError(f"i must be in 1..{n - 1}, got {i}")
    lhs = dual_volume(body, i)

    frames = haar_frames(GrassmannSampler(n=n, i=i, count=samples, seed=seed))
    inner = _sphere_rule_any(i, degree)
    points = np.einsum("pk,snk->spn", inner.nodes, frames)
    rho = body.radial(points.reshape(-1, n)).reshape(samples, -1)
    section_volumes = (rho**i) @ inner.weights / i
    values = (kappa(n) / kappa(i)) * section_volumes
    rhs = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return KubotaReport(lhs=lhs, rhs=rhs, stderr=stderr, samples=samples)


def frac_deriv_of_section(
    body: Body,
    m: int,
    xi,
    q: float,
    degree: int = 24,
    taylor_order: int | None = None,
    margin_factor: float = 1e-3,
) -> float:
    """Fractional derivative of t -> A(t) at zero, treating A as a profile on t >= 0.

    Integer q reads the ordinary signed derivative off finite-difference Taylor
    data; noninteger q goes through the three-term analytic continuation.
    """
    _validate_m(body, m)
    xi = as_direction(xi, body.n)
    lo, hi = _admissible_interval(body, xi, margin_factor)
    reach = min(-lo, hi)

    if isinstance(body.spec, Polytope) and body.n >= 3:

        def one(t: float) -> float:
            if lo < t < hi:
                return _section_value(body, m, xi, t, degree)
            return 0.0

    else:
        basis = complement_basis(xi)
        embedded = _sphere_rule_any(body.n - 1, degree)
        nodes = embedded.nodes @ basis.T

        def one(t: float) -> float:
            if not lo < t < hi:
                return 0.0
            r = body.radial_from_point(t * xi, nodes)
            return float(np.dot(embedded.weights, r**m)) / (body.n - 1)

    def profile_fn(t):
        arr = np.asarray(t, dtype=float)
        flat = arr.reshape(-1)
        out = np.array([one(float(v)) for v in flat])
        return out.reshape(arr.shape)

    if taylor_order is None:
        taylor_order = min(8, max(4, int(math.ceil(q)) + 2))
    if q <= -1.0 or q >= taylor_order:
        raise ValidationError(
            f"need -1 < q < taylor order, got q = {q}, order = {taylor_order}"
        )
    profile = ProfileFn.from_callable(
        profile_fn, t_max=hi, taylor_order=taylor_order, reach=reach
    )
    if float(q).is_integer():
        return frac_deriv_integer(profile, int(q))
    return frac_deriv(profile, q, order=max(1, math.ceil(q)))
