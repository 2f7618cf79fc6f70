"""Funk-Hecke multipliers for zonal kernels.

A zonal kernel Phi acting by integration against Phi(<xi, theta>) multiplies
every degree-l spherical harmonic by

    lambda_l(Phi) = int_{-1}^{1} Phi(t) P_l^n(t) (1 - t^2)^((n-3)/2) dt.

This module provides the numeric multiplier for general kernels, the family
lambda_l(q) arising from one-sided power kernels combined with an in-plane
factor (1 - z^2)^((m-2)/2), its analytic continuation in q, exact rational
values at integer orders, and the non-vanishing characterization
lambda_l(k) != 0  iff  k - l is even and m >= k - l + 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import rgamma, roots_jacobi

from .errors import EndpointSingularity, OddKernelPower, ValidationError
from .fracderiv import frac_deriv, profile_from_poly
from .quadrature import (
    GrassmannSampler,
    IntervalRule,
    gauss_jacobi,
    haar_frames,
    sphere_rule,
)
from .special import kernel_poly, legendre_nd


@dataclass(frozen=True)
class ZonalKernel:
    """Profile of a zonal kernel on [-1, 1].

    ``integrable_endpoints`` flags kernels whose endpoint growth is still
    integrable against (1 - t^2)^((n-3)/2); purely informational.
    """

    profile: object
    integrable_endpoints: bool = True

    def __call__(self, t):
        return self.profile(t)


def _legendre_values(l: int, n: int, t: np.ndarray) -> np.ndarray:
    coeffs = legendre_nd(l, n).poly.float_coefficients()
    if not coeffs:
        return np.zeros_like(t)
    return np.polynomial.polynomial.polyval(t, np.asarray(coeffs))


def funk_hecke_multiplier(
    phi, l: int, n: int, rule: IntervalRule | None = None
) -> float:
    """Numeric multiplier lambda_l(Phi) of a zonal kernel in dimension n.

    With no rule supplied, a Gauss-Jacobi rule absorbing the surface weight
    (1 - t^2)^((n-3)/2) is used, which is exact for polynomial kernels of
    degree within the rule budget.  A plain Gauss-Legendre rule may be passed
    instead, in which case the weight is evaluated pointwise; that path is
    unavailable for n = 2, whose weight is singular at the endpoints.
    """
    if n < 2:
        raise ValidationError(f"dimension must be >= 2, got {n}")
    if l < 0:
        raise ValidationError(f"harmonic degree must be >= 0, got {l}")
    exponent = (n - 3) / 2.0
    kernel = phi.profile if isinstance(phi, ZonalKernel) else phi
    if rule is None:
        rule = gauss_jacobi(max(48, (l + 8) // 2 + 24), exponent)
    t = rule.nodes
    values = np.asarray(kernel(t), dtype=float) * _legendre_values(l, n, t)
    if rule.weight_exponent == exponent:
        return float(np.dot(rule.weights, values))
    if rule.weight_exponent == 0.0:
        if n == 2:
            raise EndpointSingularity(
                "n = 2 weight is singular at the endpoints; "
                "use the absorbed-weight rule"
            )
        return float(np.dot(rule.weights, values * (1.0 - t * t) ** exponent))
    raise ValidationError(
        f"rule absorbs weight exponent {rule.weight_exponent}, "
        f"expected 0 or {exponent}"
    )


# ---------------------------------------------------------------------------
# Built-in low-degree harmonics for operator checks
# ---------------------------------------------------------------------------


def builtin_harmonic(l: int, n: int):
    """Concrete degree-l spherical harmonic on S^(n-1), for l <= 4."""
    if l == 0:
        return lambda theta: np.ones(np.asarray(theta).shape[:-1])
    if l == 1:
        return lambda theta: np.asarray(theta)[..., 0]
    if l == 2:
        return lambda theta: (
            np.asarray(theta)[..., 0] * np.asarray(theta)[..., 1]
        )
    if l == 3:
        if n >= 3:
            return lambda theta: (
                np.asarray(theta)[..., 0]
                * np.asarray(theta)[..., 1]
                * np.asarray(theta)[..., 2]
            )
        return lambda theta: (
            np.asarray(theta)[..., 0] ** 3
            - 3.0 / (n + 2.0) * np.asarray(theta)[..., 0]
        )
    if l == 4:

        def zonal4(theta):
            z = np.asarray(theta)[..., 0]
            return z**4 - 6.0 / (n + 4.0) * z**2 + 3.0 / ((n + 2.0) * (n + 4.0))

        return zonal4
    raise ValidationError(f"built-in harmonics go up to degree 4, got {l}")


def operator_norm_check(
    phi,
    l: int,
    n: int,
    degree: int = 28,
    xi_count: int = 12,
    seed: int = 7,
    harmonic=None,
) -> tuple:
    """Verify the multiplier action on a concrete harmonic over a grid of poles.

    Returns (max over the xi grid of |LHS - lambda * H_l(xi)|, lambda), where
    LHS(xi) is the spherical quadrature of Phi(<xi, theta>) H_l(theta).
    """
    if harmonic is None:
        harmonic = builtin_harmonic(l, n)
    kernel = phi.profile if isinstance(phi, ZonalKernel) else phi
    lam = funk_hecke_multiplier(phi, l, n)
    rule = sphere_rule(n, degree)
    h_nodes = np.asarray(harmonic(rule.nodes), dtype=float)

    frames = haar_frames(GrassmannSampler(n=n, i=1, count=xi_count, seed=seed))
    xis = [frame[:, 0] for frame in frames] + [np.eye(n)[j] for j in range(n)]
    worst = 0.0
    for xi in xis:
        inner = rule.nodes @ xi
        lhs = float(np.dot(rule.weights, np.asarray(kernel(inner)) * h_nodes))
        dev = abs(lhs - lam * float(harmonic(xi[None, :])[0]))
        worst = max(worst, dev)
    return worst, lam


# ---------------------------------------------------------------------------
# The lambda_l(q) family
# ---------------------------------------------------------------------------


def lambda_numeric(l: int, q: float, m: int, n: int, order: int = 48) -> float:
    """lambda_l(q) = (1/Gamma(-q)) int_0^1 P_l^n(z) z^(-1-q) (1-z^2)^((m-2)/2) dz.

    Valid for -1 < q < 0 and any m >= 1.  Both endpoint powers are absorbed
    into a Gauss-Jacobi rule on [0, 1], leaving a smooth factor.
    """
    if not -1.0 < q < 0.0:
        raise ValidationError(f"numeric path needs -1 < q < 0, got {q}")
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    alpha = (m - 2) / 2.0
    beta = -1.0 - q
    x, w = roots_jacobi(order, alpha, beta)
    z = 0.5 * (1.0 + x)
    smooth = (1.0 + z) ** alpha * _legendre_values(l, n, z)
    integral = 0.5 ** (alpha + beta + 1.0) * float(np.dot(w, smooth))
    return float(rgamma(-q)) * integral


def lambda_continuation(l: int, q: float, m: int, n: int) -> float:
    """lambda_l(q) for noninteger q > -1 via the fractional derivative at zero
    of the polynomial kernel P_l^n(z) (1 - z^2)^((m-2)/2); requires even m."""
    if m % 2 != 0 or m < 2:
        raise OddKernelPower(f"continuation needs even m >= 2, got {m}")
    coeffs = kernel_poly(l, m, n).float_coefficients()
    profile = profile_from_poly(coeffs, t_max=1.0)
    return frac_deriv(profile, q, order=max(1, math.ceil(q)))


def lambda_exact(l: int, k: int, m: int, n: int) -> Fraction:
    """Exact rational lambda_l(k) = (-1)^k d^k/dz^k [P_l^n(z)(1-z^2)^((m-2)/2)] at 0.

    Computed as (-1)^k k! times the z^k coefficient of the kernel polynomial.
    """
    if k < 0:
        raise ValidationError(f"integer order must be >= 0, got {k}")
    kernel = kernel_poly(l, m, n)
    return Fraction((-1) ** k * math.factorial(k)) * kernel.coefficient(k)


def vanishing_predicate(l: int, k: int, m: int) -> bool:
    """True iff lambda_l(k) is nonzero: k - l even and m >= k - l + 2."""
    if m % 2 != 0 or m < 2:
        raise OddKernelPower(f"characterization needs even m >= 2, got {m}")
    return (k - l) % 2 == 0 and m >= k - l + 2


@dataclass(frozen=True)
class MultiplierTable:
    """Exact multipliers lambda_l(k) indexed by (l, k, m, n), with the predicate."""

    l_max: int
    k_max: int
    m_values: tuple
    n_values: tuple
    values: dict

    def value(self, l: int, k: int, m: int, n: int) -> Fraction:
        return self.values[(l, k, m, n)]

    def is_zero(self, l: int, k: int, m: int, n: int) -> bool:
        return self.values[(l, k, m, n)] == 0

    def predicted_nonzero(self, l: int, k: int, m: int) -> bool:
        return vanishing_predicate(l, k, m)

    def rows(self):
        """Yield (l, k, m, n, value) in deterministic order."""
        for n in self.n_values:
            for m in self.m_values:
                for l in range(self.l_max + 1):
                    for k in range(self.k_max + 1):
                        yield l, k, m, n, self.values[(l, k, m, n)]


def build_multiplier_table(l_max: int, k_max: int, m_values, n_values) -> MultiplierTable:
    m_values = tuple(sorted(m_values))
    n_values = tuple(sorted(n_values))
    values = {}
    for n in n_values:
        for m in m_values:
            for l in range(l_max + 1):
                kernel = kernel_poly(l, m, n)
                for k in range(k_max + 1):
                    values[(l, k, m, n)] = Fraction(
                        (-1) ** k * math.factorial(k)
                    ) * kernel.coefficient(k)
    return MultiplierTable(
        l_max=l_max, k_max=k_max, m_values=m_values, n_values=n_values, values=values
    )
