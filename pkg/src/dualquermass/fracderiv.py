"""Fractional derivatives of order q at zero for real q > -1.

The strip definition for -1 < q < 0 is the Mellin-type integral
(1/Gamma(-q)) int_0^inf t^(-1-q) h(t) dt.  For noninteger q above the strip
the analytic continuation is evaluated by the standard three-term expression:
the Taylor-subtracted integral on [0, 1], the plain tail on [1, inf), and the
sum of h^(k)(0) / (k! (k - q)) over the subtracted orders.  At integer k >= 0
the continuation reduces to (-1)^k times the ordinary k-th derivative.

Profiles carry a finite support bound; evaluation beyond it is taken as zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import rgamma

from .errors import InsufficientTaylor, IntegerOrder, NonIntegrable, ValidationError
from .quadrature import gauss_legendre

# Central-difference spacings per derivative order, chosen so float rounding
# (~eps * 2^k / h^k) stays below ~1e-9 after Richardson extrapolation.
_FD_SPACING = {1: 1e-3, 2: 1e-3, 3: 1e-2, 4: 0.035, 5: 0.08, 6: 0.13, 7: 0.17, 8: 0.22}

_PANEL_RULE = gauss_legendre(32)


@dataclass(frozen=True)
class ProfileFn:
    """Integrable profile on [0, t_max] that is smooth near 0.

    ``taylor`` holds the coefficients c_k of h(t) ~ sum c_k t^k at zero (not
    the derivatives themselves); ``taylor_radius`` is the radius inside which
    the stored expansion reproduces the function to near machine precision.
    """

    fn: object
    taylor: tuple
    t_max: float
    taylor_radius: float

    @staticmethod
    def from_callable(
        fn,
        t_max: float,
        taylor_order: int = 8,
        taylor=None,
        taylor_radius: float | None = None,
        reach: float | None = None,
    ) -> "ProfileFn":
        """Wrap a callable; compute Taylor data by finite differences when absent.

        When ``taylor`` is not supplied the callable must be evaluable on a
        two-sided neighborhood of 0 (out to ``reach`` on either side) so that
        Richardson-extrapolated central differences can be formed.
        """
        if taylor is None:
            reach = float(reach if reach is not None else t_max)
            coeffs = [float(fn(0.0))]
            for k in range(1, taylor_order + 1):
                coeffs.append(_fd_derivative(fn, k, reach) / math.factorial(k))
            taylor = tuple(coeffs)
            if taylor_radius is None:
                taylor_radius = min(0.1 * reach, 0.25)
        else:
            taylor = tuple(float(c) for c in taylor)
            if taylor_radius is None:
                taylor_radius = min(0.25, float(t_max))
        return ProfileFn(
            fn=fn, taylor=taylor, t_max=float(t_max), taylor_radius=float(taylor_radius)
        )

    def padded(self, t):
        """Evaluate the profile with the zero-beyond-support contract applied."""
        t = np.asarray(t, dtype=float)
        vals = np.asarray(self.fn(t), dtype=float)
        return np.where(t < self.t_max, vals, 0.0)

    def taylor_eval(self, t, order: int):
        """Taylor polynomial through degree order-1 (empty sum for order 0)."""
        t = np.asarray(t, dtype=float)
        acc = np.zeros_like(t)
        for c in reversed(self.taylor[:order]):
            acc = acc * t + c
        return acc


def profile_from_poly(coefficients, t_max: float = 1.0) -> ProfileFn:
    """Profile for a polynomial restricted to [0, t_max]; its Taylor data is exact."""
    coeffs = tuple(float(c) for c in coefficients)

    def fn(t):
        t = np.asarray(t, dtype=float)
        acc = np.zeros_like(t)
        for c in reversed(coeffs):
            acc = acc * t + c
        return acc

    return ProfileFn(fn=fn, taylor=coeffs, t_max=float(t_max), taylor_radius=float(t_max))


def _fd_derivative(fn, k: int, reach: float) -> float:
    """k-th derivative at 0 by central differences with two Richardson levels."""
    h = _FD_SPACING.get(k, 0.25)
    h = min(h, 0.45 * reach / max(k, 1))

    def central(step):
        total = 0.0
        for j in range(k + 1):
            x = (0.5 * k - j) * step
            total += (-1) ** j * math.comb(k, j) * float(fn(x))
        return total / step**k

    d1, d2, d4 = central(h), central(2.0 * h), central(4.0 * h)
    return (64.0 * d1 - 20.0 * d2 + d4) / 45.0


def _panel_boundaries(lo: float, hi: float, breakpoints=()) -> list:
    """Geometrically growing panel edges from lo to hi, honoring breakpoints."""
    edges = {lo, hi}
    for b in breakpoints:
        if lo < b < hi:
            edges.add(b)
    t = lo
    while t * 2.0 < hi:
        t *= 2.0
        edges.add(t)
    return sorted(edges)


def _panel_integral(f, lo: float, hi: float, breakpoints=()) -> float:
    if hi <= lo:
        return 0.0
    edges = _panel_boundaries(lo, hi, breakpoints)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        pts = mid + half * _PANEL_RULE.nodes
        total += half * float(np.dot(_PANEL_RULE.weights, f(pts)))
    return total


def _require_finite_support(h: ProfileFn):
    if not math.isfinite(h.t_max) or h.t_max <= 0.0:
        raise NonIntegrable("profile needs a finite positive support bound t_max")


def frac_deriv_strip(h: ProfileFn, q: float) -> float:
    """Fractional derivative for -1 < q < 0 directly from the strip integral.

    The power singularity t^(-1-q) at 0 is absorbed exactly into a Gauss-Jacobi
    rule, so smooth profiles converge spectrally.
    """
    if not -1.0 < q < 0.0:
        raise ValidationError(f"strip formula needs -1 < q < 0, got {q}")
    _require_finite_support(h)
    from scipy.special import roots_jacobi

    beta = -1.0 - q
    b = min(1.0, h.t_max)
    x, w = roots_jacobi(48, 0.0, beta)
    t = b * 0.5 * (1.0 + x)
    head = (b * 0.5) ** (beta + 1.0) * float(np.dot(w, h.padded(t)))
    tail = 0.0
    if h.t_max > 1.0:
        tail = _panel_integral(
            lambda s: s ** (-1.0 - q) * h.padded(s), 1.0, h.t_max
        )
    return float(rgamma(-q)) * (head + tail)


def frac_deriv(h: ProfileFn, q: float, order: int) -> float:
    """Analytic continuation of the fractional derivative at zero, -1 < q < order.

    Implements the three-term continuation: Taylor-subtracted integral on
    [0, 1], plain tail on [1, t_max], and the pole sum over the subtracted
    coefficients.  ``order`` is the number of subtracted Taylor terms (the
    paper-level m); the result is independent of the admissible choice.
    """
    if float(q).is_integer():
        raise IntegerOrder(f"q = {q} is an integer; use frac_deriv_integer")
    if q <= -1.0:
        raise ValidationError(f"order parameter q must exceed -1, got {q}")
    order = int(order)
    if order < max(1, math.ceil(q)):
        raise InsufficientTaylor(
            f"need q < order, got q = {q} with order = {order}"
        )
    if len(h.taylor) < order:
        raise InsufficientTaylor(
            f"profile carries {len(h.taylor)} Taylor coefficients, need {order}"
        )
    _require_finite_support(h)

    a = min(h.taylor_radius, 1.0, h.t_max)
    series = 0.0
    for j in range(order, len(h.taylor)):
        series += h.taylor[j] * a ** (j - q) / (j - q)

    def subtracted(t):
        return t ** (-1.0 - q) * (h.padded(t) - h.taylor_eval(t, order))

    mid = _panel_integral(subtracted, a, 1.0, breakpoints=(h.t_max,))
    tail = 0.0
    if h.t_max > 1.0:
        tail = _panel_integral(lambda s: s ** (-1.0 - q) * h.padded(s), 1.0, h.t_max)
    poles = sum(h.taylor[k] / (k - q) for k in range(order))
    return float(rgamma(-q)) * (series + mid + tail + poles)


def frac_deriv_integer(h: ProfileFn, k: int) -> float:
    """Integer-order value (-1)^k h^(k)(0), read off the stored Taylor data."""
    if k < 0:
        raise ValidationError(f"derivative order must be >= 0, got {k}")
    if k >= len(h.taylor):
        raise InsufficientTaylor(
            f"profile carries Taylor data through order {len(h.taylor) - 1}, need {k}"
        )
    return (-1.0) ** k * math.factorial(k) * h.taylor[k]
