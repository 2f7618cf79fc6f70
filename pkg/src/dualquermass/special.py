"""Exact rational polynomials, dimension-n Legendre polynomials, and ball constants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import OddKernelPower, ValidationError

# Coefficient growth of the exact kernels is bounded by capping the degree.
MAX_KERNEL_DEGREE = 64


@dataclass(frozen=True)
class RationalPoly:
    """Univariate polynomial with exact rational coefficients, ascending degree.

    The zero polynomial is represented by an empty coefficient tuple; otherwise
    the leading coefficient is nonzero.  All arithmetic is exact.
    """

    coefficients: tuple

    @staticmethod
    def from_coefficients(coeffs) -> "RationalPoly":
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return RationalPoly(tuple(cs))

    @staticmethod
    def zero() -> "RationalPoly":
        return RationalPoly(())

    @staticmethod
    def monomial(power: int, coeff=1) -> "RationalPoly":
        return RationalPoly.from_coefficients([0] * power + [coeff])

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return Fraction(0)

    def __call__(self, z):
        acc = Fraction(0) if isinstance(z, Fraction) else 0.0 * z
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return acc

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        n = max(len(self.coefficients), len(other.coefficients))
        return RationalPoly.from_coefficients(
            [self.coefficient(k) + other.coefficient(k) for k in range(n)]
        )

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        n = max(len(self.coefficients), len(other.coefficients))
        return RationalPoly.from_coefficients(
            [self.coefficient(k) - other.coefficient(k) for k in range(n)]
        )

    def __mul__(self, other: "RationalPoly") -> "RationalPoly":
        if not self.coefficients or not other.coefficients:
            return RationalPoly.zero()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return RationalPoly.from_coefficients(out)

    def scale(self, factor) -> "RationalPoly":
        f = Fraction(factor)
        return RationalPoly.from_coefficients([f * c for c in self.coefficients])

    def derivative(self) -> "RationalPoly":
        return RationalPoly.from_coefficients(
            [k * c for k, c in enumerate(self.coefficients)][1:]
        )

    def float_coefficients(self):
        return [float(c) for c in self.coefficients]


@dataclass(frozen=True)
class DimLegendre:
    """Legendre polynomial of degree l and dimension n, normalized to 1 at z=1."""

    l: int
    n: int
    poly: RationalPoly

    def __call__(self, z):
        return self.poly(z)


@dataclass(frozen=True)
class BallConstants:
    """Volume and surface constants of the unit ball in R^n."""

    n: int
    ball_volume: float
    sphere_surface: float


def kappa(n: int) -> float:
    """Volume of the unit Euclidean ball in R^n, pi^(n/2) / Gamma(n/2 + 1)."""
    if n < 1:
        raise ValidationError(f"ball dimension must be >= 1, got {n}")
    return math.exp(0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n + 1))


def sphere_surface(n: int) -> float:
    """Surface measure of S^(n-1), equal to n * kappa(n)."""
    if n < 1:
        raise ValidationError(f"sphere ambient dimension must be >= 1, got {n}")
    return n * kappa(n)


def ball_constants(n: int) -> BallConstants:
    return BallConstants(n=n, ball_volume=kappa(n), sphere_surface=sphere_surface(n))


@lru_cache(maxsize=None)
def _legendre_coefficients(l: int, n: int) -> tuple:
    """Coefficients of P_l^n by the three-term recurrence, exact rationals.

    (l + n - 2) P_{l+1} = (2l + n - 2) z P_l - l P_{l-1},  P_0 = 1, P_1 = z.
    """
    if l == 0:
        return (Fraction(1),)
    if l == 1:
        return (Fraction(0), Fraction(1))
    p_prev = RationalPoly.from_coefficients(_legendre_coefficients(l - 2, n))
    p_curr = RationalPoly.from_coefficients(_legendre_coefficients(l - 1, n))
    j = l - 1  # recurrence index producing degree j+1
    z_term = RationalPoly.monomial(1) * p_curr
    nxt = z_term.scale(Fraction(2 * j + n - 2, j + n - 2)) - p_prev.scale(
        Fraction(j, j + n - 2)
    )
    return nxt.coefficients


def legendre_nd(l: int, n: int) -> DimLegendre:
    """Legendre polynomial of degree l and dimension n with P_l^n(1) = 1 exactly."""
    if l < 0:
        raise ValidationError(f"degree must be >= 0, got {l}")
    if n < 2:
        raise ValidationError(f"dimension must be >= 2, got {n}")
    poly = RationalPoly.from_coefficients(_legendre_coefficients(l, n))
    return DimLegendre(l=l, n=n, poly=poly)


def kernel_poly(l: int, m: int, n: int) -> RationalPoly:
    """Exact product P_l^n(z) * (1 - z^2)^((m-2)/2) for even m >= 2.

    The result has degree l + m - 2.  Odd m does not give a polynomial kernel;
    the numeric multiplier path must be used instead.
    """
    if m % 2 != 0 or m < 2:
        raise OddKernelPower(f"kernel power m must be even and >= 2, got {m}")
    if l + m > MAX_KERNEL_DEGREE:
        raise ValidationError(
            f"l + m = {l + m} exceeds the supported cap {MAX_KERNEL_DEGREE}"
        )
    base = legendre_nd(l, n).poly
    one_minus_z2 = RationalPoly.from_coefficients([1, 0, -1])
    out = base
    for _ in range((m - 2) // 2):
        out = out * one_minus_z2
    return out
