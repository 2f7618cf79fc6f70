"""Deterministic quadrature on spheres and sub-spheres, plus Haar frame sampling.

Sphere rules are product constructions in hyperspherical coordinates: each
polar cosine carries a Gauss-Jacobi rule whose weight absorbs the surface
factor (1 - z^2)^((d-3)/2) of that level, and the innermost azimuth is an
equally spaced trapezoid rule.  The resulting rule integrates every monomial
of total degree <= exact_degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .errors import DimensionOutOfRange, OrderOutOfRange, ValidationError
from .special import sphere_surface

MAX_SPHERE_DIM = 8


@dataclass(frozen=True)
class IntervalRule:
    """Quadrature rule on (-1, 1).

    ``weight_exponent`` is the exponent w of an absorbed weight function
    (1 - t^2)^w: the weighted sum of f over the nodes approximates the
    integral of f(t) (1 - t^2)^w dt.  Plain Gauss-Legendre rules have w = 0.
    """

    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int
    weight_exponent: float = 0.0

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


@dataclass(frozen=True)
class SphereRule:
    """Nodes and weights on S^(dim-1) in R^dim with a polynomial exactness degree."""

    dim: int
    nodes: np.ndarray  # (N, dim)
    weights: np.ndarray  # (N,)
    exact_degree: int

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


@dataclass(frozen=True)
class SubsphereRule:
    """Rule on the great sub-sphere S^(n-1) intersected with the hyperplane axis^perp."""

    axis: np.ndarray  # (n,)
    basis: np.ndarray  # (n, n-1) orthonormal frame of axis^perp
    nodes: np.ndarray  # (N, n), all orthogonal to axis
    weights: np.ndarray
    exact_degree: int

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


@dataclass(frozen=True)
class GrassmannSampler:
    """Configuration for Haar-random i-dimensional subspace frames in R^n."""

    n: int
    i: int
    count: int
    seed: int


def gauss_legendre(order: int) -> IntervalRule:
    """Gauss-Legendre rule with the given node count; exact through degree 2*order - 1."""
    if not 1 <= order <= 512:
        raise OrderOutOfRange(f"order must be in 1..512, got {order}")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return IntervalRule(nodes=nodes, weights=weights, exact_degree=2 * order - 1)


def gauss_jacobi(order: int, exponent: float) -> IntervalRule:
    """Gauss rule absorbing the weight (1 - t^2)^exponent; exact through 2*order - 1."""
    if not 1 <= order <= 512:
        raise OrderOutOfRange(f"order must be in 1..512, got {order}")
    if exponent <= -1:
        raise ValidationError(f"weight exponent must be > -1, got {exponent}")
    if exponent == 0.0:
        return gauss_legendre(order)
    nodes, weights = roots_jacobi(order, exponent, exponent)
    return IntervalRule(
        nodes=nodes,
        weights=weights,
        exact_degree=2 * order - 1,
        weight_exponent=float(exponent),
    )


def _sphere_rule_any(dim: int, degree: int, even_counts: bool = False) -> SphereRule:
    """Product rule on S^(dim-1) for any dim >= 1 (dim 1 is the two-point S^0).

    With ``even_counts`` the polar and azimuth node counts are bumped to even
    numbers, which makes the node set antipodally closed and foldable.
    """
    if dim == 1:
        nodes = np.array([[1.0], [-1.0]])
        weights = np.array([1.0, 1.0])
        return SphereRule(dim=1, nodes=nodes, weights=weights, exact_degree=degree)
    if dim == 2:
        count = max(degree + 1, 2)
        if even_counts and count % 2 == 1:
            count += 1
        phi = 2.0 * math.pi * np.arange(count) / count
        nodes = np.column_stack([np.cos(phi), np.sin(phi)])
        weights = np.full(count, 2.0 * math.pi / count)
        return SphereRule(dim=2, nodes=nodes, weights=weights, exact_degree=degree)

    polar_count = (degree + 2) // 2  # 2k - 1 >= degree
    if even_counts and polar_count % 2 == 1:
        polar_count += 1
    z_rule = gauss_jacobi(max(polar_count, 1), (dim - 3) / 2.0)
    sub = _sphere_rule_any(dim - 1, degree, even_counts)

    z = np.repeat(z_rule.nodes, len(sub.weights))
    sub_nodes = np.tile(sub.nodes, (len(z_rule.nodes), 1))
    radial = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    nodes = np.empty((len(z), dim))
    nodes[:, 0] = z
    nodes[:, 1:] = radial[:, None] * sub_nodes
    weights = np.repeat(z_rule.weights, len(sub.weights)) * np.tile(
        sub.weights, len(z_rule.nodes)
    )
    return SphereRule(dim=dim, nodes=nodes, weights=weights, exact_degree=degree)


def sphere_rule(n: int, degree: int) -> SphereRule:
    """Quadrature on S^(n-1) exact for all monomials of total degree <= degree."""
    if not 2 <= n <= MAX_SPHERE_DIM:
        raise DimensionOutOfRange(
            f"sphere dimension must be in 2..{MAX_SPHERE_DIM}, got {n}"
        )
    if degree < 0:
        raise ValidationError(f"degree must be >= 0, got {degree}")
    return _sphere_rule_any(n, degree)


def antipodal_half_rule(n: int, degree: int) -> SphereRule:
    """Half-sphere rule with doubled weights, valid only for even integrands.

    Built from a product rule with even node counts (whose node set is closed
    under negation) by keeping one representative per antipodal pair.
    """
    full = _sphere_rule_any(n, degree, even_counts=True)
    if n == 2:
        count = len(full.weights)
        keep = np.arange(count) < count // 2
    else:
        keep = full.nodes[:, 0] > 0.0
    if int(keep.sum()) * 2 != len(full.weights):
        raise ValidationError("rule is not antipodally foldable")
    return SphereRule(
        dim=n,
        nodes=full.nodes[keep],
        weights=2.0 * full.weights[keep],
        exact_degree=full.exact_degree,
    )


def complement_basis(axis: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of axis^perp as columns of an (n, n-1) matrix.

    Gram-Schmidt over the coordinate vectors with the largest-|component|
    coordinate dropped first, so repeated calls give identical frames.
    """
    axis = np.asarray(axis, dtype=float)
    n = axis.shape[0]
    drop = int(np.argmax(np.abs(axis)))
    cols = [j for j in range(n) if j != drop]
    basis = []
    for j in cols:
        v = np.zeros(n)
        v[j] = 1.0
        v -= np.dot(v, axis) * axis
        for b in basis:
            v -= np.dot(v, b) * b
        norm = np.linalg.norm(v)
        if norm < 1e-12:
            raise ValidationError("degenerate axis for complement basis")
        basis.append(v / norm)
    return np.column_stack(basis)


def as_direction(v, n: int | None = None) -> np.ndarray:
    """Validate a unit vector (norm within 1e-14 of 1) and return it as a float array."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise ValidationError("direction must be a 1-d vector")
    if n is not None and arr.shape[0] != n:
        raise ValidationError(f"direction has dimension {arr.shape[0]}, expected {n}")
    if abs(np.linalg.norm(arr) - 1.0) > 1e-14:
        raise ValidationError("direction is not unit length within 1e-14")
    return arr


def subsphere_rule(xi: np.ndarray, degree: int) -> SubsphereRule:
    """Quadrature on S^(n-1) intersected with xi^perp via an embedded (n-1)-sphere rule.

    For n = 2 the sub-sphere is the two points +/- of the orthogonal direction,
    each carrying weight 1 (S^0 counting measure).
    """
    xi = as_direction(xi)
    n = xi.shape[0]
    if n < 2:
        raise DimensionOutOfRange("subsphere rule needs ambient dimension >= 2")
    basis = complement_basis(xi)
    embedded = _sphere_rule_any(n - 1, degree)
    nodes = embedded.nodes @ basis.T
    return SubsphereRule(
        axis=xi,
        basis=basis,
        nodes=nodes,
        weights=embedded.weights.copy(),
        exact_degree=embedded.exact_degree,
    )


def haar_frames(sampler: GrassmannSampler) -> np.ndarray:
    """Haar-distributed orthonormal frames, shape (count, n, i), deterministic in the seed.

    Each frame is the QR orthonormalization of an n-by-i standard Gaussian
    matrix with the sign convention that makes the factorization unique.
    """
    n, i = sampler.n, sampler.i
    if not 1 <= i <= n - 1:
        raise ValidationError(f"subspace dimension must be in 1..{n - 1}, got {i}")
    rng = np.random.default_rng(sampler.seed)
    gauss = rng.standard_normal((sampler.count, n, i))
    q, r = np.linalg.qr(gauss)
    diag = np.diagonal(r, axis1=1, axis2=2)
    signs = np.where(diag >= 0, 1.0, -1.0)
    return q * signs[:, None, :]


def grassmann_sphere_split_check(
    xi: np.ndarray,
    m: int,
    f,
    samples: int,
    seed: int,
    degree: int = 24,
) -> tuple:
    """Monte-Carlo vs quadrature check of the Grassmannian sub-sphere splitting.

    Returns (lhs, rhs) where lhs is the Haar average over m-subspaces H of
    xi^perp of the integral of f over S^(n-1) cap H, and rhs is
    m kappa_m / ((n-1) kappa_{n-1}) times the integral of f over the sub-sphere.
    The case m = n - 1 has a single subspace and lhs is deterministic.
    """
    xi = as_direction(xi)
    n = xi.shape[0]
    if not 1 <= m <= n - 1:
        raise ValidationError(f"m must be in 1..{n - 1}, got {m}")
    basis = complement_basis(xi)
    inner = _sphere_rule_any(m, degree)
    if m == n - 1:
        points = inner.nodes @ basis.T
        lhs = float(np.dot(inner.weights, f(points)))
    else:
        frames_in_plane = haar_frames(
            GrassmannSampler(n=n - 1, i=m, count=samples, seed=seed)
        )
        values = np.empty(samples)
        for k in range(samples):
            frame = basis @ frames_in_plane[k]
            points = inner.nodes @ frame.T
            values[k] = np.dot(inner.weights, f(points))
        lhs = float(values.mean())

    sub = subsphere_rule(xi, degree)
    factor = sphere_surface(m) / sphere_surface(n - 1)
    rhs = factor * float(np.dot(sub.weights, f(sub.nodes)))
    return lhs, rhs
