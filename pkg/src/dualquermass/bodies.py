"""Star bodies with the origin in the interior: gauges, radial functions, radial sums.

Supported families are ellipsoids (shape matrix + center, so off-center radial
evaluations stay closed form), lp-balls, bounded polytopes in halfspace form,
and translates of these.  Translations are absorbed into the family parameters
at construction time.  All evaluation operations are pure, accept arrays of
directions, and are safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionOutOfRange,
    NonStarShaped,
    OriginNotInterior,
    PointNotInterior,
    ValidationError,
)
from .quadrature import _sphere_rule_any, complement_basis

MIN_DIM = 2
MAX_DIM = 8

_ROOT_REL_TOL = 1e-12


# ---------------------------------------------------------------------------
# Body specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ellipsoid:
    """Ellipsoid {x : (x - center)^T shape (x - center) <= 1}."""

    shape: tuple
    center: tuple


@dataclass(frozen=True)
class LpBall:
    """lp-ball {x : sum(|(x_i - center_i) / semi_axes_i|^p) <= 1}, p >= 1."""

    p: float
    semi_axes: tuple
    center: tuple


@dataclass(frozen=True)
class Polytope:
    """Bounded polytope {x : <normals_i, x> <= offsets_i} with all offsets > 0."""

    normals: tuple
    offsets: tuple


@dataclass(frozen=True)
class Translate:
    """The body ``inner`` shifted by ``shift`` (membership: x - shift in inner)."""

    inner: object
    shift: tuple


@dataclass(frozen=True)
class RadialSum:
    """Star body whose radial function is a positive combination of the parts'."""

    weights: tuple
    parts: tuple


def ellipsoid_spec(shape, center=None) -> Ellipsoid:
    shape = np.asarray(shape, dtype=float)
    n = shape.shape[0]
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    return Ellipsoid(shape=_as_nested_tuple(shape), center=tuple(map(float, c)))


def lp_ball_spec(p, semi_axes, center=None) -> LpBall:
    semi_axes = np.asarray(semi_axes, dtype=float)
    n = semi_axes.shape[0]
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    return LpBall(p=float(p), semi_axes=tuple(map(float, semi_axes)), center=tuple(map(float, c)))


def polytope_spec(normals, offsets) -> Polytope:
    return Polytope(
        normals=_as_nested_tuple(np.asarray(normals, dtype=float)),
        offsets=tuple(float(b) for b in np.asarray(offsets, dtype=float)),
    )


def _as_nested_tuple(arr: np.ndarray) -> tuple:
    return tuple(tuple(float(v) for v in row) for row in arr)


def _shift_spec(spec, shift: np.ndarray):
    """Spec of the shifted body spec + shift, with Translate nodes flattened."""
    if isinstance(spec, Ellipsoid):
        return Ellipsoid(spec.shape, tuple(np.asarray(spec.center) + shift))
    if isinstance(spec, LpBall):
        return LpBall(spec.p, spec.semi_axes, tuple(np.asarray(spec.center) + shift))
    if isinstance(spec, Polytope):
        normals = np.asarray(spec.normals)
        offsets = np.asarray(spec.offsets) + normals @ shift
        return Polytope(spec.normals, tuple(float(b) for b in offsets))
    if isinstance(spec, Translate):
        return _shift_spec(spec.inner, shift + np.asarray(spec.shift, dtype=float))
    if isinstance(spec, RadialSum):
        raise ValidationError("radial-sum bodies do not support translation")
    raise ValidationError(f"unknown body spec {type(spec).__name__}")


def _normalize_spec(spec):
    if isinstance(spec, Translate):
        return _shift_spec(spec.inner, np.asarray(spec.shift, dtype=float))
    return spec


def _spec_dim(spec) -> int:
    if isinstance(spec, Ellipsoid):
        return len(spec.center)
    if isinstance(spec, LpBall):
        return len(spec.semi_axes)
    if isinstance(spec, Polytope):
        return len(spec.normals[0])
    if isinstance(spec, RadialSum):
        return _spec_dim(spec.parts[0])
    if isinstance(spec, Translate):
        return _spec_dim(spec.inner)
    raise ValidationError(f"unknown body spec {type(spec).__name__}")


# ---------------------------------------------------------------------------
# Evaluators
# ---------------------------------------------------------------------------


class _QuadraticEval:
    """Closed-form gauge/radial machinery for quadratic gauges (ellipsoids)."""

    def __init__(self, shape: np.ndarray, center: np.ndarray):
        self.shape = shape
        self.center = center
        # origin interior <=> center^T A center < 1
        self._alpha = float(center @ shape @ center) - 1.0
        if self._alpha >= 0.0:
            raise OriginNotInterior("origin is not interior to the ellipsoid")

    def gauge(self, x):
        x = np.asarray(x, dtype=float)
        ax = x @ self.shape
        xax = np.einsum("...i,...i->...", ax, x)
        xac = ax @ self.center
        disc = xac * xac - self._alpha * xax
        return (xac - np.sqrt(np.maximum(disc, 0.0))) / self._alpha

    def radial_from_point(self, p, dirs):
        # p broadcasts against dirs over leading axes
        y = np.asarray(p, dtype=float) - self.center
        dirs = np.asarray(dirs, dtype=float)
        ad = dirs @ self.shape
        a2 = np.sum(ad * dirs, axis=-1)
        a1 = 2.0 * np.sum(ad * y, axis=-1)
        a0 = np.sum((y @ self.shape) * y, axis=-1) - 1.0
        disc = a1 * a1 - 4.0 * a2 * a0
        return (-a1 + np.sqrt(np.maximum(disc, 0.0))) / (2.0 * a2)


class _PolytopeEval:
    def __init__(self, normals: np.ndarray, offsets: np.ndarray):
        if np.any(offsets <= 0.0):
            raise OriginNotInterior("polytope offsets must be positive")
        self.normals = normals
        self.offsets = offsets

    def gauge(self, x):
        x = np.asarray(x, dtype=float)
        ratios = (x @ self.normals.T) / self.offsets
        return np.maximum(ratios.max(axis=-1), 0.0)

    def radial_from_point(self, p, dirs):
        dirs = np.asarray(dirs, dtype=float)
        denom = dirs @ self.normals.T
        numer = self.offsets - np.asarray(p, dtype=float) @ self.normals.T
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(denom > 1e-300, numer / denom, np.inf)
        r = ratios.min(axis=-1)
        if np.any(~np.isfinite(r)):
            raise NonStarShaped("ray never exits the polytope; body is unbounded")
        return r


class _LpEval:
    def __init__(self, p: float, semi_axes: np.ndarray, center: np.ndarray):
        self.p = p
        self.semi_axes = semi_axes
        self.center = center
        if self._centered_gauge(-center) >= 1.0:
            raise OriginNotInterior("origin is not interior to the lp-ball")

    def _centered_gauge(self, y):
        scaled = np.abs(np.asarray(y, dtype=float) / self.semi_axes)
        return np.power(np.sum(np.power(scaled, self.p), axis=-1), 1.0 / self.p)

    def gauge(self, x):
        x = np.asarray(x, dtype=float)
        if not self.center.any():
            return self._centered_gauge(x)
        return _gauge_via_radial(self, x)

    def radial_from_point(self, p, dirs):
        dirs = np.asarray(dirs, dtype=float)
        y0 = np.asarray(p, dtype=float) - self.center

        # The height function r -> sum |(y0 + r d)/a|^p - 1 is convex with a
        # single positive crossing, so Newton from the closed-form p = 2 start
        # converges monotonically after the first step, from either side.
        scaled_d = dirs / self.semi_axes
        scaled_y = y0 / self.semi_axes
        a2 = np.sum(scaled_d * scaled_d, axis=-1)
        a1 = 2.0 * np.sum(scaled_d * scaled_y, axis=-1)
        a0 = np.sum(scaled_y * scaled_y, axis=-1) - 1.0
        r = (-a1 + np.sqrt(np.maximum(a1 * a1 - 4.0 * a2 * a0, 0.0))) / (2.0 * a2)

        for _ in range(40):
            u = scaled_y + r[..., None] * scaled_d
            au = np.abs(u)
            g = np.sum(au**self.p, axis=-1) - 1.0
            dg = self.p * np.sum(np.sign(u) * au ** (self.p - 1.0) * scaled_d, axis=-1)
            step = np.where(np.abs(dg) > 1e-300, g / dg, 0.0)
            r = r - step
            if np.max(np.abs(step)) <= 1e-14 * max(1.0, float(np.max(r))):
                break
        return r


class _SumEval:
    def __init__(self, weights, evals):
        self.weights = weights
        self.evals = evals

    def radial(self, dirs):
        out = 0.0
        for w, ev in zip(self.weights, self.evals):
            out = out + w * _radial_of(ev, dirs)
        return out

    def gauge(self, x):
        return _gauge_via_radial(self, x)

    def radial_from_point(self, p, dirs):
        dirs = np.asarray(dirs, dtype=float)
        p = np.asarray(p, dtype=float)
        if not p.any():
            return self.radial(dirs)

        def height(r):
            return self.gauge(p + r[..., None] * dirs) - 1.0

        n = dirs.shape[-1]
        hi0 = float(np.max(np.linalg.norm(np.atleast_2d(p), axis=-1)))
        hi0 += float(np.max(self.radial(np.eye(n)))) * 4.0
        shape = np.broadcast_shapes(p.shape[:-1], dirs.shape[:-1])
        return _bracketed_root(height, shape, hi0)


def _radial_of(ev, dirs):
    if isinstance(ev, _SumEval):
        return ev.radial(dirs)
    return ev.radial_from_point(np.zeros(np.asarray(dirs).shape[-1]), dirs)


def _gauge_via_radial(ev, x):
    x = np.asarray(x, dtype=float)
    pts = x.reshape(-1, x.shape[-1])
    norms = np.linalg.norm(pts, axis=-1)
    out = np.zeros(len(pts))
    mask = norms > 0.0
    if np.any(mask):
        dirs = pts[mask] / norms[mask][:, None]
        out[mask] = norms[mask] / _radial_of(ev, dirs)
    return out.reshape(x.shape[:-1])


def _bracketed_root(height, shape, hi0, iters=60):
    """Vectorized bisection for the boundary crossing of a monotone-crossing gauge.

    ``height`` maps an array of radii (shape ``shape``) to gauge(p + r dir) - 1.
    The bracket is expanded by doubling until the height is positive everywhere.
    """
    lo = np.zeros(shape)
    hi = np.full(shape, float(hi0))
    for _ in range(64):
        h = height(hi)
        if np.all(h > 0.0):
            break
        hi = np.where(h > 0.0, hi, hi * 2.0)
    else:
        raise NonStarShaped("failed to bracket the boundary along some ray")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        inside = height(mid) < 0.0
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Body
# ---------------------------------------------------------------------------


class Body:
    """Immutable star body; all evaluations are pure and vectorized over directions."""

    def __init__(self, spec, bound_degree: int = 14):
        spec = _normalize_spec(spec)
        n = _spec_dim(spec)
        if not MIN_DIM <= n <= MAX_DIM:
            raise DimensionOutOfRange(f"body dimension must be in {MIN_DIM}..{MAX_DIM}, got {n}")
        self.spec = spec
        self.n = n
        self._eval = _build_eval(spec)
        self._min_radial, self._max_radial = _radial_bounds(self, bound_degree)

    @property
    def min_radial_bound(self) -> float:
        return self._min_radial

    @property
    def max_radial_bound(self) -> float:
        return self._max_radial

    def gauge(self, x):
        """Minkowski functional; 1-homogeneous, gauge(x) <= 1 iff x in the body."""
        out = self._eval.gauge(np.asarray(x, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    def radial(self, dirs):
        """Radial function rho(theta) = 1/gauge(theta) for unit directions."""
        out = _radial_of(self._eval, np.asarray(dirs, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    def radial_from_point(self, p, dirs):
        """Distance from the interior point p to the boundary along each direction.

        ``p`` may carry leading axes that broadcast against those of ``dirs``.
        """
        p = np.asarray(p, dtype=float)
        if np.any(np.asarray(self.gauge(p)) >= 1.0):
            raise PointNotInterior("base point is not strictly interior")
        out = self._eval.radial_from_point(p, np.asarray(dirs, dtype=float))
        return float(out) if np.ndim(out) == 0 else out


def _build_eval(spec):
    if isinstance(spec, Ellipsoid):
        shape = np.asarray(spec.shape, dtype=float)
        if shape.ndim != 2 or shape.shape[0] != shape.shape[1]:
            raise ValidationError("ellipsoid shape matrix must be square")
        if np.max(np.abs(shape - shape.T)) > 1e-12 * max(np.max(np.abs(shape)), 1.0):
            raise ValidationError("ellipsoid shape matrix must be symmetric")
        shape = 0.5 * (shape + shape.T)
        if np.min(np.linalg.eigvalsh(shape)) <= 0.0:
            raise ValidationError("ellipsoid shape matrix must be positive definite")
        return _QuadraticEval(shape, np.asarray(spec.center, dtype=float))
    if isinstance(spec, LpBall):
        if spec.p < 1.0:
            raise ValidationError(f"lp exponent must be >= 1, got {spec.p}")
        axes = np.asarray(spec.semi_axes, dtype=float)
        if np.any(axes <= 0.0):
            raise ValidationError("lp-ball semi-axes must be positive")
        center = np.asarray(spec.center, dtype=float)
        if spec.p == 2.0:
            return _QuadraticEval(np.diag(1.0 / axes**2), center)
        return _LpEval(spec.p, axes, center)
    if isinstance(spec, Polytope):
        normals = np.asarray(spec.normals, dtype=float)
        offsets = np.asarray(spec.offsets, dtype=float)
        if normals.ndim != 2 or normals.shape[0] != offsets.shape[0]:
            raise ValidationError("polytope normals/offsets shapes do not match")
        return _PolytopeEval(normals, offsets)
    if isinstance(spec, RadialSum):
        return _SumEval(list(spec.weights), [_build_eval(p) for p in spec.parts])
    raise ValidationError(f"unknown body spec {type(spec).__name__}")


def make_body(spec, bound_degree: int = 14) -> Body:
    """Validate a body spec and construct the evaluatable body."""
    return Body(spec, bound_degree=bound_degree)


def _seed_directions(n: int, degree: int) -> np.ndarray:
    seeds = [np.eye(n), -np.eye(n)]
    diag = np.ones(n) / math.sqrt(n)
    seeds.append(diag[None, :])
    seeds.append(-diag[None, :])
    seeds.append(_sphere_rule_any(n, degree).nodes)
    return np.vstack(seeds)


def _spherical_refine(radial_fn, theta0: np.ndarray, maximize: bool, steps: int = 50):
    """Fixed-budget projected gradient descent/ascent of the radial function."""
    theta = theta0.copy()
    sign = -1.0 if maximize else 1.0
    best = float(radial_fn(theta))
    step_size = 0.1
    h = 1e-6
    for _ in range(steps):
        basis = complement_basis(theta)
        grad = np.zeros(theta.shape[0] - 1)
        for j in range(basis.shape[1]):
            plus = theta + h * basis[:, j]
            minus = theta - h * basis[:, j]
            plus /= np.linalg.norm(plus)
            minus /= np.linalg.norm(minus)
            grad[j] = (float(radial_fn(plus)) - float(radial_fn(minus))) / (2.0 * h)
        move = basis @ grad
        norm = np.linalg.norm(move)
        if norm < 1e-14:
            break
        cand = theta - sign * step_size * move / norm * min(norm, 1.0)
        cand /= np.linalg.norm(cand)
        val = float(radial_fn(cand))
        improved = val > best if maximize else val < best
        if improved:
            theta, best = cand, val
            step_size = min(step_size * 1.2, 0.5)
        else:
            step_size *= 0.5
            if step_size < 1e-12:
                break
    return best, theta


def _radial_bounds(body: Body, degree: int):
    dirs = _seed_directions(body.n, degree)
    values = body.radial(dirs)
    if np.any(~np.isfinite(values)) or np.any(values <= 0.0):
        raise NonStarShaped("radial function is not positive and finite on the sphere")
    order = np.argsort(values)
    lo = float(values[order[0]])
    hi = float(values[order[-1]])
    for idx in order[:3]:
        val, _ = _spherical_refine(body.radial, dirs[idx].copy(), maximize=False)
        lo = min(lo, val)
    for idx in order[-3:]:
        val, _ = _spherical_refine(body.radial, dirs[idx].copy(), maximize=True)
        hi = max(hi, val)
    return lo, hi


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------


def gauge(body: Body, x):
    return body.gauge(x)


def radial(body: Body, theta):
    return body.radial(theta)


def radial_from_point(body: Body, p, theta):
    return body.radial_from_point(p, theta)


def translate(body: Body, v) -> Body:
    """Body K - v; requires v strictly interior so the origin stays interior."""
    v = np.asarray(v, dtype=float)
    if body.gauge(v) >= 1.0:
        raise OriginNotInterior("translation vector must be strictly interior")
    return make_body(_shift_spec(body.spec, -v))


def radial_sum(k: Body, l: Body, alpha: float, beta: float) -> Body:
    """Star body with radial function alpha * rho_K + beta * rho_L."""
    if alpha < 0.0 or beta < 0.0 or alpha + beta <= 0.0:
        raise ValidationError("radial-sum weights must be nonnegative and not both zero")
    if k.n != l.n:
        raise ValidationError("radial-sum bodies must share a dimension")
    return make_body(RadialSum(weights=(float(alpha), float(beta)), parts=(k.spec, l.spec)))


def min_radial(body: Body, degree: int = 14) -> float:
    """Lower bound on the radial function via seeded descent over quadrature nodes."""
    if degree < 2:
        raise ValidationError(f"degree must be >= 2, got {degree}")
    lo, _ = _radial_bounds(body, degree)
    return lo


def max_radial(body: Body, degree: int = 14) -> float:
    if degree < 2:
        raise ValidationError(f"degree must be >= 2, got {degree}")
    _, hi = _radial_bounds(body, degree)
    return hi


# ---------------------------------------------------------------------------
# JSON body-spec schema (consumed by the CLI)
# ---------------------------------------------------------------------------


def spec_from_json(data) -> object:
    """Parse the JSON body-spec schema into a spec object."""
    if not isinstance(data, dict) or "type" not in data:
        raise ValidationError("body spec must be an object with a 'type' field")
    kind = data["type"]
    try:
        if kind == "ellipsoid":
            return ellipsoid_spec(data["shape"], data.get("center"))
        if kind == "lp_ball":
            return lp_ball_spec(data["p"], data["semi_axes"], data.get("center"))
        if kind == "polytope":
            halfspaces = data["halfspaces"]
            normals = [h["normal"] for h in halfspaces]
            offsets = [h["offset"] for h in halfspaces]
            return polytope_spec(normals, offsets)
        if kind == "translate":
            return Translate(
                inner=spec_from_json(data["inner"]),
                shift=tuple(float(v) for v in data["shift"]),
            )
    except (KeyError, TypeError, IndexError) as exc:
        raise ValidationError(f"malformed body spec: {exc}") from exc
    raise ValidationError(f"unknown body type {kind!r}")


def spec_to_json(spec) -> dict:
    spec = _normalize_spec(spec)
    if isinstance(spec, Ellipsoid):
        return {
            "type": "ellipsoid",
            "shape": [list(row) for row in spec.shape],
            "center": list(spec.center),
        }
    if isinstance(spec, LpBall):
        return {
            "type": "lp_ball",
            "p": spec.p,
            "semi_axes": list(spec.semi_axes),
            "center": list(spec.center),
        }
    if isinstance(spec, Polytope):
        return {
            "type": "polytope",
            "halfspaces": [
                {"normal": list(nrm), "offset": off}
                for nrm, off in zip(spec.normals, spec.offsets)
            ],
        }
    raise ValidationError(f"spec {type(spec).__name__} has no JSON form")
