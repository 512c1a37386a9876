"""Closed-form boundary models: shapes, hitting probabilities, saturation.

Shapes are placed relative to a probe point that sits at the origin, with
the first coordinate axis pointing at the obstacle. Each shape carries a
vectorized membership test usable directly as a sampling oracle, and for
every shape except the cuboid the exact fraction of a centered probe ball
covered by the shape is available in closed form, which gives the tests
an analytic volume to compare Monte-Carlo estimates against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .special import (
    regularized_incomplete_beta,
    regularized_gamma_q,
    relative_cap_volume,
    std_normal_cdf,
    std_normal_cdf_inv,
    unit_ball_volume,
)

__all__ = [
    "HalfSpace",
    "SphericalCapBoundary",
    "Cylinder",
    "Wedge",
    "Cone",
    "Cuboid",
    "ModelShape",
    "halfspace_hitting_probability",
    "flat_tau",
    "isocap_constant",
    "cuboid_hitting_probability",
    "cylinder_tau_scaling",
    "curvature_lower_bound",
    "integral_curvature_lower_bound",
    "choose_alpha",
    "gaussian_isoperimetric_rhs",
    "ball_overlap_relative_volume",
    "shape_relative_volume",
]


def _check_points(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError(f"points must be an (m, n) array, got shape {pts.shape}")
    return pts


@dataclass(frozen=True)
class HalfSpace:
    """Error region {x : x_1 >= d}, the flat boundary at distance d."""

    d: float

    def __post_init__(self) -> None:
        if self.d < 0.0:
            raise ValueError(f"distance must be nonnegative, got {self.d!r}")

    def contains(self, points: np.ndarray) -> np.ndarray:
        return _check_points(points)[:, 0] >= self.d


@dataclass(frozen=True)
class SphericalCapBoundary:
    """A boundary at distance d bent with radius R, or flat when R is None.

    bend = +1 curves the boundary away from the probe point, making the
    error region the solid ball of radius R whose nearest point is at
    distance d. bend = -1 curves it around the probe point: the error
    region is everything at distance >= R from a center placed behind the
    probe, which requires d <= R so that the probe stays outside.
    """

    d: float
    R: Optional[float] = None
    bend: int = +1

    def __post_init__(self) -> None:
        if self.d < 0.0:
            raise ValueError(f"distance must be nonnegative, got {self.d!r}")
        if self.bend not in (+1, -1):
            raise ValueError(f"bend must be +1 or -1, got {self.bend!r}")
        if self.R is not None:
            if self.R <= 0.0:
                raise ValueError(f"bend radius must be positive, got {self.R!r}")
            if self.bend == -1 and self.d > self.R:
                raise ValueError(
                    f"inward bend needs d <= R, got d={self.d!r}, R={self.R!r}"
                )

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = _check_points(points)
        if self.R is None:
            return pts[:, 0] >= self.d
        center = np.zeros(pts.shape[1])
        if self.bend == +1:
            center[0] = self.d + self.R
            return ((pts - center) ** 2).sum(axis=1) <= self.R * self.R
        center[0] = -(self.R - self.d)
        return ((pts - center) ** 2).sum(axis=1) >= self.R * self.R


@dataclass(frozen=True)
class Cylinder:
    """Solid tube of radius rho and height h entering along the first axis.

    Occupies dist <= x_1 <= dist + h with the transversal coordinates
    inside a (n-1)-ball of radius rho; the axis points at the probe.
    """

    rho: float
    h: float
    dist: float = 0.0

    def __post_init__(self) -> None:
        if self.rho < 0.0 or self.h < 0.0 or self.dist < 0.0:
            raise ValueError(
                f"cylinder lengths must be nonnegative, got rho={self.rho!r}, "
                f"h={self.h!r}, dist={self.dist!r}"
            )

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = _check_points(points)
        axial = pts[:, 0]
        transversal = (pts[:, 1:] ** 2).sum(axis=1)
        return (axial >= self.dist) & (axial <= self.dist + self.h) & (
            transversal <= self.rho * self.rho
        )


@dataclass(frozen=True)
class Wedge:
    """Planar sector of the given opening angle around the first axis."""

    angle: float

    def __post_init__(self) -> None:
        if not 0.0 < self.angle < math.pi:
            raise ValueError(f"opening angle must lie in (0, pi), got {self.angle!r}")

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = _check_points(points)
        planar = np.hypot(pts[:, 0], pts[:, 1])
        return pts[:, 0] >= math.cos(0.5 * self.angle) * planar


@dataclass(frozen=True)
class Cone:
    """Solid circular cone of the given opening angle around the first axis."""

    angle: float

    def __post_init__(self) -> None:
        if not 0.0 < self.angle < math.pi:
            raise ValueError(f"opening angle must lie in (0, pi), got {self.angle!r}")

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = _check_points(points)
        return pts[:, 0] >= math.cos(0.5 * self.angle) * np.linalg.norm(pts, axis=1)


@dataclass(frozen=True)
class Cuboid:
    """Axis-aligned box at gap d along the first axis, centered transversally.

    Occupies d <= x_1 <= d + sides[0] and |x_j| <= sides[j-1]/2 for the
    remaining coordinates, so its ambient dimension equals len(sides).
    """

    d: float
    sides: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "sides", tuple(float(a) for a in self.sides))
        if self.d < 0.0:
            raise ValueError(f"gap must be nonnegative, got {self.d!r}")
        if len(self.sides) < 1:
            raise ValueError("a cuboid needs at least one side length")
        if any(a <= 0.0 for a in self.sides):
            raise ValueError(f"side lengths must be positive, got {self.sides!r}")

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = _check_points(points)
        if pts.shape[1] != len(self.sides):
            raise ValueError(
                f"points have dimension {pts.shape[1]}, cuboid has {len(self.sides)}"
            )
        inside = (pts[:, 0] >= self.d) & (pts[:, 0] <= self.d + self.sides[0])
        for j in range(1, len(self.sides)):
            inside &= np.abs(pts[:, j]) <= 0.5 * self.sides[j]
        return inside


ModelShape = Union[HalfSpace, SphericalCapBoundary, Cylinder, Wedge, Cone, Cuboid]


def halfspace_hitting_probability(d: float, t: float) -> float:
    """Probability 2*Phi(-d/sqrt(t)) of reaching a flat boundary by time t."""
    if d < 0.0:
        raise ValueError(f"distance must be nonnegative, got {d!r}")
    if t <= 0.0:
        raise ValueError(f"time must be positive, got {t!r}")
    return 2.0 * std_normal_cdf(-d / math.sqrt(t))


def flat_tau(n: int, d: float, r: float) -> float:
    """Saturation of a flat boundary: psi^(n/(n-2)) over the cap fraction.

    Uses the half-space hitting probability at the horizon t = r^2/n and
    the exact relative cap volume; equals 2 at d = 0 and grows without
    bound as d approaches r.
    """
    if n < 3:
        raise ValueError(f"saturation needs dimension n >= 3, got {n!r}")
    if not 0.0 <= d < r:
        raise ValueError(f"need 0 <= d < r, got d={d!r}, r={r!r}")
    t = r * r / n
    psi = halfspace_hitting_probability(d, t)
    mu = relative_cap_volume(n, d, r)
    return psi ** (n / (n - 2.0)) / mu


def isocap_constant(n: int) -> float:
    """Dimensional constant of the volume-vs-hitting bound at horizon r^2/n.

    Equals Q(n/2 - 1, n/4)^(-n/(n-2)) with Q the regularized upper
    incomplete gamma; always above 1 and evaluated stably for large n.
    """
    if n < 3:
        raise ValueError(f"constant defined for n >= 3, got {n!r}")
    q = regularized_gamma_q(0.5 * n - 1.0, 0.25 * n)
    return q ** (-n / (n - 2.0))


def cuboid_hitting_probability(
    d: float, sides: Sequence[float], t: float, variant: str = "side"
) -> float:
    """Product-form estimate for a Brownian path reaching an aligned box.

    The slab factor along the approach axis circulates in two argument
    orderings: variant "side" starts the normal-cdf difference at the
    side length a_1, variant "distance" starts it at the gap d; the two
    agree when d equals a_1. The transversal factors and the overall 2^n
    are shared. Values are returned exactly as the product gives them,
    and the Monte-Carlo comparison in the test suite records how each
    ordering tracks sampled paths; neither ordering is clamped to [0, 1].
    """
    if d < 0.0:
        raise ValueError(f"gap must be nonnegative, got {d!r}")
    if t <= 0.0:
        raise ValueError(f"time must be positive, got {t!r}")
    sides = tuple(float(a) for a in sides)
    if len(sides) < 1 or any(a <= 0.0 for a in sides):
        raise ValueError(f"side lengths must be positive, got {sides!r}")
    if variant not in ("side", "distance"):
        raise ValueError(f"variant must be 'side' or 'distance', got {variant!r}")
    rt = math.sqrt(t)
    a1 = sides[0]
    if variant == "side":
        first = std_normal_cdf(-a1 / rt) - std_normal_cdf(-(a1 + d) / rt)
    else:
        first = std_normal_cdf(-d / rt) - std_normal_cdf(-(d + a1) / rt)
    result = 2.0 ** len(sides) * first
    for a in sides[1:]:
        result *= std_normal_cdf(0.5 * a / rt) - std_normal_cdf(-0.5 * a / rt)
    return result


def cylinder_tau_scaling(n: int, lam: float) -> float:
    """Predicted saturation ratio lambda^(-2/(n-2)) when a tube shrinks by lambda."""
    if n < 3:
        raise ValueError(f"scaling defined for n >= 3, got {n!r}")
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"scale must lie in (0, 1], got {lam!r}")
    return lam ** (-2.0 / (n - 2.0))


def curvature_lower_bound(
    tau: float, n: int, d: float, r: float, near_center: bool = False
) -> float:
    """Least maximum curvature compatible with saturation tau at gap d.

    The general form is tau^(1/n)/r * Phi(-d/sqrt(t))^(-1/(n-2)) at the
    horizon t = r^2/n. With near_center the variant
    tau^(1/n) (r-d) / r^(n/(n-1)) * Phi(-d/sqrt(t))^(-n/((n-1)(n-2)))
    applies when the most curved point sits inside the half ball; it
    exceeds the general form only for small d, and both assume the
    curvature is high enough for an inscribed-ball volume argument.
    """
    if tau <= 0.0:
        raise ValueError(f"saturation must be positive, got {tau!r}")
    if n < 3:
        raise ValueError(f"bound defined for n >= 3, got {n!r}")
    if not 0.0 <= d < r:
        raise ValueError(f"need 0 <= d < r, got d={d!r}, r={r!r}")
    t = r * r / n
    phi = std_normal_cdf(-d / math.sqrt(t))
    if near_center:
        return tau ** (1.0 / n) * (r - d) / r ** (n / (n - 1.0)) * phi ** (
            -n / ((n - 1.0) * (n - 2.0))
        )
    return tau ** (1.0 / n) / r * phi ** (-1.0 / (n - 2.0))


def integral_curvature_lower_bound(tau_H: float, n: int, d: float, r: float) -> float:
    """Lower bound on total line curvature: V_n(d,r) minus a heat deficit.

    Returns spherical_cap_volume(n, d, r) - 2 w_n r^n Phi(-d/sqrt(t))/tau_H
    with t = r^2/n; approaches the cap volume as tau_H grows.
    """
    if tau_H <= 0.0:
        raise ValueError(f"saturation must be positive, got {tau_H!r}")
    if n < 1:
        raise ValueError(f"dimension must be at least 1, got {n!r}")
    if not 0.0 <= d <= r:
        raise ValueError(f"need 0 <= d <= r, got d={d!r}, r={r!r}")
    t = r * r / n
    cap = relative_cap_volume(n, d, r) * unit_ball_volume(n) * r**n
    ball = unit_ball_volume(n) * r**n
    return cap - 2.0 * ball * std_normal_cdf(-d / math.sqrt(t)) / tau_H


def choose_alpha(
    epsilon: float,
    d: float,
    frobenius_norm: float,
    input_norm: float,
    c_n_time_factor: float,
) -> float:
    """Distortion budget alpha whose induced boundary shift matches epsilon.

    Solves 2*(Phi(-(d - delta)/sqrt(t))/Phi(-d/sqrt(t)) - 1) = epsilon
    for delta in [0, d) by bisection at the horizon t = c_n_time_factor*d^2,
    then scales: alpha = delta/(frobenius_norm * input_norm). Fails loudly
    when even delta -> d cannot reach the requested epsilon.
    """
    if epsilon <= 0.0:
        raise ValueError(f"relative deviation must be positive, got {epsilon!r}")
    if d <= 0.0:
        raise ValueError(f"boundary distance must be positive, got {d!r}")
    if frobenius_norm <= 0.0 or input_norm <= 0.0:
        raise ValueError("norms must be positive")
    if c_n_time_factor <= 0.0:
        raise ValueError(f"time factor must be positive, got {c_n_time_factor!r}")
    rt = math.sqrt(c_n_time_factor) * d
    base = std_normal_cdf(-d / rt)

    def gap(delta: float) -> float:
        return 2.0 * (std_normal_cdf(-(d - delta) / rt) / base - 1.0) - epsilon

    limit = gap(d)
    if limit <= 0.0:
        raise ValueError(
            f"no boundary shift in [0, d) reaches relative deviation {epsilon!r}; "
            f"the largest attainable value is {limit + epsilon:.6g}"
        )
    lo, hi = 0.0, d
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * d:
            break
    delta = 0.5 * (lo + hi)
    return delta / (frobenius_norm * input_norm)


def gaussian_isoperimetric_rhs(mu: float, r: float, n: int) -> float:
    """Median-distance ceiling -r*Phi^-1(mu)/sqrt(n), zero once mu >= 1/2."""
    if not 0.0 < mu < 1.0:
        raise ValueError(f"relative volume must lie in (0, 1), got {mu!r}")
    if r <= 0.0:
        raise ValueError(f"radius must be positive, got {r!r}")
    if n < 1:
        raise ValueError(f"dimension must be at least 1, got {n!r}")
    if mu >= 0.5:
        return 0.0
    return -r * std_normal_cdf_inv(mu) / math.sqrt(n)


def _signed_cap_fraction(n: int, h: float, r: float) -> float:
    # fraction of B(0, r) beyond the plane x = h, for any h
    if h >= r:
        return 0.0
    if h <= -r:
        return 1.0
    if h >= 0.0:
        return relative_cap_volume(n, h, r)
    return 1.0 - relative_cap_volume(n, -h, r)


def ball_overlap_relative_volume(n: int, r1: float, r2: float, distance: float) -> float:
    """Volume of B(0,r1) intersect B(c,r2) at center distance, over Vol(B(0,r1)).

    Handles the disjoint and nested cases exactly; otherwise splits the
    lens at the radical plane into two spherical caps.
    """
    if n < 1:
        raise ValueError(f"dimension must be at least 1, got {n!r}")
    if r1 <= 0.0 or r2 <= 0.0:
        raise ValueError(f"radii must be positive, got r1={r1!r}, r2={r2!r}")
    if distance < 0.0:
        raise ValueError(f"center distance must be nonnegative, got {distance!r}")
    if distance >= r1 + r2:
        return 0.0
    if distance <= abs(r1 - r2):
        return 1.0 if r1 <= r2 else (r2 / r1) ** n
    split = (distance * distance - r2 * r2 + r1 * r1) / (2.0 * distance)
    frac1 = _signed_cap_fraction(n, split, r1)
    frac2 = _signed_cap_fraction(n, distance - split, r2)
    return frac1 + frac2 * (r2 / r1) ** n


def _even_symmetric_slab_integral(n: int, r: float, rho: float, x: float) -> float:
    # integral over [0, x] of min(rho, sqrt(r^2 - u^2))^(n-1), for 0 <= x <= r
    x_c = math.sqrt(r * r - rho * rho) if rho < r else 0.0
    log_b = math.lgamma(0.5) + math.lgamma(0.5 * (n + 1)) - math.lgamma(0.5 * n + 1.0)

    def tail(b: float) -> float:
        # integral over [0, b] of (r^2 - u^2)^((n-1)/2)
        z = min(b / r, 1.0)
        return r**n * 0.5 * math.exp(log_b) * regularized_incomplete_beta(
            0.5, 0.5 * (n + 1), z * z
        )

    if x <= x_c:
        return rho ** (n - 1) * x
    return rho ** (n - 1) * x_c + tail(x) - tail(x_c)


def shape_relative_volume(shape: ModelShape, n: int, r: float) -> float:
    """Exact fraction of the probe ball B(0, r) covered by the shape.

    Closed forms exist for every shape except the cuboid, which has no
    simple ball-box overlap expression and must be estimated by sampling.
    """
    if r <= 0.0:
        raise ValueError(f"probe radius must be positive, got {r!r}")
    if n < 1:
        raise ValueError(f"dimension must be at least 1, got {n!r}")
    if isinstance(shape, HalfSpace):
        return _signed_cap_fraction(n, shape.d, r)
    if isinstance(shape, SphericalCapBoundary):
        if shape.R is None:
            return _signed_cap_fraction(n, shape.d, r)
        center_dist = shape.d + shape.R if shape.bend == +1 else shape.R - shape.d
        overlap = ball_overlap_relative_volume(n, r, shape.R, center_dist)
        return overlap if shape.bend == +1 else 1.0 - overlap
    if isinstance(shape, Cylinder):
        if n < 2:
            raise ValueError("a cylinder needs ambient dimension at least 2")
        lo = max(shape.dist, -r)
        hi = min(shape.dist + shape.h, r)
        if lo >= hi or shape.rho == 0.0:
            return 0.0
        log_slice = 0.5 * (n - 1) * math.log(math.pi) - math.lgamma(0.5 * (n - 1) + 1.0)
        f_hi = _even_symmetric_slab_integral(n, r, shape.rho, abs(hi))
        f_lo = _even_symmetric_slab_integral(n, r, shape.rho, abs(lo))
        signed = (f_hi if hi >= 0 else -f_hi) - (f_lo if lo >= 0 else -f_lo)
        return math.exp(log_slice) * signed / (unit_ball_volume(n) * r**n)
    if isinstance(shape, Wedge):
        if n < 2:
            raise ValueError("a wedge needs ambient dimension at least 2")
        return shape.angle / (2.0 * math.pi)
    if isinstance(shape, Cone):
        if n < 2:
            raise ValueError("a cone needs ambient dimension at least 2")
        half = 0.5 * shape.angle
        s = math.sin(half)
        return 0.5 * regularized_incomplete_beta(0.5 * (n - 1), 0.5, s * s)
    raise ValueError(f"no closed-form relative volume for {type(shape).__name__}")
