"""Planar sets described by indicator oracles plus far-field models.

A PlanarSet is a deterministic inside/outside oracle on R^2 together with a
model of how the set looks far away.  The far-field model supplies two
things the principal-value quadrature needs: a radius beyond which the model
is exact (or quantifiably accurate), and the analytic value of the remaining
tail integral

    int_R^inf A(r) r^(-(1+s)) dr,   A(r) = signed angular measure
                                           (outside minus inside)

of circles of radius r around the evaluation point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Tuple

import numpy as np

from .kernels import FractionalOrder
from .quadrature import gauss_jacobi_unit

__all__ = [
    "PlanarSet",
    "FarField",
    "HalfplaneFar",
    "GraphLinesFar",
    "BoundedFar",
    "PowerTailFar",
    "halfplane_set",
    "disk_set",
    "subgraph_set",
    "cone_set",
    "corner_barrier_set",
    "parabola_set",
    "slab_complement_set",
]

_N_TAIL = 32


class FarField:
    """Far-field classification of a planar set around an evaluation point."""

    def pure_radius(self, point) -> float:
        """Radius beyond which the tail model applies at this point."""
        raise NotImplementedError

    def tail_integral(self, point, R: float, order: FractionalOrder) -> Tuple[float, float]:
        """(value, error bound) of int_R^inf A(r) r^(-(1+s)) dr."""
        raise NotImplementedError


def _arcsin_tail(d: float, R: float, s: float) -> float:
    # int_R^inf arcsin(d/r) r^(-(1+s)) dr = R^(-s) int_0^1 arcsin(d v / R) v^(s-1) dv
    v, w = gauss_jacobi_unit(_N_TAIL, s)
    return float(R ** (-s) * np.sum(w * np.arcsin(np.clip(d * v / R, -1.0, 1.0))))


@dataclass(frozen=True)
class HalfplaneFar(FarField):
    """Set is exactly the halfplane {y : n . y < c} beyond every radius."""

    normal: Tuple[float, float]
    offset: float

    def pure_radius(self, point) -> float:
        return 1.0

    def tail_integral(self, point, R, order):
        n = np.asarray(self.normal, dtype=float)
        d_perp = (float(np.dot(n, point)) - self.offset) / float(np.hypot(*n))
        # A(r) = 4*arcsin(d_perp / r): positive when the point sits outside.
        return 4.0 * _arcsin_tail(d_perp, R, order.s), 0.0


@dataclass(frozen=True)
class GraphLinesFar(FarField):
    """Subgraph whose boundary follows straight lines outside |y1| > inner_radius.

    Left line a_l*y1 + b_l, right line a_r*y1 + b_r; in between the profile
    is bounded by |u| <= profile_bound.
    """

    slope_left: float
    intercept_left: float
    slope_right: float
    intercept_right: float
    inner_radius: float
    profile_bound: float

    def pure_radius(self, point) -> float:
        x, y = point
        horiz = self.inner_radius + abs(x)
        vert = self.profile_bound + abs(y) + abs(self.intercept_left) + abs(self.intercept_right)
        slope = max(abs(self.slope_left), abs(self.slope_right))
        return 2.0 * max(1.0, float(np.hypot(horiz, vert)), 2.0 * slope * max(1.0, horiz))

    def tail_integral(self, point, R, order):
        x, y = point
        s = order.s
        phi_r = np.arctan(self.slope_right)
        phi_l = np.arctan(self.slope_left)
        value = -2.0 * (phi_r - phi_l) * R ** (-s) / s
        for a, b in ((self.slope_left, self.intercept_left), (self.slope_right, self.intercept_right)):
            d = (a * x + b - y) / np.sqrt(1.0 + a * a)
            value += -2.0 * _arcsin_tail(d, R, s)
        # neglected: middle-strip mismatch and crossing curvature, both O(R^-(1+s))
        scale = self.profile_bound + abs(self.intercept_left) + abs(self.intercept_right) + 1.0
        err = 2.0 * scale * R ** (-(1.0 + s)) / (1.0 + s)
        return float(value), float(err)


@dataclass(frozen=True)
class BoundedFar(FarField):
    """Set (sign=+1) or complement (sign=-1) contained in ball(center, radius)."""

    center: Tuple[float, float]
    radius: float
    sign: int = +1

    def pure_radius(self, point) -> float:
        return float(np.hypot(point[0] - self.center[0], point[1] - self.center[1]) + self.radius) * 1.000001

    def tail_integral(self, point, R, order):
        s = order.s
        return self.sign * 2.0 * np.pi * R ** (-s) / s, 0.0


@dataclass(frozen=True)
class PowerTailFar(FarField):
    """A(r) modelled as a short power series sum(coef * r^(-alpha)).

    terms: sequence of (alpha, coef) with alpha >= 0.  err_coef/err_alpha
    bound the first neglected term.
    """

    terms: Tuple[Tuple[float, float], ...]
    valid_radius: float
    err_coef: float
    err_alpha: float

    def pure_radius(self, point) -> float:
        return float(self.valid_radius + 2.0 * np.hypot(*point))

    def tail_integral(self, point, R, order):
        s = order.s
        value = sum(c * R ** (-(s + alpha)) / (s + alpha) for alpha, c in self.terms)
        err = abs(self.err_coef) * R ** (-(s + self.err_alpha)) / (s + self.err_alpha)
        return float(value), float(err)


@dataclass(frozen=True)
class PlanarSet:
    """Indicator oracle (vectorized: (n,2) array -> bool array) + far field."""

    indicator: Callable[[np.ndarray], np.ndarray]
    far_field: FarField
    description: str = "custom"

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.asarray(self.indicator(pts), dtype=bool)
        if out.shape != (pts.shape[0],):
            raise ValueError("indicator must return one bool per point")
        return out

    def complement(self) -> "PlanarSet":
        ff = self.far_field
        if isinstance(ff, BoundedFar):
            far = BoundedFar(ff.center, ff.radius, -ff.sign)
        elif isinstance(ff, PowerTailFar):
            far = PowerTailFar(tuple((a, -c) for a, c in ff.terms), ff.valid_radius, ff.err_coef, ff.err_alpha)
        elif isinstance(ff, HalfplaneFar):
            far = _NegatedFar(ff)
        else:
            far = _NegatedFar(ff)
        ind = self.indicator
        return PlanarSet(lambda p: ~np.asarray(ind(p), dtype=bool), far, f"complement-of-{self.description}")


@dataclass(frozen=True)
class _NegatedFar(FarField):
    inner: FarField

    def pure_radius(self, point):
        return self.inner.pure_radius(point)

    def tail_integral(self, point, R, order):
        v, e = self.inner.tail_integral(point, R, order)
        return -v, e


def halfplane_set(normal=(0.0, 1.0), offset=0.0) -> PlanarSet:
    """{y : n . y < c}; with the default normal, the lower halfplane {y2 < 0}."""
    n = np.asarray(normal, dtype=float)
    c = float(offset)

    def ind(p):
        return p @ n < c

    return PlanarSet(ind, HalfplaneFar((n[0], n[1]), c), "halfplane")


def disk_set(center=(0.0, 0.0), radius=1.0, inside=True) -> PlanarSet:
    cx, cy = float(center[0]), float(center[1])
    r2 = float(radius) ** 2

    def ind(p):
        return (p[:, 0] - cx) ** 2 + (p[:, 1] - cy) ** 2 < r2

    s = PlanarSet(ind, BoundedFar((cx, cy), float(radius), +1), "disk")
    return s if inside else s.complement()


def subgraph_set(profile, far: FarField = None, *, inner_radius=2.0, profile_bound=1.0, description="subgraph-of") -> PlanarSet:
    """Subgraph {y2 < profile(y1)} of a vectorized profile function."""

    def ind(p):
        return p[:, 1] < profile(p[:, 0])

    if far is None:
        far = GraphLinesFar(0.0, 0.0, 0.0, 0.0, inner_radius, profile_bound)
    return PlanarSet(ind, far, description)


def cone_set(b: float) -> PlanarSet:
    """{y2 < 0 for y1 < 0} joined with {y2 < b*y1 for y1 >= 0}; vertex at the origin."""

    def profile(x):
        return np.where(x < 0.0, 0.0, b * x)

    return subgraph_set(profile, GraphLinesFar(0.0, 0.0, b, 0.0, 0.0, 0.0), description="cone")


def corner_barrier_set(delta: float, slope: float, bend_x: float, cap: str = "flat") -> PlanarSet:
    """Corner-like barrier: flat at -delta for y1 <= 0, ramp of given slope on
    (0, bend_x), capped beyond.  With delta = 0 the concave corner sits at the
    origin.  cap: "flat" keeps the height slope*bend_x for y1 > bend_x."""
    if slope <= 0:
        raise ValueError("slope must be positive")
    if bend_x <= 0:
        raise ValueError("bend_x must be positive")
    if cap != "flat":
        raise ValueError(f"unsupported cap shape {cap!r}")
    top = slope * bend_x

    def profile(x):
        return np.where(x <= 0.0, -delta, np.where(x <= bend_x, slope * x, top))

    far = GraphLinesFar(0.0, -delta, 0.0, top, bend_x, top + delta)
    return subgraph_set(profile, far, description="corner-barrier")


def parabola_set(coefficient: float = 1.0) -> PlanarSet:
    """Subgraph {y2 < a*y1^2}.  A(r) -> -2*pi + 4/sqrt(a r) far away."""
    a = float(coefficient)
    if a <= 0:
        raise ValueError("coefficient must be positive")

    def profile(x):
        return a * x * x

    far = PowerTailFar(
        terms=((0.0, -2.0 * np.pi), (0.5, 4.0 / np.sqrt(a))),
        valid_radius=max(16.0, 16.0 / a),
        err_coef=8.0 / a,
        err_alpha=1.0,
    )
    return subgraph_set(profile, far, description="parabola-subgraph")


def slab_complement_set(mu: float) -> PlanarSet:
    """Everything except the open upward slab {0 < y1 < mu, y2 > 0}.

    The void-slab configuration used for sliding-contact curvature sign
    checks: the complement is narrow when mu is small.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")

    def ind(p):
        in_slab = (p[:, 0] > 0.0) & (p[:, 0] < mu) & (p[:, 1] > 0.0)
        return ~in_slab

    far = PowerTailFar(
        terms=((0.0, -2.0 * np.pi), (1.0, 2.0 * mu)),
        valid_radius=8.0 * (1.0 + mu),
        err_coef=4.0 * mu * (1.0 + mu),
        err_alpha=2.0,
    )
    return PlanarSet(ind, far, "slab-complement")
