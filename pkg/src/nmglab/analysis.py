"""Boundary diagnostics: jumps, refinement verdicts, vertical tangents,
boundary exponents, blow-up rescalings, and barrier curvature scans."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .curvature import CurvatureSample, set_curvature_2d
from .domain import DiscreteGraph, ExteriorDatum, GridSpec
from .errors import (
    DegenerateWindowError,
    MismatchedReportsError,
    NoVerticalWindowError,
    ValidationError,
)
from .geometry import corner_barrier_set
from .kernels import FractionalOrder
from .solver import SolveOptions, SolveReport, solve

__all__ = [
    "StickinessReport",
    "detect_stickiness",
    "SweepResult",
    "perturbation_sweep",
    "InverseParametrization",
    "inverse_parametrization",
    "ExponentFit",
    "fit_boundary_exponent",
    "BlowUpProfile",
    "blow_up_rescale",
    "BarrierParams",
    "barrier_curvature_scan",
]

# Certification rule: a jump is a genuine discontinuity when it clears an
# absolute floor at the finest grid AND is stable under refinement.  The
# floor scales with h_finest: spurious O(h^alpha) boundary layers die under
# refinement (their level ratios sit near 2^alpha, outside the bands), while
# genuine jumps hold both the floor and the ratio bands.
CERTIFY_FACTOR = 5.0
CERTIFY_ABSOLUTE = 1e-4
RATIO_BAND_COARSE = (0.8, 1.25)
RATIO_BAND_FINE = (0.9, 1.15)
NOISE_FLOOR = 1e-8


@dataclass(frozen=True)
class SideVerdict:
    jump: float                       # finest-grid first-node jump
    jumps_per_level: Tuple[float, ...]
    matched_values: Tuple[float, ...]  # values at the coarsest first node, per level
    refinement_ratios: Tuple[float, ...]
    status: str                       # sticky | not_sticky | below_resolution
    slope_first_node: float
    fitted_exponent: Optional["ExponentFit"]

    @property
    def sticky(self) -> bool:
        return self.status == "sticky"


@dataclass(frozen=True)
class StickinessReport:
    """Boundary jump sizes and refinement-stability verdicts for both walls."""

    left: SideVerdict
    right: SideVerdict
    h_levels: Tuple[float, ...]

    @property
    def jump_left(self) -> float:
        return self.left.jump

    @property
    def jump_right(self) -> float:
        return self.right.jump

    @property
    def sticky_left(self) -> bool:
        return self.left.sticky

    @property
    def sticky_right(self) -> bool:
        return self.right.sticky


def _first_interior_jump(report: SolveReport, boundary: str) -> Tuple[float, float]:
    g = report.grid
    u = report.solution.values
    if boundary == "left":
        return float(u[g.index_of(g.h)] - report.datum.left_limit), g.h
    return float(u[g.index_of(1.0 - g.h)] - report.datum.right_limit), g.h


def _classify(jumps: Sequence[float], h_finest: float) -> Tuple[str, Tuple[float, ...]]:
    j_coarse, j_mid, j_fine = jumps
    ratios = []
    for a, b in ((j_coarse, j_mid), (j_mid, j_fine)):
        ratios.append(a / b if abs(b) > 0 else np.inf)
    threshold = max(CERTIFY_FACTOR * h_finest, CERTIFY_ABSOLUTE)
    if abs(j_fine) <= NOISE_FLOOR:
        return "not_sticky", tuple(ratios)
    stable = (
        RATIO_BAND_COARSE[0] <= ratios[0] <= RATIO_BAND_COARSE[1]
        and RATIO_BAND_FINE[0] <= ratios[1] <= RATIO_BAND_FINE[1]
    )
    if abs(j_fine) > threshold:
        return ("sticky" if stable else "not_sticky"), tuple(ratios)
    return "below_resolution", tuple(ratios)


def detect_stickiness(
    coarse: SolveReport,
    refined: SolveReport,
    refined2: SolveReport,
    *,
    fit_exponents: bool = True,
) -> StickinessReport:
    """Refinement-stability verdict from three solves at h, h/2, h/4.

    The three reports must share datum and fractional order.  Jumps feeding
    the verdict rule are measured at each level's own first interior node;
    values at the coarsest first node (a location shared by all three grids)
    are recorded alongside for location-matched comparison.
    """
    reports = (coarse, refined, refined2)
    s_vals = {r.order.s for r in reports}
    if len(s_vals) != 1:
        raise MismatchedReportsError(f"reports mix fractional orders {sorted(s_vals)}")
    names = {r.datum.name for r in reports}
    if len(names) != 1:
        raise MismatchedReportsError(f"reports mix exterior data {sorted(names)}")
    ms = [r.grid.m for r in reports]
    if not (ms[1] == 2 * ms[0] and ms[2] == 2 * ms[1]):
        raise MismatchedReportsError(f"grids must refine by factor 2: got m = {ms}")
    h_levels = tuple(r.grid.h for r in reports)
    h_finest = h_levels[-1]

    sides = {}
    for boundary in ("left", "right"):
        jumps = [_first_interior_jump(r, boundary)[0] for r in reports]
        x_star = coarse.grid.h if boundary == "left" else 1.0 - coarse.grid.h
        limit = coarse.datum.left_limit if boundary == "left" else coarse.datum.right_limit
        matched = tuple(float(r.solution.value_at(x_star) - limit) for r in reports)
        status, ratios = _classify(jumps, h_finest)
        fit = None
        if fit_exponents and status == "sticky":
            try:
                fit = fit_boundary_exponent(refined2, boundary)
            except (DegenerateWindowError, ValidationError):
                fit = None
        sides[boundary] = SideVerdict(
            jump=jumps[-1],
            jumps_per_level=tuple(jumps),
            matched_values=matched,
            refinement_ratios=ratios,
            status=status,
            slope_first_node=jumps[-1] / h_finest,
            fitted_exponent=fit,
        )
    return StickinessReport(left=sides["left"], right=sides["right"], h_levels=h_levels)


@dataclass(frozen=True)
class SweepEntry:
    t: float
    boundary_limit: float          # finest-grid first-node value at the left wall
    report: StickinessReport
    converged: bool


@dataclass(frozen=True)
class SweepResult:
    entries: Tuple[SweepEntry, ...]
    nondecreasing: bool

    def boundary_limits(self) -> np.ndarray:
        return np.array([e.boundary_limit for e in self.entries])


def perturbation_sweep(
    base_datum: ExteriorDatum,
    phi,
    t_values: Sequence[float],
    grid: GridSpec,
    order: FractionalOrder,
    opts: Optional[SolveOptions] = None,
    *,
    levels: int = 3,
) -> SweepResult:
    """Solve for datum + t*phi over increasing t, with warm starts in t.

    phi must be nonnegative, not identically zero, and supported in
    (-2, 1) outside the domain [0, 1].  A t = 0 control entry is always
    prepended.  Each entry carries a full refinement-study stickiness
    report; the sweep also reports whether the left boundary limit is
    nondecreasing in t (the comparison-principle prediction).
    """
    from .domain import perturbed_datum

    t_values = [float(t) for t in t_values]
    if any(t <= 0 for t in t_values):
        raise ValidationError("t_values must be strictly positive (t=0 is added automatically)")
    if sorted(t_values) != t_values:
        raise ValidationError("t_values must be sorted ascending")

    probe = np.linspace(-3.0, 2.0, 2001)
    ph = np.asarray(phi(probe), dtype=float)
    if np.any(ph < -1e-12):
        raise ValidationError("perturbation phi must be nonnegative")
    if not np.any(ph > 0):
        raise ValidationError("perturbation phi must not be identically zero")
    outside = (probe <= -2.0) | (probe >= 1.0) | ((probe > 0.0) & (probe < 1.0))
    if np.any(np.abs(ph[outside]) > 1e-12):
        raise ValidationError("phi must be supported in (-2, 1) outside the domain (0, 1)")

    opts = opts or SolveOptions()
    grids = [grid]
    for _ in range(levels - 1):
        grids.append(grids[-1].refine())

    entries: List[SweepEntry] = []
    warm: List[Optional[np.ndarray]] = [None] * levels
    for t in [0.0] + t_values:
        datum_t = perturbed_datum(base_datum, phi, t) if t > 0 else base_datum
        reports = []
        for li, g in enumerate(grids):
            o = SolveOptions(
                tolerance=opts.tolerance,
                max_iterations=opts.max_iterations,
                method=opts.method,
                line_search_shrink=opts.line_search_shrink,
                line_search_slope=opts.line_search_slope,
                initial_guess="warm-start" if warm[li] is not None else opts.initial_guess,
                warm_start=warm[li],
            )
            try:
                rep = solve(datum_t, g, order, o)
            except Exception as exc:  # annotate solver failures with t
                raise RuntimeError(f"solve failed at t={t}, m={g.m}: {exc}") from exc
            reports.append(rep)
            warm[li] = rep.solution.interior_values.copy()
        stick = detect_stickiness(*reports, fit_exponents=False)
        finest = reports[-1]
        limit = float(finest.solution.value_at(finest.grid.h))
        entries.append(
            SweepEntry(
                t=t,
                boundary_limit=limit,
                report=stick,
                converged=all(r.converged for r in reports),
            )
        )
    limits = [e.boundary_limit for e in entries]
    nondec = all(b >= a - 1e-8 for a, b in zip(limits[:-1], limits[1:]))
    return SweepResult(entries=tuple(entries), nondecreasing=nondec)


@dataclass(frozen=True)
class InverseParametrization:
    """The near-wall curve re-parametrized by the vertical variable.

    positions[i] = v(heights[i]); vprime_at_jump is the one-sided difference
    estimate of v' at the height adjacent to the boundary jump.
    """

    boundary: str
    heights: np.ndarray
    positions: np.ndarray
    vprime_at_jump: float
    jump: float


def inverse_parametrization(
    report: SolveReport,
    boundary: str,
    *,
    jump_threshold: Optional[float] = None,
) -> InverseParametrization:
    """Invert the monotone near-wall run of the solution: x1 = v(x2).

    Requires a detected jump at the chosen boundary (default threshold
    max(h, 1e-4): enough signal for a window, laxer than the stickiness
    certification floor); raises NoVerticalWindowError otherwise.  v' at
    the jump end decreasing toward zero under refinement is the discrete
    signature of the vertical tangent.
    """
    if boundary not in ("left", "right"):
        raise ValueError(f"boundary must be 'left' or 'right', got {boundary!r}")
    g = report.grid
    h = g.h
    if jump_threshold is None:
        jump_threshold = max(h, CERTIFY_ABSOLUTE)
    jump, _ = _first_interior_jump(report, boundary)
    if abs(jump) <= jump_threshold:
        raise NoVerticalWindowError(
            f"no vertical window at the {boundary} boundary: |jump|={abs(jump):.3e} <= {jump_threshold:.3e}"
        )
    u = report.solution.values
    idx = g.interior_indices
    if boundary == "right":
        idx = idx[::-1]
    vals = u[idx]
    x = g.x[idx]
    # maximal monotone run starting at the first interior node
    diffs = np.diff(vals)
    direction = np.sign(diffs[0]) if diffs.size else 0.0
    if direction == 0.0:
        raise NoVerticalWindowError("solution flat next to the wall; no monotone window")
    end = 1
    while end < vals.size and np.sign(vals[end] - vals[end - 1]) == direction:
        end += 1
    heights = vals[:end]
    positions = np.abs(x[:end] - (0.0 if boundary == "left" else 1.0))
    vprime = float((positions[1] - positions[0]) / (heights[1] - heights[0])) if end >= 2 else np.inf
    order_idx = np.argsort(heights)
    return InverseParametrization(
        boundary=boundary,
        heights=heights[order_idx],
        positions=positions[order_idx],
        vprime_at_jump=vprime,
        jump=jump,
    )


@dataclass(frozen=True)
class ExponentFit:
    exponent: float
    amplitude: float
    residual: float
    boundary_limit: float
    window: Tuple[float, float]
    n_points: int
    reliable: bool


def _estimate_boundary_limit(dist: np.ndarray, vals: np.ndarray) -> float:
    """Limit U of U + a*d^e from samples at geometric distances d, 2d, 4d."""
    # find indices i with dist ~ (d, 2d, 4d)
    d0 = dist[0]
    try:
        i2 = int(np.argmin(np.abs(dist - 2.0 * d0)))
        i4 = int(np.argmin(np.abs(dist - 4.0 * d0)))
    except ValueError:
        return float(vals[0])
    if not (np.isclose(dist[i2], 2 * d0, rtol=1e-9) and np.isclose(dist[i4], 4 * d0, rtol=1e-9)):
        return float(vals[0])
    u1, u2, u4 = vals[0], vals[i2], vals[i4]
    denom = u2 - u1
    if abs(denom) < 1e-15:
        return float(u1)
    ratio = (u4 - u2) / denom
    if ratio <= 0.05 or ratio >= 16.0:
        return float(u1)
    e = np.log2(ratio)
    return float(u1 - denom / (2.0 ** e - 1.0))


def fit_boundary_exponent(
    report: SolveReport,
    boundary: str,
    window: Optional[Tuple[float, float]] = None,
    *,
    boundary_limit: Optional[float] = None,
    residual_cap: float = 0.1,
) -> ExponentFit:
    """Least-squares power-law fit |u(x) - u(wall limit)| ~ amplitude * d^exponent.

    window holds physical distances from the wall; the default covers nodes
    2 through 17 (the first node is excluded: the jump plateau pollutes the
    fit).  The wall limit is estimated from a geometric node triple unless
    given.  The fit is marked unreliable when the log-log residual exceeds
    residual_cap.
    """
    if boundary not in ("left", "right"):
        raise ValueError(f"boundary must be 'left' or 'right', got {boundary!r}")
    g = report.grid
    h = g.h
    if window is None:
        window = (1.5 * h, 17.5 * h)
    lo, hi = window
    if not (0.0 < lo < hi < 1.0):
        raise ValidationError(f"fit window must sit inside (0, 1), got {window!r}")
    xi = g.x[g.interior_mask]
    vals = report.solution.interior_values
    dist = xi if boundary == "left" else 1.0 - xi
    if boundary == "right":
        dist = dist[::-1]
        vals = vals[::-1]
    sel = (dist >= lo) & (dist <= hi)
    if int(sel.sum()) < 6:
        raise ValidationError(f"fit window {window!r} holds {int(sel.sum())} nodes; need >= 6")
    d_in = dist[sel]
    v_in = vals[sel]
    if boundary_limit is None:
        near = dist <= hi
        boundary_limit = _estimate_boundary_limit(dist[near], vals[near])
    dev = v_in - boundary_limit
    if np.max(np.abs(dev)) < 1e-13:
        raise DegenerateWindowError("solution is constant on the fit window")
    signs = np.sign(dev[np.abs(dev) > 0])
    if signs.size == 0 or np.any(signs != signs[0]):
        raise DegenerateWindowError("deviation changes sign inside the fit window")
    ld = np.log(d_in)
    lv = np.log(np.abs(dev))
    A = np.vstack([ld, np.ones_like(ld)]).T
    coef, res, _, _ = np.linalg.lstsq(A, lv, rcond=None)
    exponent = float(coef[0])
    amplitude = float(np.exp(coef[1]) * signs[0])
    fitted = A @ coef
    residual = float(np.sqrt(np.mean((lv - fitted) ** 2)))
    return ExponentFit(
        exponent=exponent,
        amplitude=amplitude,
        residual=residual,
        boundary_limit=float(boundary_limit),
        window=(float(lo), float(hi)),
        n_points=int(sel.sum()),
        reliable=residual <= residual_cap,
    )


@dataclass(frozen=True)
class BlowUpProfile:
    """Samples of the dilation u_k(x) = k*u(x/k) near the left wall."""

    x: np.ndarray
    values: np.ndarray
    k: float


def blow_up_rescale(report: SolveReport, k: float, window_radius: float) -> BlowUpProfile:
    """Dilation by k >= 1 around the origin: u_k(x) = k*u(x/k) on [0, window_radius].

    Samples sit on the original grid spacing; u(x/k) is linearly
    interpolated between nodes.  k = 1 returns the plain restriction.
    """
    if k < 1.0:
        raise ValidationError(f"blow-up factor k must be >= 1, got {k!r}")
    g = report.grid
    if window_radius <= 0:
        raise ValidationError("window_radius must be positive")
    if window_radius > k * g.L:
        raise ValidationError(
            f"window_radius {window_radius} exceeds available data (k*L = {k * g.L})"
        )
    n = int(np.floor(window_radius / g.h + 1e-9))
    x = np.arange(0, n + 1) * g.h
    vals = k * report.solution.interpolate(x / k)
    return BlowUpProfile(x=x, values=vals, k=float(k))


@dataclass(frozen=True)
class BarrierParams:
    """Corner-like barrier: flat at -delta left of 0, ramp of given slope to
    bend_x, flat cap beyond."""

    delta: float = 0.0
    slope: float = 1.0
    bend_x: float = 1.0
    cap: str = "flat"

    def corner(self) -> Tuple[float, float]:
        """The concave corner: (0, -delta) where the left plateau meets the rest."""
        return (0.0, -self.delta)

    def ramp_point(self, distance: float) -> Tuple[float, float]:
        """Point on the ramp at the given arclength from the ramp foot."""
        c = 1.0 / np.sqrt(1.0 + self.slope ** 2)
        return (distance * c, self.slope * distance * c)


def barrier_curvature_scan(
    order: FractionalOrder,
    barrier_params: BarrierParams,
    sample_points: Sequence[float],
    *,
    tol: float = 1e-4,
) -> List[CurvatureSample]:
    """Nonlocal curvature of the corner-like barrier along its ramp.

    sample_points are arclength distances from the corner along the ramp;
    distance 0 samples the corner itself, where the principal value
    diverges to -inf (the concave corner makes the set dominate at every
    scale).  Negative values at small positive distances are the barrier
    property the sliding arguments need.
    """
    pset = corner_barrier_set(
        barrier_params.delta, barrier_params.slope, barrier_params.bend_x, barrier_params.cap
    )
    out: List[CurvatureSample] = []
    for dist in sample_points:
        dist = float(dist)
        if dist < 0:
            raise ValidationError("ramp distances must be nonnegative")
        point = barrier_params.corner() if dist == 0.0 else barrier_params.ramp_point(dist)
        start = min(0.25, 0.5 * barrier_params.bend_x)
        out.append(set_curvature_2d(pset, point, order, tol, start_radius=start))
    return out
