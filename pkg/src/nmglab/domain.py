"""Grids, exterior data, and discrete graphs on the truncated line.

The computational domain is (0, 1); the graph is prescribed on the rest of
the line by an ExteriorDatum.  Grids are uniform with spacing h = 1/m so
that 0 and 1 are nodes exactly, truncated at +-L with the far field beyond
+-L described by per-side asymptotes (constant, linear, or power), which the
energy and curvature tails integrate analytically.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import ValidationError
from .kernels import FractionalOrder

__all__ = [
    "GridSpec",
    "Asymptote",
    "ExteriorDatum",
    "DiscreteGraph",
    "bump_profile",
    "flat_datum",
    "linear_datum",
    "two_bump_datum",
    "perturbed_datum",
    "power_datum",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid x_k = k/m covering [-L, L]; interior nodes are those in (0, 1).

    m is the number of cells per unit length (h = 1/m), so 0 and 1 land on
    nodes exactly; L*m must be integral for the endpoints to land as well.
    """

    m: int
    L: float = 4.0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise ValidationError(f"grid denominator m must be an integer >= 2, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        if not self.L > 1.0:
            raise ValidationError(f"truncation half-width L must exceed 1, got {self.L!r}")
        Lm = self.L * self.m
        if abs(Lm - round(Lm)) > 1e-9:
            raise ValidationError(f"L must be a multiple of h = 1/{self.m}, got L={self.L!r}")
        object.__setattr__(self, "L", float(self.L))

    @property
    def h(self) -> float:
        return 1.0 / self.m

    @property
    def half_cells(self) -> int:
        return int(round(self.L * self.m))

    @property
    def x(self) -> np.ndarray:
        k = np.arange(-self.half_cells, self.half_cells + 1)
        return k / self.m

    @property
    def interior_mask(self) -> np.ndarray:
        k = np.arange(-self.half_cells, self.half_cells + 1)
        return (k > 0) & (k < self.m)

    @property
    def interior_indices(self) -> np.ndarray:
        return np.nonzero(self.interior_mask)[0]

    @property
    def n_interior(self) -> int:
        return self.m - 1

    @property
    def node_weights(self) -> np.ndarray:
        """Trapezoid weights: h everywhere, h/2 at the two extreme nodes."""
        w = np.full(2 * self.half_cells + 1, self.h)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    def refine(self, factor: int = 2) -> "GridSpec":
        return GridSpec(self.m * factor, self.L)

    def index_of(self, x: float) -> int:
        k = round(x * self.m)
        if abs(k / self.m - x) > 1e-12:
            raise ValidationError(f"{x!r} is not a grid node of h=1/{self.m}")
        return int(k + self.half_cells)


@dataclass(frozen=True)
class Asymptote:
    """Far-field model of the datum on one side: constant, linear, or power.

    value(y): the model at position y (|y| >= L on its side).
    extension(x): the same formula continued to points inside the grid,
    used to renormalize tail energies.
    """

    kind: str
    a: float = 0.0
    b: float = 0.0
    exponent: float = 0.0

    def __post_init__(self):
        if self.kind not in ("constant", "linear", "power"):
            raise ValidationError(f"unknown asymptote class {self.kind!r}")
        if self.kind == "power" and not (0.0 <= self.exponent <= 2.0):
            raise ValidationError(f"power asymptote exponent must lie in [0, 2], got {self.exponent!r}")

    def value(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind == "constant":
            return np.full_like(y, self.b)
        if self.kind == "linear":
            return self.a * y + self.b
        return self.a * np.abs(y) ** self.exponent + self.b

    @classmethod
    def constant(cls, c: float) -> "Asymptote":
        return cls("constant", 0.0, float(c))

    @classmethod
    def linear(cls, a: float, b: float = 0.0) -> "Asymptote":
        return cls("linear", float(a), float(b))

    @classmethod
    def power(cls, amplitude: float, exponent: float, offset: float = 0.0) -> "Asymptote":
        return cls("power", float(amplitude), float(offset), float(exponent))


@dataclass(frozen=True)
class ExteriorDatum:
    """Prescribed graph values on R \\ (0, 1) plus far-field model.

    evaluate must be vectorized and total on the exterior; values on (0, 1)
    are never used.  left_limit/right_limit are the one-sided limits at the
    walls, used as the exterior values at the nodes 0 and 1.  smooth_window
    and smooth_exponent record the C^{1,beta} regularity near the walls
    (metadata for reports; not used numerically).
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    left_limit: float
    right_limit: float
    asymptote_left: Asymptote
    asymptote_right: Asymptote
    smooth_window: float = 0.5
    smooth_exponent: float = 1.0
    name: str = "custom"

    def sample(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        vals = np.asarray(self.evaluate(x), dtype=float)
        vals = np.where(np.isclose(x, 0.0), self.left_limit, vals)
        vals = np.where(np.isclose(x, 1.0), self.right_limit, vals)
        return vals

    def asymptote_for_side(self, side: str) -> Asymptote:
        if side == "left":
            return self.asymptote_left
        if side == "right":
            return self.asymptote_right
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    def validate_against(self, L: float, atol: float = 1e-9, n_samples: int = 9) -> None:
        """Check the asymptotes match the evaluator beyond +-L at sample points."""
        for side, asym, sgn in (("left", self.asymptote_left, -1.0), ("right", self.asymptote_right, +1.0)):
            y = sgn * (L + np.linspace(0.0, 3.0 * L, n_samples))
            got = np.asarray(self.evaluate(y), dtype=float)
            want = asym.value(y)
            worst = float(np.max(np.abs(got - want)))
            if worst > atol:
                raise ValidationError(
                    f"{side} asymptote of datum {self.name!r} deviates from the evaluator "
                    f"beyond |x|>{L}: max deviation {worst:.3e} > {atol:g}"
                )


def bump_profile(center: float, half_width: float, height: float = 1.0):
    """Smooth compactly supported bump: height*(1 - ((x-c)/w)^2)^3 on |x-c| < w.

    C^2 across the support edge, vectorized.
    """
    if half_width <= 0:
        raise ValidationError("bump half_width must be positive")

    def phi(x):
        z = (np.asarray(x, dtype=float) - center) / half_width
        return height * np.where(np.abs(z) < 1.0, np.maximum(0.0, 1.0 - z * z) ** 3, 0.0)

    return phi


def flat_datum(c: float = 0.0) -> ExteriorDatum:
    return ExteriorDatum(
        evaluate=lambda x: np.full_like(np.asarray(x, dtype=float), c),
        left_limit=c,
        right_limit=c,
        asymptote_left=Asymptote.constant(c),
        asymptote_right=Asymptote.constant(c),
        name=f"flat({c})",
    )


def linear_datum(a: float, b: float = 0.0) -> ExteriorDatum:
    return ExteriorDatum(
        evaluate=lambda x: a * np.asarray(x, dtype=float) + b,
        left_limit=b,
        right_limit=a + b,
        asymptote_left=Asymptote.linear(a, b),
        asymptote_right=Asymptote.linear(a, b),
        name=f"linear({a},{b})",
    )


def two_bump_datum(height: float = 0.5, width: float = 0.25) -> ExteriorDatum:
    """Two symmetric bumps hugging the walls: supports [-width, 0] and [1, 1+width].

    Symmetric under x -> 1 - x; compact support keeps the far field flat zero.
    """
    if width <= 0 or width > 1.5:
        raise ValidationError(f"two-bump width must lie in (0, 1.5], got {width!r}")
    left = bump_profile(-width / 2.0, width / 2.0, height)
    right = bump_profile(1.0 + width / 2.0, width / 2.0, height)

    def ev(x):
        x = np.asarray(x, dtype=float)
        return left(x) + right(x)

    return ExteriorDatum(
        evaluate=ev,
        left_limit=0.0,
        right_limit=0.0,
        asymptote_left=Asymptote.constant(0.0),
        asymptote_right=Asymptote.constant(0.0),
        name=f"two_bump(h={height},w={width})",
    )


def perturbed_datum(base: ExteriorDatum, phi, t: float, name: Optional[str] = None) -> ExteriorDatum:
    """base + t*phi with phi a compactly supported nonnegative perturbation.

    The asymptotes are inherited from base, so phi must vanish beyond the
    truncation radius (checked later by validate_against).
    """
    if t < 0:
        raise ValidationError("perturbation size t must be nonnegative")

    def ev(x):
        x = np.asarray(x, dtype=float)
        return np.asarray(base.evaluate(x), dtype=float) + t * np.asarray(phi(x), dtype=float)

    return ExteriorDatum(
        evaluate=ev,
        left_limit=base.left_limit + t * float(phi(np.array([0.0]))[0]),
        right_limit=base.right_limit + t * float(phi(np.array([1.0]))[0]),
        asymptote_left=base.asymptote_left,
        asymptote_right=base.asymptote_right,
        smooth_window=base.smooth_window,
        smooth_exponent=base.smooth_exponent,
        name=name or f"{base.name}+{t}*phi",
    )


def power_datum(amplitude: float, exponent: float, offset: float = 0.0) -> ExteriorDatum:
    """Datum amplitude*|x|^exponent + offset on both sides (e.g. x^2 with exponent 2)."""
    asym = Asymptote.power(amplitude, exponent, offset)

    def ev(x):
        return asym.value(np.asarray(x, dtype=float))

    return ExteriorDatum(
        evaluate=ev,
        left_limit=offset,
        right_limit=amplitude + offset,
        asymptote_left=asym,
        asymptote_right=asym,
        name=f"power({amplitude},{exponent},{offset})",
    )


@dataclass
class DiscreteGraph:
    """Grid samples of a candidate graph: exterior nodes frozen to the datum.

    values covers every node; the interior slice is the free unknown.  The
    datum rides along because tail integrals beyond +-L need its far-field
    model.
    """

    grid: GridSpec
    order: FractionalOrder
    datum: ExteriorDatum
    values: np.ndarray
    _system: object = field(default=None, repr=False, compare=False)

    @classmethod
    def from_datum(
        cls,
        grid: GridSpec,
        order: FractionalOrder,
        datum: ExteriorDatum,
        interior_values: Optional[np.ndarray] = None,
        *,
        validate: bool = True,
    ) -> "DiscreteGraph":
        if validate:
            datum.validate_against(grid.L)
        x = grid.x
        vals = datum.sample(x)
        mask = grid.interior_mask
        if interior_values is None:
            vals[mask] = 0.0
        else:
            iv = np.asarray(interior_values, dtype=float)
            if iv.shape != (grid.n_interior,):
                raise ValidationError(
                    f"interior_values must have shape ({grid.n_interior},), got {iv.shape}"
                )
            vals[mask] = iv
        if not np.all(np.isfinite(vals)):
            raise ValidationError("graph values must be finite")
        return cls(grid=grid, order=order, datum=datum, values=vals)

    @property
    def interior_values(self) -> np.ndarray:
        return self.values[self.grid.interior_mask]

    def with_interior(self, interior_values: np.ndarray) -> "DiscreteGraph":
        iv = np.asarray(interior_values, dtype=float)
        if iv.shape != (self.grid.n_interior,):
            raise ValidationError(
                f"interior_values must have shape ({self.grid.n_interior},), got {iv.shape}"
            )
        if not np.all(np.isfinite(iv)):
            raise ValidationError("graph values must be finite")
        vals = self.values.copy()
        vals[self.grid.interior_mask] = iv
        return DiscreteGraph(self.grid, self.order, self.datum, vals, self._system)

    def system(self):
        """The cached pairwise workspace shared by energy, gradient, and curvature."""
        if self._system is None:
            from .energy import PairSystem

            self._system = PairSystem(self.grid, self.order, self.datum)
        return self._system

    def value_at(self, x: float) -> float:
        return float(self.values[self.grid.index_of(x)])

    def interpolate(self, x) -> np.ndarray:
        """Piecewise-linear interpolation of the node values."""
        return np.interp(np.asarray(x, dtype=float), self.grid.x, self.values)
