"""Numerical laboratory for planar nonlocal minimal graphs.

Minimizes a discrete fractional-area functional for graphs on (0, 1) with
prescribed exterior data, evaluates nonlocal mean curvature by
principal-value quadrature, and runs property-checked boundary experiments
(stickiness, genericity, vertical tangents, barrier curvature signs).
"""

from .errors import (
    DegenerateWindowError,
    DivergentTailError,
    MismatchedReportsError,
    NoVerticalWindowError,
    NotBoundaryPointError,
    QuadratureError,
    ValidationError,
)
from .kernels import (
    FractionalOrder,
    kernel_derivative,
    kernel_double_primitive,
    kernel_primitive,
)
from .quadrature import adaptive_quadrature, gauss_jacobi_unit
from .geometry import (
    BoundedFar,
    GraphLinesFar,
    HalfplaneFar,
    PlanarSet,
    PowerTailFar,
    corner_barrier_set,
    cone_set,
    disk_set,
    halfplane_set,
    parabola_set,
    slab_complement_set,
    subgraph_set,
)
from .curvature import (
    CurvatureSample,
    fractional_laplacian_1d,
    graph_curvature,
    set_curvature_2d,
)
from .domain import (
    Asymptote,
    DiscreteGraph,
    ExteriorDatum,
    GridSpec,
    bump_profile,
    flat_datum,
    linear_datum,
    perturbed_datum,
    power_datum,
    two_bump_datum,
)
from .energy import PairSystem, discrete_energy, energy_gradient
from .solver import SolveOptions, SolveReport, solve
from .analysis import (
    BarrierParams,
    BlowUpProfile,
    ExponentFit,
    InverseParametrization,
    StickinessReport,
    SweepResult,
    barrier_curvature_scan,
    blow_up_rescale,
    detect_stickiness,
    fit_boundary_exponent,
    inverse_parametrization,
    perturbation_sweep,
)
from .scenarios import (
    RunReport,
    ScenarioConfig,
    emit_profile,
    parse_config,
    read_profile,
    run_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "Asymptote",
    "BarrierParams",
    "BlowUpProfile",
    "BoundedFar",
    "CurvatureSample",
    "DegenerateWindowError",
    "DiscreteGraph",
    "DivergentTailError",
    "ExponentFit",
    "ExteriorDatum",
    "FractionalOrder",
    "GraphLinesFar",
    "GridSpec",
    "HalfplaneFar",
    "InverseParametrization",
    "MismatchedReportsError",
    "NotBoundaryPointError",
    "NoVerticalWindowError",
    "PairSystem",
    "PlanarSet",
    "PowerTailFar",
    "QuadratureError",
    "RunReport",
    "ScenarioConfig",
    "SolveOptions",
    "SolveReport",
    "StickinessReport",
    "SweepResult",
    "ValidationError",
    "adaptive_quadrature",
    "barrier_curvature_scan",
    "blow_up_rescale",
    "bump_profile",
    "cone_set",
    "corner_barrier_set",
    "detect_stickiness",
    "discrete_energy",
    "disk_set",
    "emit_profile",
    "energy_gradient",
    "fit_boundary_exponent",
    "flat_datum",
    "fractional_laplacian_1d",
    "gauss_jacobi_unit",
    "graph_curvature",
    "halfplane_set",
    "inverse_parametrization",
    "kernel_derivative",
    "kernel_double_primitive",
    "kernel_primitive",
    "linear_datum",
    "parabola_set",
    "parse_config",
    "perturbation_sweep",
    "perturbed_datum",
    "power_datum",
    "read_profile",
    "run_scenario",
    "set_curvature_2d",
    "slab_complement_set",
    "solve",
    "subgraph_set",
    "two_bump_datum",
]
