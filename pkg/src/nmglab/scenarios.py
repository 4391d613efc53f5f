"""Scenario registry, configuration parsing, refinement orchestration, and
report/plot-data emission.

Configs are flat key-value text ("key: value" lines, '#' comments, explicit
"schema: 1"), diff-able by design.  Data files are comma-separated text with
a header row and 17-significant-digit floats, so re-running an identical
config reproduces byte-identical files; timings live only in the summary.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .analysis import (
    BarrierParams,
    barrier_curvature_scan,
    detect_stickiness,
    fit_boundary_exponent,
    inverse_parametrization,
    perturbation_sweep,
)
from .curvature import fractional_laplacian_1d
from .domain import GridSpec, bump_profile, flat_datum, linear_datum, two_bump_datum
from .errors import (
    DegenerateWindowError,
    NoVerticalWindowError,
    ValidationError,
)
from .kernels import FractionalOrder
from .solver import SolveOptions, SolveReport, solve

__all__ = [
    "SCENARIOS",
    "ScenarioConfig",
    "RunReport",
    "parse_config",
    "run_scenario",
    "emit_profile",
    "read_profile",
]

SCENARIOS = (
    "flat",
    "linear",
    "two_bump",
    "generic_perturbation",
    "barrier",
    "laplacian_boundary",
    "custom",
)

SCHEMA_VERSION = 1

_DEFAULT_LEVELS = (32, 64, 128)


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    s: float = 0.5
    L: float = 4.0
    levels: Tuple[int, ...] = _DEFAULT_LEVELS
    tolerance: float = 1e-9
    max_iterations: int = 500
    method: str = "damped-newton"
    flat_value: float = 0.0
    linear_slope: float = 1.0
    linear_intercept: float = 0.0
    bump_height: float = 0.5
    bump_width: float = 0.25
    t_values: Tuple[float, ...] = (0.1, 0.2, 0.4)
    perturbation_center: float = -1.0
    perturbation_width: float = 0.5
    perturbation_height: float = 1.0
    barrier_delta: float = 0.0
    barrier_slope: float = 1.0
    barrier_bend: float = 1.0
    ramp_distances: Tuple[float, ...] = (0.0, 0.01, 0.02, 0.05)
    laplacian_s_values: Tuple[float, ...] = (0.25, 0.5)
    curvature_tol: float = 1e-4
    custom_datum: str = "flat"
    out_dir: str = ""
    schema: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.schema != SCHEMA_VERSION:
            raise ValidationError(f"unsupported schema version {self.schema!r}; expected {SCHEMA_VERSION}")
        if self.scenario not in SCENARIOS:
            raise ValidationError(f"unknown scenario {self.scenario!r}; known: {', '.join(SCENARIOS)}")
        if not (0.0 < self.s < 1.0):
            raise ValidationError(f"s out of (0,1): got {self.s!r}")
        if self.L < 1.5:
            raise ValidationError(f"truncation L must be >= 1.5, got {self.L!r}")
        if len(self.levels) < 1 or any(int(m) != m or m < 9 for m in self.levels):
            raise ValidationError(f"levels must be integers >= 9 (h = 1/m), got {self.levels!r}")
        for a, b in zip(self.levels[:-1], self.levels[1:]):
            if b != 2 * a:
                raise ValidationError(f"levels must double: {self.levels!r}")
        if self.custom_datum not in ("flat", "linear", "two_bump"):
            raise ValidationError(f"custom_datum must be flat|linear|two_bump, got {self.custom_datum!r}")

    def datum(self):
        kind = self.scenario if self.scenario != "custom" else self.custom_datum
        if kind in ("flat", "generic_perturbation", "barrier", "laplacian_boundary"):
            return flat_datum(self.flat_value)
        if kind == "linear":
            return linear_datum(self.linear_slope, self.linear_intercept)
        if kind == "two_bump":
            return two_bump_datum(self.bump_height, self.bump_width)
        raise ValidationError(f"scenario {self.scenario!r} has no datum")

    def solve_options(self, warm_start=None):
        return SolveOptions(
            tolerance=self.tolerance,
            max_iterations=self.max_iterations,
            method=self.method,
            initial_guess="warm-start" if warm_start is not None else "datum-interpolation",
            warm_start=warm_start,
        )


_KEY_TYPES = {
    "schema": int,
    "scenario": str,
    "s": float,
    "L": float,
    "h": str,
    "levels": str,
    "tol": float,
    "tolerance": float,
    "max_iterations": int,
    "method": str,
    "flat_value": float,
    "linear_slope": float,
    "linear_intercept": float,
    "bump_height": float,
    "bump_width": float,
    "t_values": str,
    "perturbation_center": float,
    "perturbation_width": float,
    "perturbation_height": float,
    "barrier_delta": float,
    "barrier_slope": float,
    "barrier_bend": float,
    "ramp_distances": str,
    "laplacian_s_values": str,
    "curvature_tol": float,
    "custom_datum": str,
    "out": str,
    "out_dir": str,
}


def parse_h(text: str) -> int:
    """Grid denominator from '1/64', '64', or a float equal to 1/m."""
    text = str(text).strip()
    if "/" in text:
        num, den = text.split("/", 1)
        try:
            num_v, den_v = float(num), float(den)
        except ValueError as exc:
            raise ValidationError(f"cannot parse grid spacing {text!r}") from exc
        if num_v != 1.0 or den_v != int(den_v) or den_v < 2:
            raise ValidationError(f"h must be of the form 1/m for integer m >= 2, got {text!r}")
        return int(den_v)
    try:
        val = float(text)
    except ValueError as exc:
        raise ValidationError(f"cannot parse grid spacing {text!r}") from exc
    if val > 1.0 and val == int(val):
        return int(val)  # already a denominator
    if val <= 0:
        raise ValidationError(f"h must be positive, got {text!r}")
    m = 1.0 / val
    if abs(m - round(m)) > 1e-9:
        raise ValidationError(f"h must be of the form 1/m for integer m, got {text!r}")
    return int(round(m))


def _parse_floats(text: str) -> Tuple[float, ...]:
    return tuple(float(p) for p in str(text).replace(",", " ").split())


def _read_config_file(path) -> Dict[str, str]:
    raw: Dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if ":" not in stripped:
            raise ValidationError(f"{path}:{lineno}: expected 'key: value', got {line!r}")
        key, value = stripped.split(":", 1)
        raw[key.strip()] = value.strip()
    return raw


def parse_config(path=None, overrides: Optional[Dict[str, object]] = None) -> ScenarioConfig:
    """Build a validated ScenarioConfig from a config file and/or overrides.

    Unknown keys are rejected with the offending key named.  Overrides win
    over file values.  Defaults are scenario-aware: stickiness scenarios
    default to s = 0.1 (where the effect is strongest) unless s is given.
    """
    raw: Dict[str, object] = {}
    if path is not None:
        raw.update(_read_config_file(path))
    if overrides:
        raw.update({k: v for k, v in overrides.items() if v is not None})

    unknown = set(raw) - set(_KEY_TYPES)
    if unknown:
        raise ValidationError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    if "scenario" not in raw:
        raise ValidationError("config must name a scenario")

    coerced: Dict[str, object] = {}
    for key, value in raw.items():
        want = _KEY_TYPES[key]
        try:
            coerced[key] = want(value) if not isinstance(value, want) else value
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"config key {key!r}: cannot parse {value!r}") from exc

    scenario = str(coerced.pop("scenario"))
    kwargs: Dict[str, object] = {"scenario": scenario}

    if "tol" in coerced:
        kwargs["tolerance"] = coerced.pop("tol")
    if "tolerance" in coerced:
        kwargs["tolerance"] = coerced.pop("tolerance")
    if "out" in coerced:
        kwargs["out_dir"] = coerced.pop("out")
    if "out_dir" in coerced:
        kwargs["out_dir"] = coerced.pop("out_dir")

    base_m: Optional[int] = None
    if "h" in coerced:
        base_m = parse_h(coerced.pop("h"))
    levels_text = coerced.pop("levels", None)
    if levels_text is not None:
        parts = str(levels_text).replace(",", " ").split()
        if len(parts) == 1 and base_m is not None:
            n = int(parts[0])
            if n < 1:
                raise ValidationError(f"levels count must be >= 1, got {levels_text!r}")
            kwargs["levels"] = tuple(base_m * 2 ** i for i in range(n))
        else:
            kwargs["levels"] = tuple(parse_h(p) for p in parts)
    elif base_m is not None:
        kwargs["levels"] = tuple(base_m * 2 ** i for i in range(3))

    for key in ("t_values", "ramp_distances", "laplacian_s_values"):
        if key in coerced:
            kwargs[key] = _parse_floats(coerced.pop(key))

    kwargs.update(coerced)
    if "s" not in kwargs and scenario in ("two_bump", "generic_perturbation"):
        kwargs["s"] = 0.1
    if not kwargs.get("out_dir"):
        kwargs["out_dir"] = f"runs/{scenario}"
    try:
        return ScenarioConfig(**kwargs)
    except TypeError as exc:
        raise ValidationError(str(exc)) from exc


@dataclass
class RunReport:
    """Machine-readable scenario outcome: verdicts, diagnostics, emitted files."""

    scenario: str
    ok: bool
    summary: Dict
    files: List[str]
    failures: List[str] = field(default_factory=list)


def _fmt(value: float) -> str:
    return f"{float(value):.17g}"


def emit_profile(report: SolveReport, path) -> str:
    """Write one solution as 'x,u,curvature_residual' rows, one per node.

    Exterior nodes are included and marked by a nan residual (the
    Euler-Lagrange residual only exists at interior nodes).  Floats carry 17
    significant digits, so a parse/emit round trip is bit-exact.
    """
    g = report.grid
    residual = np.full(g.x.size, np.nan)
    residual[g.interior_indices] = report.el_residuals
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["x,u,curvature_residual"]
    for x, u, r in zip(g.x, report.solution.values, residual):
        lines.append(f"{_fmt(x)},{_fmt(u)},{_fmt(r)}")
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def read_profile(path) -> Dict[str, np.ndarray]:
    """Parse a profile file back into arrays (round-trip exact)."""
    text = Path(path).read_text().strip().splitlines()
    header = text[0].split(",")
    if header != ["x", "u", "curvature_residual"]:
        raise ValidationError(f"unexpected profile header {text[0]!r}")
    rows = [[float(v) for v in line.split(",")] for line in text[1:]]
    arr = np.array(rows)
    return {"x": arr[:, 0], "u": arr[:, 1], "curvature_residual": arr[:, 2]}


def _write_table(path, header: Sequence[str], rows) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, (int, float, np.floating)) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def _solve_levels(config: ScenarioConfig, datum, order) -> List[SolveReport]:
    reports = []
    warm = None
    for m in config.levels:
        grid = GridSpec(m, config.L)
        if warm is not None:
            coarse_x = reports[-1].grid.x[reports[-1].grid.interior_mask]
            fine_x = grid.x[grid.interior_mask]
            guess = np.interp(fine_x, coarse_x, warm)
            opts = config.solve_options(warm_start=guess)
        else:
            opts = config.solve_options()
        reports.append(solve(datum, grid, order, opts))
        warm = reports[-1].solution.interior_values
    return reports


def run_scenario(config: ScenarioConfig, out_dir: Optional[str] = None) -> RunReport:
    """Execute one scenario end to end and write its data files.

    Solver non-convergence marks the affected level failed but remaining
    levels are still attempted; validation errors abort.
    """
    t_start = time.perf_counter()
    out = Path(out_dir or config.out_dir)
    order = FractionalOrder(config.s)
    files: List[str] = []
    failures: List[str] = []
    summary: Dict = {
        "schema": SCHEMA_VERSION,
        "scenario": config.scenario,
        "config": {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(config).items()},
    }

    if config.scenario == "laplacian_boundary":
        rows = []
        worst = 0.0
        for s_val in config.laplacian_s_values:
            sigma = FractionalOrder(s_val).sigma
            f = lambda y, sg=sigma: float(max(y, 0.0) ** sg)
            for x in np.arange(1, 10) / 10.0:
                val = fractional_laplacian_1d(f, float(x), sigma, tol=1e-6, breakpoints=(0.0,))
                worst = max(worst, abs(val))
                rows.append((s_val, sigma, x, val))
        files.append(_write_table(out / "laplacian_table.csv", ["s", "sigma", "x", "value"], rows))
        summary["laplacian"] = {"max_abs": worst, "n_points": len(rows)}
        summary["verdict"] = "zero within tolerance" if worst <= 1e-4 else "NONZERO"
        ok = worst <= 1e-4
        if not ok:
            failures.append(f"fractional Laplacian zero-test failed: max |value| = {worst:g}")
    elif config.scenario == "barrier":
        params = BarrierParams(config.barrier_delta, config.barrier_slope, config.barrier_bend)
        samples = barrier_curvature_scan(order, params, config.ramp_distances, tol=config.curvature_tol)
        rows = []
        for dist, sample in zip(config.ramp_distances, samples):
            rows.append((dist, sample.point[0], sample.point[1], sample.value, sample.estimated_error))
        files.append(
            _write_table(
                out / "curvature_scan.csv",
                ["ramp_distance", "x", "y", "curvature", "estimated_error"],
                rows,
            )
        )
        corner_ok = all(
            (np.isneginf(sm.value) if d == 0.0 else sm.value < 0.0)
            for d, sm in zip(config.ramp_distances, samples)
        )
        summary["barrier"] = {
            "params": asdict(params),
            "corner_flag": next((str(sm.value) for d, sm in zip(config.ramp_distances, samples) if d == 0.0), None),
            "ramp_values": [sm.value for d, sm in zip(config.ramp_distances, samples) if d > 0.0],
        }
        summary["verdict"] = "negative near corner" if corner_ok else "SIGN CHECK FAILED"
        ok = corner_ok
        if not ok:
            failures.append("barrier curvature sign check failed")
    elif config.scenario == "generic_perturbation":
        datum = config.datum()
        phi = bump_profile(config.perturbation_center, config.perturbation_width, config.perturbation_height)
        grid = GridSpec(config.levels[0], config.L)
        sweep = perturbation_sweep(
            datum, phi, list(config.t_values), grid, order, config.solve_options(), levels=len(config.levels)
        )
        rows = []
        for e in sweep.entries:
            rows.append(
                (
                    e.t,
                    e.boundary_limit,
                    e.report.jump_left,
                    e.report.left.status,
                    e.report.jump_right,
                    e.report.right.status,
                    int(e.converged),
                )
            )
        files.append(
            _write_table(
                out / "sweep.csv",
                ["t", "boundary_limit", "jump_left", "status_left", "jump_right", "status_right", "converged"],
                rows,
            )
        )
        positive = all(e.boundary_limit > 0 for e in sweep.entries if e.t > 0)
        control_clean = abs(sweep.entries[0].boundary_limit) <= 1e-8
        summary["sweep"] = {
            "t_values": [e.t for e in sweep.entries],
            "boundary_limits": [e.boundary_limit for e in sweep.entries],
            "statuses": [e.report.left.status for e in sweep.entries],
            "nondecreasing": sweep.nondecreasing,
        }
        ok = positive and sweep.nondecreasing and control_clean
        summary["verdict"] = "perturbations push the wall limit up" if ok else "SWEEP CHECK FAILED"
        if not ok:
            failures.append("perturbation sweep positivity/monotonicity check failed")
    else:
        datum = config.datum()
        reports = _solve_levels(config, datum, order)
        level_info = []
        ok = True
        for rep in reports:
            name = out / f"profile_m{rep.grid.m}.csv"
            files.append(emit_profile(rep, name))
            info = {
                "m": rep.grid.m,
                "h": rep.grid.h,
                "converged": rep.converged,
                "iterations": rep.iterations,
                "final_gradient_norm": rep.final_gradient_norm,
                "max_el_residual": float(np.max(np.abs(rep.el_residuals))),
                "max_abs_u": float(np.max(np.abs(rep.solution.interior_values))),
                "energy": rep.energy,
            }
            if config.scenario == "linear":
                xi = rep.grid.x[rep.grid.interior_mask]
                line = config.linear_slope * xi + config.linear_intercept
                info["deviation_from_line"] = float(np.max(np.abs(rep.solution.interior_values - line)))
            level_info.append(info)
            if not rep.converged:
                ok = False
                failures.append(f"level m={rep.grid.m} did not converge ({rep.final_gradient_norm:g})")
        summary["levels"] = level_info
        if len(reports) >= 3 and all(r.converged for r in reports[:3]):
            stick = detect_stickiness(*reports[-3:])
            summary["stickiness"] = {
                "jump_left": stick.jump_left,
                "jump_right": stick.jump_right,
                "status_left": stick.left.status,
                "status_right": stick.right.status,
                "ratios_left": list(stick.left.refinement_ratios),
                "ratios_right": list(stick.right.refinement_ratios),
                "slope_first_node_left": stick.left.slope_first_node,
            }
            if stick.left.fitted_exponent is not None:
                summary["stickiness"]["exponent_left"] = asdict(stick.left.fitted_exponent)
            if stick.left.sticky:
                vprimes = []
                for rep in reports[-3:]:
                    try:
                        vprimes.append(inverse_parametrization(rep, "left").vprime_at_jump)
                    except NoVerticalWindowError:
                        vprimes.append(float("nan"))
                summary["stickiness"]["vprime_trend_left"] = vprimes
            summary["verdict"] = (
                "sticky" if (stick.left.sticky or stick.right.sticky) else stick.left.status
            )
        if config.scenario == "flat":
            worst = max(info["max_abs_u"] for info in level_info)
            summary["flat_max_abs_u"] = worst
            if worst > 1e-8:
                ok = False
                failures.append(f"flat datum did not stay identically zero (max |u| = {worst:g})")
        if config.scenario == "linear":
            for info in level_info:
                if info["deviation_from_line"] > 5.0 * info["h"]:
                    ok = False
                    failures.append(
                        f"linear solution deviates {info['deviation_from_line']:g} > 5h at m={info['m']}"
                    )

    summary["files"] = files
    summary["elapsed_seconds"] = time.perf_counter() - t_start
    out.mkdir(parents=True, exist_ok=True)
    summary_path = out / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, default=str) + "\n")
    files.append(str(summary_path))
    return RunReport(scenario=config.scenario, ok=ok, summary=summary, files=files, failures=failures)
