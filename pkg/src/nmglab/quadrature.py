"""Reusable 1-D quadrature: adaptive Gauss-Kronrod and weighted tail rules."""

from __future__ import annotations

import functools
import warnings

import numpy as np
from scipy import integrate as _integrate
from scipy import special as _sp

from .errors import QuadratureError

__all__ = ["adaptive_quadrature", "gauss_jacobi_unit"]


def adaptive_quadrature(f, a, b, tol, *, max_subdivisions: int = 400, breakpoints=None):
    """Integrate f over [a, b] to estimated absolute error <= tol.

    Endpoint singularities are allowed provided they are integrable.  The
    result is deterministic for fixed inputs.  Raises QuadratureError
    (carrying the partial estimate) if the subdivision budget is exhausted
    before the error estimate drops below tol.

    Parameters
    ----------
    f : callable
        Scalar integrand.
    a, b : float
        Integration limits; b may be numpy.inf.
    tol : float
        Absolute error target, > 0.
    max_subdivisions : int
        Subdivision budget handed to the adaptive rule.
    breakpoints : sequence of float, optional
        Interior points of reduced smoothness (kinks, jumps).
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    kwargs = dict(limit=max_subdivisions, epsabs=tol, epsrel=max(1e-13, tol * 1e-4))
    pts = None
    if breakpoints is not None:
        pts = [p for p in breakpoints if a < p < b]
        if pts and np.isfinite(b):
            kwargs["points"] = sorted(pts)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", category=_integrate.IntegrationWarning)
        if pts and not np.isfinite(b):
            cut = max(pts) + 1.0
            v1, e1 = _integrate.quad(f, a, cut, points=sorted(pts), **{k: v for k, v in kwargs.items() if k != "points"})
            v2, e2 = _integrate.quad(f, cut, b, **{k: v for k, v in kwargs.items() if k != "points"})
            value, err = v1 + v2, e1 + e2
        else:
            value, err = _integrate.quad(f, a, b, **kwargs)
    if not np.isfinite(value) or err > max(tol, 2e-15 * (1.0 + abs(value))):
        raise QuadratureError(
            f"quadrature did not reach tol={tol:g} (estimated error {err:g})",
            estimate=value,
            error=err,
        )
    return value


@functools.lru_cache(maxsize=256)
def gauss_jacobi_unit(n: int, s: float):
    """Nodes and weights for int_0^1 f(v) v^(s-1) dv ~= sum w_k f(v_k).

    Built from the Gauss-Jacobi rule with weight (1+x)^(s-1) on (-1, 1).
    Exact for f polynomial of degree <= 2n-1; the v^(s-1) endpoint weight is
    absorbed into the rule, so integrable endpoint singularities at 0 cost
    nothing.
    """
    x, w = _sp.roots_jacobi(n, 0.0, s - 1.0)
    v = 0.5 * (x + 1.0)
    wt = w * 2.0 ** (-s)
    v.setflags(write=False)
    wt.setflags(write=False)
    return v, wt
