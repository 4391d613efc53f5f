import numpy as np
import pytest
from scipy import integrate

import nmglab as g
from nmglab.quadrature import adaptive_quadrature, gauss_jacobi_unit


def test_constant_integrand():
    assert adaptive_quadrature(lambda t: 1.0, 0.0, 1.0, 1e-12) == pytest.approx(1.0, abs=1e-12)


def test_arctangent():
    val = adaptive_quadrature(lambda t: 1.0 / (1.0 + t * t), 0.0, 1.0, 1e-10)
    assert val == pytest.approx(np.pi / 4, abs=1e-10)


def test_integrable_endpoint_singularity():
    val = adaptive_quadrature(lambda t: t ** -0.5, 0.0, 1.0, 1e-8)
    assert val == pytest.approx(2.0, abs=1e-8)


def test_infinite_upper_limit():
    val = adaptive_quadrature(lambda t: np.exp(-t), 0.0, np.inf, 1e-10)
    assert val == pytest.approx(1.0, abs=1e-10)


def test_breakpoints_help_kinks():
    f = lambda t: abs(t - 0.3) ** 0.5
    want, _ = integrate.quad(f, 0, 1, points=[0.3], limit=200, epsabs=1e-13)
    val = adaptive_quadrature(f, 0.0, 1.0, 1e-10, breakpoints=[0.3])
    assert val == pytest.approx(want, abs=1e-10)


def test_budget_exhaustion_carries_partial_estimate():
    # violently oscillatory integrand with a starved subdivision budget
    f = lambda t: np.sin(1.0 / (t + 1e-8)) / (t + 1e-8) ** 0.5
    with pytest.raises(g.QuadratureError) as info:
        adaptive_quadrature(f, 0.0, 1.0, 1e-13, max_subdivisions=3)
    assert info.value.estimate is not None
    assert np.isfinite(info.value.estimate)
    assert info.value.error > 1e-13


def test_deterministic():
    f = lambda t: np.sin(3 * t) * t ** -0.25
    a = adaptive_quadrature(f, 0.0, 2.0, 1e-10)
    b = adaptive_quadrature(f, 0.0, 2.0, 1e-10)
    assert a == b


def test_tol_validation():
    with pytest.raises(ValueError):
        adaptive_quadrature(lambda t: t, 0.0, 1.0, 0.0)


def test_gauss_jacobi_unit_weighted_rule():
    # int_0^1 v^(s-1) cos(v) dv against adaptive quadrature
    for s in (0.1, 0.5, 0.9):
        v, w = gauss_jacobi_unit(24, s)
        approx = float(np.sum(w * np.cos(v)))
        want, _ = integrate.quad(lambda x: x ** (s - 1) * np.cos(x), 0, 1, epsabs=1e-14, limit=200)
        assert approx == pytest.approx(want, rel=1e-12)
        # plain moment: int v^(s-1) dv = 1/s
        assert float(np.sum(w)) == pytest.approx(1.0 / s, rel=1e-12)
