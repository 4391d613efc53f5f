import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

import nmglab as g
from nmglab import FractionalOrder, kernel_derivative, kernel_double_primitive, kernel_primitive

orders = st.floats(min_value=0.02, max_value=0.98)
ts = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)


def test_order_validation():
    for bad in (0.0, 1.0, -0.3, 1.7, float("nan")):
        with pytest.raises(g.ValidationError):
            FractionalOrder(bad)
    o = FractionalOrder(0.25)
    assert 0.5 < o.sigma < 1.0
    assert o.sigma == 0.625


def test_g_infinity_matches_beta_form_and_quadrature():
    # closed Beta form vs direct quadrature of the improper integral
    for s in (0.1, 0.25, 0.5, 0.75, 0.9):
        o = FractionalOrder(s)
        closed = 0.5 * np.sqrt(np.pi) * special.gamma((1 + s) / 2) / special.gamma((2 + s) / 2)
        assert abs(o.g_infinity - closed) / closed <= 1e-9
        quadr, _ = integrate.quad(lambda t: (1 + t * t) ** (-(2 + s) / 2), 0, np.inf, epsabs=1e-13)
        assert abs(o.g_infinity - quadr) / quadr <= 1e-10


def test_primitive_trivial_values():
    o = FractionalOrder(0.5)
    assert kernel_primitive(o, 0.0) == 0.0
    assert kernel_primitive(o, -2.0) == -kernel_primitive(o, 2.0)
    # G(+inf) = (sqrt(pi)/2)*Gamma(0.75)/Gamma(1.25) at s = 0.5
    closed = 0.5 * np.sqrt(np.pi) * special.gamma(0.75) / special.gamma(1.25)
    assert kernel_primitive(o, np.inf) == pytest.approx(closed, rel=1e-12)
    assert kernel_primitive(o, -np.inf) == pytest.approx(-closed, rel=1e-12)


def test_primitive_matches_direct_quadrature():
    for s, t in ((0.5, 0.3), (0.5, 7.5), (0.1, 20.0), (0.9, 0.01), (0.3, 123.0)):
        o = FractionalOrder(s)
        want, _ = integrate.quad(lambda tau: (1 + tau * tau) ** (-(2 + s) / 2), 0, t, epsabs=1e-14, limit=300)
        assert kernel_primitive(o, t) == pytest.approx(want, rel=1e-10)


@settings(max_examples=300, deadline=None)
@given(orders, ts)
def test_oddness_exact(s, t):
    o = FractionalOrder(s)
    assert kernel_primitive(o, -t) == -kernel_primitive(o, t)


def test_oddness_thousand_samples(rng):
    ss = rng.uniform(0.02, 0.98, 1000)
    tt = rng.uniform(-80, 80, 1000)
    for s, t in zip(ss, tt):
        o = FractionalOrder(s)
        assert kernel_primitive(o, -t) == -kernel_primitive(o, t)


@settings(max_examples=200, deadline=None)
@given(orders, st.floats(min_value=-20, max_value=20), st.floats(min_value=1e-6, max_value=5.0))
def test_monotone_saturation(s, t1, gap):
    o = FractionalOrder(s)
    t2 = t1 + gap
    g1, g2 = kernel_primitive(o, t1), kernel_primitive(o, t2)
    assert g1 < g2 <= o.g_infinity


@settings(max_examples=200, deadline=None)
@given(orders, st.floats(min_value=-8, max_value=8), st.floats(min_value=-8, max_value=8))
def test_double_primitive_convexity(s, a, b):
    o = FractionalOrder(s)
    mid = kernel_double_primitive(o, 0.5 * (a + b))
    assert mid <= 0.5 * (kernel_double_primitive(o, a) + kernel_double_primitive(o, b)) + 1e-12


def test_double_primitive_trivial_values():
    o = FractionalOrder(0.3)
    assert kernel_double_primitive(o, 0.0) == 0.0
    assert kernel_double_primitive(o, -1.0) == kernel_double_primitive(o, 1.0)


def test_double_primitive_against_bruteforce_oracle():
    # brute-force double quadrature, scripts/derive_constants.py
    assert kernel_double_primitive(FractionalOrder(0.3), 10.0) == pytest.approx(
        11.104155181944122, rel=1e-10
    )


def test_double_primitive_linear_growth_constant():
    # GG(t) ~ g_inf*t - c(s); c recorded from the brute-force oracle
    o = FractionalOrder(0.3)
    c_oracle = 2.0489945324451995  # 10*g_inf - GG(10), scripts/derive_constants.py
    assert 10.0 * o.g_infinity - kernel_double_primitive(o, 10.0) == pytest.approx(c_oracle, rel=1e-9)


def test_derivative_consistency_central_difference(rng):
    # GG' == G and G' == kernel_derivative by central differences on |t| <= 10
    for s in (0.15, 0.5, 0.85):
        o = FractionalOrder(s)
        t = rng.uniform(-10, 10, 200)
        eps = 1e-6
        fd = (kernel_double_primitive(o, t + eps) - kernel_double_primitive(o, t - eps)) / (2 * eps)
        assert np.max(np.abs(fd - kernel_primitive(o, t))) <= 1e-7
        fd2 = (kernel_primitive(o, t + eps) - kernel_primitive(o, t - eps)) / (2 * eps)
        assert np.max(np.abs(fd2 - kernel_derivative(o, t))) <= 1e-7


def test_vectorized_matches_scalar():
    o = FractionalOrder(0.4)
    t = np.array([-3.0, -0.5, 0.0, 0.7, 12.0])
    vec = kernel_primitive(o, t)
    for i, ti in enumerate(t):
        assert vec[i] == kernel_primitive(o, float(ti))
