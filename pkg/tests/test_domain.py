import numpy as np
import pytest

import nmglab as g
from nmglab.domain import Asymptote


def test_gridspec_basic():
    grid = g.GridSpec(16, 4.0)
    assert grid.h == 1 / 16
    assert grid.x[0] == -4.0 and grid.x[-1] == 4.0
    assert 0.0 in grid.x and 1.0 in grid.x
    assert grid.n_interior == 15
    assert grid.interior_indices.size == 15
    xi = grid.x[grid.interior_mask]
    assert xi[0] == grid.h and xi[-1] == 1 - grid.h


def test_gridspec_validation():
    with pytest.raises(g.ValidationError):
        g.GridSpec(1, 4.0)
    with pytest.raises(g.ValidationError):
        g.GridSpec(16, 0.5)
    with pytest.raises(g.ValidationError):
        g.GridSpec(16, 4.03)  # L not a multiple of h
    g.GridSpec(16, 4.25)  # 4.25*16 = 68: fine


def test_gridspec_weights_and_index():
    grid = g.GridSpec(8, 2.0)
    w = grid.node_weights
    assert w[0] == grid.h / 2 and w[-1] == grid.h / 2
    assert np.all(w[1:-1] == grid.h)
    assert grid.index_of(0.0) == 16
    assert grid.index_of(1.0) == 24
    with pytest.raises(g.ValidationError):
        grid.index_of(0.3)


def test_asymptote_classes():
    c = Asymptote.constant(2.0)
    assert np.all(c.value(np.array([-5.0, 7.0])) == 2.0)
    l = Asymptote.linear(2.0, 3.0)
    assert l.value(np.array([-1.0]))[0] == 1.0
    p = Asymptote.power(3.0, 0.5, 1.0)
    assert p.value(np.array([-4.0]))[0] == pytest.approx(7.0)
    with pytest.raises(g.ValidationError):
        Asymptote("cubic")
    with pytest.raises(g.ValidationError):
        Asymptote.power(1.0, 2.5)


def test_datum_validation_catches_asymptote_mismatch():
    bad = g.ExteriorDatum(
        evaluate=lambda x: np.asarray(x, float) * 0.0 + 0.1,  # constant 0.1
        left_limit=0.1,
        right_limit=0.1,
        asymptote_left=Asymptote.constant(0.0),  # claims 0 far away
        asymptote_right=Asymptote.constant(0.1),
        name="bad",
    )
    with pytest.raises(g.ValidationError):
        bad.validate_against(4.0)
    g.flat_datum(0.3).validate_against(4.0)
    g.linear_datum(1.5, -0.2).validate_against(4.0)
    g.two_bump_datum(0.5, 0.25).validate_against(4.0)


def test_bump_profile_support_and_smoothness():
    phi = g.bump_profile(-1.0, 0.5, 2.0)
    x = np.linspace(-3, 2, 2001)
    vals = phi(x)
    assert np.all(vals >= 0)
    assert vals[np.abs(x + 1.0) >= 0.5].max() == 0.0
    assert phi(np.array([-1.0]))[0] == 2.0
    # C^1 across the support edge: finite differences stay small
    eps = 1e-6
    edge = -0.5
    fd = (phi(np.array([edge + eps]))[0] - phi(np.array([edge - eps]))[0]) / (2 * eps)
    assert abs(fd) < 1e-4


def test_two_bump_symmetry_and_limits():
    datum = g.two_bump_datum(0.5, 0.25)
    x = np.linspace(-2, 3, 1501)
    mask = (x <= 0) | (x >= 1)
    vals = datum.evaluate(x)
    flipped = datum.evaluate(1.0 - x)
    assert np.max(np.abs(vals[mask] - flipped[mask])) < 1e-14
    assert datum.left_limit == 0.0 and datum.right_limit == 0.0


def test_discrete_graph_freezes_exterior():
    grid = g.GridSpec(16, 4.0)
    order = g.FractionalOrder(0.5)
    datum = g.two_bump_datum(0.5, 0.25)
    graph = g.DiscreteGraph.from_datum(grid, order, datum)
    ext = ~grid.interior_mask
    assert np.array_equal(graph.values[ext], datum.sample(grid.x)[ext])
    assert np.all(graph.values[grid.interior_mask] == 0.0)
    graph2 = graph.with_interior(np.ones(grid.n_interior))
    assert np.all(graph2.interior_values == 1.0)
    assert np.array_equal(graph2.values[ext], graph.values[ext])
    with pytest.raises(g.ValidationError):
        graph.with_interior(np.ones(3))
    with pytest.raises(g.ValidationError):
        graph.with_interior(np.full(grid.n_interior, np.nan))


def test_perturbed_datum_limits():
    base = g.flat_datum(0.0)
    phi = g.bump_profile(-1.0, 0.5, 1.0)
    d = g.perturbed_datum(base, phi, 0.3)
    assert d.left_limit == 0.0
    assert d.evaluate(np.array([-1.0]))[0] == pytest.approx(0.3)
    with pytest.raises(g.ValidationError):
        g.perturbed_datum(base, phi, -0.1)


def test_power_datum_round_trip():
    d = g.power_datum(1.0, 2.0)
    d.validate_against(4.0)
    assert d.evaluate(np.array([-2.0]))[0] == 4.0
    assert d.right_limit == 1.0
