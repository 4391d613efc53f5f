"""Discrete convex fractional-area functional and its exact gradient.

The renormalized functional over a grid with interior unknowns u_i is

    F(u) = sum over unordered node pairs {i, j}, at least one interior, of
           W_i W_j GG((u_i - u_j)/|x_i - x_j|) |x_i - x_j|^(-s)
         + sum over interior i of W_i E_tail(x_i, u_i),

with trapezoid node weights W (h, halved at the two extreme nodes) and
analytic tail energies for the interaction with the line beyond +-L,
renormalized against the datum's asymptote so every term is finite.
Exterior-exterior pairs are constants of the minimization and are dropped.

The gradient is exact by construction: the tail energy is defined as the
antiderivative of the tail of the curvature integral evaluated on the same
Gauss-Jacobi nodes, so differentiation and discretization commute, and the
pair part shares its node set with the discrete curvature.
"""

from __future__ import annotations

import numpy as np

from .domain import DiscreteGraph, ExteriorDatum, GridSpec
from .kernels import (
    FractionalOrder,
    kernel_derivative,
    kernel_double_primitive,
    kernel_primitive,
)
from .quadrature import gauss_jacobi_unit

__all__ = ["PairSystem", "discrete_energy", "energy_gradient", "energy_hessian"]

_N_TAIL = 24


class PairSystem:
    """Precomputed pairwise geometry for one (grid, order, datum) triple.

    Heavy O(N^2) arrays (distances and their powers, weights) and the
    per-node Gauss-Jacobi tail data are built once; energy, gradient, and
    Hessian evaluations on interior vectors are then pure array work.
    """

    def __init__(self, grid: GridSpec, order: FractionalOrder, datum: ExteriorDatum, n_tail: int = _N_TAIL):
        self.grid = grid
        self.order = order
        self.datum = datum
        s = order.s
        x = grid.x
        self.x = x
        self.node_weights = grid.node_weights
        self.interior = grid.interior_mask
        self.int_idx = grid.interior_indices
        xi = x[self.interior]
        self.xi = xi
        self.exterior_values = datum.sample(x)

        d = np.abs(xi[:, None] - x[None, :])
        self.self_mask = d < 0.5 * grid.h
        d_safe = np.where(self.self_mask, 1.0, d)
        self.d = d_safe
        self.inv_d = 1.0 / d_safe
        self.d_ms = np.where(self.self_mask, 0.0, d_safe ** (-s))
        self.d_m1s = np.where(self.self_mask, 0.0, d_safe ** (-(1.0 + s)))
        self.d_m2s = np.where(self.self_mask, 0.0, d_safe ** (-(2.0 + s)))
        self.wi = self.node_weights[self.interior][:, None]
        self.wj = self.node_weights[None, :]
        self.wij = self.wi * self.wj

        # tail data: for interior node i and Jacobi node k on side +-,
        # argument(u) = (u - datum_asymptote(y_ik)) * v_k / r0_i
        v, wt = gauss_jacobi_unit(n_tail, s)
        self.tail_v = v
        self.tail_w = wt
        self.tails = []
        for side, sgn in (("left", -1.0), ("right", +1.0)):
            asym = datum.asymptote_for_side(side)
            r0 = (grid.L - sgn * xi)  # distance from node to the truncation edge
            y = xi[:, None] + sgn * r0[:, None] / v[None, :]
            far_vals = asym.value(y)
            ref_vals = asym.value(xi)[:, None]
            coef = v[None, :] / r0[:, None]
            self.tails.append(
                dict(
                    r0=r0,
                    coef=coef,
                    offset=-far_vals * coef,  # argument(u) = u*coef + offset
                    ref_arg=(ref_vals - far_vals) * coef,
                    r0_ms=r0 ** (-s),
                    r0_m1s=r0 ** (-(1.0 + s)),
                    r0_1ms=r0 ** (1.0 - s),
                )
            )

    # -- full-vector assembly ------------------------------------------------

    def _pair_args(self, u_int: np.ndarray):
        u_all = self.exterior_values.copy()
        u_all[self.interior] = u_int
        return (u_int[:, None] - u_all[None, :]) * self.inv_d

    def energy(self, u_int: np.ndarray) -> float:
        order = self.order
        t = self._pair_args(u_int)
        m = self.wij * kernel_double_primitive(order, t) * self.d_ms
        m[self.self_mask] = 0.0
        val = float(m.sum() - 0.5 * m[:, self.interior].sum())
        w_int = self.node_weights[self.interior]
        for tail in self.tails:
            arg = u_int[:, None] * tail["coef"] + tail["offset"]
            gg = kernel_double_primitive(order, arg) - kernel_double_primitive(order, tail["ref_arg"])
            val += float(np.sum(w_int * tail["r0_1ms"] * np.sum(self.tail_w[None, :] * gg / self.tail_v[None, :], axis=1)))
        return val

    def gradient(self, u_int: np.ndarray) -> np.ndarray:
        order = self.order
        t = self._pair_args(u_int)
        g = np.sum(self.wj * kernel_primitive(order, t) * self.d_m1s, axis=1)
        g += self.tail_gradient(u_int)
        return g * self.node_weights[self.interior]

    def tail_gradient(self, u_int: np.ndarray) -> np.ndarray:
        """Tail part of the curvature integrand sum (per unit node weight)."""
        order = self.order
        out = np.zeros_like(u_int)
        for tail in self.tails:
            arg = u_int[:, None] * tail["coef"] + tail["offset"]
            out += tail["r0_ms"] * np.sum(self.tail_w[None, :] * kernel_primitive(order, arg), axis=1)
        return out

    def tail_gradient_at(self, x: float, u: float) -> float:
        """Tail integral for curvature at an arbitrary grid node (x, u)."""
        order = self.order
        s = order.s
        total = 0.0
        v, wt = self.tail_v, self.tail_w
        for side, sgn in (("left", -1.0), ("right", +1.0)):
            asym = self.datum.asymptote_for_side(side)
            r0 = self.grid.L - sgn * x
            if r0 <= 0:
                continue
            y = x + sgn * r0 / v
            arg = (u - asym.value(y)) * v / r0
            total += r0 ** (-s) * float(np.sum(wt * kernel_primitive(order, arg)))
        return total

    def hessian_diag(self, u_int: np.ndarray) -> np.ndarray:
        order = self.order
        t = self._pair_args(u_int)
        gp = kernel_derivative(order, t) * self.d_m2s
        gp[self.self_mask] = 0.0
        diag = np.sum(self.wj * gp, axis=1)
        for tail in self.tails:
            arg = u_int[:, None] * tail["coef"] + tail["offset"]
            diag += tail["r0_m1s"] * np.sum(self.tail_w[None, :] * self.tail_v[None, :] * kernel_derivative(order, arg), axis=1)
        return diag * self.node_weights[self.interior]

    def hessian(self, u_int: np.ndarray) -> np.ndarray:
        order = self.order
        t = self._pair_args(u_int)
        gp = kernel_derivative(order, t) * self.d_m2s
        gp[self.self_mask] = 0.0
        w_gp = self.wij * gp
        diag = w_gp.sum(axis=1)
        for tail in self.tails:
            arg = u_int[:, None] * tail["coef"] + tail["offset"]
            diag += self.node_weights[self.interior] * tail["r0_m1s"] * np.sum(
                self.tail_w[None, :] * self.tail_v[None, :] * kernel_derivative(order, arg), axis=1
            )
        H = -w_gp[:, self.int_idx]
        n = u_int.size
        H[np.arange(n), np.arange(n)] = diag
        return H

    def pair_term_matrix(self, u_int: np.ndarray) -> np.ndarray:
        """Weighted pair energies (debug/oracle hook); self entries zero."""
        t = self._pair_args(u_int)
        m = self.wij * kernel_double_primitive(self.order, t) * self.d_ms
        m[self.self_mask] = 0.0
        return m


def discrete_energy(graph: DiscreteGraph) -> float:
    """F(u) for the graph's current values; finite and deterministic."""
    return graph.system().energy(graph.interior_values)


def energy_gradient(graph: DiscreteGraph) -> np.ndarray:
    """Exact gradient of discrete_energy with respect to the interior values."""
    return graph.system().gradient(graph.interior_values)


def energy_hessian(graph: DiscreteGraph) -> np.ndarray:
    """Dense Hessian of discrete_energy (interior x interior); SPD by convexity."""
    return graph.system().hessian(graph.interior_values)
