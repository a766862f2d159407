"""Spatial discretization: assemble dQ/dt from the current state.

Cell averages evolve by the plain flux difference of the shared
interface values.  Higher moments integrate the flux against the
moment weight by parts: the boundary terms again use the shared
interface values, the volume term is evaluated by Gauss quadrature
(exact for linear fluxes, one extra node otherwise).

Interface values evolve by upwinded derivative formulas.  In 1-d the
two one-sided reconstruction derivatives at an interface are either
blended with a fixed weight (1+alpha)/2, (1-alpha)/2 and multiplied by
the local Jacobian, or routed through the Jacobian split J+ D+ + J- D-
(the sign-adaptive choice; for systems this is the only supported
form).  For scalar Burgers an exact-integration point update is also
available, which integrates the test function against the derivative
of the quadratic flux in closed form.

In 2-d the edge and node stencils come from the pairing tables of the
constructed test functions (see element2d): the same weights consume
x-derivatives for the x-flux part and y-derivatives for the y-flux
part.  Assembly is vectorized: per call, the nine rolled dof arrays
are stacked once and every needed one-sided derivative field is one
tensor contraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from afpg.element1d import Element1D, build_element
from afpg.element2d import (
    DOF_IDS,
    Element2D,
    _transpose_table,
    build_element_2d,
    dof_point,
    edge_pairing_table,
    node_pairing_table,
)
from afpg.grid import Grid1D, Grid2D, State1D, State2D, _dof_gather_1d, _dof_gather_2d
from afpg.poly import diff2, gauss_rule

__all__ = [
    "Upwind1D",
    "Upwind2D",
    "choose_alpha",
    "rhs_1d",
    "rhs_point_burgers",
    "rhs_2d",
]


@dataclass(frozen=True)
class Upwind1D:
    """Interface upwinding policy: sign-adaptive, or a fixed alpha."""

    mode: str = "adaptive"
    alpha: float = 0.0

    def __post_init__(self):
        if self.mode not in ("adaptive", "fixed"):
            raise ValueError(f"unknown upwind mode {self.mode!r}")
        if abs(self.alpha) > 1.0:
            raise ValueError("alpha must lie in [-1, 1]")


@dataclass(frozen=True)
class Upwind2D:
    """Edge and node upwinding policy plus the extra stabilization weights.

    In adaptive mode the edge weight alpha3 follows the sign of the
    normal wave speed and the node weight beta follows sign/2 per
    direction; fixed mode uses the stored values for both directions.
    The stabilization weights (alpha1/alpha2 on edges, the eight node
    weights) default to zero and are exposed for experiments.
    """

    mode: str = "adaptive"
    alpha3: float = 0.0
    beta: float = 0.0
    edge_alpha1: float = 0.0
    edge_alpha2: float = 0.0
    node_alphas: tuple = (0.0,) * 8

    def __post_init__(self):
        if self.mode not in ("adaptive", "fixed"):
            raise ValueError(f"unknown upwind mode {self.mode!r}")
        if abs(self.alpha3) > 1.0:
            raise ValueError("alpha3 must lie in [-1, 1]")
        if abs(self.beta) > 0.5:
            raise ValueError("beta must lie in [-1/2, 1/2]")
        if len(self.node_alphas) != 8:
            raise ValueError("node_alphas must hold 8 values")


def choose_alpha(model, q):
    """Sign-adaptive upwind weight: sgn of the wave speed, with sgn(0) = 0."""
    return np.sign(model.jac(q))


class _Tables1D:
    def __init__(self, k: int):
        element = build_element(k)
        basis = element.basis()
        self.k = k
        self.d_right = np.array([float(b.deriv()(0.5)) for b in basis])
        self.d_left = np.array([float(b.deriv()(-0.5)) for b in basis])
        self.moment_rules = {}
        for n in (k + 1, k + 2):
            rule = gauss_rule(n)
            xi, w = rule.nodes_array, rule.weights_array
            basis_vals = np.array(
                [np.polynomial.polynomial.polyval(xi, b.float_coeffs) for b in basis]
            )
            weight_derivs = []
            for mw in element.moment_weights[1:]:
                dpoly = mw.poly.deriv()
                weight_derivs.append(
                    w * np.polynomial.polynomial.polyval(xi, dpoly.float_coeffs)
                )
            self.moment_rules[n] = (basis_vals, weight_derivs)


@lru_cache(maxsize=None)
def _tables_1d(k: int) -> _Tables1D:
    return _Tables1D(k)


def _eval_at_nodes(dofs, basis_vals):
    if dofs.ndim == 2:
        return np.einsum("ns,sg->ng", dofs, basis_vals)
    return np.einsum("nsm,sg->ngm", dofs, basis_vals)


def rhs_1d(state: State1D, grid: Grid1D, element: Element1D, model, upwind: Upwind1D,
           point_update: str = "split") -> State1D:
    """Spatial right-hand side of the 1-d semi-discrete scheme.

    ``point_update`` selects the interface-value formula: "split" is
    the Jacobian-split / alpha-blend form, "exact" the closed-form
    exact integration (Burgers only, K = 2).
    """
    k = state.k
    if k != element.k:
        raise ValueError("state and element degree disagree")
    if state.points.shape[0] != grid.n:
        raise ValueError("state size does not match grid")
    if not state.all_finite():
        raise ValueError("state contains non-finite values")
    if point_update not in ("split", "exact"):
        raise ValueError(f"unknown point update {point_update!r}")

    tab = _tables_1d(k)
    dx = grid.dx
    pts = state.points
    f_right = np.asarray(model.flux(pts), dtype=float)
    f_left = np.roll(f_right, 1, axis=0)

    d_moments = np.empty_like(state.moments)
    d_moments[:, 0] = -(f_right - f_left) / dx

    if k > 2:
        n_rule = k + 1 if model.is_linear else k + 2
        basis_vals, weight_derivs = tab.moment_rules[n_rule]
        dofs = _dof_gather_1d(state)
        qg = _eval_at_nodes(dofs, basis_vals)
        fg = np.asarray(model.flux(qg), dtype=float)
        for idx, wd in enumerate(weight_derivs):
            kk = idx + 1
            boundary_plus = kk + 1.0
            boundary_minus = (kk + 1.0) * (-1.0) ** kk
            vol = np.tensordot(fg, wd, axes=([1], [0]))
            d_moments[:, kk] = -(boundary_plus * f_right - boundary_minus * f_left - vol) / dx

    if point_update == "exact":
        if model.name != "burgers":
            raise ValueError("exact-integration point update is Burgers-only")
        d_points = rhs_point_burgers(state, grid, upwind)
    else:
        dofs = _dof_gather_1d(state)
        d_from_left = np.tensordot(dofs, tab.d_right, axes=([1], [0])) / dx
        d_from_right = np.roll(
            np.tensordot(dofs, tab.d_left, axes=([1], [0])) / dx, -1, axis=0
        )
        if model.m == 1:
            if upwind.mode == "fixed":
                a = upwind.alpha
                blend = 0.5 * (1.0 + a) * d_from_left + 0.5 * (1.0 - a) * d_from_right
                d_points = -np.asarray(model.jac(pts), dtype=float) * blend
            else:
                jac = np.asarray(model.jac(pts), dtype=float)
                d_points = -(
                    np.maximum(jac, 0.0) * d_from_left + np.minimum(jac, 0.0) * d_from_right
                )
        else:
            if upwind.mode == "fixed":
                raise ValueError("fixed-alpha updates apply to scalar models only")
            d_points = -(d_from_left @ model.jac_plus.T + d_from_right @ model.jac_minus.T)

    return State1D(k, d_points, d_moments)


def rhs_point_burgers(state: State1D, grid: Grid1D, upwind: Upwind1D) -> np.ndarray:
    """Exact-integration interface update for Burgers, K = 2.

    The pairing of the interface test function with the derivative of
    the quadratic flux of the reconstruction integrates in closed form;
    both one-sided contributions are quadratic in the local dofs.
    """
    if state.k != 2:
        raise ValueError("the exact-integration Burgers update needs K = 2")
    pts = state.points
    avg = state.moments[:, 0]
    q_left = np.roll(pts, 1, axis=0)  # value at interface i-1/2
    q_mid = pts  # value at interface i+1/2
    q_right = np.roll(pts, -1, axis=0)  # value at interface i+3/2
    avg_l = avg  # average of cell i
    avg_r = np.roll(avg, -1, axis=0)  # average of cell i+1
    dx = grid.dx

    if upwind.mode == "adaptive":
        alpha = np.sign(q_mid)
    else:
        alpha = upwind.alpha

    left_part = (
        -9.0 * (q_left - 2.0 * avg_l) ** 2
        + 2.0 * (q_left - 12.0 * avg_l) * q_mid
        + 31.0 * q_mid**2
    ) / (10.0 * dx)
    right_part = (
        9.0 * (q_right - 2.0 * avg_r) ** 2
        - 2.0 * (q_right - 12.0 * avg_r) * q_mid
        - 31.0 * q_mid**2
    ) / (10.0 * dx)
    return -(0.5 * (1.0 + alpha) * left_part + 0.5 * (1.0 - alpha) * right_part)


@lru_cache(maxsize=1)
def _deriv_coeff_tables():
    """Per-axis derivative of each basis function at the 8 boundary dofs."""
    element = build_element_2d()
    out = {}
    for axis in ("x", "y"):
        derivs = [diff2(element.basis[dof], axis) for dof in DOF_IDS]
        for pt in DOF_IDS:
            if pt == (0, 0):
                continue
            xi, eta = dof_point(pt)
            out[(axis, pt)] = np.array([float(d(xi, eta)) for d in derivs])
    return out


def _float_terms(table):
    return tuple(
        (off, dof, float(w))
        for off, row in table.items()
        for dof, w in row.items()
        if dof != (0, 0) and w != 0
    )


@lru_cache(maxsize=128)
def _stencil_terms_2d(a3x, a3y, beta_x, beta_y, edge_a1, edge_a2, node_extra):
    edge_x = edge_pairing_table((edge_a1, edge_a2, a3x))
    edge_y = _transpose_table(edge_pairing_table((edge_a1, edge_a2, a3y)))
    node = node_pairing_table((*node_extra, 2.0 * beta_y, 0.5 * beta_x, 0.5 * beta_x))
    return _float_terms(edge_x), _float_terms(edge_y), _float_terms(node)


def rhs_2d(state: State2D, grid: Grid2D, element: Element2D, model, upwind: Upwind2D) -> State2D:
    """Spatial right-hand side of the 2-d semi-discrete scheme (K = 2).

    Supports scalar linear models.  Average fluxes integrate the edge
    trace with Simpson weights (exact, the trace is a quadratic); edge
    and node values use the pairing-table stencils.
    """
    if getattr(model, "dim", 0) != 2 or model.m != 1:
        raise ValueError("rhs_2d needs a two-dimensional scalar model")
    if not model.is_linear:
        raise ValueError("nonlinear 2-d models are not supported")
    if state.averages.shape != (grid.nx, grid.ny):
        raise ValueError("state size does not match grid")
    if not state.all_finite():
        raise ValueError("state contains non-finite values")

    ax, ay = model.ax, model.ay
    if upwind.mode == "adaptive":
        a3x, a3y = float(np.sign(ax)), float(np.sign(ay))
        beta_x, beta_y = 0.5 * np.sign(ax), 0.5 * np.sign(ay)
    else:
        a3x = a3y = upwind.alpha3
        beta_x = beta_y = upwind.beta
    terms_edge_x, terms_edge_y, terms_node = _stencil_terms_2d(
        a3x, a3y, beta_x, beta_y,
        upwind.edge_alpha1, upwind.edge_alpha2, tuple(upwind.node_alphas),
    )

    dx, dy = grid.dx, grid.dy
    stack = _dof_gather_2d(state)
    coeff = _deriv_coeff_tables()
    cache = {}

    def deriv_field(axis, pt):
        key = (axis, pt)
        if key not in cache:
            scale = dx if axis == "x" else dy
            cache[key] = np.tensordot(coeff[key], stack, axes=([0], [0])) / scale
        return cache[key]

    def stencil_field(terms, axis):
        total = None
        for off, pt, w in terms:
            arr = deriv_field(axis, pt)
            if off != (0, 0):
                arr = np.roll(arr, (-off[0], -off[1]), axis=(0, 1))
            total = w * arr if total is None else total + w * arr
        return total

    nd, ex, ey = state.nodes, state.edge_x, state.edge_y
    f_mean_x = (
        model.flux_x(np.roll(nd, 1, axis=1)) + 4.0 * model.flux_x(ex) + model.flux_x(nd)
    ) / 6.0
    g_mean_y = (
        model.flux_y(np.roll(nd, 1, axis=0)) + 4.0 * model.flux_y(ey) + model.flux_y(nd)
    ) / 6.0
    d_avg = -(
        (f_mean_x - np.roll(f_mean_x, 1, axis=0)) / dx
        + (g_mean_y - np.roll(g_mean_y, 1, axis=1)) / dy
    )

    d_edge_x = -(ax * stencil_field(terms_edge_x, "x") + ay * stencil_field(terms_edge_x, "y"))
    d_edge_y = -(ax * stencil_field(terms_edge_y, "x") + ay * stencil_field(terms_edge_y, "y"))
    d_nodes = -(ax * stencil_field(terms_node, "x") + ay * stencil_field(terms_node, "y"))

    return State2D(d_avg, d_edge_x, d_edge_y, d_nodes)


def edge_trace_mean_flux(lower, mid, upper, flux, exact_quadratic=True):
    """Mean of the flux of a quadratic edge trace from its three values.

    Simpson weights integrate the trace exactly when the flux is
    linear; otherwise a 3-point Gauss rule on the interpolated trace is
    used (degree-5 exact, enough for a quadratic flux of a quadratic
    trace).
    """
    if exact_quadratic:
        return (flux(lower) + 4.0 * flux(mid) + flux(upper)) / 6.0
    rule = gauss_rule(3)
    s = rule.nodes_array  # in [-1/2, 1/2] along the edge
    w = rule.weights_array
    total = 0.0
    for sv, wv in zip(s, w):
        # quadratic through (-1/2, lower), (0, mid), (1/2, upper)
        val = (
            lower * (2.0 * sv**2 - sv)
            + mid * (1.0 - 4.0 * sv**2)
            + upper * (2.0 * sv**2 + sv)
        )
        total = total + wv * flux(val)
    return total
