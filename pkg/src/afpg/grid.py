"""Periodic Cartesian meshes and degree-of-freedom storage.

Shared interface values are stored exactly once.  In 1-d, ``points[i]``
is the value at the interface to the right of cell i and
``moments[i, k]`` the k-th moment of cell i (k = 0 is the average).
In 2-d, ``edge_x[i, j]`` holds the midpoint value of the right edge of
cell (i, j), ``edge_y[i, j]`` of its top edge and ``nodes[i, j]`` its
top-right corner.  All index arithmetic is modulo the grid size.

Scalar problems use plain (N,) and (Nx, Ny) arrays; constant-coefficient
linear systems append a trailing component axis.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from afpg.element1d import Element1D
from afpg.poly import gauss_rule

__all__ = [
    "Grid1D",
    "Grid2D",
    "State1D",
    "State2D",
    "project_initial",
    "total_mass",
    "error_norms",
    "write_state_csv",
]

# Gauss points per axis used to project initial data; generous so the
# projection error for smooth data sits well below the scheme error.
_PROJECT_RULE_MARGIN = 6
# Gauss points per axis used for error norms.
_NORM_RULE_MARGIN = 2


@dataclass(frozen=True)
class Grid1D:
    n: int
    x_min: float = 0.0
    x_max: float = 1.0

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"need at least 3 cells, got {self.n}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n) + 0.5) * self.dx

    def interfaces(self) -> np.ndarray:
        """x of the stored interface values (right interface of each cell)."""
        return self.x_min + (np.arange(self.n) + 1.0) * self.dx


@dataclass(frozen=True)
class Grid2D:
    nx: int
    ny: int
    x_min: float = 0.0
    x_max: float = 1.0
    y_min: float = 0.0
    y_max: float = 1.0

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise ValueError(f"need at least 3x3 cells, got {self.nx}x{self.ny}")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("domain bounds are empty")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / self.ny

    def x_centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.nx) + 0.5) * self.dx

    def y_centers(self) -> np.ndarray:
        return self.y_min + (np.arange(self.ny) + 0.5) * self.dy

    def x_interfaces(self) -> np.ndarray:
        return self.x_min + (np.arange(self.nx) + 1.0) * self.dx

    def y_interfaces(self) -> np.ndarray:
        return self.y_min + (np.arange(self.ny) + 1.0) * self.dy


@dataclass
class State1D:
    """Interface values plus cell moments; supports vector arithmetic."""

    k: int
    points: np.ndarray
    moments: np.ndarray

    def __add__(self, other):
        return State1D(self.k, self.points + other.points, self.moments + other.moments)

    def __mul__(self, c):
        return State1D(self.k, c * self.points, c * self.moments)

    __rmul__ = __mul__

    def copy(self):
        return State1D(self.k, self.points.copy(), self.moments.copy())

    def all_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.points)) and np.all(np.isfinite(self.moments)))


@dataclass
class State2D:
    """Averages plus the shared edge-midpoint and node values."""

    averages: np.ndarray
    edge_x: np.ndarray
    edge_y: np.ndarray
    nodes: np.ndarray

    def __add__(self, other):
        return State2D(
            self.averages + other.averages,
            self.edge_x + other.edge_x,
            self.edge_y + other.edge_y,
            self.nodes + other.nodes,
        )

    def __mul__(self, c):
        return State2D(c * self.averages, c * self.edge_x, c * self.edge_y, c * self.nodes)

    __rmul__ = __mul__

    def copy(self):
        return State2D(
            self.averages.copy(), self.edge_x.copy(), self.edge_y.copy(), self.nodes.copy()
        )

    def all_finite(self) -> bool:
        return bool(
            np.all(np.isfinite(self.averages))
            and np.all(np.isfinite(self.edge_x))
            and np.all(np.isfinite(self.edge_y))
            and np.all(np.isfinite(self.nodes))
        )


def _check_finite_samples(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise ValueError("initial data produced non-finite samples")


def project_initial(grid, fn, element: Element1D | None = None):
    """Project pointwise initial data onto the dof set.

    Point dofs are sampled; averages and moments are integrated with a
    Gauss rule fine enough that smooth data is represented to far below
    the scheme's accuracy.
    """
    if isinstance(grid, Grid1D):
        if element is None:
            raise ValueError("1-d projection needs the element (moment weights)")
        k = element.k
        rule = gauss_rule(min(16, k + _PROJECT_RULE_MARGIN))
        xi = rule.nodes_array
        w = rule.weights_array
        points = np.asarray(fn(grid.interfaces()), dtype=float)
        if points.ndim == 0:
            points = np.full(grid.n, float(points))
        xg = grid.centers()[:, None] + xi[None, :] * grid.dx
        vals = np.asarray(fn(xg), dtype=float)
        if vals.ndim == 0:
            vals = np.full(xg.shape, float(vals))
        mom_shape = (grid.n, k - 1) + vals.shape[2:]
        moments = np.empty(mom_shape)
        for mw in element.moment_weights:
            weights = w * np.polynomial.polynomial.polyval(xi, mw.poly.float_coeffs)
            moments[:, mw.k] = np.tensordot(vals, weights, axes=([1], [0]))
        _check_finite_samples(points, moments)
        return State1D(k, points, moments)

    if isinstance(grid, Grid2D):
        rule = gauss_rule(min(16, 2 + _PROJECT_RULE_MARGIN))
        xi = rule.nodes_array
        w = rule.weights_array
        nx, ny = grid.nx, grid.ny
        xc, yc = grid.x_centers(), grid.y_centers()
        xf, yf = grid.x_interfaces(), grid.y_interfaces()
        xg = xc[:, None] + xi[None, :] * grid.dx  # (nx, g)
        yg = yc[:, None] + xi[None, :] * grid.dy  # (ny, g)
        g = len(xi)

        def sample(xs, ys, shape):
            return np.broadcast_to(np.asarray(fn(xs, ys), dtype=float), shape)

        vals = sample(xg[:, None, :, None], yg[None, :, None, :], (nx, ny, g, g))
        averages = np.einsum("ijab,a,b->ij", vals, w, w)
        edge_x = sample(xf[:, None], yc[None, :], (nx, ny)).copy()
        edge_y = sample(xc[:, None], yf[None, :], (nx, ny)).copy()
        nodes = sample(xf[:, None], yf[None, :], (nx, ny)).copy()
        _check_finite_samples(averages, edge_x, edge_y, nodes)
        return State2D(averages, edge_x, edge_y, nodes)

    raise TypeError(f"unsupported grid type {type(grid)!r}")


def total_mass(state, grid):
    """Sum of the cell averages times the cell volume."""
    if isinstance(grid, Grid1D):
        return np.sum(state.moments[:, 0], axis=0) * grid.dx
    return float(np.sum(state.averages)) * grid.dx * grid.dy


def _dof_gather_1d(state: State1D) -> np.ndarray:
    left = np.roll(state.points, 1, axis=0)
    return np.concatenate(
        [left[:, None, ...], state.moments, state.points[:, None, ...]], axis=1
    )


def error_norms(state, grid, element, exact):
    """Cellwise (L1, L2, Linf) norms of the reconstruction error.

    ``exact`` is evaluated at Gauss points; the max norm also samples
    the stored point values.
    """
    if isinstance(grid, Grid1D):
        k = state.k
        rule = gauss_rule(k + _NORM_RULE_MARGIN)
        xi, w = rule.nodes_array, rule.weights_array
        basis_vals = np.array(
            [np.polynomial.polynomial.polyval(xi, b.float_coeffs) for b in element.basis()]
        )  # (k+1, g)
        dofs = _dof_gather_1d(state)
        if dofs.ndim == 2:
            qg = np.einsum("ns,sg->ng", dofs, basis_vals)
        else:
            qg = np.einsum("nsm,sg->ngm", dofs, basis_vals)
        xg = grid.centers()[:, None] + xi[None, :] * grid.dx
        abs_err = np.abs(qg - np.asarray(exact(xg), dtype=float))
        l1 = float(np.sum(np.tensordot(abs_err, w, axes=([1], [0])))) * grid.dx
        l2 = float(np.sqrt(np.sum(np.tensordot(abs_err**2, w, axes=([1], [0]))) * grid.dx))
        point_err = np.abs(state.points - np.asarray(exact(grid.interfaces()), dtype=float))
        linf = float(max(abs_err.max(), point_err.max()))
        return (l1, l2, linf)

    if isinstance(grid, Grid2D):
        rule = gauss_rule(2 + _NORM_RULE_MARGIN)
        xi, w = rule.nodes_array, rule.weights_array
        pts = [(a, b) for a in xi for b in xi]
        w2 = np.array([wa * wb for wa in w for wb in w])
        basis_vals = np.array(
            [[float(p(a, b)) for (a, b) in pts] for p in element.basis_ordered()]
        )  # (9, G)
        dofs = _dof_gather_2d(state)  # (9, nx, ny)
        qg = np.einsum("sij,sg->ijg", dofs, basis_vals)
        xc, yc = grid.x_centers(), grid.y_centers()
        xg = xc[:, None, None] + np.array([a for a, _ in pts])[None, None, :] * grid.dx
        yg = yc[None, :, None] + np.array([b for _, b in pts])[None, None, :] * grid.dy
        err = np.abs(qg - np.asarray(exact(xg, yg), dtype=float))
        cell_area = grid.dx * grid.dy
        l1 = float(np.sum(err @ w2)) * cell_area
        l2 = float(np.sqrt(np.sum((err**2) @ w2) * cell_area))
        xf, yf = grid.x_interfaces(), grid.y_interfaces()
        dof_errs = [
            np.abs(state.edge_x - np.asarray(exact(xf[:, None], yc[None, :]), dtype=float)),
            np.abs(state.edge_y - np.asarray(exact(xc[:, None], yf[None, :]), dtype=float)),
            np.abs(state.nodes - np.asarray(exact(xf[:, None], yf[None, :]), dtype=float)),
        ]
        linf = float(max(err.max(), *(e.max() for e in dof_errs)))
        return (l1, l2, linf)

    raise TypeError(f"unsupported grid type {type(grid)!r}")


def _dof_gather_2d(state: State2D) -> np.ndarray:
    """Stack each cell's nine dofs, in the element2d dof order."""
    a, ex, ey, nd = state.averages, state.edge_x, state.edge_y, state.nodes
    return np.stack(
        [
            a,
            np.roll(ex, 1, axis=0),
            ex,
            np.roll(ey, 1, axis=1),
            ey,
            np.roll(np.roll(nd, 1, axis=0), 1, axis=1),
            np.roll(nd, 1, axis=1),
            np.roll(nd, 1, axis=0),
            nd,
        ]
    )


def _value_rows(value):
    v = np.asarray(value)
    if v.ndim == 0:
        return [("", float(v))]
    return [(f"[{c}]", float(v[c])) for c in range(v.shape[0])]


def write_state_csv(state, grid, path):
    """Dump all dofs as CSV with a deterministic row order.

    1-d columns: x, dof_class, value (moment rows cell by cell, then the
    interface values).  2-d columns: x, y, dof_class, value (averages,
    x-edges, y-edges, nodes, each block row-major).
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if isinstance(grid, Grid1D):
            writer.writerow(["x", "dof_class", "value"])
            centers, interfaces = grid.centers(), grid.interfaces()
            for i in range(grid.n):
                for k in range(state.moments.shape[1]):
                    for suffix, v in _value_rows(state.moments[i, k]):
                        writer.writerow([repr(float(centers[i])), f"moment{k}{suffix}", repr(v)])
            for i in range(grid.n):
                for suffix, v in _value_rows(state.points[i]):
                    writer.writerow([repr(float(interfaces[i])), f"point{suffix}", repr(v)])
        else:
            writer.writerow(["x", "y", "dof_class", "value"])
            xc, yc = grid.x_centers(), grid.y_centers()
            xf, yf = grid.x_interfaces(), grid.y_interfaces()
            blocks = [
                ("average", state.averages, xc, yc),
                ("edge_x", state.edge_x, xf, yc),
                ("edge_y", state.edge_y, xc, yf),
                ("node", state.nodes, xf, yf),
            ]
            for name, arr, xs, ys in blocks:
                for i in range(arr.shape[0]):
                    for j in range(arr.shape[1]):
                        writer.writerow(
                            [repr(float(xs[i])), repr(float(ys[j])), name, repr(float(arr[i, j]))]
                        )
