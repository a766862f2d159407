"""Flux models and reference data for the desk-scale benchmark problems.

Every model exposes its dimension, system size m, pointwise flux and
Jacobian, and the maximum wave speed used for time-step control.
Constant-coefficient linear systems precompute the eigenvalue split of
the Jacobian; scalar models split sign by sign at evaluation time.
Where an exact solution is cheap (translation for linear advection,
characteristic tracing for pre-shock Burgers) the model provides one
for error measurement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "advection1d",
    "advection2d",
    "burgers1d",
    "linear_system1d",
    "ConstantIC",
    "LinearIC",
    "SineIC",
    "GaussianIC",
    "Sine2DIC",
    "Constant2DIC",
    "Gaussian2DIC",
]


def _wrap(x, lo, hi):
    return lo + np.mod(x - lo, hi - lo)


class Advection1D:
    """Linear advection q_t + a q_x = 0."""

    dim = 1
    m = 1
    is_linear = True
    name = "advection"

    def __init__(self, a):
        self.a = float(a)

    def flux(self, q):
        return self.a * q

    def jac(self, q):
        return self.a * np.ones_like(np.asarray(q, dtype=float))

    def max_speed(self, points) -> float:
        return abs(self.a)

    def exact_solution(self, ic, grid):
        a = self.a

        def exact(x, t=0.0):
            return ic(_wrap(np.asarray(x, dtype=float) - a * t, grid.x_min, grid.x_max))

        return exact


class Burgers1D:
    """Inviscid Burgers: flux q^2 / 2."""

    dim = 1
    m = 1
    is_linear = False
    name = "burgers"

    def flux(self, q):
        return 0.5 * np.asarray(q) ** 2

    def jac(self, q):
        return np.asarray(q, dtype=float)

    def max_speed(self, points) -> float:
        return float(np.max(np.abs(points)))

    def exact_solution(self, ic, grid):
        """Characteristic-traced solution, valid before shock formation.

        Requires ic.derivative for the Newton iteration on the foot
        point x0 of the characteristic through (x, t).
        """

        def exact(x, t=0.0):
            x = np.asarray(x, dtype=float)
            if t == 0.0:
                return ic(x)
            x0 = x - t * ic(x)
            for _ in range(100):
                f = x0 + t * ic(x0) - x
                df = 1.0 + t * ic.derivative(x0)
                step = f / df
                x0 = x0 - step
                if np.max(np.abs(step)) < 1e-14:
                    break
            return ic(x0)

        return exact


class LinearSystem1D:
    """Constant-coefficient linear system q_t + A q_x = 0."""

    dim = 1
    is_linear = True
    name = "linear_system"

    def __init__(self, matrix):
        a = np.array(matrix, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("system matrix must be square")
        self.matrix = a
        self.m = a.shape[0]
        eigvals, eigvecs = np.linalg.eig(a)
        if np.max(np.abs(eigvals.imag)) > 1e-12 * max(1.0, np.max(np.abs(eigvals))):
            raise ValueError("system matrix has complex eigenvalues")
        eigvals = eigvals.real
        eigvecs = eigvecs.real
        if np.linalg.matrix_rank(eigvecs) < self.m:
            raise ValueError("system matrix is defective")
        self.eigvals = eigvals
        self.eigvecs = eigvecs
        self.eigvecs_inv = np.linalg.inv(eigvecs)
        self.jac_plus = eigvecs @ np.diag(np.maximum(eigvals, 0.0)) @ self.eigvecs_inv
        self.jac_minus = eigvecs @ np.diag(np.minimum(eigvals, 0.0)) @ self.eigvecs_inv

    def flux(self, q):
        return np.asarray(q) @ self.matrix.T

    def jac(self, q):
        return self.matrix

    def max_speed(self, points) -> float:
        return float(np.max(np.abs(self.eigvals)))

    def exact_solution(self, ic, grid):
        """Superposition of characteristic fields advected at their speeds.

        ``ic`` must return arrays with a trailing component axis.
        """

        def exact(x, t=0.0):
            x = np.asarray(x, dtype=float)
            out = np.zeros(x.shape + (self.m,))
            for p in range(self.m):
                xp = _wrap(x - self.eigvals[p] * t, grid.x_min, grid.x_max)
                w0 = ic(xp) @ self.eigvecs_inv.T
                out += w0[..., p, None] * self.eigvecs[:, p]
            return out

        return exact


class Advection2D:
    """Linear advection q_t + ax q_x + ay q_y = 0."""

    dim = 2
    m = 1
    is_linear = True
    name = "advection"

    def __init__(self, ax, ay):
        self.ax = float(ax)
        self.ay = float(ay)

    def flux_x(self, q):
        return self.ax * q

    def flux_y(self, q):
        return self.ay * q

    def max_speed(self, points) -> float:
        return max(abs(self.ax), abs(self.ay))

    def exact_solution(self, ic, grid):
        ax, ay = self.ax, self.ay

        def exact(x, y, t=0.0):
            xs = _wrap(np.asarray(x, dtype=float) - ax * t, grid.x_min, grid.x_max)
            ys = _wrap(np.asarray(y, dtype=float) - ay * t, grid.y_min, grid.y_max)
            return ic(xs, ys)

        return exact


def advection1d(a) -> Advection1D:
    return Advection1D(a)


def advection2d(ax, ay) -> Advection2D:
    return Advection2D(ax, ay)


def burgers1d() -> Burgers1D:
    return Burgers1D()


def linear_system1d(matrix) -> LinearSystem1D:
    return LinearSystem1D(matrix)


# ---------------------------------------------------------------------------
# Initial data.  Callables with an analytic derivative where the Burgers
# reference needs one; all are globally defined so periodic wrapping is safe.


@dataclass(frozen=True)
class ConstantIC:
    value: float = 1.0

    def __call__(self, x):
        return self.value * np.ones_like(np.asarray(x, dtype=float))

    def derivative(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class LinearIC:
    slope: float = 1.0
    offset: float = 0.0

    def __call__(self, x):
        return self.slope * np.asarray(x, dtype=float) + self.offset

    def derivative(self, x):
        return self.slope * np.ones_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class SineIC:
    """mean + amplitude * sin(2 pi cycles (x - x_min) / length)."""

    mean: float = 0.0
    amplitude: float = 1.0
    cycles: int = 1
    x_min: float = 0.0
    length: float = 1.0

    def _phase(self, x):
        return 2.0 * np.pi * self.cycles * (np.asarray(x, dtype=float) - self.x_min) / self.length

    def __call__(self, x):
        return self.mean + self.amplitude * np.sin(self._phase(x))

    def derivative(self, x):
        scale = 2.0 * np.pi * self.cycles / self.length
        return self.amplitude * scale * np.cos(self._phase(x))


@dataclass(frozen=True)
class GaussianIC:
    base: float = 0.0
    amplitude: float = 1.0
    center: float = 0.5
    width: float = 0.1

    def __call__(self, x):
        z = (np.asarray(x, dtype=float) - self.center) / self.width
        return self.base + self.amplitude * np.exp(-(z**2))

    def derivative(self, x):
        z = (np.asarray(x, dtype=float) - self.center) / self.width
        return self.amplitude * np.exp(-(z**2)) * (-2.0 * z / self.width)


@dataclass(frozen=True)
class Sine2DIC:
    """mean + amplitude * sin(2 pi (cx (x-x0)/Lx + cy (y-y0)/Ly))."""

    mean: float = 0.0
    amplitude: float = 1.0
    cycles_x: int = 1
    cycles_y: int = 1
    x_min: float = 0.0
    length_x: float = 1.0
    y_min: float = 0.0
    length_y: float = 1.0

    def __call__(self, x, y):
        phase = 2.0 * np.pi * (
            self.cycles_x * (np.asarray(x, dtype=float) - self.x_min) / self.length_x
            + self.cycles_y * (np.asarray(y, dtype=float) - self.y_min) / self.length_y
        )
        return self.mean + self.amplitude * np.sin(phase)


@dataclass(frozen=True)
class Constant2DIC:
    value: float = 1.0

    def __call__(self, x, y):
        return self.value * np.ones_like(np.asarray(x, dtype=float) + np.asarray(y, dtype=float))


@dataclass(frozen=True)
class Gaussian2DIC:
    base: float = 0.0
    amplitude: float = 1.0
    center_x: float = 0.5
    center_y: float = 0.5
    width: float = 0.1

    def __call__(self, x, y):
        zx = (np.asarray(x, dtype=float) - self.center_x) / self.width
        zy = (np.asarray(y, dtype=float) - self.center_y) / self.width
        return self.base + self.amplitude * np.exp(-(zx**2) - (zy**2))
