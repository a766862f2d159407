"""Run driver shared by the command line and the test-suites.

Builds grids, models, initial data and upwind settings from a
RunConfig, integrates to the final time, writes CSV outputs and, when
an exact solution is available, reports error norms.  The convergence
study reruns a config over a list of resolutions and tabulates the
experimental orders.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from afpg import models as _models
from afpg.config import ConfigError, RunConfig, serialize_config
from afpg.element1d import build_element
from afpg.element2d import build_element_2d
from afpg.grid import (
    Grid1D,
    Grid2D,
    error_norms,
    project_initial,
    total_mass,
    write_state_csv,
)
from afpg.semidiscrete import Upwind1D, Upwind2D, rhs_1d, rhs_2d
from afpg.timestep import TimeIntegrator, advance

__all__ = [
    "RunResult",
    "build_grid",
    "build_model",
    "build_ic",
    "build_upwind",
    "build_integrator",
    "run_simulation",
    "convergence_study",
    "write_convergence_csv",
    "max_workers_from_env",
]


@dataclass
class RunResult:
    config: RunConfig
    grid: object
    state: object
    t: float
    steps: int
    mass_log: list
    norms: tuple | None


def build_grid(cfg: RunConfig, n=None):
    if cfg.dimension == 1:
        return Grid1D(n or cfg.grid_n, cfg.grid_x_min, cfg.grid_x_max)
    nx = n or cfg.grid_nx
    ny = n or cfg.grid_ny
    return Grid2D(nx, ny, cfg.grid_x_min, cfg.grid_x_max, cfg.grid_y_min, cfg.grid_y_max)


def build_model(cfg: RunConfig):
    if cfg.dimension == 2:
        if cfg.model_name != "advection":
            raise ConfigError("2-d runs support model.name=advection")
        return _models.advection2d(cfg.model_ax, cfg.model_ay)
    if cfg.model_name == "advection":
        return _models.advection1d(cfg.model_a)
    if cfg.model_name == "burgers":
        return _models.burgers1d()
    try:
        return _models.linear_system1d(cfg.model_matrix)
    except ValueError as err:
        raise ConfigError(str(err)) from None


def build_ic(cfg: RunConfig):
    if cfg.dimension == 1:
        lx = cfg.grid_x_max - cfg.grid_x_min
        if cfg.ic_name == "sine":
            return _models.SineIC(cfg.ic_mean, cfg.ic_amplitude, cfg.ic_cycles,
                                  cfg.grid_x_min, lx)
        if cfg.ic_name == "gaussian":
            return _models.GaussianIC(cfg.ic_mean, cfg.ic_amplitude, cfg.ic_center,
                                      cfg.ic_width)
        if cfg.ic_name == "linear":
            return _models.LinearIC(cfg.ic_slope, cfg.ic_offset)
        return _models.ConstantIC(cfg.ic_value)
    lx = cfg.grid_x_max - cfg.grid_x_min
    ly = cfg.grid_y_max - cfg.grid_y_min
    if cfg.ic_name == "sine":
        return _models.Sine2DIC(cfg.ic_mean, cfg.ic_amplitude, cfg.ic_cycles,
                                cfg.ic_cycles, cfg.grid_x_min, lx, cfg.grid_y_min, ly)
    if cfg.ic_name == "gaussian":
        return _models.Gaussian2DIC(cfg.ic_mean, cfg.ic_amplitude, cfg.ic_center,
                                    cfg.ic_center, cfg.ic_width)
    if cfg.ic_name == "linear":
        return lambda x, y: cfg.ic_slope * (np.asarray(x) + np.asarray(y)) + cfg.ic_offset
    return _models.Constant2DIC(cfg.ic_value)


def build_upwind(cfg: RunConfig):
    try:
        if cfg.dimension == 1:
            return Upwind1D(cfg.upwind_mode, cfg.upwind_alpha)
        return Upwind2D(cfg.upwind_mode, cfg.upwind_alpha3, cfg.upwind_beta,
                        cfg.upwind_edge_alpha1, cfg.upwind_edge_alpha2,
                        tuple(cfg.upwind_node_alphas))
    except ValueError as err:
        raise ConfigError(str(err)) from None


def build_integrator(cfg: RunConfig) -> TimeIntegrator:
    dt = cfg.time_dt if cfg.time_dt > 0 else None
    return TimeIntegrator(cfg.time_scheme, cfg.time_cfl, dt)


def _vectorize_ic(ic, m):
    def fn(x):
        base = np.asarray(ic(x), dtype=float)
        return np.repeat(base[..., None], m, axis=-1)

    return fn


def run_simulation(cfg: RunConfig, output_dir=None, n=None) -> RunResult:
    """Project, integrate to t_end, optionally write outputs."""
    grid = build_grid(cfg, n=n)
    model = build_model(cfg)
    ic = build_ic(cfg)
    upwind = build_upwind(cfg)
    integrator = build_integrator(cfg)

    if cfg.dimension == 1:
        element = build_element(cfg.degree)
        project_fn = _vectorize_ic(ic, model.m) if model.m > 1 else ic
        state = project_initial(grid, project_fn, element)

        def rhs_fn(s):
            return rhs_1d(s, grid, element, model, upwind,
                          point_update=cfg.model_point_update)

        exact_ic = project_fn if model.m > 1 else ic
        exact = model.exact_solution(exact_ic, grid)
    else:
        element = build_element_2d()
        state = project_initial(grid, ic)

        def rhs_fn(s):
            return rhs_2d(s, grid, element, model, upwind)

        exact = model.exact_solution(ic, grid)

    if output_dir is not None:
        os.makedirs(output_dir, exist_ok=True)
    mass_log = [(0.0, total_mass(state, grid))]
    cadence = cfg.output_snapshot_every

    def on_step(s, t, nstep):
        if cadence and nstep % cadence == 0:
            mass_log.append((t, total_mass(s, grid)))
            if output_dir is not None:
                write_state_csv(s, grid, os.path.join(output_dir, f"state_{nstep:06d}.csv"))

    state, t, steps = advance(state, grid, model, rhs_fn, cfg.time_t_end,
                              integrator, on_step=on_step)
    mass_log.append((t, total_mass(state, grid)))

    norms = None
    if exact is not None:
        if cfg.dimension == 1:
            norms = error_norms(state, grid, element, lambda x: exact(x, t))
        else:
            norms = error_norms(state, grid, element, lambda x, y: exact(x, y, t))

    if output_dir is not None:
        write_state_csv(state, grid, os.path.join(output_dir, "final_state.csv"))
        with open(os.path.join(output_dir, "conservation.csv"), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "total_mass"])
            for tm, mass in mass_log:
                writer.writerow([repr(float(tm)), repr(float(np.sum(mass)))])
        with open(os.path.join(output_dir, "summary.txt"), "w") as fh:
            fh.write(serialize_config(cfg))
            fh.write(f"steps={steps}\n")
            fh.write(f"t_final={t!r}\n")
            if norms is not None:
                l1, l2, linf = norms
                fh.write(f"error.l1={l1!r}\nerror.l2={l2!r}\nerror.linf={linf!r}\n")

    return RunResult(cfg, grid, state, t, steps, mass_log, norms)


def _eoc(err_coarse, err_fine, ratio):
    if err_coarse <= 0 or err_fine <= 0:
        return math.nan
    return math.log(err_coarse / err_fine) / math.log(ratio)


def convergence_study(cfg: RunConfig, grid_sizes, max_workers=1):
    """Error norms and experimental orders over a list of resolutions."""
    grid_sizes = list(grid_sizes)
    if len(grid_sizes) < 2:
        raise ConfigError("a convergence study needs at least 2 grids")
    cfg = replace(cfg, output_dir="", output_snapshot_every=0)

    def one(n):
        result = run_simulation(cfg, n=n)
        if result.norms is None:
            raise ConfigError(f"model {cfg.model_name!r} provides no exact solution")
        return result.norms

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            all_norms = list(pool.map(one, grid_sizes))
    else:
        all_norms = [one(n) for n in grid_sizes]

    rows = []
    for i, (n, (l1, l2, linf)) in enumerate(zip(grid_sizes, all_norms)):
        row = {"n": n, "l1": l1, "l2": l2, "linf": linf,
               "eoc_l1": math.nan, "eoc_l2": math.nan, "eoc_linf": math.nan}
        if i > 0:
            ratio = grid_sizes[i] / grid_sizes[i - 1]
            prev = all_norms[i - 1]
            row["eoc_l1"] = _eoc(prev[0], l1, ratio)
            row["eoc_l2"] = _eoc(prev[1], l2, ratio)
            row["eoc_linf"] = _eoc(prev[2], linf, ratio)
        rows.append(row)
    return rows


def write_convergence_csv(rows, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["N", "L1", "L2", "Linf", "EOC_L1", "EOC_L2", "EOC_Linf"])
        for row in rows:
            writer.writerow(
                [row["n"]]
                + [repr(float(row[k])) for k in ("l1", "l2", "linf")]
                + ["" if math.isnan(row[k]) else repr(float(row[k]))
                   for k in ("eoc_l1", "eoc_l2", "eoc_linf")]
            )


def max_workers_from_env() -> int:
    raw = os.environ.get("AFPG_THREADS", "")
    if not raw:
        return 1
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"AFPG_THREADS must be an integer, got {raw!r}") from None
    if workers < 1:
        raise ConfigError("AFPG_THREADS must be >= 1")
    return workers
