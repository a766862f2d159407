"""Command line interface.

Subcommands: ``run`` (single simulation), ``converge`` (error table
over a list of grids), ``dump-element`` and ``dump-element-2d`` (exact
coefficient tables of the constructed elements).  Exit codes: 0 on
success, 2 on a configuration error, 3 on numerical blow-up.
Set AFPG_THREADS to run the grids of a convergence study in parallel.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction

import numpy as np

from afpg.config import ConfigError, load_config
from afpg.element1d import build_element, build_point_test
from afpg.element2d import DOF_IDS, build_edge_test, build_element_2d, build_node_test
from afpg.harness import (
    convergence_study,
    max_workers_from_env,
    run_simulation,
    write_convergence_csv,
)
from afpg.timestep import BlowUpError


def _frac_str(value) -> str:
    return str(Fraction(value))


def _dump_rows(rows, path):
    if path:
        with open(path, "w", newline="") as fh:
            csv.writer(fh).writerows(rows)
    else:
        for row in rows:
            print(",".join(str(c) for c in row))


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    out_dir = args.output_dir or (cfg.output_dir or ".")
    result = run_simulation(cfg, output_dir=out_dir)
    print(f"steps={result.steps} t_final={result.t!r}")
    m0 = float(np.sum(result.mass_log[0][1]))
    m1 = float(np.sum(result.mass_log[-1][1]))
    print(f"mass_initial={m0!r} mass_final={m1!r}")
    if result.norms is not None:
        l1, l2, linf = result.norms
        print(f"error_l1={l1!r} error_l2={l2!r} error_linf={linf!r}")
    return 0


def _cmd_converge(args) -> int:
    cfg = load_config(args.config)
    grids = [int(g) for g in args.grids.split(",") if g]
    rows = convergence_study(cfg, grids, max_workers=max_workers_from_env())
    header = f"{'N':>6} {'L1':>13} {'L2':>13} {'Linf':>13} {'EOC_L1':>7} {'EOC_L2':>7} {'EOC_Li':>7}"
    print(header)
    for row in rows:
        eocs = " ".join(
            f"{row[k]:7.3f}" if row[k] == row[k] else "      -"
            for k in ("eoc_l1", "eoc_l2", "eoc_linf")
        )
        print(f"{row['n']:>6} {row['l1']:13.6e} {row['l2']:13.6e} {row['linf']:13.6e} {eocs}")
    if args.output:
        write_convergence_csv(rows, args.output)
    return 0


def _cmd_dump_element(args) -> int:
    try:
        element = build_element(args.k)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    width = args.k + 1
    rows = [["function"] + [f"xi^{p}" for p in range(width)]]

    def poly_row(name, poly):
        coeffs = list(poly.coeffs) + [0] * (width - len(poly.coeffs))
        return [name] + [_frac_str(c) for c in coeffs]

    rows.append(poly_row("basis_left_point", element.basis_left))
    for mw, basis in zip(element.moment_weights, element.basis_moments):
        rows.append(poly_row(f"basis_moment_{mw.k}", basis))
    rows.append(poly_row("basis_right_point", element.basis_right))
    for mw in element.moment_weights:
        rows.append(poly_row(f"moment_weight_{mw.k}", mw.poly))
    if args.alpha is not None:
        test = build_point_test(element, Fraction(args.alpha))
        rows.append(poly_row("test_left_cell", test.left))
        rows.append(poly_row("test_right_cell", test.right))
    _dump_rows(rows, args.output)
    return 0


_DOF_NAMES = {
    (0, 0): "avg",
    (-1, 0): "edge_left",
    (1, 0): "edge_right",
    (0, -1): "edge_bottom",
    (0, 1): "edge_top",
    (-1, -1): "node_bl",
    (1, -1): "node_br",
    (-1, 1): "node_tl",
    (1, 1): "node_tr",
}


def _cmd_dump_element_2d(args) -> int:
    element = build_element_2d()
    header = ["function"] + [f"xi^{k}*eta^{l}" for k in range(3) for l in range(3)]
    rows = [header]

    def poly_row(name, poly):
        grid = [[0] * 3 for _ in range(3)]
        for k, row in enumerate(poly.coeffs):
            for l, c in enumerate(row):
                grid[k][l] = c
        return [name] + [_frac_str(grid[k][l]) for k in range(3) for l in range(3)]

    for dof in DOF_IDS:
        rows.append(poly_row(f"basis_{_DOF_NAMES[dof]}", element.basis[dof]))

    alphas = [Fraction(a) for a in args.alphas.split(",")] if args.alphas else []
    if len(alphas) not in (0, 3, 14):
        raise ConfigError("--alphas takes 3 (edge) or 14 (edge + node) values")
    if alphas:
        edge = build_edge_test(tuple(alphas[:3]), orientation="x")
        for off, name in (((0, 0), "edge_test_left_cell"), ((1, 0), "edge_test_right_cell")):
            rows.append(poly_row(name, edge.pieces[off]))
        edge_y = build_edge_test(tuple(alphas[:3]), orientation="y")
        for off, name in (((0, 0), "edge_test_bottom_cell"), ((0, 1), "edge_test_top_cell")):
            rows.append(poly_row(name, edge_y.pieces[off]))
        if len(alphas) == 14:
            node = build_node_test(tuple(alphas[3:]))
            names = {(0, 0): "node_test_ll", (1, 0): "node_test_lr",
                     (0, 1): "node_test_ul", (1, 1): "node_test_ur"}
            for off, name in names.items():
                rows.append(poly_row(name, node.pieces[off]))
        rows.append(["avg_test"] + [_frac_str(int(k == 0 and l == 0))
                                    for k in range(3) for l in range(3)])
    _dump_rows(rows, args.output)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="afpg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one simulation from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--output-dir", default=None)
    p_run.set_defaults(fn=_cmd_run)

    p_conv = sub.add_parser("converge", help="convergence study over several grids")
    p_conv.add_argument("config")
    p_conv.add_argument("--grids", default="20,40,80,160")
    p_conv.add_argument("--output", default=None)
    p_conv.set_defaults(fn=_cmd_converge)

    p_el = sub.add_parser("dump-element", help="basis/test coefficients (1-d)")
    p_el.add_argument("--k", type=int, required=True)
    p_el.add_argument("--alpha", default=None)
    p_el.add_argument("--output", default=None)
    p_el.set_defaults(fn=_cmd_dump_element)

    p_el2 = sub.add_parser("dump-element-2d", help="basis/test coefficients (2-d)")
    p_el2.add_argument("--alphas", default=None)
    p_el2.add_argument("--output", default=None)
    p_el2.set_defaults(fn=_cmd_dump_element_2d)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except BlowUpError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
