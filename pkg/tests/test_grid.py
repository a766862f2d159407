"""Grid, state storage, projection, norms and CSV export tests."""

import csv

import numpy as np
import pytest

from afpg.element1d import build_element, reconstruct
from afpg.element2d import build_element_2d
from afpg.grid import (
    Grid1D,
    Grid2D,
    State1D,
    error_norms,
    project_initial,
    total_mass,
    write_state_csv,
)


class TestGrids:
    def test_validation(self):
        with pytest.raises(ValueError):
            Grid1D(2)
        with pytest.raises(ValueError):
            Grid1D(8, 1.0, 0.0)
        with pytest.raises(ValueError):
            Grid2D(2, 8)

    def test_spacing(self):
        g = Grid1D(8, 0.0, 2.0)
        assert g.dx == 0.25
        assert g.interfaces()[-1] == pytest.approx(2.0)
        g2 = Grid2D(4, 5, 0.0, 1.0, -1.0, 1.0)
        assert g2.dx == 0.25
        assert g2.dy == 0.4


class TestProjection:
    def test_constant_1d(self):
        g = Grid1D(6)
        el = build_element(3)
        st = project_initial(g, lambda x: 2.5 + 0.0 * np.asarray(x), el)
        assert np.allclose(st.points, 2.5, atol=1e-15)
        assert np.allclose(st.moments[:, 0], 2.5, atol=1e-14)
        # odd moments of a constant vanish
        assert np.allclose(st.moments[:, 1], 0.0, atol=1e-14)

    def test_sine_average_analytic(self):
        # first-cell average of sin(2 pi x) on [0, 1/8] has a closed form
        g = Grid1D(8)
        el = build_element(2)
        st = project_initial(g, lambda x: np.sin(2 * np.pi * np.asarray(x)), el)
        exact = (1.0 - np.cos(2 * np.pi / 8)) / (2 * np.pi / 8)
        assert st.moments[0, 0] == pytest.approx(exact, rel=1e-12)

    def test_product_average_2d(self):
        # the average of x*y over a cell is the product of the midpoints
        g = Grid2D(4, 4, 0.0, 2.0, 0.0, 1.0)
        st = project_initial(g, lambda x, y: np.asarray(x) * np.asarray(y))
        xc, yc = g.x_centers(), g.y_centers()
        assert np.allclose(st.averages, np.outer(xc, yc), atol=1e-14)

    def test_nonfinite_rejected(self):
        g = Grid1D(4)
        el = build_element(2)
        with np.errstate(divide="ignore"), pytest.raises(ValueError):
            project_initial(g, lambda x: 1.0 / (np.asarray(x) - 0.25), el)

    def test_periodic_index_roundtrip(self):
        g = Grid1D(5)
        el = build_element(2)
        st = project_initial(g, lambda x: np.sin(2 * np.pi * np.asarray(x)), el)
        for i in range(g.n):
            assert st.points[(i + g.n) % g.n] == st.points[i]

    def test_shared_dof_continuity(self):
        # adjacent reconstructions agree at their shared interface
        g = Grid1D(7)
        el = build_element(3)
        st = project_initial(g, lambda x: np.exp(np.sin(2 * np.pi * np.asarray(x))), el)
        for i in range(g.n):
            dofs_i = [st.points[i - 1], *st.moments[i], st.points[i]]
            dofs_n = [st.points[i], *st.moments[(i + 1) % g.n], st.points[(i + 1) % g.n]]
            left = reconstruct(el, [float(v) for v in dofs_i]).as_float()(0.5)
            right = reconstruct(el, [float(v) for v in dofs_n]).as_float()(-0.5)
            assert abs(left - right) <= 1e-14


class TestTotalMass:
    def test_constant(self):
        g = Grid1D(10)
        el = build_element(2)
        st = project_initial(g, lambda x: 3.0 + 0.0 * np.asarray(x), el)
        assert total_mass(st, g) == pytest.approx(3.0, abs=1e-14)

    def test_direct_sum(self):
        g = Grid1D(6)
        rng = np.random.default_rng(0)
        st = State1D(2, rng.standard_normal(6), rng.standard_normal((6, 1)))
        assert total_mass(st, g) == pytest.approx(np.sum(st.moments[:, 0]) * g.dx)

    def test_2d(self):
        g = Grid2D(3, 4, 0.0, 1.0, 0.0, 2.0)
        st = project_initial(g, lambda x, y: 1.5 + 0.0 * np.asarray(x))
        assert total_mass(st, g) == pytest.approx(3.0, abs=1e-13)


class TestErrorNorms:
    def test_zero_against_own_reconstruction(self):
        g = Grid1D(6)
        el = build_element(2)
        fn = lambda x: np.sin(2 * np.pi * np.asarray(x))
        st = project_initial(g, fn, el)

        # evaluate the numerical reconstruction itself as the reference
        def own(x):
            x = np.asarray(x, dtype=float)
            i = np.clip(((x - g.x_min) // g.dx).astype(int), 0, g.n - 1)
            vals = np.empty_like(x)
            flat_x, flat_i = x.ravel(), i.ravel()
            out = vals.ravel()
            for idx in range(flat_x.size):
                ci = flat_i[idx]
                dofs = [st.points[ci - 1], st.moments[ci, 0], st.points[ci]]
                xi = (flat_x[idx] - (g.x_min + (ci + 0.5) * g.dx)) / g.dx
                out[idx] = reconstruct(el, [float(v) for v in dofs]).as_float()(xi)
            return vals

        l1, l2, linf = error_norms(st, g, el, own)
        assert l1 <= 1e-14 and l2 <= 1e-14 and linf <= 1e-14

    def test_constant_offset(self):
        # constant data is represented exactly, so a shifted reference
        # reports exactly eps * |domain| in L1 and eps in Linf
        g = Grid1D(5, 0.0, 2.0)
        el = build_element(2)
        fn = lambda x: 0.7 + 0.0 * np.asarray(x)
        st = project_initial(g, fn, el)
        eps = 1e-3
        l1, _, linf = error_norms(st, g, el, lambda x: fn(x) + eps)
        assert l1 == pytest.approx(eps * 2.0, rel=1e-10)
        assert linf == pytest.approx(eps, rel=1e-10)

    def test_2d_constant_offset(self):
        g = Grid2D(4, 4)
        el = build_element_2d()
        fn = lambda x, y: 0.3 + 0.0 * (np.asarray(x) + np.asarray(y))
        st = project_initial(g, fn)
        eps = 5e-4
        l1, _, linf = error_norms(st, g, el, lambda x, y: fn(x, y) + eps)
        assert l1 == pytest.approx(eps, rel=1e-10)
        assert linf == pytest.approx(eps, rel=1e-10)


class TestStateArithmetic:
    def test_linear_combinations(self):
        rng = np.random.default_rng(1)
        a = State1D(2, rng.standard_normal(5), rng.standard_normal((5, 1)))
        b = State1D(2, rng.standard_normal(5), rng.standard_normal((5, 1)))
        c = 0.25 * a + 2.0 * b
        assert np.allclose(c.points, 0.25 * a.points + 2.0 * b.points)
        assert np.allclose(c.moments, 0.25 * a.moments + 2.0 * b.moments)

    def test_finite_check(self):
        st = State1D(2, np.array([1.0, np.inf, 0.0]), np.zeros((3, 1)))
        assert not st.all_finite()


class TestCsvExport:
    def test_1d_roundtrip(self, tmp_path):
        g = Grid1D(4)
        el = build_element(3)
        st = project_initial(g, lambda x: np.cos(2 * np.pi * np.asarray(x)), el)
        path = tmp_path / "state.csv"
        write_state_csv(st, g, path)
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["x", "dof_class", "value"]
        # 4 cells x 2 moments + 4 points
        assert len(rows) == 1 + 4 * 2 + 4
        point_rows = [r for r in rows[1:] if r[1] == "point"]
        assert [float(r[2]) for r in point_rows] == pytest.approx(list(st.points))

    def test_2d_deterministic(self, tmp_path):
        g = Grid2D(3, 3)
        st = project_initial(g, lambda x, y: np.asarray(x) + 2 * np.asarray(y))
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_state_csv(st, g, p1)
        write_state_csv(st, g, p2)
        assert p1.read_bytes() == p2.read_bytes()
        with open(p1) as fh:
            rows = list(csv.reader(fh))
        assert len(rows) == 1 + 4 * 9
