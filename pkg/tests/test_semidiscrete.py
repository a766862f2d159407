"""RHS assembly tests: closed forms, quadrature oracles, conservation."""

from fractions import Fraction

import numpy as np
import pytest

from afpg.element1d import build_element, build_point_test, reconstruct
from afpg.element2d import build_element_2d, reconstruct2d
from afpg.grid import Grid1D, Grid2D, State1D, State2D, project_initial
from afpg.models import advection1d, advection2d, burgers1d, linear_system1d
from afpg.poly import diff2, inner1, inner2
from afpg.semidiscrete import (
    Upwind1D,
    Upwind2D,
    choose_alpha,
    edge_trace_mean_flux,
    rhs_1d,
    rhs_2d,
    rhs_point_burgers,
)


def random_state_1d(rng, n, k, m=0):
    if m:
        return State1D(k, rng.standard_normal((n, m)), rng.standard_normal((n, k - 1, m)))
    return State1D(k, rng.standard_normal(n), rng.standard_normal((n, k - 1)))


def cell_poly(state, el, i):
    n = state.points.shape[0]
    dofs = [Fraction(float(state.points[(i - 1) % n]))]
    dofs += [Fraction(float(v)) for v in np.atleast_1d(state.moments[i])]
    dofs.append(Fraction(float(state.points[i])))
    return reconstruct(el, dofs)


class TestChooseAlpha:
    def test_burgers_positive(self):
        assert choose_alpha(burgers1d(), np.array([2.0]))[0] == 1.0

    def test_sonic_point(self):
        assert choose_alpha(burgers1d(), np.array([0.0]))[0] == 0.0

    def test_negative_advection(self):
        a = choose_alpha(advection1d(-1.0), np.array([5.0, -3.0]))
        assert np.all(a == -1.0)


class TestUpwindConfigs:
    def test_validation(self):
        with pytest.raises(ValueError):
            Upwind1D("sideways")
        with pytest.raises(ValueError):
            Upwind1D("fixed", 1.5)
        with pytest.raises(ValueError):
            Upwind2D("fixed", beta=0.75)
        with pytest.raises(ValueError):
            Upwind2D(node_alphas=(0.0,) * 5)


class TestRhs1D:
    def test_constant_state_zero(self):
        g = Grid1D(6)
        for k in (2, 3):
            el = build_element(k)
            st = project_initial(g, lambda x: 1.3 + 0.0 * np.asarray(x), el)
            for model in (advection1d(1.5), burgers1d()):
                r = rhs_1d(st, g, el, model, Upwind1D("adaptive"))
                assert np.max(np.abs(r.points)) <= 1e-13
                assert np.max(np.abs(r.moments)) <= 1e-13

    def test_full_upwind_point_formula(self):
        g = Grid1D(8)
        el = build_element(2)
        rng = np.random.default_rng(0)
        st = random_state_1d(rng, 8, 2)
        r = rhs_1d(st, g, el, advection1d(1.0), Upwind1D("adaptive"))
        ql = np.roll(st.points, 1)
        expected = -(2 * ql - 6 * st.moments[:, 0] + 4 * st.points) / g.dx
        assert np.allclose(r.points, expected, atol=1e-13)

    def test_linear_profile_exactness(self):
        # q = x away from the periodic wrap: every rhs entry equals -a
        g = Grid1D(8)
        el = build_element(2)
        st = project_initial(g, lambda x: np.asarray(x, dtype=float), el)
        r = rhs_1d(st, g, el, advection1d(1.0), Upwind1D("adaptive"))
        interior = slice(2, 6)
        assert np.allclose(r.points[interior], -1.0, atol=1e-12)
        assert np.allclose(r.moments[interior, 0], -1.0, atol=1e-12)

    def test_quadratic_profile_exactness(self):
        # q = x^2 away from the wrap: rhs is -2 a x at every dof location
        g = Grid1D(8)
        el = build_element(2)
        st = project_initial(g, lambda x: np.asarray(x, dtype=float) ** 2, el)
        r = rhs_1d(st, g, el, advection1d(0.5), Upwind1D("adaptive"))
        interior = slice(2, 6)
        assert np.allclose(r.points[interior], -g.interfaces()[interior], atol=1e-12)
        assert np.allclose(r.moments[interior, 0], -g.centers()[interior], atol=1e-12)

    def test_conservation_telescopes(self):
        rng = np.random.default_rng(1)
        for k in (2, 3):
            g = Grid1D(9)
            el = build_element(k)
            st = random_state_1d(rng, 9, k)
            for model in (advection1d(0.8), burgers1d()):
                r = rhs_1d(st, g, el, model, Upwind1D("adaptive"))
                assert abs(np.sum(r.moments[:, 0])) <= 1e-12

    @pytest.mark.parametrize("k", [2, 3])
    def test_oracle_equivalence_advection(self, k):
        # every rhs entry equals the direct pairing with the test functions
        rng = np.random.default_rng(2 + k)
        n = 6
        g = Grid1D(n)
        el = build_element(k)
        st = random_state_1d(rng, n, k)
        a = 1.0
        model = advection1d(a)
        r = rhs_1d(st, g, el, model, Upwind1D("adaptive"))
        dxf = Fraction(1, n)
        polys = [cell_poly(st, el, i) for i in range(n)]
        test = build_point_test(el, 1)  # alpha = sgn(a)
        for i in range(n):
            for kk in range(k - 1):
                oracle = -float(a * inner1(el.moment_weights[kk].poly, polys[i].deriv()) / dxf)
                assert r.moments[i, kk] == pytest.approx(oracle, rel=1e-11, abs=1e-11)
            pairing = inner1(test.left, polys[i].deriv()) + inner1(
                test.right, polys[(i + 1) % n].deriv()
            )
            oracle = -float(a * pairing / dxf)
            assert r.points[i] == pytest.approx(oracle, rel=1e-11, abs=1e-11)

    def test_oracle_equivalence_system(self):
        # per-characteristic pairing: each field advects with its own speed
        # and full upwinding in its own direction
        rng = np.random.default_rng(9)
        n = 6
        k = 2
        g = Grid1D(n)
        el = build_element(k)
        matrix = np.array([[0.0, 1.0], [1.0, 0.0]])
        model = linear_system1d(matrix)
        st = random_state_1d(rng, n, k, m=2)
        r = rhs_1d(st, g, el, model, Upwind1D("adaptive"))

        # characteristic variables w = Rinv q advect independently
        w_pts = st.points @ model.eigvecs_inv.T
        w_mom = st.moments @ model.eigvecs_inv.T
        expected_w = np.empty_like(w_pts)
        for p, lam in enumerate(model.eigvals):
            sub = State1D(k, w_pts[:, p], w_mom[:, :, p])
            sub_model = advection1d(lam)
            rsub = rhs_1d(sub, g, el, sub_model, Upwind1D("adaptive"))
            expected_w[:, p] = rsub.points
        expected = expected_w @ model.eigvecs.T
        assert np.allclose(r.points, expected, atol=1e-12)

    def test_alpha_consistency(self):
        # fixed alpha equals the blend of the two full-upwind right sides
        rng = np.random.default_rng(5)
        g = Grid1D(7)
        el = build_element(2)
        st = random_state_1d(rng, 7, 2)
        model = advection1d(1.0)
        r_plus = rhs_1d(st, g, el, model, Upwind1D("fixed", 1.0))
        r_minus = rhs_1d(st, g, el, model, Upwind1D("fixed", -1.0))
        for alpha in (-0.6, 0.0, 0.37, 1.0):
            r = rhs_1d(st, g, el, model, Upwind1D("fixed", alpha))
            blend = 0.5 * (1 + alpha) * r_plus.points + 0.5 * (1 - alpha) * r_minus.points
            assert np.allclose(r.points, blend, atol=1e-13)

    def test_fixed_alpha_rejected_for_systems(self):
        g = Grid1D(6)
        el = build_element(2)
        rng = np.random.default_rng(6)
        st = random_state_1d(rng, 6, 2, m=2)
        model = linear_system1d([[0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(ValueError):
            rhs_1d(st, g, el, model, Upwind1D("fixed", 0.5))

    def test_shape_mismatch_rejected(self):
        g = Grid1D(6)
        el = build_element(2)
        st = State1D(2, np.zeros(5), np.zeros((5, 1)))
        with pytest.raises(ValueError):
            rhs_1d(st, g, el, advection1d(1.0), Upwind1D())

    def test_nonfinite_rejected(self):
        g = Grid1D(6)
        el = build_element(2)
        st = State1D(2, np.full(6, np.nan), np.zeros((6, 1)))
        with pytest.raises(ValueError):
            rhs_1d(st, g, el, advection1d(1.0), Upwind1D())


class TestBurgersPointUpdate:
    def test_constant_zero(self):
        g = Grid1D(5)
        st = State1D(2, np.full(5, 1.7), np.full((5, 1), 1.7))
        r = rhs_point_burgers(st, g, Upwind1D("fixed", 0.3))
        assert np.max(np.abs(r)) <= 1e-13

    def test_closed_form_frozen_expression(self):
        # literal re-coding of the two one-sided brackets
        rng = np.random.default_rng(7)
        g = Grid1D(100)
        st = random_state_1d(rng, 100, 2)
        ql = np.roll(st.points, 1)
        qc = st.points
        qr = np.roll(st.points, -1)
        al = st.moments[:, 0]
        ar = np.roll(al, -1)
        for alpha in (-1.0, 0.0, 1.0):
            got = rhs_point_burgers(st, g, Upwind1D("fixed", alpha))
            left = (-9 * (ql - 2 * al) ** 2 + 2 * (ql - 12 * al) * qc + 31 * qc**2) / (10 * g.dx)
            right = (9 * (qr - 2 * ar) ** 2 - 2 * (qr - 12 * ar) * qc - 31 * qc**2) / (10 * g.dx)
            expected = -(0.5 * (1 + alpha) * left + 0.5 * (1 - alpha) * right)
            scale = np.max(np.abs(expected))
            assert np.max(np.abs(got - expected)) <= 1e-12 * scale

    def test_quadrature_oracle(self):
        # -(test fn, d/dx(q^2/2)) integrated exactly cell by cell
        rng = np.random.default_rng(8)
        n = 6
        g = Grid1D(n)
        el = build_element(2)
        st = random_state_1d(rng, n, 2)
        alpha = 0.4
        got = rhs_point_burgers(st, g, Upwind1D("fixed", alpha))
        t = build_point_test(el, Fraction(alpha))
        polys = [cell_poly(st, el, i) for i in range(n)]
        for i in range(n):
            qi, qn = polys[i], polys[(i + 1) % n]
            val = inner1(t.left, qi * qi.deriv()) + inner1(t.right, qn * qn.deriv())
            oracle = -float(val / Fraction(1, n))
            assert got[i] == pytest.approx(oracle, rel=1e-12, abs=1e-12)

    def test_full_upwind_uses_left_bracket_only(self):
        rng = np.random.default_rng(9)
        g = Grid1D(6)
        st = random_state_1d(rng, 6, 2)
        got = rhs_point_burgers(st, g, Upwind1D("fixed", 1.0))
        ql, qc = np.roll(st.points, 1), st.points
        al = st.moments[:, 0]
        left = (-9 * (ql - 2 * al) ** 2 + 2 * (ql - 12 * al) * qc + 31 * qc**2) / (10 * g.dx)
        assert np.allclose(got, -left, atol=1e-13)

    def test_adaptive_alpha_follows_sign(self):
        g = Grid1D(6)
        rng = np.random.default_rng(10)
        st = random_state_1d(rng, 6, 2)
        st.points = np.abs(st.points) + 0.1  # all positive
        adaptive = rhs_point_burgers(st, g, Upwind1D("adaptive"))
        fixed = rhs_point_burgers(st, g, Upwind1D("fixed", 1.0))
        assert np.allclose(adaptive, fixed, atol=1e-14)

    def test_wrong_degree_rejected(self):
        g = Grid1D(6)
        st = State1D(3, np.zeros(6), np.zeros((6, 2)))
        with pytest.raises(ValueError):
            rhs_point_burgers(st, g, Upwind1D())

    def test_exact_update_through_rhs_1d(self):
        g = Grid1D(6)
        el = build_element(2)
        rng = np.random.default_rng(11)
        st = random_state_1d(rng, 6, 2)
        r = rhs_1d(st, g, el, burgers1d(), Upwind1D("adaptive"), point_update="exact")
        assert np.allclose(r.points, rhs_point_burgers(st, g, Upwind1D("adaptive")), atol=0)
        with pytest.raises(ValueError):
            rhs_1d(st, g, el, advection1d(1.0), Upwind1D(), point_update="exact")


def random_state_2d(rng, nx, ny):
    return State2D(
        rng.standard_normal((nx, ny)),
        rng.standard_normal((nx, ny)),
        rng.standard_normal((nx, ny)),
        rng.standard_normal((nx, ny)),
    )


def cell_poly_2d(state, el, i, j):
    nx, ny = state.averages.shape
    a, ex, ey, nd = state.averages, state.edge_x, state.edge_y, state.nodes
    dofs = {
        (0, 0): Fraction(float(a[i, j])),
        (-1, 0): Fraction(float(ex[(i - 1) % nx, j])),
        (1, 0): Fraction(float(ex[i, j])),
        (0, -1): Fraction(float(ey[i, (j - 1) % ny])),
        (0, 1): Fraction(float(ey[i, j])),
        (-1, -1): Fraction(float(nd[(i - 1) % nx, (j - 1) % ny])),
        (1, -1): Fraction(float(nd[i, (j - 1) % ny])),
        (-1, 1): Fraction(float(nd[(i - 1) % nx, j])),
        (1, 1): Fraction(float(nd[i, j])),
    }
    return reconstruct2d(el, dofs)


class TestRhs2D:
    def test_constant_state_zero(self):
        g = Grid2D(5, 4)
        el = build_element_2d()
        st = project_initial(g, lambda x, y: 2.0 + 0.0 * np.asarray(x))
        r = rhs_2d(st, g, el, advection2d(1.0, -0.5), Upwind2D("adaptive"))
        for arr in (r.averages, r.edge_x, r.edge_y, r.nodes):
            assert np.max(np.abs(arr)) <= 1e-13

    def test_linear_profile_exactness(self):
        g = Grid2D(8, 8)
        el = build_element_2d()
        st = project_initial(g, lambda x, y: np.asarray(x) + 0.0 * np.asarray(y))
        r = rhs_2d(st, g, el, advection2d(1.0, 0.0), Upwind2D("adaptive"))
        interior = (slice(2, 6), slice(2, 6))
        for arr in (r.averages, r.edge_x, r.edge_y, r.nodes):
            assert np.allclose(arr[interior], -1.0, atol=1e-12)

    def test_conservation_telescopes(self):
        rng = np.random.default_rng(12)
        g = Grid2D(5, 6)
        el = build_element_2d()
        st = random_state_2d(rng, 5, 6)
        r = rhs_2d(st, g, el, advection2d(0.7, -1.2), Upwind2D("adaptive"))
        assert abs(np.sum(r.averages)) <= 1e-12

    def test_nonlinear_rejected(self):
        g = Grid2D(4, 4)
        el = build_element_2d()
        st = random_state_2d(np.random.default_rng(0), 4, 4)
        with pytest.raises(ValueError):
            rhs_2d(st, g, el, burgers1d(), Upwind2D())

    def test_node_upwind_picks_left_cells(self):
        # for ax > 0 the adaptive node stencil reads x-derivatives from the
        # left-side cells only
        rng = np.random.default_rng(13)
        g = Grid2D(4, 4)
        el = build_element_2d()
        st = random_state_2d(rng, 4, 4)
        r_adaptive = rhs_2d(st, g, el, advection2d(1.0, 0.0), Upwind2D("adaptive"))
        r_fixed = rhs_2d(
            st, g, el, advection2d(1.0, 0.0), Upwind2D("fixed", alpha3=1.0, beta=0.5)
        )
        assert np.allclose(r_adaptive.nodes, r_fixed.nodes, atol=1e-13)
        assert np.allclose(r_adaptive.edge_x, r_fixed.edge_x, atol=1e-13)

    def test_oracle_equivalence_random_alphas(self):
        # every rhs entry equals the direct pairing of the assembled test
        # function with -(ax dq/dx + ay dq/dy), integrated exactly
        rng = np.random.default_rng(14)
        nx = ny = 4
        g = Grid2D(nx, ny)
        el = build_element_2d()
        st = random_state_2d(rng, nx, ny)
        ax, ay = 0.8, -0.6
        upwind = Upwind2D(
            "fixed",
            alpha3=0.5,
            beta=-0.25,
            edge_alpha1=0.2,
            edge_alpha2=-0.3,
            node_alphas=(0.1, -0.2, 0.05, 0.15, -0.1, 0.2, -0.05, 0.1),
        )
        r = rhs_2d(st, g, el, advection2d(ax, ay), upwind)

        from afpg.element2d import build_edge_test, build_node_test

        cells = {(i, j): cell_poly_2d(st, el, i, j) for i in range(nx) for j in range(ny)}
        dxf = Fraction(1, nx)
        dyf = Fraction(1, ny)
        axf, ayf = Fraction(ax), Fraction(ay)

        def pair(piece, poly):
            return axf * inner2(piece, diff2(poly, "x")) / dxf + ayf * inner2(
                piece, diff2(poly, "y")
            ) / dyf

        edge_test = build_edge_test(
            (Fraction(upwind.edge_alpha1), Fraction(upwind.edge_alpha2), Fraction(upwind.alpha3)),
            "x",
        )
        edge_test_y = build_edge_test(
            (Fraction(upwind.edge_alpha1), Fraction(upwind.edge_alpha2), Fraction(upwind.alpha3)),
            "y",
        )
        node_alphas = tuple(Fraction(a) for a in upwind.node_alphas) + (
            2 * Fraction(upwind.beta),
            Fraction(upwind.beta) / 2,
            Fraction(upwind.beta) / 2,
        )
        node_test = build_node_test(node_alphas)

        for i in range(nx):
            for j in range(ny):
                # average: test function is the cell indicator / cell area
                oracle = -float(pair(Fraction(1, 1) * _one(), cells[(i, j)]))
                assert r.averages[i, j] == pytest.approx(oracle, rel=1e-11, abs=1e-11)
                # vertical edge (i+1/2, j)
                oracle = -float(
                    pair(edge_test.pieces[(0, 0)], cells[(i, j)])
                    + pair(edge_test.pieces[(1, 0)], cells[((i + 1) % nx, j)])
                )
                assert r.edge_x[i, j] == pytest.approx(oracle, rel=1e-11, abs=1e-11)
                # horizontal edge (i, j+1/2)
                oracle = -float(
                    pair(edge_test_y.pieces[(0, 0)], cells[(i, j)])
                    + pair(edge_test_y.pieces[(0, 1)], cells[(i, (j + 1) % ny)])
                )
                assert r.edge_y[i, j] == pytest.approx(oracle, rel=1e-11, abs=1e-11)
                # node (i+1/2, j+1/2)
                oracle = -float(
                    sum(
                        pair(
                            node_test.pieces[off],
                            cells[((i + off[0]) % nx, (j + off[1]) % ny)],
                        )
                        for off in ((0, 0), (1, 0), (0, 1), (1, 1))
                    )
                )
                assert r.nodes[i, j] == pytest.approx(oracle, rel=1e-11, abs=1e-11)


def _one():
    from afpg.poly import Poly2

    return Poly2([[1]])


class TestEdgeTraceMeanFlux:
    def test_simpson_equals_gauss_for_linear(self):
        flux = lambda q: 2.5 * q
        vals = (0.3, -1.2, 0.8)
        s = edge_trace_mean_flux(*vals, flux, exact_quadratic=True)
        gq = edge_trace_mean_flux(*vals, flux, exact_quadratic=False)
        assert s == pytest.approx(gq, abs=1e-14)

    def test_gauss_handles_quadratic_flux(self):
        # mean of (trace)^2/2 over the edge, trace quadratic: degree 4
        lower, mid, upper = 1.0, 0.25, -0.5
        flux = lambda q: 0.5 * q * q
        got = edge_trace_mean_flux(lower, mid, upper, flux, exact_quadratic=False)
        # dense-sampling reference
        s = np.linspace(-0.5, 0.5, 20001)
        trace = lower * (2 * s**2 - s) + mid * (1 - 4 * s**2) + upper * (2 * s**2 + s)
        ref = np.trapezoid(flux(trace), s)
        assert got == pytest.approx(ref, abs=1e-9)
