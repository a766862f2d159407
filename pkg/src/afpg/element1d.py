"""One-dimensional cell element: dual basis and interface test functions.

A cell of degree K >= 2 carries K+1 degrees of freedom: the values at
the two endpoints plus K-1 weighted moments.  The moment weights are
w_k(xi) = (k+1) 2^k xi^k; k = 0 is the plain cell average, and even
moments of the constant 1 are normalized to 1 (odd ones integrate to 0
and are kept exactly as the classical formula gives them).

``build_element`` solves for the basis dual to these functionals, so
that applying any degree of freedom to any basis function yields a
Kronecker delta.  ``build_point_test`` solves for the two polynomial
pieces of the test function attached to an interface: every pairing of
a piece with a basis function vanishes, except against the two pieces
of the interface basis function, where a free weight alpha splits the
unit pairing into (1+alpha)/2 on the left cell and (1-alpha)/2 on the
right.  alpha = +1/-1 is full upwinding, alpha = 0 central.

Both solves are performed in the Legendre basis and converted back to
monomial coefficients, and stay in exact rational arithmetic (a float
alpha enters at its exact binary value).  ``derivative_stencil``
collapses the pairing of a test function with the derivative of the
global reconstruction into weights on the 2K+1 degrees of freedom of
the two cells meeting at the interface.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from afpg.poly import (
    HALF,
    Poly1,
    differentiate1,
    from_legendre,
    inner1,
    legendre_basis,
    solve_exact,
)

__all__ = [
    "MomentWeight",
    "Element1D",
    "PointTest1D",
    "DerivStencil1D",
    "moment_weight",
    "build_element",
    "build_point_test",
    "derivative_stencil",
    "reconstruct",
]


@dataclass(frozen=True)
class MomentWeight:
    """Weight polynomial of the k-th moment, in xi units."""

    k: int
    poly: Poly1


def moment_weight(k: int) -> MomentWeight:
    if k < 0:
        raise ValueError("moment index must be >= 0")
    return MomentWeight(k, Poly1([0] * k + [(k + 1) * 2**k]))


@dataclass(frozen=True)
class Element1D:
    """Dual basis of the degree-K cell.

    Basis functions are ordered to match the cellwise dof layout
    (left endpoint value, moments 0..K-2, right endpoint value).
    """

    k: int
    basis_left: Poly1
    basis_moments: tuple
    basis_right: Poly1
    moment_weights: tuple

    def basis(self):
        return (self.basis_left, *self.basis_moments, self.basis_right)

    def dof_values(self, p: Poly1):
        """Apply every degree-of-freedom functional to p."""
        mids = tuple(inner1(w.poly, p) for w in self.moment_weights)
        return (p(-HALF), *mids, p(HALF))


@dataclass(frozen=True)
class PointTest1D:
    """Interface test function, stored as its two cellwise pieces.

    ``left`` is the restriction to the cell left of the interface (the
    piece carrying the (1+alpha)/2 pairing), ``right`` the restriction
    to the cell on the right.
    """

    alpha: object
    left: Poly1
    right: Poly1


@dataclass(frozen=True)
class DerivStencil1D:
    """Weights of the upwinded interface derivative, scaled by 1/dx.

    The 2K+1 weights act on the dof window
    (left cell: endpoint, moments, shared interface value,
    right cell: moments, endpoint).
    """

    k: int
    weights: tuple

    @property
    def float_weights(self):
        return tuple(float(w) for w in self.weights)

    def apply(self, window):
        if len(window) != len(self.weights):
            raise ValueError("dof window does not match stencil size")
        return sum(w * v for w, v in zip(self.weights, window))


def build_element(k: int) -> Element1D:
    """Construct the degree-K element with its dual basis, exactly."""
    if k < 2:
        raise ValueError(f"element degree must be >= 2, got {k}")
    weights = tuple(moment_weight(kk) for kk in range(k - 1))
    legs = legendre_basis(k)
    rows = [[leg(-HALF) for leg in legs]]
    rows += [[inner1(w.poly, leg) for leg in legs] for w in weights]
    rows.append([leg(HALF) for leg in legs])
    n = k + 1
    basis = []
    for s in range(n):
        rhs = [Fraction(int(r == s)) for r in range(n)]
        basis.append(from_legendre(solve_exact(rows, rhs)))
    return Element1D(k, basis[0], tuple(basis[1:-1]), basis[-1], weights)


def build_point_test(element: Element1D, alpha) -> PointTest1D:
    """Solve for the interface test-function pieces at upwind weight alpha."""
    k = element.k
    af = Fraction(alpha)
    legs = legendre_basis(k)
    rows = [[inner1(b, leg) for leg in legs] for b in element.basis()]
    n = k + 1
    rhs_left = [Fraction(0)] * n
    rhs_left[-1] = HALF + af / 2  # pairing with the right-endpoint basis function
    rhs_right = [Fraction(0)] * n
    rhs_right[0] = HALF - af / 2  # pairing with the left-endpoint basis function
    left = from_legendre(solve_exact(rows, rhs_left))
    right = from_legendre(solve_exact(rows, rhs_right))
    return PointTest1D(alpha, left, right)


def derivative_stencil(element: Element1D, test: PointTest1D) -> DerivStencil1D:
    """Dof weights of the alpha-blended interface derivative.

    Equals (1+alpha)/2 times the derivative of the left-cell
    reconstruction at its right endpoint plus (1-alpha)/2 times the
    derivative of the right-cell reconstruction at its left endpoint;
    the pairing of the test function with the derivative of the global
    reconstruction reduces to exactly this blend.
    """
    k = element.k
    af = Fraction(test.alpha)
    basis = element.basis()
    d_right_end = [differentiate1(p)(HALF) for p in basis]
    d_left_end = [differentiate1(p)(-HALF) for p in basis]
    w_left_cell = HALF + af / 2
    w_right_cell = HALF - af / 2
    weights = [w_left_cell * d for d in d_right_end] + [Fraction(0)] * k
    for i, d in enumerate(d_left_end):
        weights[k + i] += w_right_cell * d
    return DerivStencil1D(k, tuple(weights))


def reconstruct(element: Element1D, dofs) -> Poly1:
    """Cell polynomial matching the given dofs (left, moments, right)."""
    basis = element.basis()
    if len(dofs) != len(basis):
        raise ValueError(f"expected {len(basis)} dofs, got {len(dofs)}")
    total = Poly1([0])
    for v, b in zip(dofs, basis):
        total = total + v * b
    return total
