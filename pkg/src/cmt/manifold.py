"""Order-by-order solution of the centre-manifold invariance equation.

With the system in decoupled form

    xdot = A x + f(x, y)        (centre, dimension c)
    ydot = B y + g(x, y)        (stable, dimension s)

the graph y = h(x) of the centre manifold satisfies

    N(x) = Dh(x) (A x + f(x, h(x))) - (B h(x) + g(x, h(x))) = 0.

Matching coefficients degree by degree is linear in each degree's unknowns:
because f and g start at degree 2 and h starts at degree 2, the degree-d
slice of N involves the unknown degree-d part of h only through the operator

    L_d(h_d) = Dh_d . (A x) - B h_d

restricted to degree-d monomials.  Each degree therefore reduces to one
dense linear solve whose matrix depends on A and B alone; a near-singular
matrix is a resonance and is reported with the offending degree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ReductionScopeError, ResonanceError
from .poly import Polynomial, PolyMap, monomials_of_degree
from .spectral import TransformedSystem

RESIDUAL_TOL = 1e-8
RESONANCE_COND = 1e10
LEADING_ZERO_TOL = 1e-10


@dataclass(frozen=True)
class CentreManifoldMap:
    """Stable coordinates as polynomials in the centre coordinates.

    Tangency holds structurally: every component has terms of total degree
    in [2, order] only, so h(0) = 0 and Dh(0) = 0.
    """

    order: int
    h: PolyMap  # s components, each over the c centre variables

    @property
    def stable_dim(self) -> int:
        return len(self.h)

    @property
    def centre_dim(self) -> int:
        return self.h.nvars


@dataclass(frozen=True)
class ReducedSystem:
    """Centre dynamics after substituting the manifold: A x + f(x, h(x))."""

    field: PolyMap  # c components over the c centre variables, linear included
    centre_block: np.ndarray
    order: int

    @property
    def centre_dim(self) -> int:
        return len(self.field)


@dataclass(frozen=True)
class ParityReport:
    f_parity: str              # even / odd / neither
    g_parity: str
    predicted_h_parity: str    # even / unknown
    observed_odd_mass: float   # max |coefficient| over odd-degree terms of h


def _split_fg(sys: TransformedSystem) -> tuple[list[Polynomial], list[Polynomial]]:
    c = sys.centre_dim
    comps = list(sys.nonlinear)
    return comps[:c], comps[c:]


def _substituted(polys: list[Polynomial], h: PolyMap, c: int, order: int
                 ) -> list[Polynomial]:
    """Compose full-space polynomials with (x, h(x)), truncated at ``order``."""
    subs = {c + j: h[j] for j in range(len(h))}
    return [p.substitute(subs, nvars_out=c).truncate(order) for p in polys]


def _residual_polys(sys: TransformedSystem, h: PolyMap, order: int
                    ) -> list[Polynomial]:
    c, s = sys.centre_dim, sys.stable_dim
    A, B = sys.split.centre_block, sys.split.stable_block
    f, g = _split_fg(sys)
    f_sub = _substituted(f, h, c, order)
    g_sub = _substituted(g, h, c, order)
    xdot = [
        Polynomial.linear_form(A[i]) + f_sub[i] for i in range(c)
    ]
    out = []
    for j in range(s):
        n_j = Polynomial.zero(c)
        for i in range(c):
            n_j = n_j + h[j].partial(i) * xdot[i]
        for j2 in range(s):
            if B[j, j2] != 0.0:
                n_j = n_j - h[j2] * float(B[j, j2])
        n_j = n_j - g_sub[j]
        out.append(n_j.truncate(order))
    return out


def _degree_operator(A: np.ndarray, B: np.ndarray, c: int, s: int, degree: int
                     ) -> tuple[np.ndarray, list]:
    """Matrix of h_d -> Dh_d.(Ax) - B h_d on degree-d monomial coefficients."""
    monos = monomials_of_degree(c, degree)
    m = len(monos)
    index = {mono: k for k, mono in enumerate(monos)}
    lie_cols = []
    for mono in monos:
        p = Polynomial(c, {mono: 1.0})
        lie = Polynomial.zero(c)
        for i in range(c):
            lie = lie + p.partial(i) * Polynomial.linear_form(A[i])
        col = np.zeros(m)
        for e, coeff in lie.terms.items():
            col[index[e]] = coeff
        lie_cols.append(col)
    size = s * m
    mat = np.zeros((size, size))
    for j in range(s):
        for k in range(m):
            colidx = j * m + k
            mat[j * m:(j + 1) * m, colidx] += lie_cols[k]
            for j2 in range(s):
                mat[j2 * m + k, colidx] -= B[j2, j]
    return mat, monos


def solve_centre_manifold(sys: TransformedSystem, order: int = 2
                          ) -> CentreManifoldMap:
    """Solve the invariance equation for h up to the requested degree.

    Degrees are processed in increasing order; at each degree the linear
    system over that degree's coefficients is solved with the lower-degree
    coefficients already fixed.  A coefficient matrix with condition number
    above RESONANCE_COND raises ResonanceError naming the degree.
    """
    if not 2 <= order <= 4:
        raise ValueError(f"manifold order must be in [2, 4], got {order}")
    c, s = sys.centre_dim, sys.stable_dim
    if c == 0:
        raise ReductionScopeError("system has no centre directions to reduce onto")
    if s == 0:
        raise ReductionScopeError(
            "system has no stable directions; there is no manifold graph to solve"
        )
    A, B = sys.split.centre_block, sys.split.stable_block

    h_terms: list[dict] = [dict() for _ in range(s)]
    for degree in range(2, order + 1):
        h_now = PolyMap(Polynomial(c, t) for t in h_terms)
        residual = _residual_polys(sys, h_now, degree)
        mat, monos = _degree_operator(A, B, c, s, degree)
        cond = float(np.linalg.cond(mat))
        if cond > RESONANCE_COND:
            raise ResonanceError(degree, cond)
        m = len(monos)
        rhs = np.zeros(s * m)
        for j in range(s):
            part = residual[j].homogeneous_part(degree)
            for k, mono in enumerate(monos):
                rhs[j * m + k] = -part.coefficient(mono)
        sol = np.linalg.solve(mat, rhs)
        if degree == 2 and float(np.max(np.abs(sol), initial=0.0)) < LEADING_ZERO_TOL:
            # mirror the paper's workflow: a vanishing leading order is taken
            # as exactly zero before moving to the next degree
            sol = np.zeros_like(sol)
        for j in range(s):
            for k, mono in enumerate(monos):
                if sol[j * m + k] != 0.0:
                    h_terms[j][mono] = float(sol[j * m + k])

    return CentreManifoldMap(
        order=order, h=PolyMap(Polynomial(c, t) for t in h_terms)
    )


def invariance_residual(sys: TransformedSystem, manifold: CentreManifoldMap,
                        order: int | None = None) -> PolyMap:
    """N(x) = Dh.(Ax + f(x,h)) - (Bh + g(x,h)), truncated at ``order``."""
    if order is None:
        order = manifold.order
    return PolyMap(_residual_polys(sys, manifold.h, order))


def reduce(sys: TransformedSystem, manifold: CentreManifoldMap) -> ReducedSystem:
    """Substitute h into the centre components and truncate at the manifold
    order: xdot = A x + f(x, h(x))."""
    c = sys.centre_dim
    A = sys.split.centre_block
    f, _ = _split_fg(sys)
    f_sub = _substituted(f, manifold.h, c, manifold.order)
    field = PolyMap(
        Polynomial.linear_form(A[i]) + f_sub[i] for i in range(c)
    )
    return ReducedSystem(field=field, centre_block=A.copy(), order=manifold.order)


def _map_parity(polys: list[Polynomial]) -> str:
    degrees = {sum(e) for p in polys for e in p.terms}
    if not degrees:
        return "even"
    if all(d % 2 == 0 for d in degrees):
        return "even"
    if all(d % 2 == 1 for d in degrees):
        return "odd"
    return "neither"


def parity_check(sys: TransformedSystem, manifold: CentreManifoldMap
                 ) -> ParityReport:
    """Term-inspection parity of the nonlinearities and the solved manifold.

    The prediction follows the evenness theorem: even f and g predict an
    even h.  observed_odd_mass reports how far the solved map actually is
    from that prediction.
    """
    f, g = _split_fg(sys)
    f_parity = _map_parity(f)
    g_parity = _map_parity(g)
    predicted = "even" if f_parity == "even" and g_parity == "even" else "unknown"
    odd_mass = 0.0
    for p in manifold.h:
        for e, coeff in p.terms.items():
            if sum(e) % 2 == 1:
                odd_mass = max(odd_mass, abs(coeff))
    return ParityReport(
        f_parity=f_parity,
        g_parity=g_parity,
        predicted_h_parity=predicted,
        observed_odd_mass=odd_mass,
    )
