import numpy as np
import pytest

from cmt.poly import Polynomial, PolyMap, monomials_of_degree
from cmt.spectral import Eigenvalue, SpectralSplit, TransformedSystem


def decoupled_system(A, B, nonlinear) -> TransformedSystem:
    """Build a TransformedSystem directly from decoupled blocks, basis = I."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    c, s = A.shape[0], B.shape[0]
    n = c + s
    eigs = []
    for lam in np.linalg.eigvals(A):
        eigs.append(Eigenvalue(float(lam.real), float(lam.imag), "centre"))
    for lam in np.linalg.eigvals(B):
        eigs.append(Eigenvalue(float(lam.real), float(lam.imag), "stable"))
    split = SpectralSplit(
        centre_dim=c,
        stable_dim=s,
        eigenvalues=tuple(eigs),
        basis=np.eye(n),
        basis_inv=np.eye(n),
        centre_block=A,
        stable_block=B,
        zero_tol=1e-9,
    )
    labels = tuple([f"u{i+1}" for i in range(c)] + [f"v{j+1}" for j in range(s)])
    return TransformedSystem(split=split, nonlinear=PolyMap(nonlinear), labels=labels)


def random_polynomial(rng, nvars, max_degree=3, scale=2.0) -> Polynomial:
    terms = {}
    for d in range(max_degree + 1):
        for mono in monomials_of_degree(nvars, d):
            if rng.random() < 0.5:
                terms[mono] = rng.uniform(-scale, scale)
    return Polynomial(nvars, terms)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
