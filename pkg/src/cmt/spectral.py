"""Linear part extraction, centre/stable spectral splitting, eigenbasis transform.

The splitter accepts only spectra with centre (|Re| <= zero_tol) and stable
(Re < -zero_tol) eigenvalues; anything with a positive real part is outside
the supported theory.  Complex conjugate pairs are realified: a centre pair
+-i*w becomes the rotation block [[0, w], [-w, 0]] (the first row carries +w),
a stable pair a+-i*b becomes [[a, b], [-b, a]].  Basis columns are ordered
centre first, then stable.

Eigenvector normalization is unit Euclidean norm with the first significant
entry positive, except when a ``basis`` override matrix is supplied (DSL
stanza or CLI flag), which is used verbatim.  Manifold coefficients depend on
basis scaling, so replaying a hand derivation that used an unnormalized
eigenvector matrix requires the override.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DefectiveSpectrumError,
    InconsistentSplitError,
    NotShiftedError,
    UnsupportedSpectrumError,
)
from .poly import Polynomial, PolyMap
from .sysdsl import SystemSpec

ZERO_TOL_DEFAULT = 1e-9
BLOCK_TOL = 1e-9
DEFECT_COND = 1e8


@dataclass(frozen=True)
class LinearPart:
    """Jacobian at the origin, read off the degree-1 coefficients exactly."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Eigenvalue:
    re: float
    im: float
    kind: str  # "centre" or "stable"


@dataclass(frozen=True)
class SpectralSplit:
    centre_dim: int
    stable_dim: int
    eigenvalues: tuple[Eigenvalue, ...]
    basis: np.ndarray        # P, columns centre-first
    basis_inv: np.ndarray    # P^-1
    centre_block: np.ndarray  # A, c x c
    stable_block: np.ndarray  # B, s x s
    zero_tol: float

    @property
    def dim(self) -> int:
        return self.centre_dim + self.stable_dim

    def block_diagonal(self) -> np.ndarray:
        n, c = self.dim, self.centre_dim
        out = np.zeros((n, n))
        out[:c, :c] = self.centre_block
        out[c:, c:] = self.stable_block
        return out


@dataclass(frozen=True)
class TransformedSystem:
    """The system in eigenbasis coordinates: block-diagonal linear part plus
    a purely nonlinear polynomial remainder (degree >= 2)."""

    split: SpectralSplit
    nonlinear: PolyMap
    labels: tuple[str, ...]

    @property
    def centre_dim(self) -> int:
        return self.split.centre_dim

    @property
    def stable_dim(self) -> int:
        return self.split.stable_dim

    def full_field(self) -> PolyMap:
        """Linear part plus nonlinear remainder as one PolyMap."""
        lin = self.split.block_diagonal()
        return PolyMap(
            Polynomial.linear_form(lin[i]) + self.nonlinear[i]
            for i in range(self.split.dim)
        )


def linear_part(spec: SystemSpec) -> LinearPart:
    """Degree-1 coefficient matrix of the field; requires the origin to be
    the (already shifted) equilibrium."""
    n = spec.nvars
    origin = (0,) * n
    bad = [
        (name, abs(p.coefficient(origin)))
        for name, p in zip(spec.variables, spec.field)
        if abs(p.coefficient(origin)) > 1e-9
    ]
    if bad:
        detail = ", ".join(f"{name}: {val:.3e}" for name, val in bad)
        raise NotShiftedError(
            f"field has constant terms ({detail}); shift equilibrium first"
        )
    mat = np.zeros((n, n))
    for i, p in enumerate(spec.field):
        for j in range(n):
            exps = tuple(1 if k == j else 0 for k in range(n))
            mat[i, j] = p.coefficient(exps)
    return LinearPart(mat)


def _sign_normalize(vec: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(vec))
    for entry in vec:
        if abs(entry) > 1e-12 * scale:
            return -vec if entry < 0 else vec
    return vec


def _pair_columns(vec: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Real/imaginary columns of a complex eigenvector, phase-fixed so the
    first significant entry is real positive, jointly rescaled to unit size."""
    scale = np.max(np.abs(vec))
    for entry in vec:
        if abs(entry) > 1e-12 * scale:
            vec = vec * (abs(entry) / entry)
            break
    re, im = vec.real.copy(), vec.imag.copy()
    norm = max(np.linalg.norm(re), np.linalg.norm(im))
    return re / norm, im / norm


def eigen_split(lin: LinearPart, zero_tol: float = ZERO_TOL_DEFAULT,
                basis=None) -> SpectralSplit:
    """Partition the spectrum into centre and stable parts and build the
    realified eigenbasis (or validate a user-supplied override)."""
    J = np.asarray(lin.matrix, dtype=float)
    n = J.shape[0]
    w, V = np.linalg.eig(J)

    worst = float(np.max(w.real))
    if worst > zero_tol:
        raise UnsupportedSpectrumError(
            f"eigenvalue with positive real part {worst:.6g} "
            "(only centre + stable spectra are supported)"
        )
    cond = float(np.linalg.cond(V))
    if cond > DEFECT_COND:
        raise DefectiveSpectrumError(
            f"eigenvector matrix condition number {cond:.3e}: "
            "matrix is defective (non-diagonalizable) within tolerance"
        )

    im_tol = 1e-12 * (1.0 + float(np.max(np.abs(w))))
    reals, pairs = [], []
    for k in range(n):
        if abs(w[k].imag) <= im_tol:
            reals.append(k)
        elif w[k].imag > 0.0:
            pairs.append(k)

    def is_centre(val: complex) -> bool:
        return val.real > -zero_tol

    # column order: real eigenvalues (descending), then realified pairs
    centre_order = sorted((k for k in reals if is_centre(w[k])),
                          key=lambda k: -w[k].real)
    centre_pairs = sorted((k for k in pairs if is_centre(w[k])),
                          key=lambda k: -w[k].imag)
    stable_order = sorted((k for k in reals if not is_centre(w[k])),
                          key=lambda k: -w[k].real)
    stable_pairs = sorted((k for k in pairs if not is_centre(w[k])),
                          key=lambda k: (-w[k].real, -w[k].imag))

    c = len(centre_order) + 2 * len(centre_pairs)
    s = n - c

    eigenvalues = []
    columns = []
    blocks_c = []
    blocks_s = []
    for k in centre_order:
        eigenvalues.append(Eigenvalue(float(w[k].real), 0.0, "centre"))
        columns.append(_sign_normalize(V[:, k].real))
        blocks_c.append(np.array([[0.0]]))
    for k in centre_pairs:
        lam = float(w[k].imag)
        eigenvalues.append(Eigenvalue(float(w[k].real), lam, "centre"))
        eigenvalues.append(Eigenvalue(float(w[k].real), -lam, "centre"))
        re, im = _pair_columns(V[:, k])
        columns.extend([re, im])
        blocks_c.append(np.array([[0.0, lam], [-lam, 0.0]]))
    for k in stable_order:
        eigenvalues.append(Eigenvalue(float(w[k].real), 0.0, "stable"))
        columns.append(_sign_normalize(V[:, k].real))
        blocks_s.append(np.array([[float(w[k].real)]]))
    for k in stable_pairs:
        alpha, beta = float(w[k].real), float(w[k].imag)
        eigenvalues.append(Eigenvalue(alpha, beta, "stable"))
        eigenvalues.append(Eigenvalue(alpha, -beta, "stable"))
        re, im = _pair_columns(V[:, k])
        columns.extend([re, im])
        blocks_s.append(np.array([[alpha, beta], [-beta, alpha]]))

    if basis is not None:
        P = np.asarray(basis, dtype=float)
        if P.shape != (n, n):
            raise InconsistentSplitError(
                f"basis override must be {n}x{n}, got {P.shape}"
            )
    else:
        P = np.column_stack(columns) if columns else np.eye(n)

    try:
        Pinv = np.linalg.inv(P)
    except np.linalg.LinAlgError:
        raise InconsistentSplitError("basis matrix is singular") from None
    if np.max(np.abs(P @ Pinv - np.eye(n))) > BLOCK_TOL:
        raise InconsistentSplitError("basis matrix is ill-conditioned")

    D = Pinv @ J @ P
    off = max(
        float(np.max(np.abs(D[:c, c:]))) if c and s else 0.0,
        float(np.max(np.abs(D[c:, :c]))) if c and s else 0.0,
    )
    if off > BLOCK_TOL:
        raise InconsistentSplitError(
            f"basis does not block-diagonalize the Jacobian "
            f"(off-block magnitude {off:.3e}); centre columns must come first"
        )

    if basis is not None:
        A = D[:c, :c].copy()
        B = D[c:, c:].copy()
        eig_a = np.sort_complex(np.linalg.eigvals(A)) if c else np.array([])
        want_a = np.sort_complex(
            np.array([complex(e.re, e.im) for e in eigenvalues if e.kind == "centre"])
        )
        if c and np.max(np.abs(eig_a - want_a)) > 1e-8:
            raise InconsistentSplitError(
                "override basis does not place the centre directions first"
            )
    else:
        A = _block_diag(blocks_c, c)
        B = _block_diag(blocks_s, s)
        want = np.zeros((n, n))
        want[:c, :c] = A
        want[c:, c:] = B
        if np.max(np.abs(D - want)) > max(BLOCK_TOL, 10 * zero_tol):
            raise InconsistentSplitError(
                "similarity transform disagrees with realified blocks"
            )

    return SpectralSplit(
        centre_dim=c,
        stable_dim=s,
        eigenvalues=tuple(eigenvalues),
        basis=P,
        basis_inv=Pinv,
        centre_block=A,
        stable_block=B,
        zero_tol=zero_tol,
    )


def _block_diag(blocks: list[np.ndarray], size: int) -> np.ndarray:
    out = np.zeros((size, size))
    at = 0
    for b in blocks:
        k = b.shape[0]
        out[at:at + k, at:at + k] = b
        at += k
    return out


def to_eigenbasis(spec: SystemSpec, split: SpectralSplit) -> TransformedSystem:
    """Transform the field to u-coordinates: udot = P^-1 J P u + P^-1 f(P u).

    The degree-0/1 remainder after absorbing the block-diagonal linear part
    must vanish to tolerance, otherwise the split does not belong to this
    system.
    """
    n = spec.nvars
    if split.dim != n:
        raise InconsistentSplitError(
            f"split is {split.dim}-dimensional, system is {n}-dimensional"
        )
    composed = spec.field.compose_linear(split.basis)  # F_j(P u)
    Pinv = split.basis_inv
    lin = split.block_diagonal()
    origin = (0,) * n
    # the snapped centre block legitimately absorbs real parts up to the
    # zero-tolerance band, so the leftover bound scales with it
    absorb_tol = max(BLOCK_TOL, 10.0 * split.zero_tol)
    nonlinear = []
    for i in range(n):
        total = Polynomial.zero(n)
        for j in range(n):
            if Pinv[i, j] != 0.0:
                total = total + composed[j] * float(Pinv[i, j])
        total = total - Polynomial.linear_form(lin[i])
        low = abs(total.coefficient(origin))
        for j in range(n):
            exps = tuple(1 if k == j else 0 for k in range(n))
            low = max(low, abs(total.coefficient(exps)))
        if low > absorb_tol:
            raise InconsistentSplitError(
                f"leftover degree<=1 terms of magnitude {low:.3e} in component {i}: "
                "split was not produced from this system's linear part"
            )
        cleaned = Polynomial(
            n, {e: c for e, c in total.terms.items() if sum(e) >= 2}
        )
        nonlinear.append(cleaned)
    labels = tuple(
        [f"u{i + 1}" for i in range(split.centre_dim)]
        + [f"v{j + 1}" for j in range(split.stable_dim)]
    )
    return TransformedSystem(split=split, nonlinear=PolyMap(nonlinear), labels=labels)
