"""Minors and the three matrix factorizations the duality maps are built from.

* structured_diagonalize: conjugate a Hermitian algebra element into the
  canonical diagonal pattern by a unitary group element.
* lower_triangularize: split g = nplus * glow with nplus unipotent upper
  triangular (valid on the big Gauss cell).
* iwasawa: g = n * a * k with n unipotent upper, a positive diagonal,
  k unitary.

Determinants and eigensolves delegate to LAPACK via numpy/scipy; the
structure-preserving logic (eigenvector pairing through the bilinear form,
phase conventions, determinant normalization in the orthogonal families)
lives here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    AlgebraMembershipError,
    DegenerateSpectrumError,
    GaussCellError,
    SingularMatrixError,
    ValidationError,
)
from .rootsys import RootDatum, algebra_residual, cartan_pattern

# Minimum admissible eigenvalue gap (in absolute terms, inputs are O(1)).
DEFAULT_GAP_TOL = 1.0e-8
# Gauss pivot threshold, relative to the Frobenius norm of the input.
PIVOT_RTOL = 1.0e-12
# Post-condition tolerance for factorization residuals, relative.
RESIDUAL_RTOL = 1.0e-10


def _as_square(M, name="matrix") -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M.view(float) if M.dtype == complex else M)):
        raise ValidationError(f"{name} has non-finite entries")
    return M


def determinant(M) -> complex:
    """Determinant of a square complex matrix."""
    return complex(np.linalg.det(_as_square(M).astype(complex)))


def extended_solve(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve A @ X = B by partial-pivot elimination in extended precision.

    LAPACK has no long-double complex path, and some residual checks lose
    their meaning in double precision once the triangular factors carry a
    wide dynamic range.  Matrices here are at most 17 x 17, so a Python
    loop costs nothing.
    """
    A = np.asarray(A).astype(np.clongdouble).copy()
    B = np.asarray(B).astype(np.clongdouble).copy()
    if B.ndim == 1:
        B = B[:, None]
        squeeze = True
    else:
        squeeze = False
    N = A.shape[0]
    for k in range(N):
        piv = k + int(np.argmax(np.abs(A[k:, k])))
        if A[piv, k] == 0:
            raise SingularMatrixError("singular matrix in extended-precision solve")
        if piv != k:
            A[[k, piv]] = A[[piv, k]]
            B[[k, piv]] = B[[piv, k]]
        if k + 1 < N:
            m = A[k + 1 :, k] / A[k, k]
            A[k + 1 :, k + 1 :] -= np.outer(m, A[k, k + 1 :])
            B[k + 1 :] -= np.outer(m, B[k])
    X = np.zeros_like(B)
    for i in range(N - 1, -1, -1):
        X[i] = (B[i] - A[i, i + 1 :] @ X[i + 1 :]) / A[i, i]
    return X[:, 0] if squeeze else X


@dataclass(frozen=True)
class MinorSelector:
    """Sorted row and column index sets of equal size."""

    rows: tuple
    cols: tuple

    def __post_init__(self):
        rows, cols = tuple(self.rows), tuple(self.cols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        if len(rows) != len(cols) or len(rows) == 0:
            raise ValidationError("rows and cols must be nonempty and of equal size")
        for idx in (rows, cols):
            if list(idx) != sorted(set(idx)):
                raise ValidationError(f"indices must be sorted and distinct, got {idx}")
            if idx[0] < 0:
                raise ValidationError(f"negative index in {idx}")


def bottom_right_minor(M, k: int) -> complex:
    """Determinant of the bottom-right k x k block."""
    M = _as_square(M)
    N = M.shape[0]
    if not 1 <= k <= N:
        raise ValidationError(f"minor size {k} out of range 1..{N}")
    return complex(np.linalg.det(M[N - k :, N - k :].astype(complex)))


def general_minor(M, selector: MinorSelector) -> complex:
    """Determinant of the submatrix picked by a MinorSelector."""
    M = _as_square(M)
    N = M.shape[0]
    if selector.rows[-1] >= N or selector.cols[-1] >= N:
        raise ValidationError(f"selector {selector} exceeds matrix size {N}")
    sub = M[np.ix_(selector.rows, selector.cols)]
    return complex(np.linalg.det(sub.astype(complex)))


def _phase_fixed(v: np.ndarray) -> np.ndarray:
    """Rotate a unit vector so its largest-modulus entry is real positive."""
    j = int(np.argmax(np.abs(v)))
    ph = v[j] / abs(v[j])
    return v * np.conj(ph)


def structured_diagonalize(datum: RootDatum, X, gap_tol: float = DEFAULT_GAP_TOL):
    """Diagonalize a Hermitian algebra element by a unitary group element.

    Returns (k, qhat) with k X k^dagger equal to the canonical diagonal
    pattern built from qhat (descending; positive half first for B/C/D).
    The eigenvectors of the mirrored eigenvalues are derived from the
    positive-half eigenvectors through the bilinear form, which makes k a
    group element by construction; in family D a leftover sign of det(k)
    is absorbed by flipping the last chamber coordinate, in family B by
    re-phasing the kernel column.

    Raises DegenerateSpectrumError when any eigenvalue gap falls below
    gap_tol, ValidationError for a non-Hermitian input, and
    AlgebraMembershipError when X fails the algebra relation.
    """
    X = _as_square(X, "X").astype(complex)
    N = datum.size
    if X.shape != (N, N):
        raise ValidationError(f"expected shape {(N, N)}, got {X.shape}")
    scale = max(1.0, float(np.linalg.norm(X, "fro")))
    if np.linalg.norm(X - X.conj().T, "fro") > 1.0e-10 * scale:
        raise ValidationError("X is not Hermitian")
    if algebra_residual(datum, X) > 1.0e-8 * scale:
        raise AlgebraMembershipError("X fails the algebra relation")

    w, U = np.linalg.eigh(X)  # ascending
    if N > 1 and np.min(np.diff(w)) < gap_tol:
        raise DegenerateSpectrumError(f"eigenvalue gap below {gap_tol:.1e}")

    fam, n = datum.algebra.family, datum.algebra.rank
    omega = datum.omega

    if fam == "A":
        qhat = w[::-1].copy()
        V = np.empty((N, N), dtype=complex)
        for i in range(N):
            V[:, i] = _phase_fixed(U[:, N - 1 - i])
        k = V.conj().T
    else:
        qhat = w[::-1][:n].copy()
        V = np.empty((N, N), dtype=complex)
        mirror_sign = -1.0 if fam == "C" else 1.0
        for i in range(n):
            v = _phase_fixed(U[:, N - 1 - i])
            V[:, i] = v
            V[:, N - 1 - i] = mirror_sign * (omega @ v.conj())
        if fam == "B":
            if abs(w[n]) > gap_tol:
                raise DegenerateSpectrumError("middle eigenvalue does not vanish")
            u = _phase_fixed(U[:, n])
            # kernel column must satisfy v = Omega conj(v); Omega conj(u) = c u
            c = complex(np.vdot(u, omega @ u.conj()))
            V[:, n] = u * np.exp(0.5j * np.angle(c))
        if fam == "D":
            if np.linalg.det(V).real < 0.0:
                V[:, [n - 1, n]] = V[:, [n, n - 1]]
                qhat[n - 1] = -qhat[n - 1]
        if fam == "B":
            if np.linalg.det(V).real < 0.0:
                V[:, n] = -V[:, n]
        k = V.conj().T

    pattern = cartan_pattern(datum, qhat) if fam != "A" else qhat
    res = np.linalg.norm(k @ X @ k.conj().T - np.diag(pattern), "fro")
    uni = np.linalg.norm(k @ k.conj().T - np.eye(N), "fro")
    if res > 1.0e-8 * scale or uni > 1.0e-10 * N:
        raise SingularMatrixError(
            f"diagonalization residuals too large (conj {res:.3e}, unitary {uni:.3e})"
        )
    return k, qhat


def lower_triangularize(datum: RootDatum, g, pivot_rtol: float = PIVOT_RTOL):
    """Split g = nplus * glow, nplus unipotent upper, glow lower triangular.

    Implemented as an LU factorization of the index-reversed matrix without
    pivoting; a small Gauss pivot means g left the big cell (some trailing
    principal minor vanishes) and raises GaussCellError.
    """
    g = _as_square(g, "g").astype(complex)
    N = datum.size
    if g.shape != (N, N):
        raise ValidationError(f"expected shape {(N, N)}, got {g.shape}")
    gnorm = float(np.linalg.norm(g, "fro"))
    if gnorm == 0.0:
        raise GaussCellError("zero matrix")

    # The no-pivot elimination runs in extended precision: the diagonal of
    # glow spans several decades at larger ranks and the lost digits would
    # otherwise show up as a spurious upper residue.
    gext = g.astype(np.clongdouble)
    A = gext[::-1, ::-1].copy()  # reversal swaps trailing and leading minors
    for k in range(N):
        piv = A[k, k]
        if float(abs(piv)) < pivot_rtol * gnorm:
            raise GaussCellError(f"Gauss pivot {abs(piv):.3e} below {pivot_rtol:.1e} * |g|")
        if k + 1 < N:
            A[k + 1 :, k] /= piv
            A[k + 1 :, k + 1 :] -= np.outer(A[k + 1 :, k], A[k, k + 1 :])

    lowfac = np.tril(A, -1) + np.eye(N)  # unit lower factor of the reversed matrix
    upper = lowfac[::-1, ::-1]  # unipotent upper factor of g itself
    nplus_ext = np.eye(N, dtype=np.clongdouble)
    for i in range(N - 2, -1, -1):  # back substitution: upper @ nplus = 1
        nplus_ext[i, :] -= upper[i, i + 1 :] @ nplus_ext[i + 1 :, :]
    glow_ext = nplus_ext @ gext

    stray = float(np.linalg.norm(np.triu(glow_ext, 1).astype(complex), "fro"))
    if stray > RESIDUAL_RTOL * gnorm:
        raise GaussCellError(f"upper residue {stray:.3e} after elimination")
    nplus = nplus_ext.astype(complex)
    glow = np.tril(glow_ext).astype(complex)
    return nplus, glow


def iwasawa(datum: RootDatum, g):
    """Iwasawa split g = nfactor * afactor * kfactor.

    nfactor is unipotent upper triangular, afactor positive diagonal,
    kfactor unitary; all three inherit group membership from g. Built on
    the RQ decomposition with the diagonal phases pushed into kfactor.
    """
    g = _as_square(g, "g").astype(complex)
    N = datum.size
    if g.shape != (N, N):
        raise ValidationError(f"expected shape {(N, N)}, got {g.shape}")
    gnorm = float(np.linalg.norm(g, "fro"))

    R, Q = scipy.linalg.rq(g)
    d = np.diagonal(R).copy()
    if np.min(np.abs(d)) < 1.0e-13 * max(gnorm, 1.0):
        raise SingularMatrixError("matrix numerically singular in the Iwasawa split")
    ph = d / np.abs(d)

    kfactor = ph[:, None] * Q
    a_diag = np.abs(d)
    nfactor = (R * np.conj(ph)[None, :]) / a_diag[None, :]
    np.fill_diagonal(nfactor, 1.0)
    afactor = np.diag(a_diag).astype(complex)

    res = np.linalg.norm(nfactor @ afactor @ kfactor - g, "fro")
    if res > RESIDUAL_RTOL * max(gnorm, 1.0):
        raise SingularMatrixError(f"Iwasawa residual {res:.3e} too large")
    return nfactor, afactor, kfactor
