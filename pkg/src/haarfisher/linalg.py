"""Dense complex/real linear algebra substrate.

Orthogonal projections onto spans, Hermitian eigendecomposition and the
Hermitian matrix exponential exp(-i*t*H).  Everything here is a pure
function of its inputs.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import DimensionMismatchError, NonHermitianError

DEFAULT_DROP_TOL = 1e-12
HERMITIAN_TOL = 1e-10


def orthonormal_basis(vectors: Sequence[np.ndarray], drop_tol: float = DEFAULT_DROP_TOL) -> np.ndarray:
    """Orthonormalize `vectors` by modified Gram-Schmidt with one
    re-orthogonalization pass.

    Vectors whose residual norm is <= drop_tol are dropped: they add
    nothing to the span.  Returns a (dim, rank) matrix with orthonormal
    columns.
    """
    if drop_tol <= 0:
        raise ValueError("drop_tol must be positive")
    vecs = [np.asarray(v, dtype=float).ravel() for v in vectors]
    if not vecs:
        raise ValueError("need at least one vector")
    dim = vecs[0].shape[0]
    for v in vecs:
        if v.shape[0] != dim:
            raise DimensionMismatchError(
                f"vectors of length {v.shape[0]} and {dim} cannot span a common space"
            )
    basis: list[np.ndarray] = []
    for v in vecs:
        w = v.copy()
        # second pass makes the basis orthogonal to working precision even
        # for nearly dependent inputs
        for _ in range(2):
            for q in basis:
                w -= q * (q @ w)
        norm = np.linalg.norm(w)
        if norm > drop_tol:
            basis.append(w / norm)
    if not basis:
        return np.zeros((dim, 0))
    return np.column_stack(basis)


def project_onto_span(vectors: Sequence[np.ndarray], drop_tol: float = DEFAULT_DROP_TOL) -> np.ndarray:
    """Orthogonal projection matrix onto span{vectors}.

    The result P satisfies P @ P = P and P.T = P; its range is the span
    of the inputs whose norm exceeds drop_tol.
    """
    q = orthonormal_basis(vectors, drop_tol=drop_tol)
    return q @ q.T


def require_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate Hermitian-ness of a square matrix and return its exactly
    Hermitian part (H + H*)/2."""
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {h.shape}")
    dev = np.abs(h - h.conj().T).max() if h.size else 0.0
    if dev > tol:
        raise NonHermitianError(f"matrix deviates from Hermitian by {dev:.3e} (tol {tol:.1e})")
    return (h + h.conj().T) / 2


def hermitian_eig(h: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition H = V diag(w) V* of a Hermitian matrix.

    Eigenvalues are returned in ascending order; V has orthonormal
    columns.  Raises NonHermitianError if H deviates from Hermitian by
    more than `tol` in max-entry norm.
    """
    hh = require_hermitian(h, tol=tol)
    w, v = np.linalg.eigh(hh)
    return w, v


def hermitian_expm(h: np.ndarray, t: float, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """exp(-i*t*H) for Hermitian H, via eigendecomposition.

    The result is unitary up to roundoff for any real t.
    """
    w, v = hermitian_eig(h, tol=tol)
    phases = np.exp(-1j * t * w)
    return (v * phases) @ v.conj().T


def symmetrize(a: np.ndarray) -> np.ndarray:
    """(A + A.T)/2, suppressing roundoff asymmetry of a nominally
    symmetric real matrix."""
    return (a + a.T) / 2


def max_abs(a: np.ndarray) -> float:
    """Max-entry norm, max_ij |A_ij|."""
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


def spectral_norm_sym(a: np.ndarray) -> float:
    """Spectral norm of a symmetric real matrix (largest |eigenvalue|)."""
    return float(np.abs(np.linalg.eigvalsh(symmetrize(np.asarray(a, dtype=float)))).max())
