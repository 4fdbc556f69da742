"""Real representation of complex vectors and matrices.

A complex vector psi = x + i*y is identified with the real vector
z = (x_1..x_N, y_1..y_N); a complex matrix Z = A + i*B with the real
block matrix [[A, -B], [B, A]].  Under this identification
multiplication by i becomes the symplectic matrix J = [[0, -I], [I, 0]],
and the real inner product of images equals Re of the complex inner
product.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError


def realify_vector(psi: np.ndarray) -> np.ndarray:
    """Map a complex N-vector to its real 2N-vector (Re parts first,
    then Im parts).  Norm-preserving."""
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.concatenate([psi.real, psi.imag])


def unrealify_vector(z: np.ndarray) -> np.ndarray:
    """Inverse of realify_vector: a real 2N-vector back to complex N."""
    z = np.asarray(z, dtype=float).ravel()
    if z.shape[0] % 2:
        raise DimensionMismatchError("realified vector must have even length")
    n = z.shape[0] // 2
    return z[:n] + 1j * z[n:]


def realify_columns(m: np.ndarray) -> np.ndarray:
    """Apply realify_vector to every column of a complex (N, k) matrix,
    giving a real (2N, k) matrix."""
    m = np.asarray(m, dtype=complex)
    return np.concatenate([m.real, m.imag], axis=0)


def realify_matrix(z: np.ndarray) -> np.ndarray:
    """Real representation [[A, -B], [B, A]] of a square complex matrix
    Z = A + i*B.

    Satisfies realify(Z psi) = realify_matrix(Z) @ realify(psi) and
    realify_matrix(Z*) = realify_matrix(Z).T.
    """
    z = np.asarray(z, dtype=complex)
    if z.ndim != 2 or z.shape[0] != z.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {z.shape}")
    a, b = z.real, z.imag
    return np.block([[a, -b], [b, a]])


def symplectic_j(n: int) -> np.ndarray:
    """The symplectic matrix J = [[0, -I_n], [I_n, 0]] in R^{2n}.

    J is the image of i*I_n under realify_matrix; J @ J = -I, J.T = -J.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = -np.eye(n)
    j[n:, :n] = np.eye(n)
    return j


def apply_j(z: np.ndarray) -> np.ndarray:
    """J @ z without forming J: (x, y) -> (-y, x)."""
    z = np.asarray(z, dtype=float)
    n = z.shape[0] // 2
    return np.concatenate([-z[n:], z[:n]])


def selector_matrix(k: int, n: int) -> np.ndarray:
    """Diagonal 0/1 matrix selecting the real and imaginary coordinates
    of complex entry k (1-based), i.e. diag(e_k + e_{k+n}) in R^{2n}.

    The selectors sum to the identity over k = 1..n and each commutes
    with the symplectic matrix.
    """
    if not 1 <= k <= n:
        raise IndexError(f"selector index {k} outside 1..{n}")
    d = np.zeros(2 * n)
    d[k - 1] = 1.0
    d[k - 1 + n] = 1.0
    return np.diag(d)


def selector_jz_norms_sq(z: np.ndarray) -> np.ndarray:
    """Squared norms ||D_k J z||^2 for k = 1..n.

    For z = realify(psi) this is the vector of outcome probabilities
    |psi_k|^2 in the standard basis.
    """
    z = np.asarray(z, dtype=float)
    n = z.shape[0] // 2
    return z[:n] ** 2 + z[n:] ** 2
