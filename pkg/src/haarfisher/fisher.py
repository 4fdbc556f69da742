"""Quantum and classical Fisher information matrices for pure states.

Two independent routes are implemented for each object and cross-checked
in the tests:

* the quantum geometric tensor from complex inner products of state
  derivatives, whose real part is the QFIM (Fubini-Study metric), versus
  the same metric computed in realified coordinates as a projected Gram
  matrix;
* the classical Fisher information of the outcome distribution
  p_k = |(U* psi)_k|^2, from derivatives of sqrt(p), versus its
  projection form in realified coordinates.

The Haar average of the classical matrix over measurement bases equals
half the QFIM; `variance_predictor` gives the exact entrywise variance
of the random matrix around that mean, and `average_outcome_projections`
Monte-Carlo-estimates the projection-sum identity behind the mean.

Complex inner products are conjugate-linear in the first argument.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ansatz import StateWithJacobian
from .haar import sample_haar_batch
from .linalg import symmetrize
from .realrep import realify_columns, realify_vector

DEFAULT_PROB_FLOOR = 1e-14


@dataclass(frozen=True)
class Qgt:
    """Quantum geometric tensor: Hermitian matrix, its real part (the
    QFIM) and its imaginary part (geometric-phase structure)."""

    matrix: np.ndarray  # (m, m) complex Hermitian
    real_part: np.ndarray  # (m, m) symmetric PSD
    imag_part: np.ndarray  # (m, m) antisymmetric


@dataclass(frozen=True)
class Cfim:
    """Classical Fisher information matrix under one measurement basis,
    with sampling provenance and the smallest outcome probability seen."""

    matrix: np.ndarray  # (m, m) symmetric PSD
    basis: str | int  # "standard", "explicit", or the sample stream id
    min_prob: float
    skipped: int  # outcomes below the probability floor


def qgt(swj: StateWithJacobian) -> Qgt:
    """Quantum geometric tensor from state derivatives:
    Q_ij = <d_i psi, d_j psi> - <d_i psi, psi><psi, d_j psi>."""
    jac = swj.jacobian
    psi = swj.state
    overlaps = jac.conj().T @ jac
    a = jac.conj().T @ psi
    q = overlaps - np.outer(a, a.conj())
    q = (q + q.conj().T) / 2
    return Qgt(matrix=q, real_part=q.real.copy(), imag_part=q.imag.copy())


def projected_tangent(swj: StateWithJacobian) -> tuple[np.ndarray, np.ndarray]:
    """Realified state z and tangent matrix A: the realified Jacobian
    with its components along z and Jz removed.

    z and Jz are orthogonal, so the projection is two rank-1 updates.
    """
    z = realify_vector(swj.state)
    zdot = realify_columns(swj.jacobian)
    n = swj.dim
    jz = np.concatenate([-z[n:], z[:n]])
    a = zdot - np.outer(z, z @ zdot) / (z @ z)
    a -= np.outer(jz, jz @ a) / (jz @ jz)
    return z, a


def qfim_realified(swj: StateWithJacobian) -> np.ndarray:
    """QFIM in realified coordinates: the Gram matrix of the realified
    Jacobian after projecting out span{z, Jz}.

    Agrees with the real part of `qgt` to working precision.
    """
    _, a = projected_tangent(swj)
    return symmetrize(a.T @ a)


def imag_qgt_realified(swj: StateWithJacobian) -> np.ndarray:
    """Imaginary part of the geometric tensor computed in realified
    coordinates as (J A)^T A.

    With inner products conjugate-linear in the first argument,
    Im <u, v> equals <J realify(u), realify(v)>; the transpose-J order
    here keeps the sign aligned with `qgt`.  Only the square of this
    matrix enters the variance formula, so the convention cannot affect
    predicted variances.
    """
    _, a = projected_tangent(swj)
    n = swj.dim
    ja = np.concatenate([-a[n:], a[:n]], axis=0)
    m = ja.T @ a
    return (m - m.T) / 2


def measurement_probabilities(psi: np.ndarray, u: np.ndarray | None = None) -> np.ndarray:
    """Outcome distribution p_k = |(U* psi)_k|^2 of measuring psi in the
    basis given by the columns of U (standard basis if U is None)."""
    psi = np.asarray(psi, dtype=complex).ravel()
    w = psi if u is None else u.conj().T @ psi
    return np.abs(w) ** 2


def _rotate(swj: StateWithJacobian, u: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
    """State and Jacobian expressed in the measurement basis."""
    if u is None:
        return swj.state, swj.jacobian
    uh = u.conj().T
    return uh @ swj.state, uh @ swj.jacobian


def cfim_probability_form(swj: StateWithJacobian, u: np.ndarray | None = None,
                          prob_floor: float = DEFAULT_PROB_FLOOR,
                          basis: str | int = "explicit") -> Cfim:
    """CFIM from derivatives of sqrt(p): F_ij = sum_k d_i sqrt(p_k) d_j sqrt(p_k),
    which equals the (1/4) E[d log p d log p] form.

    Outcomes with p_k <= prob_floor are skipped rather than divided by;
    the count of skipped outcomes is recorded.
    """
    w, g = _rotate(swj, u)
    p = np.abs(w) ** 2
    keep = p > prob_floor
    d = np.zeros(g.shape)
    if np.any(keep):
        num = (w.conj()[:, None] * g).real
        d[keep] = num[keep] / np.sqrt(p[keep])[:, None]
    f = symmetrize(d.T @ d)
    return Cfim(matrix=f, basis="standard" if u is None else basis,
                min_prob=float(p.min()), skipped=int((~keep).sum()))


def cfim_projection_form(swj: StateWithJacobian, u: np.ndarray | None = None,
                         prob_floor: float = DEFAULT_PROB_FLOOR,
                         basis: str | int = "explicit") -> Cfim:
    """CFIM as a projected Gram matrix in realified coordinates: the
    rotated realified Jacobian with its components along the rotated
    state and along every outcome direction removed.

    The span vectors are mutually orthogonal (the outcome directions
    each live on one coordinate pair), so the projection reduces to
    normalized rank-1 subtractions; directions with squared norm at or
    below prob_floor are dropped, which is the continuous extension of
    the formula through vanishing outcome probabilities.
    """
    w, g = _rotate(swj, u)
    f, min_prob, skipped = _cfim_projection_core(w[None, :], g[None, :, :], prob_floor)
    return Cfim(matrix=f[0], basis="standard" if u is None else basis,
                min_prob=float(min_prob[0]), skipped=int(skipped[0]))


def _cfim_projection_core(w: np.ndarray, g: np.ndarray, prob_floor: float
                          ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batched projection-form CFIM.

    w: (B, N) rotated states; g: (B, N, m) rotated Jacobians.
    Returns (B, m, m) matrices, (B,) min probabilities, (B,) drop counts.
    """
    re_g = g.real.copy()
    im_g = g.imag.copy()
    x = w.real
    y = w.imag
    p = x ** 2 + y ** 2

    # component along the realified state v = (x, y)
    norm_sq = np.sum(p, axis=1)
    coef = (np.einsum("bn,bnm->bm", x, re_g) + np.einsum("bn,bnm->bm", y, im_g)) / norm_sq[:, None]
    re_g -= x[:, :, None] * coef[:, None, :]
    im_g -= y[:, :, None] * coef[:, None, :]

    # components along the outcome directions D_k J v = (-y_k, x_k) on pair k
    keep = p > prob_floor
    denom = np.where(keep, p, 1.0)
    c = (-y[:, :, None] * re_g + x[:, :, None] * im_g) / denom[:, :, None]
    c = np.where(keep[:, :, None], c, 0.0)
    re_g += y[:, :, None] * c
    im_g -= x[:, :, None] * c

    f = np.einsum("bnm,bnk->bmk", re_g, re_g) + np.einsum("bnm,bnk->bmk", im_g, im_g)
    f = (f + f.transpose(0, 2, 1)) / 2
    return f, p.min(axis=1), (~keep).sum(axis=1)


def variance_predictor(q: Qgt, n: int) -> np.ndarray:
    """Entrywise variance of the CFIM under a Haar-random basis:
    V_ij = (Q_ii Q_jj + Q_ij^2 + Qtilde_ij^2) / (8 N),
    with Q the real and Qtilde the imaginary part of the tensor."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    qr = q.real_part
    qi = q.imag_part
    d = np.diag(qr)
    v = (np.outer(d, d) + qr ** 2 + qi ** 2) / (8.0 * n)
    return np.maximum(v, 0.0)


def average_outcome_projections(psi: np.ndarray, num_samples: int, master_seed: int,
                                chunk: int = 1024) -> np.ndarray:
    """Monte Carlo average, over Haar-random bases U, of the sum over
    outcomes k of the rank-1 projection onto Phi(U) D_k Phi(U)^T J Phi(psi).

    The Haar average equals (I - P(Phi psi) + P(J Phi psi)) / 2; each
    summand projects onto the realification of i * w_k * u_k with
    w = U* psi and u_k the k-th basis column, so the whole sum per
    sample is M M^T for M the realified, per-outcome-normalized matrix
    U diag(i w / |w|).
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    n = psi.shape[0]
    if n < 2:
        raise ValueError("dimension must be at least 2")
    if num_samples < 1:
        raise ValueError("need at least one sample")
    total = np.zeros((2 * n, 2 * n))
    for start in range(0, num_samples, chunk):
        cnt = min(chunk, num_samples - start)
        u = sample_haar_batch(n, master_seed, start, cnt)
        w = np.matmul(u.conj().transpose(0, 2, 1), psi)
        absw = np.abs(w)
        phase = np.where(absw > 0, 1j * w / np.where(absw > 0, absw, 1.0), 0.0)
        cols = u * phase[:, None, :]
        m = np.concatenate([cols.real, cols.imag], axis=1)  # (B, 2N, N)
        total += np.einsum("bik,bjk->ij", m, m)
    return total / num_samples
