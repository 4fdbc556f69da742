"""Monte Carlo estimation of the QFIM from random-basis CFIMs.

Samples are organised in fixed-size chunks (a pure function of the
dimension), each chunk drawn from per-sample substreams and reduced in
chunk order, so every statistic is bit-identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ansatz import StateWithJacobian
from .errors import DegenerateFamilyError, KernelLeakageError
from .fisher import DEFAULT_PROB_FLOOR, Qgt, _cfim_projection_core, qgt, variance_predictor
from .haar import sample_haar_batch
from .linalg import max_abs, spectral_norm_sym, symmetrize

DEGENERATE_TOL = 1e-12


def chunk_size(n: int) -> int:
    """Samples per batch, sized so one batch of n x n unitaries stays in
    a modest memory footprint.  Depends only on n, never on the worker
    count, so the chunk grid is part of the algorithm."""
    return max(16, min(1024, (1 << 22) // (n * n)))


def _cfim_chunk(state: np.ndarray, jac: np.ndarray, master_seed: int, start: int,
                count: int, prob_floor: float):
    n = state.shape[0]
    u = sample_haar_batch(n, master_seed, start, count)
    uh = u.conj().transpose(0, 2, 1)
    w = np.matmul(uh, state)
    g = np.matmul(uh, jac)
    return _cfim_projection_core(w, g, prob_floor)


_WORKER_ARGS: tuple | None = None


def _init_worker(state, jac, master_seed, prob_floor):
    global _WORKER_ARGS
    _WORKER_ARGS = (state, jac, master_seed, prob_floor)


def _run_chunk(task):
    start, count = task
    state, jac, master_seed, prob_floor = _WORKER_ARGS
    return _cfim_chunk(state, jac, master_seed, start, count, prob_floor)


def cfim_sample_batches(swj: StateWithJacobian, num_samples: int, master_seed: int, *,
                        prob_floor: float = DEFAULT_PROB_FLOOR, workers: int = 1):
    """Yield (start, cfims, min_probs, skipped) over the fixed chunk grid,
    in index order.  cfims has shape (batch, m, m).

    Sample i uses substream (master_seed, i); results do not depend on
    `workers`.
    """
    chunk = chunk_size(swj.dim)
    tasks = [(s, min(chunk, num_samples - s)) for s in range(0, num_samples, chunk)]
    if workers <= 1:
        for start, count in tasks:
            f, minp, skipped = _cfim_chunk(swj.state, swj.jacobian, master_seed, start, count, prob_floor)
            yield start, f, minp, skipped
    else:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker,
            initargs=(swj.state, swj.jacobian, master_seed, prob_floor),
        ) as ex:
            for (start, _), (f, minp, skipped) in zip(tasks, ex.map(_run_chunk, tasks)):
                yield start, f, minp, skipped


@dataclass
class EstimationReport:
    """Result of averaging CFIMs over Haar-random bases against the
    half-QFIM target."""

    n: int
    m: int
    k_samples: int
    master_seed: int
    theta: np.ndarray
    qfim: np.ndarray
    mean_cfim: np.ndarray
    empirical_variance: np.ndarray
    predicted_variance: np.ndarray
    rel_err_max: float
    rel_err_frob: float
    per_sample_rel_frob: np.ndarray
    prob_floor: float
    min_prob: float
    total_skipped: int
    samples: list[np.ndarray] | None = field(default=None, repr=False)


def estimate_qfim(family, theta, num_samples: int, master_seed: int, *,
                  prob_floor: float = DEFAULT_PROB_FLOOR, workers: int = 1,
                  keep_samples: bool = False) -> EstimationReport:
    """Average `num_samples` random-basis CFIMs of family at theta and
    compare against half the QFIM.

    The family must expose evaluate(theta) -> StateWithJacobian.  Raises
    DegenerateFamilyError when the QFIM vanishes, since relative errors
    are then undefined.
    """
    if num_samples < 1:
        raise ValueError("need at least one sample")
    theta = np.asarray(theta, dtype=float).ravel()
    swj = family.evaluate(theta)
    q = qgt(swj)
    qfim = q.real_part
    target = qfim / 2.0
    denom_frob = float(np.linalg.norm(target))
    if np.linalg.norm(qfim) < DEGENERATE_TOL:
        raise DegenerateFamilyError("QFIM vanishes for this family; relative errors are undefined")
    predicted = variance_predictor(q, swj.dim)

    m = swj.num_params
    count = 0
    mean = np.zeros((m, m))
    m2 = np.zeros((m, m))
    rel_frob_parts = []
    min_prob = np.inf
    total_skipped = 0
    kept = [] if keep_samples else None
    for _, f, minp, skipped in cfim_sample_batches(swj, num_samples, master_seed,
                                                   prob_floor=prob_floor, workers=workers):
        b = f.shape[0]
        cmean = f.mean(axis=0)
        cm2 = ((f - cmean) ** 2).sum(axis=0)
        delta = cmean - mean
        tot = count + b
        mean += delta * (b / tot)
        m2 += cm2 + delta ** 2 * (count * b / tot)
        count = tot
        diff = f - target
        rel_frob_parts.append(np.sqrt((diff ** 2).sum(axis=(1, 2))) / denom_frob)
        min_prob = min(min_prob, float(minp.min()))
        total_skipped += int(skipped.sum())
        if kept is not None:
            kept.extend(np.array(fi) for fi in f)

    mean_cfim = symmetrize(mean)
    emp_var = m2 / (count - 1) if count > 1 else np.zeros((m, m))
    rel_max, rel_frob, _ = error_metrics(mean_cfim, qfim)
    return EstimationReport(
        n=swj.dim, m=m, k_samples=num_samples, master_seed=master_seed, theta=theta,
        qfim=qfim, mean_cfim=mean_cfim, empirical_variance=emp_var,
        predicted_variance=predicted, rel_err_max=rel_max, rel_err_frob=rel_frob,
        per_sample_rel_frob=np.concatenate(rel_frob_parts),
        prob_floor=prob_floor, min_prob=min_prob, total_skipped=total_skipped,
        samples=kept,
    )


def error_metrics(f: np.ndarray, qfim: np.ndarray) -> tuple[float, float, float]:
    """Relative distances of F from Q/2 in max-entry, Frobenius and
    spectral norms (denominators are the norms of Q/2)."""
    target = np.asarray(qfim, dtype=float) / 2.0
    diff = np.asarray(f, dtype=float) - target
    d_max = max_abs(target)
    d_frob = float(np.linalg.norm(target))
    d_spec = spectral_norm_sym(target)
    if min(d_max, d_frob, d_spec) <= 0:
        raise DegenerateFamilyError("zero reference norm; relative errors are undefined")
    return (max_abs(diff) / d_max,
            float(np.linalg.norm(diff)) / d_frob,
            spectral_norm_sym(diff) / d_spec)


def empirical_variance(samples) -> np.ndarray:
    """Unbiased entrywise sample variance of a list of equally shaped
    matrices (divides by K-1)."""
    stack = np.asarray(samples, dtype=float)
    if stack.ndim < 1 or stack.shape[0] < 2:
        raise ValueError("need at least two samples")
    return stack.var(axis=0, ddof=1)


@dataclass(frozen=True)
class SandwichResult:
    """Two-sided spectral comparison of F against Q/2 on the range of Q."""

    epsilon: float
    passed: bool
    min_ratio: float
    max_ratio: float
    rank_used: int


def whitening_factor(qfim: np.ndarray, rank_tol: float = 1e-10
                     ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Eigenbasis split of Q/2: returns (B, kept eigenvectors complement,
    kept eigenvalues), where B = V_r diag(1/sqrt(lambda_r)) whitens Q/2
    on its numerical range (eigenvalues > rank_tol * lambda_max)."""
    half = symmetrize(np.asarray(qfim, dtype=float)) / 2.0
    w, v = np.linalg.eigh(half)
    lam_max = w[-1]
    psd_tol = 1e-8 * max(lam_max, 0.0) + 1e-12
    if w[0] < -psd_tol:
        raise ValueError(f"reference matrix is not PSD: min eigenvalue {w[0]:.3e}")
    if lam_max <= 0:
        raise DegenerateFamilyError("reference matrix is zero; sandwich ratios undefined")
    keep = w > rank_tol * lam_max
    b = v[:, keep] / np.sqrt(w[keep])
    return b, v[:, ~keep], w[keep]


def sandwich_check(f: np.ndarray, qfim: np.ndarray, epsilon: float,
                   rank_tol: float = 1e-10, kernel_tol: float | None = None) -> SandwichResult:
    """Check (1 - 2 eps) Q/2 <= F <= (1 + 2 eps) Q/2 in the Loewner order,
    restricted to the numerical range of Q.

    F must vanish on the discarded kernel of Q (the kernel of Q is
    contained in the kernel of any basis CFIM); a violation raises
    KernelLeakageError.
    """
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    f = symmetrize(np.asarray(f, dtype=float))
    b, null_vecs, _ = whitening_factor(qfim, rank_tol=rank_tol)
    if null_vecs.shape[1]:
        leak = max_abs(f @ null_vecs)
        tol = kernel_tol if kernel_tol is not None else 1e-8 * max(max_abs(f), max_abs(qfim)) + 1e-14
        if leak > tol:
            raise KernelLeakageError(
                f"F has weight {leak:.3e} on the kernel of the reference (tol {tol:.1e})")
    ratios = np.linalg.eigvalsh(symmetrize(b.T @ f @ b))
    min_ratio, max_ratio = float(ratios[0]), float(ratios[-1])
    passed = (min_ratio >= 1 - 2 * epsilon) and (max_ratio <= 1 + 2 * epsilon)
    return SandwichResult(epsilon=epsilon, passed=passed, min_ratio=min_ratio,
                          max_ratio=max_ratio, rank_used=b.shape[1])


def sandwich_ratio_bounds(cfims: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-sample (min, max) eigenvalues of B^T F B for a stack of CFIMs,
    given a whitening factor B of Q/2.  Shape (K, 2)."""
    r = np.einsum("ij,bjk,kl->bil", b.T, np.asarray(cfims, dtype=float), b)
    r = (r + r.transpose(0, 2, 1)) / 2
    eig = np.linalg.eigvalsh(r)
    return np.stack([eig[:, 0], eig[:, -1]], axis=1)
