"""Seeded sampling of Haar-distributed unitary matrices.

Sampling follows the Ginibre + QR recipe: QR-factorize a matrix of
i.i.d. standard complex Gaussians and rescale each column of Q by the
phase of the matching diagonal entry of R.  Without the phase fix the
factorization is not unique and the resulting Q is unitary but *not*
Haar-distributed (its diagonal phases are biased); with it, Q is the
unique positive-diagonal QR factor of a Ginibre matrix, which is exactly
Haar.

Randomness is organised as counter-based substreams: sample i of a run
draws from a Philox generator keyed by (master_seed, i), so any worker
can compute any sample and batches are identical for every scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeededStream:
    """An independent random stream identified by (master_seed, stream_id)."""

    master_seed: int
    stream_id: int

    def generator(self) -> np.random.Generator:
        key = (self.master_seed & _MASK64, self.stream_id & _MASK64)
        return np.random.Generator(np.random.Philox(key=key))


def substream(master_seed: int, sample_index: int) -> SeededStream:
    """Stream for one sample.  The pair (master_seed, sample_index) is
    used directly as a Philox key, which guarantees independent streams
    per index regardless of evaluation order."""
    return SeededStream(master_seed, sample_index)


def mix_seed(master_seed: int, *parts: int) -> int:
    """Derive a 64-bit sub-master seed from a master seed and context
    integers (e.g. a dimension in a sweep).  Deterministic and
    well-mixed via numpy's SeedSequence."""
    ss = np.random.SeedSequence(entropy=master_seed & _MASK64, spawn_key=tuple(p & _MASK64 for p in parts))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def ginibre(n: int, gen: np.random.Generator) -> np.ndarray:
    """n x n matrix of i.i.d. complex Gaussians with unit-variance real
    and imaginary parts."""
    x = gen.standard_normal((n, 2 * n))
    return x[:, :n] + 1j * x[:, n:]


def _phase_fix(q: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Rescale columns of Q by the phases of diag(R), making Q the
    unique QR factor with positive-diagonal R."""
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[..., None, :]


def sample_haar_unitary(n: int, stream: SeededStream) -> np.ndarray:
    """One Haar-distributed n x n unitary from the given stream."""
    if n < 1:
        raise ValueError("n must be >= 1")
    gen = stream.generator()
    while True:
        a = ginibre(n, gen)
        q, r = np.linalg.qr(a)
        if np.all(np.diagonal(r) != 0):  # zero diagonal has probability 0
            return _phase_fix(q, r)


def sample_qr_unitary_raw(n: int, stream: SeededStream) -> np.ndarray:
    """QR factor of a Ginibre matrix *without* the phase fix.

    Unitary but not Haar-distributed; kept as a negative control for the
    sampler's statistical tests.
    """
    gen = stream.generator()
    a = ginibre(n, gen)
    q, _ = np.linalg.qr(a)
    return q


def sample_haar_batch(n: int, master_seed: int, start: int, count: int) -> np.ndarray:
    """Stack of `count` Haar unitaries for sample indices start..start+count-1.

    Sample i is drawn from substream(master_seed, i) and is bit-identical
    to sample_haar_unitary(n, substream(master_seed, i)) regardless of
    how the index range is split into batches.
    """
    g = np.empty((count, n, n), dtype=complex)
    for i in range(count):
        g[i] = ginibre(n, substream(master_seed, start + i).generator())
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    for i in np.nonzero(np.any(d == 0, axis=-1))[0]:  # probability-zero fallback
        q[i] = sample_haar_unitary(n, substream(master_seed, start + int(i)))
        r[i] = np.eye(n)  # already phase-fixed, so the fix below is a no-op
    return _phase_fix(q, r)


@dataclass(frozen=True)
class MomentReport:
    """Monte Carlo moments of the (1,1) entry of sampled unitaries."""

    n: int
    num_samples: int
    mean_abs2: float
    mean_abs4: float
    mean_entry: complex
    se_abs2: float
    se_abs4: float
    se_entry: float

    @property
    def abs2_expected(self) -> float:
        return 1.0 / self.n

    @property
    def abs4_expected(self) -> float:
        return 2.0 / (self.n * (self.n + 1))


def first_entry_moments(n: int, num_samples: int, master_seed: int, *, phase_fix: bool = True,
                        chunk: int = 4096) -> MomentReport:
    """Estimate E U_11, E |U_11|^2 and E |U_11|^4 over `num_samples`
    draws, with standard errors.

    For Haar measure the first column is uniform on the complex unit
    sphere, so E|U_11|^2 = 1/n, E|U_11|^4 = 2/(n(n+1)) and E U_11 = 0.
    With phase_fix=False the raw QR factor is used instead; its diagonal
    phases are biased and E U_11 is far from zero.
    """
    s1 = 0.0 + 0.0j
    s2 = s4 = s8 = 0.0
    for start in range(0, num_samples, chunk):
        cnt = min(chunk, num_samples - start)
        if phase_fix:
            u = sample_haar_batch(n, master_seed, start, cnt)
            entries = u[:, 0, 0]
        else:
            entries = np.empty(cnt, dtype=complex)
            for i in range(cnt):
                entries[i] = sample_qr_unitary_raw(n, substream(master_seed, start + i))[0, 0]
        a2 = np.abs(entries) ** 2
        s1 += entries.sum()
        s2 += a2.sum()
        s4 += (a2 ** 2).sum()
        s8 += (a2 ** 4).sum()
    k = num_samples
    mean_abs2 = s2 / k
    mean_abs4 = s4 / k
    mean_entry = s1 / k
    var2 = max(s4 / k - mean_abs2 ** 2, 0.0)
    var4 = max(s8 / k - mean_abs4 ** 2, 0.0)
    var1 = max(s2 / k - abs(mean_entry) ** 2, 0.0)
    return MomentReport(
        n=n, num_samples=k,
        mean_abs2=float(mean_abs2), mean_abs4=float(mean_abs4), mean_entry=complex(mean_entry),
        se_abs2=float(np.sqrt(var2 / k)), se_abs4=float(np.sqrt(var4 / k)),
        se_entry=float(np.sqrt(var1 / k)),
    )
