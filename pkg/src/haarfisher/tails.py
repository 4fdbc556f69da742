"""Concentration experiments for the random-basis CFIM.

Relative-error sampling against the half-QFIM target, the sqrt(N)-scaled
error sweep, histograms, empirical complementary CDFs with
exp(-c N t^2) tail fitting, and the closed-form tail bounds (max-entry,
Frobenius with additive offset, and the two-sided eigenvalue sandwich).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ansatz import ProductExponentialAnsatz, build_ansatz, resolve_theta
from .errors import DegenerateFamilyError
from .fisher import DEFAULT_PROB_FLOOR, qgt
from .haar import mix_seed
from .linalg import max_abs
from .montecarlo import DEGENERATE_TOL, cfim_sample_batches

REL_ERROR_NORMS = ("frob", "max")


def rel_error_samples(swj, num_samples: int, master_seed: int, *,
                      norms=("frob",), prob_floor: float = DEFAULT_PROB_FLOOR,
                      workers: int = 1) -> dict[str, np.ndarray]:
    """Per-sample relative errors ||F_i - Q/2|| / ||Q/2|| in the requested
    norms ("frob" and/or "max"), over Haar-random measurement bases."""
    unknown = set(norms) - set(REL_ERROR_NORMS)
    if unknown:
        raise ValueError(f"unknown norms {sorted(unknown)}")
    if num_samples < 1:
        raise ValueError("need at least one sample")
    qfim = qgt(swj).real_part
    if np.linalg.norm(qfim) < DEGENERATE_TOL:
        raise DegenerateFamilyError("QFIM vanishes for this family; relative errors are undefined")
    target = qfim / 2.0
    denom_frob = float(np.linalg.norm(target))
    denom_max = max_abs(target)
    out = {norm: [] for norm in norms}
    for _, f, _, _ in cfim_sample_batches(swj, num_samples, master_seed,
                                          prob_floor=prob_floor, workers=workers):
        diff = f - target
        if "frob" in out:
            out["frob"].append(np.sqrt((diff ** 2).sum(axis=(1, 2))) / denom_frob)
        if "max" in out:
            out["max"].append(np.abs(diff).max(axis=(1, 2)) / denom_max)
    return {norm: np.concatenate(parts) for norm, parts in out.items()}


def sample_rel_errors(n: int, m: int, theta_policy, num_samples: int, master_seed: int, *,
                      prob_floor: float = DEFAULT_PROB_FLOOR, workers: int = 1) -> np.ndarray:
    """Relative Frobenius errors of the reference family at (n, m,
    master_seed), with theta fixed by policy ("seeded-uniform" or an
    explicit vector)."""
    family = build_ansatz(n, m, master_seed)
    theta = resolve_theta(theta_policy, m, master_seed)
    swj = family.evaluate(theta)
    return rel_error_samples(swj, num_samples, master_seed, norms=("frob",),
                             prob_floor=prob_floor, workers=workers)["frob"]


@dataclass(frozen=True)
class SweepRow:
    """One dimension of the scaled-error sweep."""

    n: int
    mean_rel: float
    scaled: float  # sqrt(n) * mean_rel
    std_rel: float


def sweep_scaled_error(n_list, m: int, trials: int, master_seed: int, *,
                       theta_policy="seeded-uniform", prob_floor: float = DEFAULT_PROB_FLOOR,
                       workers: int = 1) -> list[SweepRow]:
    """Mean relative Frobenius error per dimension, with the sqrt(n)
    scaling that is approximately constant across n.

    Each dimension runs under a sub-master seed derived from
    (master_seed, n) so its sample streams are independent of the other
    rows.
    """
    if trials < 2:
        raise ValueError("need at least two trials per dimension")
    rows = []
    for n in n_list:
        seed_n = mix_seed(master_seed, n)
        errs = sample_rel_errors(n, m, theta_policy, trials, seed_n,
                                 prob_floor=prob_floor, workers=workers)
        mean = float(errs.mean())
        rows.append(SweepRow(n=int(n), mean_rel=mean, scaled=float(np.sqrt(n) * mean),
                             std_rel=float(errs.std(ddof=1))))
    return rows


def histogram(samples, num_bins: int) -> list[tuple[float, float, int]]:
    """Equal-width bins over [0, max(samples)]; counts sum to the sample
    count.  Returns (left, right, count) triples."""
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size == 0:
        raise ValueError("cannot histogram an empty sample set")
    if num_bins < 1:
        raise ValueError("need at least one bin")
    hi = float(samples.max())
    if hi <= 0:
        hi = 1.0
    counts, edges = np.histogram(samples, bins=num_bins, range=(0.0, hi))
    return [(float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(num_bins)]


def empirical_ccdf(samples) -> tuple[np.ndarray, np.ndarray]:
    """Empirical complementary CDF: for each distinct sample value t
    (ascending), the fraction of samples strictly greater than t."""
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size == 0:
        raise ValueError("cannot build a CCDF from an empty sample set")
    sorted_samples = np.sort(samples)
    t = np.unique(sorted_samples)
    above = samples.size - np.searchsorted(sorted_samples, t, side="right")
    return t, above / samples.size


@dataclass(frozen=True)
class TailFit:
    """exp(-c N t^2) fit of an empirical error tail.

    c_regression comes from least squares of log CCDF against t^2 inside
    the probability band; c_adjusted is the largest c whose curve stays
    above the empirical CCDF at every sample point up to the percentile
    cutoff.
    """

    n: int
    m: int
    num_samples: int
    c_regression: float
    c_adjusted: float
    r_squared: float
    percentile_cutoff: float
    regression_band: tuple[float, float]
    regression_range: tuple[float, float]
    regression_intercept: float  # intercept of log ccdf vs t^2, for replotting


def fit_tail_constant(samples, n: int, m: int = 0, percentile_cutoff: float = 99.99,
                      regression_band: tuple[float, float] = (1e-4, 0.5)) -> TailFit:
    """Fit the tail of relative-error samples to exp(-c n t^2).

    The regression uses one point per distinct sample value whose CCDF
    probability lies strictly inside `regression_band` (the band excludes
    the distribution bulk and the noisy extreme tail); c_adjusted is
    min over retained points of -log(ccdf) / (n t^2), computed up to the
    `percentile_cutoff` quantile.
    """
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size < 1000:
        raise ValueError("tail fitting needs at least 1000 samples")
    t, p = empirical_ccdf(samples)
    lo, hi = regression_band
    band = (p > lo) & (p < hi) & (t > 0)
    if band.sum() < 5:
        raise ValueError(f"only {int(band.sum())} CCDF points inside the regression band {regression_band}")
    x = t[band] ** 2
    y = np.log(p[band])
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(((y - fitted) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0

    cutoff = float(np.percentile(samples, percentile_cutoff))
    adj = (t > 0) & (p > 0) & (t <= cutoff)
    if not np.any(adj):
        raise ValueError("no usable points below the percentile cutoff")
    c_adjusted = float(np.min(-np.log(p[adj]) / (n * t[adj] ** 2)))
    return TailFit(
        n=n, m=m, num_samples=int(samples.size),
        c_regression=float(-slope / n), c_adjusted=c_adjusted, r_squared=r_squared,
        percentile_cutoff=percentile_cutoff, regression_band=(float(lo), float(hi)),
        regression_range=(float(t[band].min()), float(t[band].max())),
        regression_intercept=float(intercept),
    )


def tailfit_bound_holds(samples, fit: TailFit) -> bool:
    """Independent re-check that the empirical CCDF stays at or below
    exp(-c_adjusted n t^2) at every sample point up to the cutoff."""
    samples = np.asarray(samples, dtype=float).ravel()
    cutoff = np.percentile(samples, fit.percentile_cutoff)
    for t in np.unique(samples):
        if t <= 0 or t > cutoff:
            continue
        frac = float((samples > t).mean())
        if frac > np.exp(-fit.c_adjusted * fit.n * t * t) * (1 + 1e-9) + 1e-15:
            return False
    return True


def max_entry_error_bound(t, n: int, m: int):
    """Tail bound for the relative max-entry error at level t:
    min(1, 2 m^2 exp(-(n-1) t^2 / 120))."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    out = np.minimum(1.0, 2.0 * m * m * np.exp(-(n - 1) * t ** 2 / 120.0))
    return float(out) if out.ndim == 0 else out


def frobenius_error_bound(t, n: int, m: int):
    """Tail bound for the relative Frobenius error: the probability of
    exceeding t + 16 sqrt(m/(n-1)) is at most exp(-(n-1) t^2 / 120).
    Returns (threshold, probability)."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    threshold = t + frobenius_offset(n, m)
    prob = np.minimum(1.0, np.exp(-(n - 1) * t ** 2 / 120.0))
    if prob.ndim == 0:
        return float(threshold), float(prob)
    return threshold, prob


def frobenius_offset(n: int, m: int) -> float:
    """Additive offset 16 sqrt(m/(n-1)) in the Frobenius tail bound."""
    return 16.0 * np.sqrt(m / (n - 1.0))


@dataclass(frozen=True)
class SandwichBound:
    """Closed-form success bound for the two-sided eigenvalue sandwich."""

    epsilon: float
    n: int
    m: int
    precondition_met: bool
    min_dim_required: float  # 1e5 m / eps^2
    failure_exponent: float  # (eps sqrt(n-1) - 285 sqrt(m))^2 / 30
    success_probability: float


def sandwich_success_bound(epsilon: float, n: int, m: int) -> SandwichBound:
    """Probability bound for (1-2eps) Q/2 <= F <= (1+2eps) Q/2 under a
    Haar-random basis.

    Valid only when n >= 1e5 m / eps^2; below that the formula value is
    still reported but flagged as outside its precondition.
    """
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    if n < 2:
        raise ValueError("dimension must be at least 2")
    min_dim = 1e5 * m / epsilon ** 2
    exponent = (epsilon * np.sqrt(n - 1.0) - 285.0 * np.sqrt(m)) ** 2 / 30.0
    success = float(np.clip(1.0 - np.exp(-exponent), 0.0, 1.0))
    return SandwichBound(epsilon=epsilon, n=n, m=m, precondition_met=bool(n >= min_dim),
                         min_dim_required=float(min_dim), failure_exponent=float(exponent),
                         success_probability=success)


def _ccdf_at(samples_sorted: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(samples_sorted, thresholds, side="right")
    return (samples_sorted.size - idx) / samples_sorted.size


@dataclass(frozen=True)
class BoundCurve:
    """Empirical CCDF compared against one theoretical tail curve."""

    name: str
    t_grid: np.ndarray
    thresholds: np.ndarray  # where the empirical CCDF is evaluated
    bounds: np.ndarray
    empirical: np.ndarray
    violations: list[float]  # grid t with empirical above a sub-1 bound
    max_ratio: float  # max empirical/bound where bound < 1
    vacuous: bool
    note: str


@dataclass(frozen=True)
class BoundReport:
    """Empirical-vs-theoretical comparison for both error norms."""

    n: int
    m: int
    max_entry: BoundCurve
    frobenius: BoundCurve

    @property
    def total_violations(self) -> int:
        return len(self.max_entry.violations) + len(self.frobenius.violations)


def _compare_curve(name, t_grid, thresholds, bounds, samples) -> BoundCurve:
    samples_sorted = np.sort(np.asarray(samples, dtype=float).ravel())
    empirical = _ccdf_at(samples_sorted, thresholds)
    comparable = bounds < 1.0
    informative = comparable & (thresholds <= samples_sorted[-1])
    violations = [float(t) for t in t_grid[comparable & (empirical > bounds)]]
    ratios = empirical[comparable] / bounds[comparable]
    max_ratio = float(ratios.max()) if ratios.size else 0.0
    if not np.any(comparable):
        vacuous, note = True, "vacuous at this scale: bound is 1 at every grid point"
    elif not np.any(informative):
        vacuous = True
        note = ("vacuous at this scale: wherever the bound drops below 1 the threshold "
                f"exceeds the largest observed error {samples_sorted[-1]:.4g}")
    else:
        vacuous, note = False, "informative comparison points exist"
    return BoundCurve(name=name, t_grid=t_grid, thresholds=thresholds, bounds=np.asarray(bounds),
                      empirical=empirical, violations=violations, max_ratio=max_ratio,
                      vacuous=vacuous, note=note)


def bound_violation_report(rel_max_samples, rel_frob_samples, n: int, m: int,
                           t_grid: np.ndarray | None = None) -> BoundReport:
    """Compare empirical error CCDFs against the closed-form tail curves
    wherever those curves are below 1.

    Violations are expected to be empty; where every comparison point is
    uninformative (bound at 1, or threshold beyond the observed errors)
    the curve is flagged as vacuous instead of passing silently.
    """
    rel_max_samples = np.asarray(rel_max_samples, dtype=float).ravel()
    rel_frob_samples = np.asarray(rel_frob_samples, dtype=float).ravel()
    if rel_max_samples.size == 0 or rel_frob_samples.size == 0:
        raise ValueError("need non-empty samples for both error norms")
    if t_grid is None:
        data_max = max(rel_max_samples.max(), rel_frob_samples.max())
        # reach past the point where the max-entry curve drops below 1
        t_star = np.sqrt(120.0 * np.log(max(2.0 * m * m, 1.0 + 1e-9)) / (n - 1))
        upper = max(1.25 * data_max, 1.5 * t_star)
        t_grid = np.linspace(0.0, upper, 241)[1:]
    t_grid = np.asarray(t_grid, dtype=float)

    b_max = max_entry_error_bound(t_grid, n, m)
    curve_max = _compare_curve("max-entry", t_grid, t_grid, b_max, rel_max_samples)

    thr, b_frob = frobenius_error_bound(t_grid, n, m)
    curve_frob = _compare_curve("frobenius", t_grid, thr, b_frob, rel_frob_samples)
    return BoundReport(n=n, m=m, max_entry=curve_max, frobenius=curve_frob)


@dataclass(frozen=True)
class TailResult:
    """Samples and fit for one dimension of a tail experiment."""

    n: int
    m: int
    seed: int
    rel_frob: np.ndarray
    rel_max: np.ndarray
    fit: TailFit


def tail_experiment(n_list, m: int, num_samples: int, master_seed: int, *,
                    theta_policy="seeded-uniform", prob_floor: float = DEFAULT_PROB_FLOOR,
                    percentile_cutoff: float = 99.99,
                    regression_band: tuple[float, float] = (1e-4, 0.5),
                    workers: int = 1) -> dict[int, TailResult]:
    """Sample relative errors and fit the tail constant for each
    dimension, under per-dimension sub-master seeds."""
    results: dict[int, TailResult] = {}
    for n in n_list:
        seed_n = mix_seed(master_seed, n)
        family = build_ansatz(n, m, seed_n)
        theta = resolve_theta(theta_policy, m, seed_n)
        swj = family.evaluate(theta)
        errs = rel_error_samples(swj, num_samples, seed_n, norms=("frob", "max"),
                                 prob_floor=prob_floor, workers=workers)
        fit = fit_tail_constant(errs["frob"], n, m, percentile_cutoff=percentile_cutoff,
                                regression_band=regression_band)
        results[int(n)] = TailResult(n=int(n), m=m, seed=seed_n, rel_frob=errs["frob"],
                                     rel_max=errs["max"], fit=fit)
    return results
