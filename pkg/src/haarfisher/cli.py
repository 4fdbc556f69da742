"""Command-line entry point.

Subcommands: validate (internal consistency suites), estimate (QFIM
estimation report), sweep / hist / tail (concentration experiments,
CSV/JSON artifacts), bounds (closed-form tail bound tables).  Every
output embeds the resolved configuration and seed; re-running a command
with the same flags reproduces the file except for the timing block.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import ansatz as ansatz_mod
from . import fisher, haar, linalg, montecarlo, realrep, serialize, tails
from .errors import DegenerateFamilyError


def _parse_ns(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty dimension list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="haarfisher",
        description="QFIM estimation from Haar-random measurement bases, with "
                    "concentration experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, dim=True, params=True, samples=None):
        if dim:
            p.add_argument("-N", "--dim", type=int, default=16, help="state dimension")
        if params:
            p.add_argument("-m", "--params", type=int, default=4, help="number of parameters")
        if samples is not None:
            p.add_argument("-K", "--samples", type=int, default=samples,
                           help="number of Haar samples")
        p.add_argument("--seed", type=int, default=1, help="master seed")
        p.add_argument("--prob-floor", type=float, default=fisher.DEFAULT_PROB_FLOOR,
                       help="outcome probability floor")
        p.add_argument("--workers", type=int, default=1, help="parallel workers")
        p.add_argument("--out", type=Path, default=Path("out"), help="output directory")

    p = sub.add_parser("validate", help="run the internal consistency suites")
    common(p)
    p.add_argument("-K", "--samples", type=int, default=100_000,
                   help="samples for the Haar moment checks")

    p = sub.add_parser("estimate", help="average random-basis CFIMs against Q/2")
    common(p, samples=20_000)
    p.add_argument("--theta-file", type=Path, default=None,
                   help="file with one theta value per line (default: seeded uniform)")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="also write per-sample errors as CSV")

    p = sub.add_parser("sweep", help="sqrt(N)-scaled mean relative error per dimension")
    common(p, dim=False)
    p.add_argument("--Ns", type=_parse_ns, default=[20, 40, 80, 160], help="comma-separated dimensions")
    p.add_argument("--trials", type=int, default=100, help="trials per dimension")

    p = sub.add_parser("hist", help="histograms of the relative error per dimension")
    common(p, dim=False, samples=1000)
    p.add_argument("--Ns", type=_parse_ns, default=[20, 40, 80, 160])
    p.add_argument("--bins", type=int, default=40, help="histogram bins")

    p = sub.add_parser("tail", help="empirical CCDFs and exp(-cNt^2) tail fits")
    common(p, dim=False, samples=10_000)
    p.add_argument("--Ns", type=_parse_ns, default=[20, 40, 80, 160])
    p.add_argument("--percentile", type=float, default=99.99,
                   help="percentile cutoff for the adjusted constant")

    p = sub.add_parser("bounds", help="evaluate the closed-form tail bounds on a grid")
    common(p)
    p.add_argument("--eps", type=float, default=None,
                   help="single sandwich epsilon (default: a grid over (0, 1/2))")
    p.add_argument("--t-max", type=float, default=3.0, help="upper end of the t grid")
    return parser


def _config_dict(args, keys) -> dict:
    cfg = {}
    for key in keys:
        val = getattr(args, key)
        cfg[key] = str(val) if isinstance(val, Path) else val
    return cfg


def _timing(t0: float, workers: int) -> dict:
    return {"timing": {"wall_seconds": time.time() - t0, "workers": workers}}


def _resolve_theta(args, m: int, seed: int) -> np.ndarray:
    if getattr(args, "theta_file", None) is not None:
        values = [float(line) for line in args.theta_file.read_text().split()]
        return ansatz_mod.resolve_theta(np.asarray(values), m, seed)
    return ansatz_mod.resolve_theta("seeded-uniform", m, seed)


def _check(name: str, ok: bool, detail: str, failures: list[str]) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    if not ok:
        failures.append(name)


def cmd_validate(args) -> int:
    n, m, seed = args.dim, args.params, args.seed
    failures: list[str] = []

    worst_q = worst_c = 0.0
    for i in range(8):
        fam = ansatz_mod.build_ansatz(n, m, haar.mix_seed(seed, 101, i))
        theta = ansatz_mod.seeded_uniform_theta(m, haar.mix_seed(seed, 102, i))
        swj = fam.evaluate(theta)
        q = fisher.qgt(swj)
        worst_q = max(worst_q, linalg.max_abs(q.real_part - fisher.qfim_realified(swj)))
        u = haar.sample_haar_unitary(n, haar.substream(haar.mix_seed(seed, 103), i))
        fa = fisher.cfim_probability_form(swj, u, args.prob_floor).matrix
        fb = fisher.cfim_projection_form(swj, u, args.prob_floor).matrix
        worst_c = max(worst_c, linalg.max_abs(fa - fb))
    _check("qfim-cross-form", worst_q <= 1e-10, f"max dev {worst_q:.2e} (tol 1e-10)", failures)
    _check("cfim-cross-form", worst_c <= 1e-9, f"max dev {worst_c:.2e} (tol 1e-9)", failures)

    worst_j = 0.0
    for i in range(8):
        fam = ansatz_mod.build_ansatz(n, m, haar.mix_seed(seed, 104, i))
        theta = ansatz_mod.seeded_uniform_theta(m, haar.mix_seed(seed, 105, i))
        fd = ansatz_mod.jacobian_fd(fam, theta, step=1e-5)
        worst_j = max(worst_j, float(np.abs(fd - fam.evaluate(theta).jacobian).max()))
    _check("jacobian-fd", worst_j <= 1e-6, f"max dev {worst_j:.2e} (tol 1e-6)", failures)

    rep = haar.first_entry_moments(n, args.samples, haar.mix_seed(seed, 106))
    dev2 = abs(rep.mean_abs2 - rep.abs2_expected)
    dev4 = abs(rep.mean_abs4 - rep.abs4_expected)
    dev1 = abs(rep.mean_entry)
    _check("haar-moment-abs2", dev2 <= 4 * rep.se_abs2,
           f"|mean - 1/N| = {dev2:.2e} vs 4 se = {4 * rep.se_abs2:.2e}", failures)
    _check("haar-moment-abs4", dev4 <= 4 * rep.se_abs4,
           f"|mean - 2/(N(N+1))| = {dev4:.2e} vs 4 se = {4 * rep.se_abs4:.2e}", failures)
    _check("haar-diagonal-phase", dev1 <= 4 * rep.se_entry,
           f"|mean entry| = {dev1:.2e} vs 4 se = {4 * rep.se_entry:.2e}", failures)

    k_proj = 20_000
    psi = np.zeros(n, dtype=complex)
    psi[0] = 1.0
    avg = fisher.average_outcome_projections(psi, k_proj, haar.mix_seed(seed, 107))
    z = realrep.realify_vector(psi)
    target = 0.5 * (np.eye(2 * n) - linalg.project_onto_span([z])
                    + linalg.project_onto_span([realrep.apply_j(z)]))
    dev = linalg.max_abs(avg - target)
    tol = 5.0 / np.sqrt(k_proj)
    _check("projection-sum-identity", dev <= tol, f"max dev {dev:.2e} (tol {tol:.2e})", failures)
    trace_dev = abs(np.trace(avg) - n)
    _check("projection-sum-trace", trace_dev <= 0.05, f"|trace - N| = {trace_dev:.2e}", failures)

    if failures:
        print(f"{len(failures)} check(s) failed: {', '.join(failures)}")
        return 1
    print("all checks passed")
    return 0


def cmd_estimate(args) -> int:
    t0 = time.time()
    fam = ansatz_mod.build_ansatz(args.dim, args.params, args.seed)
    theta = _resolve_theta(args, args.params, args.seed)
    report = montecarlo.estimate_qfim(fam, theta, args.samples, args.seed,
                                      prob_floor=args.prob_floor, workers=args.workers)
    cfg = _config_dict(args, ["command", "dim", "params", "samples", "seed", "prob_floor", "format"])
    cfg["theta_source"] = "file" if args.theta_file else "seeded-uniform"
    args.out.mkdir(parents=True, exist_ok=True)
    payload = serialize.estimation_report_payload(report, cfg)
    payload.update(_timing(t0, args.workers))
    serialize.write_json(args.out / "estimate.json", "estimate", payload)
    if args.format == "csv":
        serialize.write_csv(args.out / "per_sample.csv", ["rel_frob"],
                            ([v] for v in report.per_sample_rel_frob), "per_sample", cfg)
    print(f"mean CFIM vs Q/2: rel_frob {report.rel_err_frob:.3e}, rel_max {report.rel_err_max:.3e} "
          f"({args.samples} samples) -> {args.out / 'estimate.json'}")
    return 0


def cmd_sweep(args) -> int:
    rows = tails.sweep_scaled_error(args.Ns, args.params, args.trials, args.seed,
                                    prob_floor=args.prob_floor, workers=args.workers)
    cfg = _config_dict(args, ["command", "params", "trials", "seed", "prob_floor"])
    cfg["Ns"] = args.Ns
    args.out.mkdir(parents=True, exist_ok=True)
    serialize.write_csv(args.out / "sweep.csv",
                        ["N", "mean_rel", "scaled", "std_rel", "trials", "seed"],
                        ([r.n, r.mean_rel, r.scaled, r.std_rel, args.trials, args.seed] for r in rows),
                        "sweep", cfg)
    for r in rows:
        print(f"N={r.n:5d}  mean_rel={r.mean_rel:.6f}  sqrt(N)*mean={r.scaled:.6f}")
    print(f"-> {args.out / 'sweep.csv'}")
    return 0


def cmd_hist(args) -> int:
    cfg = _config_dict(args, ["command", "params", "samples", "seed", "bins", "prob_floor"])
    cfg["Ns"] = args.Ns
    rows = []
    for n in args.Ns:
        seed_n = haar.mix_seed(args.seed, n)
        errs = tails.sample_rel_errors(n, args.params, "seeded-uniform", args.samples, seed_n,
                                       prob_floor=args.prob_floor, workers=args.workers)
        for left, right, count in tails.histogram(errs, args.bins):
            rows.append([n, left, right, count])
    args.out.mkdir(parents=True, exist_ok=True)
    serialize.write_csv(args.out / "hist.csv", ["N", "bin_left", "bin_right", "count"],
                        rows, "hist", cfg)
    print(f"-> {args.out / 'hist.csv'}")
    return 0


def cmd_tail(args) -> int:
    t0 = time.time()
    cfg = _config_dict(args, ["command", "params", "samples", "seed", "percentile", "prob_floor"])
    cfg["Ns"] = args.Ns
    results = tails.tail_experiment(args.Ns, args.params, args.samples, args.seed,
                                    percentile_cutoff=args.percentile,
                                    prob_floor=args.prob_floor, workers=args.workers)
    args.out.mkdir(parents=True, exist_ok=True)
    ccdf_rows = []
    fits = []
    for n in args.Ns:
        res = results[n]
        t, p = tails.empirical_ccdf(res.rel_frob)
        ccdf_rows.extend([n, ti, pi] for ti, pi in zip(t, p))
        fits.append({**serialize.tailfit_payload(res.fit), "seed": res.seed})
        print(f"N={n:5d}  c_regression={res.fit.c_regression:.4f}  "
              f"c_adjusted={res.fit.c_adjusted:.4f}  r^2={res.fit.r_squared:.4f}")
    serialize.write_csv(args.out / "ccdf.csv", ["N", "t", "ccdf"], ccdf_rows, "ccdf", cfg)
    payload = {"config": cfg, "fits": fits, "master_seed": args.seed}
    payload.update(_timing(t0, args.workers))
    serialize.write_json(args.out / "tailfit.json", "tailfit", payload)
    print(f"-> {args.out / 'ccdf.csv'}, {args.out / 'tailfit.json'}")
    return 0


def cmd_bounds(args) -> int:
    n, m = args.dim, args.params
    cfg = _config_dict(args, ["command", "dim", "params", "seed", "t_max"])
    t_grid = np.linspace(0.0, args.t_max, 121)[1:]
    thr, prob_frob = tails.frobenius_error_bound(t_grid, n, m)
    eps_values = [args.eps] if args.eps is not None else [round(0.05 * k, 2) for k in range(1, 10)]
    sandwich = []
    for eps in eps_values:
        b = tails.sandwich_success_bound(eps, n, m)
        sandwich.append({"eps": eps, "precondition_met": b.precondition_met,
                         "min_dim_required": b.min_dim_required,
                         "failure_exponent": b.failure_exponent,
                         "success_probability": b.success_probability})
    payload = {
        "config": cfg,
        "max_entry": [{"t": float(t), "prob": float(p)}
                      for t, p in zip(t_grid, tails.max_entry_error_bound(t_grid, n, m))],
        "frobenius": [{"t": float(t), "threshold": float(th), "prob": float(p)}
                      for t, th, p in zip(t_grid, thr, prob_frob)],
        "frobenius_offset": tails.frobenius_offset(n, m),
        "sandwich": sandwich,
    }
    args.out.mkdir(parents=True, exist_ok=True)
    serialize.write_json(args.out / "bounds.json", "bounds", payload)
    print(f"frobenius offset 16*sqrt(m/(N-1)) = {tails.frobenius_offset(n, m):.4f} "
          f"-> {args.out / 'bounds.json'}")
    return 0


_COMMANDS = {
    "validate": cmd_validate,
    "estimate": cmd_estimate,
    "sweep": cmd_sweep,
    "hist": cmd_hist,
    "tail": cmd_tail,
    "bounds": cmd_bounds,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DegenerateFamilyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
