"""Scenario execution: dispatch a validated config and emit its artifacts.

Each run writes ``report.csv`` (schema fixed per experiment kind) and
``summary.txt`` (point estimates, intervals, verdicts, seeds, and the claim
being exercised); fluctuation kinds add an SVG overlay and the measure-cloud
kinds export the particle cloud.  Artifacts are byte-deterministic functions
of ``(config, master seed)``; the thread count never reaches them.
"""

import functools
import os
from pathlib import Path

import numpy as np

from . import martingales, rng, walks
from .errors import ConfigError
from .limits import (
    clt_experiment,
    large_deviation_curve,
    lil_diagnostic,
    lyapunov_pair,
    lyapunov_top,
    multidim_clt_cartan,
)
from .linalg import DualProjectivePoint, ProjectivePoint
from .reports import fmt, svg_histogram, write_csv, write_summary
from .stationary import (
    PsiFunction,
    canonicalize_rows,
    cohomological_residual,
    estimate_dual_stationary,
    estimate_stationary,
    log_regularity_integral,
)
from .stats import folded_gaussian_cdf, gaussian_cdf

_CLAIMS = {
    "lyapunov": "log norm of the walk product grows at a deterministic rate,"
                " with the second rate read off the wedge-square walk",
    "clt": "normalized log-norm fluctuations of the walk converge in law"
           " (Gaussian under strong irreducibility and proximality)",
    "clt_cartan": "the vector of log singular values of a unimodular walk"
                  " satisfies a nondegenerate multidimensional limit law",
    "stationary": "the forward walk equidistributes toward a stationary"
                  " measure whose log-pairing integrals are finite",
    "cohomological": "the drift of the norm cocycle equals a constant plus a"
                     " coboundary of the explicit dual-cloud corrector",
    "large_deviation": "tail frequencies of the rate deviation decay"
                       " exponentially in the walk length",
    "lil": "normalized running extrema of the walk stay in the iterated-"
           "logarithm band and reach its edge",
    "martingale_lab": "martingale concentration, weighted tail sums, and the"
                      " triangular-array limit behave as predicted",
}


def _required(schedule, keys, kind):
    missing = [k for k in keys if k not in schedule]
    if missing:
        raise ConfigError([f"kind {kind!r} requires schedule key {k!r}" for k in missing])


def _test_rows(seed, count, dim):
    draws = rng.stream(seed, rng.TAG_TEST_POINTS).normal(size=(count, dim))
    return canonicalize_rows(draws)


def _header_lines(config, seed):
    lines = [
        f"scenario: {config.name}",
        f"kind: {config.kind}",
        f"master_seed: {seed}",
        f"dimension: {config.dimension}",
        f"claim: {_CLAIMS[config.kind]}",
    ]
    for key in ("strong_irreducible", "proximal", "unimodular"):
        if key in config.assertions:
            lines.append(f"asserted {key}: {fmt(config.assertions[key])}")
    return lines


def _run_lyapunov(config, mu, seed, out):
    sched = config.schedule
    n = int(sched.get("n", 1000))
    replicas = int(sched.get("replicas", 200))
    header = ["quantity", "value", "ci_halfwidth", "n", "replicas", "seed"]
    if mu.dim >= 2:
        est = lyapunov_pair(mu, n=n, replicas=replicas, seed=seed)
        rows = [
            ("lambda1", est.lambda1, est.ci_halfwidth, n, replicas, seed),
            ("lambda2", est.lambda2, est.pair_sum_ci_halfwidth + est.ci_halfwidth,
             n, replicas, seed),
            ("pair_sum", est.pair_sum, est.pair_sum_ci_halfwidth, n, replicas, seed),
            ("simplicity_gap", est.simplicity_gap,
             est.simplicity_gap_ci_halfwidth, n, replicas, seed),
        ]
    else:
        est = lyapunov_top(mu, n=n, replicas=replicas, seed=seed)
        rows = [("lambda1", est.lambda1, est.ci_halfwidth, n, replicas, seed)]
    write_csv(out / "report.csv", header, rows)
    lines = _header_lines(config, seed) + [
        f"{q}: {fmt(v)} +- {fmt(ci)}" for q, v, ci, *_ in rows
    ]
    write_summary(out / "summary.txt", lines)


def _reference_cdf(sched):
    ref = sched.get("reference")
    if ref is None:
        return None, None
    var = float(sched.get("reference_var", 1.0))
    if ref == "folded_normal":
        return functools.partial(folded_gaussian_cdf, var=var), f"folded normal(var={fmt(var)})"
    if ref == "gaussian":
        return (lambda t: gaussian_cdf(t, 0.0, var)), f"gaussian(var={fmt(var)})"
    raise ConfigError([f"unknown reference {ref!r} (use 'folded_normal' or 'gaussian')"])


def _run_clt(config, mu, seed, out):
    sched = config.schedule
    n = int(sched.get("n", 1000))
    samples = int(sched.get("samples", 10_000))
    start = sched.get("start")
    x = ProjectivePoint(np.asarray(start, dtype=float)) if start is not None else None
    reference, ref_label = _reference_cdf(sched)
    lambda1 = sched.get("lambda1")
    report = clt_experiment(
        mu, x=x, n=n, samples=samples, seed=seed,
        reference=reference, lambda1=lambda1,
    )
    write_csv(out / "report.csv", ["sample_index", "normalized_value"],
              list(enumerate(report.samples)))
    lines = _header_lines(config, seed) + [
        f"statistic: {'cocycle at start point' if x is not None else 'log operator norm'}",
        f"exponent_used: {fmt(report.lambda_used)} +- {fmt(report.lambda_ci_halfwidth)}",
        f"fitted_mean: {fmt(report.fitted_mean)}",
        f"fitted_variance: {fmt(report.fitted_covariance)}",
        f"ks_vs_fitted_gaussian: {fmt(report.ks_vs_fitted_gaussian)}",
    ]
    if report.ks_vs_reference is not None:
        lines.append(f"ks_vs_reference[{ref_label}]: {fmt(report.ks_vs_reference)}")
    lines.append(f"degenerate_limit: {fmt(report.degenerate)}")
    write_summary(out / "summary.txt", lines)
    fit_cdf = reference if reference is not None else (
        lambda t: gaussian_cdf(t, float(report.fitted_mean), float(report.fitted_covariance))
    )
    svg_histogram(out / "histogram.svg", report.samples, cdf=fit_cdf,
                  title=f"{config.name}: normalized samples")


def _run_clt_cartan(config, mu, seed, out):
    sched = config.schedule
    n = int(sched.get("n", 1000))
    samples = int(sched.get("samples", 10_000))
    report = multidim_clt_cartan(mu, n=n, samples=samples, seed=seed)
    d = mu.dim
    header = ["sample_index"] + [f"coord_{j + 1}" for j in range(d)]
    rows = [(i, *row) for i, row in enumerate(report.samples)]
    write_csv(out / "report.csv", header, rows)
    lam = ", ".join(fmt(v) for v in report.lambda_used)
    lam_ci = ", ".join(fmt(v) for v in report.lambda_ci_halfwidth)
    lines = _header_lines(config, seed) + [
        f"rate_vector: [{lam}]",
        f"rate_ci_halfwidths: [{lam_ci}]",
        f"max_coordinate_sum: {fmt(report.max_coordinate_sum)}",
        f"ks_vs_fitted_gaussian_max_coord: {fmt(report.ks_vs_fitted_gaussian)}",
        f"restricted_min_eigenvalue: {fmt(report.restricted_min_eigenvalue)}"
        f" +- {fmt(report.restricted_min_eigenvalue_ci)}",
    ]
    write_summary(out / "summary.txt", lines)
    svg_histogram(out / "histogram.svg", report.samples[:, 0],
                  title=f"{config.name}: first coordinate")


def _run_stationary(config, mu, seed, out):
    sched = config.schedule
    burn_in = int(sched.get("burn_in", 500))
    particles = int(sched.get("particles", 100_000))
    p = float(sched.get("p", 2.0))
    test_points = int(sched.get("test_points", 20))
    cloud = estimate_stationary(mu, burn_in=burn_in, particles=particles, seed=seed)
    cloud.to_csv(out / "cloud.csv")
    ys = _test_rows(seed, test_points, mu.dim)
    rows = []
    for i, row in enumerate(ys):
        val = log_regularity_integral(cloud, DualProjectivePoint(row), p)
        rows.append((i, p, val, *row))
    header = ["point_index", "p", "integral_value"] + [
        f"y_{j + 1}" for j in range(mu.dim)
    ]
    write_csv(out / "report.csv", header, rows)
    finite = [r[2] for r in rows if np.isfinite(r[2])]
    lines = _header_lines(config, seed) + [
        f"particles: {particles}, burn_in: {burn_in}",
        f"finite_integrals: {len(finite)}/{len(rows)}",
        f"integral_min: {fmt(min(finite)) if finite else ''}",
        f"integral_max: {fmt(max(finite)) if finite else ''}",
        "note: continuity in the test direction is reported as stability"
        " across independent clouds, not pointwise.",
    ]
    write_summary(out / "summary.txt", lines)


def _run_cohomological(config, mu, seed, out):
    sched = config.schedule
    burn_in = int(sched.get("burn_in", 500))
    particles = int(sched.get("particles", 100_000))
    test_points = int(sched.get("test_points", 100))
    cal_n = int(sched.get("calibration_n", 1000))
    cal_replicas = int(sched.get("calibration_replicas", 256))
    est = lyapunov_top(mu, n=cal_n, replicas=cal_replicas, seed=seed)
    dual = estimate_dual_stationary(mu, burn_in=burn_in, particles=particles, seed=seed)
    psi = PsiFunction(dual)
    xs = [ProjectivePoint(row) for row in _test_rows(seed, test_points, mu.dim)]
    res = cohomological_residual(mu, psi, est.lambda1, xs)
    header = ["point_index", "residual"] + [f"x_{j + 1}" for j in range(mu.dim)]
    rows = [(i, r, *x.rep) for i, (r, x) in enumerate(zip(res.residuals, xs))]
    write_csv(out / "report.csv", header, rows)
    lines = _header_lines(config, seed) + [
        f"exponent_used: {fmt(est.lambda1)} +- {fmt(est.ci_halfwidth)}",
        f"dual_particles: {particles}, burn_in: {burn_in}",
        f"mean_abs_residual: {fmt(res.mean_abs)}",
        f"max_abs_residual: {fmt(res.max_abs)}",
    ]
    write_summary(out / "summary.txt", lines)


def _run_large_deviation(config, mu, seed, out):
    sched = config.schedule
    _required(sched, ["eps", "n_values"], "large_deviation")
    curve = large_deviation_curve(
        mu, float(sched["eps"]), [int(v) for v in sched["n_values"]],
        replicas=int(sched.get("replicas", 10_000)), seed=seed,
    )
    write_csv(out / "report.csv", ["n", "frequency"],
              list(zip(curve.schedule, curve.frequencies)))
    lines = _header_lines(config, seed) + [
        f"eps: {fmt(curve.epsilon)}",
        f"exponent_used: {fmt(curve.lambda_used)}",
        f"decay_rate: {fmt(curve.decay_rate) if curve.decay_rate is not None else 'indeterminate'}",
    ]
    write_summary(out / "summary.txt", lines)


def _run_lil(config, mu, seed, out):
    sched = config.schedule
    _required(sched, ["n_max", "phi", "lambda1"], "lil")
    x = ProjectivePoint(np.eye(mu.dim)[0])
    report = lil_diagnostic(
        mu, x, int(sched["n_max"]), seed,
        lambda1=float(sched["lambda1"]), phi=float(sched["phi"]),
    )
    write_csv(out / "report.csv", ["n", "normalized_value"],
              list(zip(report.checkpoints, report.normalized_at_checkpoints)))
    lines = _header_lines(config, seed) + [
        f"window: [{report.window[0]}, {report.window[1]}]",
        f"max_normalized: {fmt(report.max_normalized)}",
        f"min_normalized: {fmt(report.min_normalized)}",
        f"within_band: {fmt(report.within_band)}",
        f"reaches_band: {fmt(report.reaches_band)}",
    ]
    write_summary(out / "summary.txt", lines)


def _martingale_stream(sched, seed):
    name = sched.get("stream", "coin")
    if name == "coin":
        return martingales.DifferenceStream(kind="iid_bounded", seed=seed)
    if name == "gaussian":
        return martingales.DifferenceStream(kind="iid_square_integrable", seed=seed)
    if name == "counterexample_3i":
        return martingales.DifferenceStream(
            kind="counterexample_3i", seed=seed, p=float(sched.get("p", 2.0))
        )
    raise ConfigError([f"unknown stream {name!r}"])


def _run_martingale(config, mu, seed, out):
    sched = config.schedule
    check = sched.get("check")
    if check == "azuma":
        _required(sched, ["eps", "n_values"], "martingale_lab/azuma")
        report = martingales.azuma_check(
            _martingale_stream(sched, seed), float(sched["eps"]),
            [int(v) for v in sched["n_values"]],
            trials=int(sched.get("trials", 100_000)),
        )
        write_csv(out / "report.csv", ["n", "frequency", "bound", "partial_sum"],
                  [(n, f, b, None) for n, f, b in
                   zip(report.schedule, report.frequencies, report.bounds)])
        margins = report.bounds + 3.0 * report.ci_halfwidths - report.frequencies
        lines = _header_lines(config, seed) + [
            f"eps: {fmt(report.eps)}, trials: {report.trials}",
            f"bound_respected: {fmt(report.satisfied)}",
            f"min_margin_with_3_halfwidths: {fmt(float(margins.min()))}",
        ]
    elif check == "baum_katz":
        _required(sched, ["eps", "n_values"], "martingale_lab/baum_katz")
        report = martingales.baum_katz_sums(
            _martingale_stream(sched, seed), float(sched.get("p", 2.0)),
            float(sched["eps"]), [int(v) for v in sched["n_values"]],
            replicas=int(sched.get("replicas", 10_000)),
        )
        write_csv(out / "report.csv", ["n", "frequency", "bound", "partial_sum"],
                  [(n, f, None, s) for n, f, s in
                   zip(report.schedule, report.empirical_probs,
                       report.weighted_partial_sums)])
        lines = _header_lines(config, seed) + [
            f"p: {fmt(report.p)}, eps: {fmt(report.epsilon)}, replicas: {report.replicas}",
            f"verdict: {report.verdict}",
        ]
    elif check == "brown":
        _required(sched, ["array_kind", "row_sizes"], "martingale_lab/brown")
        spec = martingales.TriangularArraySpec(
            kind=sched["array_kind"],
            row_sizes=tuple(int(v) for v in sched["row_sizes"]),
            eps=float(sched.get("eps", 0.25)),
            replicas=int(sched.get("replicas", 10_000)),
            seed=seed,
        )
        report = martingales.brown_triangular_check(spec)
        write_csv(out / "report.csv", ["n", "w_n", "lindeberg_term"],
                  list(zip(report.row_sizes, report.w_values, report.lindeberg_values)))
        lines = _header_lines(config, seed) + [
            f"phi: {fmt(report.phi)}",
            f"ks_vs_limit: {fmt(report.ks_vs_limit) if report.ks_vs_limit is not None else 'degenerate'}",
            f"lindeberg_violated: {fmt(report.lindeberg_violated)}",
        ]
    else:
        raise ConfigError([f"martingale_lab needs schedule key 'check' in "
                           f"('azuma', 'baum_katz', 'brown'), got {check!r}"])
    write_summary(out / "summary.txt", lines)


_RUNNERS = {
    "lyapunov": _run_lyapunov,
    "clt": _run_clt,
    "clt_cartan": _run_clt_cartan,
    "stationary": _run_stationary,
    "cohomological": _run_cohomological,
    "large_deviation": _run_large_deviation,
    "lil": _run_lil,
    "martingale_lab": _run_martingale,
}


def resolve_seed(config, override=None):
    """Seed priority: explicit override, then config, then MATWALK_SEED, then 0."""
    if override is not None:
        return int(override)
    if config.master_seed is not None:
        return int(config.master_seed)
    env = os.environ.get("MATWALK_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError([f"MATWALK_SEED is not an integer: {env!r}"]) from exc
    return 0


def run_scenario(config, out_dir=None, seed=None, threads=1):
    """Execute one scenario and write its artifacts; returns the output dir."""
    seed = resolve_seed(config, seed)
    walks.set_thread_count(threads)
    out = Path(out_dir or config.output_dir or Path("out") / config.name)
    out.mkdir(parents=True, exist_ok=True)
    mu = config.to_measure()
    _RUNNERS[config.kind](config, mu, seed, out)
    return out
