"""Empirical stationary measures, the explicit corrector, and log-regularity.

Stationary measures are represented as equal-weight particle clouds obtained
from independent trajectories (one stream per particle), never from a single
ergodic orbit: independent replicas give clean confidence intervals and
parallelize freely.  The corrector is the empirical object

    psi(x) = sum_j w_j log delta(x, y_j)

over a dual-cloud estimate; evaluation is always this exact finite sum, with
no smoothing.  Pairings below ``DELTA_FLOOR`` are treated as exact zeros
(the log of a denormal is meaningless downstream).
"""

import csv
from dataclasses import dataclass
from math import inf

import numpy as np
from scipy.special import ndtri

from . import rng, walks
from .errors import SingularEvaluationError
from .linalg import (
    CANONICAL_ZERO,
    DualProjectivePoint,
    ProjectivePoint,
    act,
)

DELTA_FLOOR = 1e-300
DEFAULT_BURN_IN = 500
DEFAULT_PARTICLES = 100_000
_EVAL_CHUNK = 2048


def canonicalize_rows(v):
    """Unit-normalize rows and apply the canonical sign rule to each."""
    v = np.asarray(v, dtype=float)
    norms = np.linalg.norm(v, axis=1)
    v = v / norms[:, None]
    above = np.abs(v) > CANONICAL_ZERO
    first = np.argmax(above, axis=1)
    lead = v[np.arange(len(v)), first]
    signs = np.where(lead < 0.0, -1.0, 1.0)
    return v * signs[:, None] + 0.0  # clear any -0.0


def start_cloud(dim, count):
    """Deterministic low-discrepancy start directions (no RNG stream used).

    Dimension 2 uses equispaced angles on the half-circle; higher dimensions
    map a Kronecker lattice through the inverse Gaussian CDF and normalize.
    """
    if count < 1:
        raise ValueError("need at least one particle")
    if dim == 1:
        return np.ones((count, 1))
    if dim == 2:
        angles = np.pi * np.arange(count) / count
        return canonicalize_rows(np.column_stack([np.cos(angles), np.sin(angles)]))
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    if dim > len(primes):
        raise ValueError(f"start cloud supports dimension <= {len(primes)}")
    steps = np.sqrt(np.array(primes[:dim], dtype=float))
    lattice = np.outer(np.arange(1, count + 1), steps) % 1.0
    gauss = ndtri(np.clip(lattice, 1e-12, 1.0 - 1e-12))
    return canonicalize_rows(gauss)


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Weighted particle cloud on projective space or on its dual."""

    reps: np.ndarray      # (N, d) canonical unit rows
    weights: np.ndarray   # (N,) positive, sums to 1
    dual: bool = False
    provenance: tuple = (0, 0, 0)  # (seed, burn_in, particle_count)

    def __post_init__(self):
        reps = np.asarray(self.reps, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if reps.ndim != 2 or reps.shape[0] < 1:
            raise ValueError("cloud needs at least one particle")
        if weights.shape != (reps.shape[0],) or np.any(weights < 0.0):
            raise ValueError("one nonnegative weight per particle required")
        if abs(float(weights.sum()) - 1.0) > 1e-10:
            raise ValueError("weights must sum to 1")
        reps.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "reps", reps)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self):
        return self.reps.shape[0]

    @property
    def dim(self):
        return self.reps.shape[1]

    def points(self):
        cls = DualProjectivePoint if self.dual else ProjectivePoint
        for row in self.reps:
            yield cls(row)

    def to_csv(self, path):
        """One row per particle: coordinates then weight."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow([f"coord_{i + 1}" for i in range(self.dim)] + ["weight"])
            for row, w in zip(self.reps, self.weights):
                writer.writerow([f"{v:.17g}" for v in row] + [f"{w:.17g}"])


def _equal_weight_cloud(rows, dual, seed, burn_in):
    n = rows.shape[0]
    return EmpiricalMeasure(
        reps=canonicalize_rows(rows),
        weights=np.full(n, 1.0 / n),
        dual=dual,
        provenance=(seed, burn_in, n),
    )


def estimate_stationary(mu, burn_in=DEFAULT_BURN_IN, particles=DEFAULT_PARTICLES, seed=0):
    """Forward-walk cloud: particle k is ``b_k,burn_in ... b_k,1 x_k``.

    Trajectories start from the deterministic spread cloud and are driven by
    independent per-particle streams, so the estimate is reproducible and its
    particles are i.i.d. draws of the burn-in distribution.
    """
    if burn_in < 1 or particles < 1:
        raise ValueError("burn_in and particles must be >= 1")
    starts = start_cloud(mu.dim, particles)
    finals = walks.cloud_walk(mu.atoms, mu.weights, starts, burn_in, seed, rng.TAG_CLOUD)
    return _equal_weight_cloud(finals, False, seed, burn_in)


def estimate_dual_stationary(mu, burn_in=DEFAULT_BURN_IN, particles=DEFAULT_PARTICLES, seed=0):
    """Cloud for the inverted walk acting on hyperplane covectors.

    A step of the inverted walk draws ``h = g^{-1}`` and moves a covector by
    ``f -> f o h^{-1} = f o g``, i.e. coordinate vectors move by the
    transposed atoms of the original measure.
    """
    if burn_in < 1 or particles < 1:
        raise ValueError("burn_in and particles must be >= 1")
    dual_atoms = np.array([a.T for a in mu.atoms])
    starts = start_cloud(mu.dim, particles)
    finals = walks.cloud_walk(dual_atoms, mu.weights, starts, burn_in, seed, rng.TAG_DUAL_CLOUD)
    return _equal_weight_cloud(finals, True, seed, burn_in)


def advance_cloud(mu, cloud, steps=1):
    """Push every particle ``steps`` more steps, continuing its own stream."""
    seed, burn_in, _ = cloud.provenance
    tag = rng.TAG_DUAL_CLOUD if cloud.dual else rng.TAG_CLOUD
    atoms = np.array([a.T for a in mu.atoms]) if cloud.dual else mu.atoms
    u = rng.replica_uniforms(seed, tag, cloud.size, burn_in + steps)
    words = rng.indices_from_uniforms(u[:, burn_in:], mu.weights)
    v = cloud.reps.copy()
    for k in range(steps):
        v = np.einsum("nij,nj->ni", atoms[words[:, k]], v)
        v /= np.linalg.norm(v, axis=1)[:, None]
    return _equal_weight_cloud(v, cloud.dual, seed, burn_in + steps)


def push_cloud(cloud, g):
    """Pushforward of the whole cloud by a single matrix."""
    g = np.asarray(g, dtype=float)
    rows = cloud.reps @ g.T
    return EmpiricalMeasure(
        reps=canonicalize_rows(rows),
        weights=cloud.weights.copy(),
        dual=cloud.dual,
        provenance=cloud.provenance,
    )


def principal_direction(cloud):
    """Top eigenvector of the weighted second-moment matrix of the cloud."""
    m = (cloud.reps * cloud.weights[:, None]).T @ cloud.reps
    _, vecs = np.linalg.eigh(m)
    cls = DualProjectivePoint if cloud.dual else ProjectivePoint
    return cls(vecs[:, -1])


@dataclass(frozen=True)
class PsiFunction:
    """The corrector as an integral against an empirical dual cloud."""

    dual_cloud: EmpiricalMeasure

    def __post_init__(self):
        if not self.dual_cloud.dual:
            raise ValueError("corrector needs a dual-space cloud")

    def __call__(self, x):
        return psi_eval(self, x)


def _pairings(reps, x_rows):
    """|<f_j, v_i>| for cloud rows f_j against unit rows v_i, clipped to <= 1."""
    return np.minimum(np.abs(x_rows @ reps.T), 1.0)


def psi_eval(psi, x):
    """Exact finite sum ``sum_j w_j log delta(x, y_j)``; always <= 0."""
    if not isinstance(x, ProjectivePoint) or isinstance(x, DualProjectivePoint):
        raise TypeError("corrector is evaluated at points of projective space")
    return float(psi_eval_many(psi, x.rep[None, :])[0])


def psi_eval_many(psi, x_rows):
    """Vectorized corrector evaluation at many unit rows.

    Blocked over both the evaluation points and the cloud so the pairing
    matrix never exceeds a few megabytes regardless of cloud size.
    """
    cloud = psi.dual_cloud
    x_rows = np.asarray(x_rows, dtype=float)
    out = np.zeros(x_rows.shape[0])
    positive = cloud.weights > 0.0
    for lo in range(0, x_rows.shape[0], _EVAL_CHUNK):
        chunk = x_rows[lo:lo + _EVAL_CHUNK]
        acc = np.zeros(chunk.shape[0])
        for clo in range(0, cloud.size, _EVAL_CHUNK):
            reps = cloud.reps[clo:clo + _EVAL_CHUNK]
            vals = _pairings(reps, chunk)
            bad = (vals <= DELTA_FLOOR) & positive[None, clo:clo + _EVAL_CHUNK]
            if np.any(bad):
                i, j = np.argwhere(bad)[0]
                raise SingularEvaluationError(
                    f"evaluation point {lo + i} is orthogonal to cloud atom {clo + j}",
                    atom_index=int(clo + j),
                )
            # zero-weight atoms may pair to zero; keep them out of the log
            vals[vals <= DELTA_FLOOR] = 1.0
            np.log(vals, out=vals)
            acc += vals @ cloud.weights[clo:clo + _EVAL_CHUNK]
        out[lo:lo + _EVAL_CHUNK] = acc
    return out


def markov_apply(mu, f, x):
    """One averaging step: ``sum_i w_i f(g_i x)`` (exact finite sum)."""
    return float(sum(w * f(act(a, x)) for a, w in zip(mu.atoms, mu.weights)))


@dataclass(frozen=True)
class ResidualReport:
    residuals: np.ndarray
    mean_abs: float
    max_abs: float


def cohomological_residual(mu, psi, lambda1, xs):
    """Pointwise defect of the corrector equation.

    For each test point: ``r(x) = drift(x) - psi(x) + (P psi)(x) - lambda1``.
    With the exact stationary dual measure this vanishes identically; with an
    empirical cloud it shrinks as the cloud grows.
    """
    xs = list(xs)
    x_rows = np.stack([x.rep for x in xs])
    psi_x = psi_eval_many(psi, x_rows)
    avg_psi_gx = np.zeros(len(xs))
    drift_vals = np.zeros(len(xs))
    for a, w in zip(mu.atoms, mu.weights):
        moved = x_rows @ a.T
        norms = np.linalg.norm(moved, axis=1)
        drift_vals += w * np.log(norms)
        avg_psi_gx += w * psi_eval_many(psi, moved / norms[:, None])
    res = drift_vals - psi_x + avg_psi_gx - lambda1
    return ResidualReport(
        residuals=res,
        mean_abs=float(np.abs(res).mean()),
        max_abs=float(np.abs(res).max()),
    )


def log_regularity_integral(nu, y, p):
    """``sum_i w_i |log delta(x_i, y)|^(p-1)``; ``inf`` when an atom sits on y.

    Finiteness of this integral (uniformly in ``y``) is the regularity the
    corrector construction rests on; ``inf`` is a value here, not an error.
    """
    if p <= 1.0:
        raise ValueError("order p must exceed 1")
    if nu.dual or not isinstance(y, DualProjectivePoint):
        raise TypeError("expected a primal cloud and a dual test point")
    vals = _pairings(nu.reps, y.rep[None, :])[0]
    positive = nu.weights > 0.0
    if np.any(vals[positive] <= DELTA_FLOOR):
        return inf
    return float(np.abs(np.log(vals[positive])) ** (p - 1.0) @ nu.weights[positive])
