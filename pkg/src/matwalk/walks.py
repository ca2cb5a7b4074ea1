"""Vectorized random-walk engines with per-step renormalization.

Long products are never multiplied out.  Scalar cocycle values accumulate as
``v <- g v`` with periodic rescaling (exact by additivity of the cocycle), and
log operator norms of products accumulate through scaled matrix states whose
top singular value is read off at the end.  Entries of a scaled state stay of
order one, so walks of any length are immune to overflow.

Replicas are split into fixed blocks; each replica draws from its own
counter-based stream, so results are a pure function of ``(measure, seed,
tag)`` and in particular independent of the worker-thread count, which only
spreads blocks across a pool.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import rng

_BLOCK = 4096   # replicas per scheduling block (fixed: part of no contract,
                # results do not depend on it, only wall time does)
_THREADS = 1


def set_thread_count(k):
    """Worker threads for block scheduling; affects wall time only."""
    global _THREADS
    _THREADS = max(1, int(k))


def thread_count():
    return _THREADS


def _blocks(total):
    return [(start, min(_BLOCK, total - start)) for start in range(0, total, _BLOCK)]


def _run_blocks(fn, blocks):
    if _THREADS <= 1 or len(blocks) <= 1:
        return [fn(*b) for b in blocks]
    with ThreadPoolExecutor(max_workers=_THREADS) as pool:
        return list(pool.map(lambda b: fn(*b), blocks))


def rescale_interval(atoms):
    """Steps between rescalings so scaled entries stay far from overflow."""
    growth = 0.0
    for a in atoms:
        s = np.linalg.svd(a, compute_uv=False)
        growth = max(growth, abs(np.log(s[0])), abs(np.log(s[-1])))
    if growth <= 0.0:
        return 64
    return int(np.clip(300.0 / growth, 1, 64))


def _checkpoint_array(checkpoints, n):
    if checkpoints is None:
        return None
    cps = np.asarray(checkpoints, dtype=int)
    if cps.ndim != 1 or len(cps) == 0 or np.any(np.diff(cps) <= 0):
        raise ValueError("checkpoints must be strictly increasing")
    if cps[0] < 1 or cps[-1] > n:
        raise ValueError("checkpoints must lie in [1, n]")
    return cps


def vector_walk(atoms, weights, start, n, replicas, seed, tag, checkpoints=None):
    """Cocycle values ``log |b_n ... b_1 v| / |v|`` for every replica.

    ``start`` is a unit row (shared) or an array of per-replica unit rows.
    Returns ``(values, final_units)``; with checkpoints, ``values`` has one
    column per checkpoint (the last one need not be ``n``).
    """
    atoms = np.asarray(atoms, dtype=float)
    d = atoms.shape[1]
    start = np.asarray(start, dtype=float)
    shared_start = start.ndim == 1
    cps = _checkpoint_array(checkpoints, n)
    interval = rescale_interval(atoms)

    def run_block(first, count):
        words = rng.replica_words(seed, tag, count, n, weights, first_replica=first)
        v = np.tile(start, (count, 1)) if shared_start else start[first:first + count].copy()
        acc = np.zeros(count)
        cp_vals = np.empty((count, len(cps))) if cps is not None else None
        cp_next = 0
        for k in range(n):
            v = np.einsum("nij,nj->ni", atoms[words[:, k]], v)
            if (k + 1) % interval == 0:
                norms = np.linalg.norm(v, axis=1)
                acc += np.log(norms)
                v /= norms[:, None]
            if cps is not None and cp_next < len(cps) and k + 1 == cps[cp_next]:
                cp_vals[:, cp_next] = acc + np.log(np.linalg.norm(v, axis=1))
                cp_next += 1
        norms = np.linalg.norm(v, axis=1)
        final_vals = acc + np.log(norms)
        return (final_vals if cps is None else cp_vals), v / norms[:, None]

    parts = _run_blocks(run_block, _blocks(replicas))
    values = np.concatenate([p[0] for p in parts])
    finals = np.concatenate([p[1] for p in parts])
    return values, finals


def matrix_walk_log_norms(atom_sets, weights, n, replicas, seed, tag, checkpoints=None):
    """Log operator norms of walk products for several induced atom sets.

    ``atom_sets`` maps a label to the (A, m, m) matrices of one induced action
    (identity, wedge square, ...).  All actions consume the same sampled words,
    so e.g. ``log |P|`` and ``log |P^^2|`` refer to the same product ``P``.
    Returns label -> (replicas,) array, or (replicas, n_checkpoints).
    """
    labels = list(atom_sets)
    sets = {lab: np.asarray(atom_sets[lab], dtype=float) for lab in labels}
    intervals = {lab: rescale_interval(sets[lab]) for lab in labels}
    cps = _checkpoint_array(checkpoints, n)

    def run_block(first, count):
        words = rng.replica_words(seed, tag, count, n, weights, first_replica=first)
        states = {lab: np.tile(np.eye(sets[lab].shape[1]), (count, 1, 1)) for lab in labels}
        acc = {lab: np.zeros(count) for lab in labels}
        cp_vals = {lab: np.empty((count, len(cps))) for lab in labels} if cps is not None else None
        cp_next = 0
        for k in range(n):
            col = words[:, k]
            for lab in labels:
                states[lab] = np.matmul(sets[lab][col], states[lab])
                if (k + 1) % intervals[lab] == 0:
                    scale = np.abs(states[lab]).max(axis=(1, 2))
                    acc[lab] += np.log(scale)
                    states[lab] /= scale[:, None, None]
            if cps is not None and cp_next < len(cps) and k + 1 == cps[cp_next]:
                for lab in labels:
                    top = np.linalg.svd(states[lab], compute_uv=False)[:, 0]
                    cp_vals[lab][:, cp_next] = acc[lab] + np.log(top)
                cp_next += 1
        if cps is not None:
            return cp_vals
        out = {}
        for lab in labels:
            top = np.linalg.svd(states[lab], compute_uv=False)[:, 0]
            out[lab] = acc[lab] + np.log(top)
        return out

    parts = _run_blocks(run_block, _blocks(replicas))
    return {lab: np.concatenate([p[lab] for p in parts]) for lab in labels}


def cloud_walk(atoms, weights, starts, n, seed, tag):
    """Push every start row through its own sampled word; returns unit rows."""
    _, finals = vector_walk(atoms, weights, starts, n, len(starts), seed, tag)
    return finals


def trajectory_cocycle(atoms, weights, start, n_max, seed, tag, stream_index=0):
    """Running cocycle values ``S_1, ..., S_{n_max}`` along a single walk."""
    atoms = np.asarray(atoms, dtype=float)
    u = rng.stream(seed, tag, stream_index).random(n_max)
    word = rng.indices_from_uniforms(u, weights)
    if atoms.shape[1] == 1:
        increments = np.log(np.abs(atoms[:, 0, 0]))[word]
        return np.cumsum(increments)
    v = np.asarray(start, dtype=float)
    v = v / np.linalg.norm(v)
    out = np.empty(n_max)
    acc = 0.0
    for k in range(n_max):
        v = atoms[word[k]] @ v
        norm = np.linalg.norm(v)
        acc += np.log(norm)
        v /= norm
        out[k] = acc
    return out
