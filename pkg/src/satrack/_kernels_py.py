"""Pure-numpy recursion kernels (fallback backend).

Each function advances a batch of independent paths through a
sequential-in-time loop, vectorized across paths.  Per-path arithmetic
is a fixed sequence of IEEE-754 multiply/add/compare operations, so
results for a given path do not depend on batching and are bit-identical
to the compiled backend in _kernels_cy.pyx.
"""

import numpy as np

BACKEND_NAME = "python"


def linear_filter(drive, x0, coef):
    """out[p, t] = coef * out[p, t-1] + drive[p, t], seeded by x0[p]."""
    drive = np.asarray(drive, dtype=np.float64)
    paths, steps = drive.shape
    out = np.empty((paths, steps), dtype=np.float64)
    prev = np.array(x0, dtype=np.float64, copy=True)
    coef = float(coef)
    for t in range(steps):
        prev = coef * prev + drive[:, t]
        out[:, t] = prev
    return out


def pinball_paths(x, theta0, lam, q, lo, hi, clamp, sample_idx):
    """Scalar quantile recursion theta += lam * (q - 1{x <= theta}).

    Returns (final[P], exit_t[P], samples[P, S]); exit_t is the first
    step index at which a path left [lo, hi] (-1 if never), recorded
    only when clamp is false.
    """
    x = np.asarray(x, dtype=np.float64)
    paths, steps = x.shape
    sample_idx = np.asarray(sample_idx, dtype=np.int64)
    theta = np.full(paths, float(theta0), dtype=np.float64)
    exit_t = np.full(paths, -1, dtype=np.int64)
    samples = np.empty((paths, sample_idx.size), dtype=np.float64)
    lam, q, lo, hi = float(lam), float(q), float(lo), float(hi)
    si = 0
    if si < sample_idx.size and sample_idx[si] == 0:
        samples[:, si] = theta
        si += 1
    for t in range(1, steps + 1):
        xt = x[:, t - 1]
        ind = (xt <= theta).astype(np.float64)
        theta = theta + lam * (q - ind)
        if clamp:
            theta = np.minimum(np.maximum(theta, lo), hi)
        else:
            fresh = (exit_t < 0) & ((theta < lo) | (theta > hi))
            exit_t[fresh] = t
        if si < sample_idx.size and sample_idx[si] == t:
            samples[:, si] = theta
            si += 1
    return theta, exit_t, samples


def kohonen2_paths(x, theta0, lam, lo, hi, clamp, sample_idx):
    """Two-cell quantizer recursion: nearest coordinate moves toward x.

    Ties go to the first cell.  Box bounds lo/hi are per-coordinate
    2-vectors.  Returns (final[P, 2], exit_t[P], samples[P, S, 2]).
    """
    x = np.asarray(x, dtype=np.float64)
    paths, steps = x.shape
    sample_idx = np.asarray(sample_idx, dtype=np.int64)
    t1 = np.full(paths, float(theta0[0]), dtype=np.float64)
    t2 = np.full(paths, float(theta0[1]), dtype=np.float64)
    exit_t = np.full(paths, -1, dtype=np.int64)
    samples = np.empty((paths, sample_idx.size, 2), dtype=np.float64)
    lam = float(lam)
    lo1, lo2 = float(lo[0]), float(lo[1])
    hi1, hi2 = float(hi[0]), float(hi[1])
    si = 0
    if si < sample_idx.size and sample_idx[si] == 0:
        samples[:, si, 0] = t1
        samples[:, si, 1] = t2
        si += 1
    for t in range(1, steps + 1):
        xt = x[:, t - 1]
        first = np.abs(xt - t1) <= np.abs(xt - t2)
        t1 = np.where(first, t1 + lam * (xt - t1), t1)
        t2 = np.where(first, t2, t2 + lam * (xt - t2))
        if clamp:
            t1 = np.minimum(np.maximum(t1, lo1), hi1)
            t2 = np.minimum(np.maximum(t2, lo2), hi2)
        else:
            out_now = (t1 < lo1) | (t1 > hi1) | (t2 < lo2) | (t2 > hi2)
            fresh = (exit_t < 0) & out_now
            exit_t[fresh] = t
        if si < sample_idx.size and sample_idx[si] == t:
            samples[:, si, 0] = t1
            samples[:, si, 1] = t2
            si += 1
    final = np.stack([t1, t2], axis=1)
    return final, exit_t, samples
