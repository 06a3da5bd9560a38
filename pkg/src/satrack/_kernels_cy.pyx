# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled recursion kernels.

Same contracts as _kernels_py; each path runs the identical sequence of
IEEE-754 operations (the build disables FP contraction), so outputs are
bit-identical to the numpy fallback.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"


def linear_filter(drive, x0, coef):
    drive_arr = np.ascontiguousarray(drive, dtype=np.float64)
    cdef double[:, ::1] d = drive_arr
    cdef Py_ssize_t paths = d.shape[0], steps = d.shape[1]
    out_arr = np.empty((paths, steps), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    x0_arr = np.ascontiguousarray(x0, dtype=np.float64)
    cdef double[::1] start = x0_arr
    cdef double c = coef
    cdef double prev
    cdef Py_ssize_t p, t
    with nogil:
        for p in range(paths):
            prev = start[p]
            for t in range(steps):
                prev = c * prev + d[p, t]
                out[p, t] = prev
    return out_arr


def pinball_paths(x, theta0, lam, q, lo, hi, clamp, sample_idx):
    x_arr = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[:, ::1] sig = x_arr
    cdef Py_ssize_t paths = sig.shape[0], steps = sig.shape[1]
    idx_arr = np.ascontiguousarray(sample_idx, dtype=np.int64)
    cdef long long[::1] sidx = idx_arr
    cdef Py_ssize_t n_samples = sidx.shape[0]
    final_arr = np.empty(paths, dtype=np.float64)
    exit_arr = np.full(paths, -1, dtype=np.int64)
    samples_arr = np.empty((paths, n_samples), dtype=np.float64)
    cdef double[::1] final = final_arr
    cdef long long[::1] exit_t = exit_arr
    cdef double[:, ::1] samples = samples_arr
    cdef double th0 = theta0, l = lam, qq = q, dlo = lo, dhi = hi
    cdef bint do_clamp = bool(clamp)
    cdef double th, xt, ind
    cdef Py_ssize_t p, t, si
    with nogil:
        for p in range(paths):
            th = th0
            si = 0
            if n_samples > 0 and sidx[0] == 0:
                samples[p, 0] = th
                si = 1
            for t in range(1, steps + 1):
                xt = sig[p, t - 1]
                ind = 1.0 if xt <= th else 0.0
                th = th + l * (qq - ind)
                if do_clamp:
                    if th < dlo:
                        th = dlo
                    elif th > dhi:
                        th = dhi
                elif exit_t[p] < 0 and (th < dlo or th > dhi):
                    exit_t[p] = t
                if si < n_samples and sidx[si] == t:
                    samples[p, si] = th
                    si += 1
            final[p] = th
    return final_arr, exit_arr, samples_arr


def kohonen2_paths(x, theta0, lam, lo, hi, clamp, sample_idx):
    x_arr = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[:, ::1] sig = x_arr
    cdef Py_ssize_t paths = sig.shape[0], steps = sig.shape[1]
    idx_arr = np.ascontiguousarray(sample_idx, dtype=np.int64)
    cdef long long[::1] sidx = idx_arr
    cdef Py_ssize_t n_samples = sidx.shape[0]
    final_arr = np.empty((paths, 2), dtype=np.float64)
    exit_arr = np.full(paths, -1, dtype=np.int64)
    samples_arr = np.empty((paths, n_samples, 2), dtype=np.float64)
    cdef double[:, ::1] final = final_arr
    cdef long long[::1] exit_t = exit_arr
    cdef double[:, :, ::1] samples = samples_arr
    cdef double t1_0 = theta0[0], t2_0 = theta0[1]
    cdef double l = lam
    cdef double lo1 = lo[0], lo2 = lo[1], hi1 = hi[0], hi2 = hi[1]
    cdef bint do_clamp = bool(clamp)
    cdef double t1, t2, xt, d1, d2
    cdef Py_ssize_t p, t, si
    with nogil:
        for p in range(paths):
            t1 = t1_0
            t2 = t2_0
            si = 0
            if n_samples > 0 and sidx[0] == 0:
                samples[p, 0, 0] = t1
                samples[p, 0, 1] = t2
                si = 1
            for t in range(1, steps + 1):
                xt = sig[p, t - 1]
                d1 = xt - t1
                if d1 < 0.0:
                    d1 = -d1
                d2 = xt - t2
                if d2 < 0.0:
                    d2 = -d2
                if d1 <= d2:
                    t1 = t1 + l * (xt - t1)
                else:
                    t2 = t2 + l * (xt - t2)
                if do_clamp:
                    if t1 < lo1:
                        t1 = lo1
                    elif t1 > hi1:
                        t1 = hi1
                    if t2 < lo2:
                        t2 = lo2
                    elif t2 > hi2:
                        t2 = hi2
                elif exit_t[p] < 0 and (t1 < lo1 or t1 > hi1 or t2 < lo2 or t2 > hi2):
                    exit_t[p] = t
                if si < n_samples and sidx[si] == t:
                    samples[p, si, 0] = t1
                    samples[p, si, 1] = t2
                    si += 1
            final[p, 0] = t1
            final[p, 1] = t2
    return final_arr, exit_arr, samples_arr
