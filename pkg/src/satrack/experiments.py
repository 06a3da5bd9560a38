"""Monte Carlo tracking-error experiments over a gain grid.

For each gain, `paths` independent recursions run to the horizon; the
mean distance of the final iterate from the target root, with standard
errors, makes one row of an ErrorCurve, and the log2-log2 slope across
the grid estimates the tracking-error rate.  Path p of gain index i
always uses stream derive_stream(i + 1, p) under the config seed, so
runs are bitwise reproducible for any worker count and adding gains
never perturbs existing paths.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ._backend import kernels
from .errors import ConfigError, DomainExitError
from .fields import (
    Box,
    Kohonen,
    QuantilePinball,
    UpdateField,
    closed_form_mean_field,
    eval_field,
)
from .numerics import (
    LineFit,
    fit_line,
    gauss_expectation,
    norm_cdf,
    norm_quantile,
    solve_fixed_point_2d,
)
from .recursion import RecursionConfig, run_averaged
from .rng import derive_stream
from .signals import (
    ArctanOf,
    LinearProcessSpec,
    SignalSpec,
    Uniform01,
    generate_paths_block,
    stationary_std,
    tail_variance,
)

# stream namespace for reference runs; far outside any realistic grid index
REF_LAMBDA_INDEX = 1 << 20

_CHUNK_ELEMENTS = 4_000_000  # per-chunk signal buffer budget (~32 MB)


@dataclass(frozen=True)
class Fixed:
    steps: int


@dataclass(frozen=True)
class PerGain:
    """Horizon T(gain) = ceil(c / gain): a fixed span of averaged time."""

    c: float


HorizonRule = Union[Fixed, PerGain]


@dataclass(frozen=True)
class Analytic:
    pass


@dataclass(frozen=True)
class SelfReferential:
    """Use the mean final iterate of a much smaller reference gain as the target."""

    lambda_ref: float


ReferenceRule = Union[Analytic, SelfReferential]


def horizon_for(rule: HorizonRule, gain: float) -> int:
    if isinstance(rule, Fixed):
        return rule.steps
    return int(math.ceil(rule.c / gain))


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    signal: SignalSpec
    field: UpdateField
    theta0: tuple
    lambda_grid: tuple
    horizon_rule: HorizonRule
    paths: int
    base_seed: int
    reference: ReferenceRule
    domain: Box
    domain_policy: str = "none"

    def __post_init__(self):
        object.__setattr__(self, "theta0", tuple(float(v) for v in np.atleast_1d(self.theta0)))
        object.__setattr__(self, "lambda_grid", tuple(float(v) for v in self.lambda_grid))
        if not self.lambda_grid or any(l <= 0 for l in self.lambda_grid):
            raise ConfigError("lambda_grid must contain positive gains")
        if any(a <= b for a, b in zip(self.lambda_grid, self.lambda_grid[1:])):
            raise ConfigError("lambda_grid must be strictly decreasing")
        if self.paths < 2:
            raise ConfigError("paths must be >= 2 (standard errors need at least 2)")
        if isinstance(self.reference, SelfReferential):
            if self.reference.lambda_ref >= min(self.lambda_grid):
                raise ConfigError("self-referential lambda_ref must lie below the grid")
        if isinstance(self.horizon_rule, Fixed) and self.horizon_rule.steps < 1:
            raise ConfigError("fixed horizon must be >= 1")
        if isinstance(self.horizon_rule, PerGain) and self.horizon_rule.c <= 0:
            raise ConfigError("per-gain horizon constant must be positive")
        if self.domain_policy not in ("none", "clamp"):
            raise ConfigError("domain_policy must be 'none' or 'clamp'")
        if len(self.theta0) != self.domain.dimension:
            raise ConfigError("theta0 dimension does not match the domain box")
        if not self.domain.contains(self.theta0):
            raise ConfigError("theta0 must lie inside the domain box")


@dataclass(frozen=True)
class ErrorCurveRow:
    gain: float
    mean_abs_error: float
    stderr: float
    paths: int
    horizon: int
    exits: int
    mean_theta: tuple
    theta_stderr: tuple


@dataclass
class ErrorCurve:
    rows: list
    slope_fit: Optional[LineFit]
    reference: np.ndarray
    reference_stderr: np.ndarray
    name: str
    total_exits: int

    def slope(self) -> float:
        if self.slope_fit is None:
            raise ValueError("slope needs at least two gain points")
        return self.slope_fit.slope


@dataclass
class GapCurve:
    """Mean |theta_t - z_t| between the stochastic and averaged iterates."""

    rows: list  # (gain, [(t, mean_gap), ...], max_gap)
    slope_fit: Optional[LineFit]
    name: str

    def slope(self) -> float:
        if self.slope_fit is None:
            raise ValueError("slope needs at least two gain points")
        return self.slope_fit.slope


def path_stream(lambda_index: int, path_index: int) -> int:
    """Stream id of one Monte Carlo path; documented layout contract."""
    return derive_stream(lambda_index + 1, path_index)


def pairwise_sum(values) -> float:
    """Sum with a fixed binary-tree order: independent of chunking and
    worker count, hence bitwise reproducible."""
    buf = np.asarray(values, dtype=np.float64).copy()
    if buf.size == 0:
        return 0.0
    while buf.size > 1:
        m = buf.size // 2
        folded = buf[: 2 * m : 2] + buf[1 : 2 * m : 2]
        if buf.size % 2:
            folded = np.concatenate([folded, buf[-1:]])
        buf = folded
    return float(buf[0])


def pairwise_mean_stderr(values) -> tuple:
    v = np.asarray(values, dtype=np.float64)
    mean = pairwise_sum(v) / v.size
    if v.size < 2:
        return mean, 0.0
    ss = pairwise_sum((v - mean) ** 2)
    return mean, math.sqrt(ss / (v.size - 1)) / math.sqrt(v.size)


def _chunk_ranges(paths: int, horizon: int):
    size = max(1, _CHUNK_ELEMENTS // max(horizon, 1))
    return [(a, min(a + size, paths)) for a in range(0, paths, size)]


def _run_chunk(cfg: ExperimentConfig, lambda_index: int, gain: float, horizon: int,
               lo_path: int, hi_path: int, sample_idx: np.ndarray):
    """Final iterates (and sampled iterates) for paths lo_path..hi_path-1."""
    streams = [path_stream(lambda_index, p) for p in range(lo_path, hi_path)]
    sig, _ = generate_paths_block(cfg.signal, cfg.base_seed, streams, horizon)
    clamp = cfg.domain_policy == "clamp"
    lo, hi = cfg.domain.lower_array(), cfg.domain.upper_array()
    f = cfg.field
    if isinstance(f, QuantilePinball):
        fin, exit_t, samples = kernels.pinball_paths(
            sig, cfg.theta0[0], gain, f.q, lo[0], hi[0], clamp, sample_idx
        )
        return fin[:, None], exit_t, samples[:, :, None]
    if isinstance(f, Kohonen) and f.cells == 2:
        fin, exit_t, samples = kernels.kohonen2_paths(
            sig, cfg.theta0, gain, lo, hi, clamp, sample_idx
        )
        return fin, exit_t, samples
    # generic slow path for arbitrary fields
    n = hi_path - lo_path
    dim = len(cfg.theta0)
    fin = np.empty((n, dim))
    exit_t = np.full(n, -1, dtype=np.int64)
    samples = np.empty((n, sample_idx.size, dim))
    for i in range(n):
        theta = np.asarray(cfg.theta0).copy()
        si = 0
        if si < sample_idx.size and sample_idx[si] == 0:
            samples[i, si] = theta
            si += 1
        for t in range(1, horizon + 1):
            theta = theta + gain * eval_field(f, theta, float(sig[i, t - 1]))
            if clamp:
                theta = np.minimum(np.maximum(theta, lo), hi)
            elif exit_t[i] < 0 and not (np.all(theta >= lo) and np.all(theta <= hi)):
                exit_t[i] = t
            if si < sample_idx.size and sample_idx[si] == t:
                samples[i, si] = theta
                si += 1
        fin[i] = theta
    return fin, exit_t, samples


_EMPTY_IDX = np.empty(0, dtype=np.int64)


def _chunk_task(args):
    cfg, lam_idx, gain, horizon, a, b, sample_idx = args
    fin, exit_t, samples = _run_chunk(cfg, lam_idx, gain, horizon, a, b, sample_idx)
    return a, b, fin, exit_t, samples


def _collect_finals(cfg, lam_idx, gain, horizon, paths, workers, sample_idx=_EMPTY_IDX):
    finals = np.empty((paths, len(cfg.theta0)))
    samples = np.empty((paths, sample_idx.size, len(cfg.theta0)))
    exits = 0
    tasks = [
        (cfg, lam_idx, gain, horizon, a, b, sample_idx)
        for a, b in _chunk_ranges(paths, horizon)
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_chunk_task, tasks))
    else:
        results = [_chunk_task(t) for t in tasks]
    for a, b, fin, exit_t, smp in results:
        finals[a:b] = fin
        samples[a:b] = smp
        exits += int(np.sum(exit_t >= 0))
    return finals, exits, samples


def kohonen_arctan_residual(signal: ArctanOf, nodes: int = 48):
    """The two-equation optimality system of the two-cell quantizer on an
    arctan-of-Gaussian signal, as a residual function of theta.

    Component i is (mass of cell i) * theta_i minus the expectation of
    the signal over cell i; its root is the optimal codebook.
    """
    sigma = stationary_std(signal.inner)

    def residual(theta):
        mid = 0.5 * (theta[0] + theta[1])
        mid = min(max(mid, -0.5 * math.pi + 1e-9), 0.5 * math.pi - 1e-9)
        cut = math.tan(mid)
        mass_low = norm_cdf(cut / sigma)
        e_low = gauss_expectation(
            lambda x: np.arctan(x) * (x <= cut), sigma, nodes=nodes, split_at=cut
        )
        e_high = gauss_expectation(
            lambda x: np.arctan(x) * (x > cut), sigma, nodes=nodes, split_at=cut
        )
        return np.asarray([theta[0] * mass_low - e_low, theta[1] * (1.0 - mass_low) - e_high])

    return residual


def solve_kohonen_arctan_root(signal: ArctanOf, initial=None, tol: float = 1e-12) -> np.ndarray:
    init = initial if initial is not None else (-0.25 * math.pi, 0.25 * math.pi)
    return solve_fixed_point_2d(kohonen_arctan_residual(signal), init, tol=tol, max_iter=4000)


def reference_value_with_stderr(cfg: ExperimentConfig, workers: int = 1) -> tuple:
    """(theta*, per-coordinate standard error of the reference)."""
    if isinstance(cfg.reference, SelfReferential):
        gain = cfg.reference.lambda_ref
        horizon = horizon_for(cfg.horizon_rule, gain)
        finals, _, _ = _collect_finals(
            cfg, REF_LAMBDA_INDEX - 1, gain, horizon, cfg.paths, workers
        )
        dim = finals.shape[1]
        mean = np.empty(dim)
        se = np.empty(dim)
        for j in range(dim):
            mean[j], se[j] = pairwise_mean_stderr(finals[:, j])
        return mean, se
    f, s = cfg.field, cfg.signal
    if isinstance(f, QuantilePinball):
        if isinstance(s, LinearProcessSpec):
            root = norm_quantile(f.q) * math.sqrt(tail_variance(s, 0))
            return np.asarray([root]), np.zeros(1)
        if isinstance(s, Uniform01):
            return np.asarray([f.q]), np.zeros(1)
    if isinstance(f, Kohonen) and f.cells == 2:
        if isinstance(s, Uniform01):
            return np.asarray([0.25, 0.75]), np.zeros(2)
        if isinstance(s, ArctanOf):
            return solve_kohonen_arctan_root(s, initial=cfg.theta0), np.zeros(2)
    raise ConfigError(
        f"no analytic reference for {type(f).__name__} x {type(s).__name__}"
    )


def reference_value(cfg: ExperimentConfig, workers: int = 1) -> np.ndarray:
    return reference_value_with_stderr(cfg, workers)[0]


def run_error_curve(cfg: ExperimentConfig, workers: int = 1) -> ErrorCurve:
    """Mean final tracking error per gain, with the fitted log2-log2 slope."""
    ref, ref_se = reference_value_with_stderr(cfg, workers)
    rows = []
    total_exits = 0
    for li, gain in enumerate(cfg.lambda_grid):
        horizon = horizon_for(cfg.horizon_rule, gain)
        finals, exits, _ = _collect_finals(cfg, li, gain, horizon, cfg.paths, workers)
        errs = np.sqrt(np.sum((finals - ref[None, :]) ** 2, axis=1))
        mean_err, se = pairwise_mean_stderr(errs)
        dim = finals.shape[1]
        mth = tuple(pairwise_mean_stderr(finals[:, j])[0] for j in range(dim))
        sth = tuple(pairwise_mean_stderr(finals[:, j])[1] for j in range(dim))
        rows.append(
            ErrorCurveRow(gain, mean_err, se, cfg.paths, horizon, exits, mth, sth)
        )
        total_exits += exits
    slope_fit = None
    if len(rows) >= 2:
        slope_fit = fit_line(
            [(math.log2(r.gain), math.log2(r.mean_abs_error)) for r in rows]
        )
    run_paths = cfg.paths * len(cfg.lambda_grid)
    if cfg.domain_policy == "none" and total_exits > 0.01 * run_paths:
        raise DomainExitError(
            f"{total_exits} of {run_paths} paths left the domain box "
            f"(> 1%); widen the box or use the clamp policy",
            exits=total_exits,
            paths=run_paths,
        )
    return ErrorCurve(rows, slope_fit, ref, ref_se, cfg.name, total_exits)


def _default_sample_times(horizon: int) -> np.ndarray:
    times = {1 << k for k in range(0, horizon.bit_length())}
    times.add(horizon)
    return np.asarray(sorted(t for t in times if t <= horizon), dtype=np.int64)


def tracking_gap_curve(
    cfg: ExperimentConfig, sample_times=None, workers: int = 1
) -> GapCurve:
    """Mean distance between paired stochastic and averaged iterates.

    Both start from theta0 and share each gain; the per-gain summary is
    the max over sample times of the mean gap, fitted against the gain
    on log2 axes.  Needs a closed-form mean field for the config.
    """
    mf = closed_form_mean_field(cfg.field, cfg.signal)
    rows = []
    for li, gain in enumerate(cfg.lambda_grid):
        horizon = horizon_for(cfg.horizon_rule, gain)
        if sample_times is None:
            sidx = _default_sample_times(horizon)
        else:
            sidx = np.asarray(sorted(set(int(t) for t in sample_times)), dtype=np.int64)
            if sidx.size and (sidx[0] < 0 or sidx[-1] > horizon):
                raise ConfigError("sample times must lie in [0, horizon]")
        rcfg = RecursionConfig(cfg.theta0, gain, horizon, cfg.domain, cfg.domain_policy)
        z = run_averaged(mf, rcfg).points[sidx]
        _, _, samples = _collect_finals(cfg, li, gain, horizon, cfg.paths, workers, sidx)
        gaps = np.sqrt(np.sum((samples - z[None, :, :]) ** 2, axis=2))
        per_time = [
            (int(t), pairwise_mean_stderr(gaps[:, k])[0]) for k, t in enumerate(sidx)
        ]
        max_gap = max(g for _, g in per_time)
        rows.append((gain, per_time, max_gap))
    slope_fit = None
    if len(rows) >= 2:
        slope_fit = fit_line([(math.log2(g), math.log2(mg)) for g, _, mg in rows])
    return GapCurve(rows, slope_fit, cfg.name)
