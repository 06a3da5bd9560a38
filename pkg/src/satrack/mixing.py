"""Computable mixing diagnostics for Gaussian linear signals.

For a causal linear process with standard Gaussian noise the deviation
X_t - E[X_t | F^+_{t-tau}] is exactly the coefficient tail sum
sum_{j>=tau} a_j e_{t-j}, a centered Gaussian; all second-order mixing
coefficients therefore have closed forms, and the remaining quantities
(the conditional Lipschitz constant, the forgetting sums, the maximal
inequality ratio) are estimated by Monte Carlo against those closed
forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError
from .fields import (
    Box,
    PiecewiseIndicator,
    QuantilePinball,
    UpdateField,
    eval_field_batch,
    field_discontinuities,
)
from .numerics import LineFit, fit_line, norm_cdf, norm_pdf
from .rng import RngState, gaussians, uniforms
from .signals import (
    Finite,
    Geometric,
    LinearProcessSpec,
    PowerDecay,
    generate_paths_block,
    tail_variance,
)


@dataclass
class MixingProfile:
    """gamma_r(tau) for tau = 1..tau_max, their sum, and a certified
    bound on the omitted tail of the infinite sum."""

    order_r: float
    m_r: float
    gamma_sequence: np.ndarray
    gamma_total: float
    tail_bound: float

    @property
    def tau_max(self) -> int:
        return len(self.gamma_sequence)


@dataclass
class ClcReport:
    """Estimated conditional Lipschitz constant (a max over sampled
    theta pairs and conditioning histories, i.e. a lower confidence
    bound for the true constant)."""

    k_hat: float
    pairs_tested: int
    worst_pair: tuple
    pairs_skipped: int = 0


@dataclass
class ForgettingReport:
    """Per-step forgetting terms sup_theta E|E[H(theta, X_{k+1})|F_0] - G(theta)|
    and their cumulative sums over k = 0..k_max."""

    per_k_terms: np.ndarray
    partial_sums: np.ndarray
    k_max: int
    theta_grid_size: int

    @property
    def c0_estimate(self) -> float:
        return float(self.partial_sums[-1])


@dataclass
class MaximalInequalityReport:
    """Ratio of the Monte Carlo sup-partial-sum moment to the
    sqrt(m * M_r * Gamma_r) normalizer, per block size."""

    rows: list  # (block m, lhs, rhs, ratio)
    trend: Optional[LineFit]
    order_r: float
    trials: int


def normal_abs_moment(r: float) -> float:
    """(E|Z|^r)^(1/r) for standard normal Z."""
    if r < 1:
        raise ValueError("moment order must be >= 1")
    log_m = 0.5 * r * math.log(2.0) + math.lgamma(0.5 * (r + 1.0)) - 0.5 * math.log(math.pi)
    return math.exp(log_m / r)


def gamma_exact_linear(spec: LinearProcessSpec, tau: int) -> float:
    """gamma_2(tau): exact L^2 conditional-approximation deviation,
    sqrt of the coefficient tail variance from index tau."""
    if tau < 1:
        raise ValueError("tau must be >= 1")
    return math.sqrt(tail_variance(spec, tau))


def _power_coeff_tail_constant(beta: float) -> float:
    # sup_m m^(beta-1) * sum_{j>=m} (j+1)^-beta = 1/(beta-1), approached
    # from below (integral comparison), so this is the tight constant.
    return 1.0 / (beta - 1.0)


def gamma_bound_linear(spec: LinearProcessSpec, r: float, tau: int) -> float:
    """Power-decay L^r deviation bound b_tau = ||e||_r * C * tau^(1-beta):
    C is the tight integral-comparison constant for the absolute
    coefficient tail, so b_tau dominates the exact deviation."""
    if tau < 1:
        raise ValueError("tau must be >= 1")
    if not isinstance(spec.rule, PowerDecay):
        raise ConfigError("gamma_bound_linear applies to PowerDecay rules")
    beta = spec.rule.beta
    if beta <= 1.0:
        raise ValueError("the coefficient-tail bound is void for beta <= 1")
    return normal_abs_moment(r) * _power_coeff_tail_constant(beta) * tau ** (1.0 - beta)


def gamma_total(spec: LinearProcessSpec, r: float, tau_max: int) -> MixingProfile:
    """Mixing profile up to tau_max with a certified tail bound.

    r = 2 uses the exact Gaussian deviations for every rule (Geometric
    and Finite also for r != 2, where the deviation is still Gaussian);
    PowerDecay with r != 2 uses the coefficient-tail bound.  PowerDecay
    with beta <= 2 is rejected: the summability hypothesis fails there.
    """
    if tau_max < 1:
        raise ValueError("tau_max must be >= 1")
    rule = spec.rule
    if isinstance(rule, PowerDecay) and rule.beta <= 2.0:
        raise ValueError(
            "gamma series diverges under the available bounds for beta <= 2"
        )
    taus = np.arange(1, tau_max + 1)
    moment = normal_abs_moment(r)
    use_bound = isinstance(rule, PowerDecay) and r != 2.0
    if use_bound:
        gamma = np.asarray([gamma_bound_linear(spec, r, int(t)) for t in taus])
    else:
        scale = 1.0 if r == 2.0 else moment
        gamma = scale * np.asarray([gamma_exact_linear(spec, int(t)) for t in taus])

    if isinstance(rule, Geometric):
        a = abs(rule.alpha)
        if a == 0.0:
            tail = 0.0
        else:
            # gamma(tau) = C a^tau; sum the geometric remainder exactly
            c = (1.0 if r == 2.0 else moment) / math.sqrt(1.0 - rule.alpha ** 2)
            tail = c * a ** (tau_max + 1) / (1.0 - a)
    elif isinstance(rule, Finite):
        lags = len(rule.coeffs)
        extra = [
            (1.0 if r == 2.0 else moment) * gamma_exact_linear(spec, t)
            for t in range(tau_max + 1, lags)
        ]
        tail = float(sum(extra))
    elif use_bound:
        beta = rule.beta
        k = normal_abs_moment(r) * _power_coeff_tail_constant(beta)
        tail = k * tau_max ** (2.0 - beta) / (beta - 2.0)
    else:
        beta = rule.beta
        # gamma(tau) <= tau^((1-2beta)/2)/sqrt(2beta-1), integral-compare the sum
        tail = (
            tau_max ** (1.5 - beta)
            / ((beta - 1.5) * math.sqrt(2.0 * beta - 1.0))
        )
    m_r = (moment if r != 2.0 else 1.0) * math.sqrt(tail_variance(spec, 0))
    return MixingProfile(r, m_r, gamma, float(np.sum(gamma)), tail)


def _conditional_mean_sd(spec: LinearProcessSpec):
    """One-step conditional law pieces: X_1 | F_0 ~ N(shift, a_0^2) with
    shift ~ N(0, v_1) under the stationary history law."""
    a0 = float(spec.rule.coeffs[0]) if isinstance(spec.rule, Finite) else 1.0
    return a0, math.sqrt(tail_variance(spec, 1))


def _pinball_conditional_increment(theta_lo, theta_hi, shifts, a0):
    """E[|H(t1,X1) - H(t2,X1)| | F_0] for the pinball field: the
    conditional probability that X_1 lands between the two thresholds."""
    return norm_cdf((theta_hi - shifts) / a0) - norm_cdf((theta_lo - shifts) / a0)


def _generic_conditional_increment(field, t1, t2, shift, a0, nodes=24):
    """Quadrature of |H(t1,x) - H(t2,x)| against the N(shift, a0^2)
    conditional density, panels split at every threshold of either theta."""
    cuts = sorted(set(field_discontinuities(field, t1) + field_discontinuities(field, t2)))
    lo, hi = shift - 9.0 * a0, shift + 9.0 * a0
    edges = [lo] + [c for c in cuts if lo < c < hi] + [hi]
    gl_x, gl_w = np.polynomial.legendre.leggauss(nodes)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        panels = max(1, int(math.ceil((b - a) / (1.5 * a0))))
        bounds = np.linspace(a, b, panels + 1)
        for pa, pb in zip(bounds[:-1], bounds[1:]):
            x = 0.5 * (pb - pa) * gl_x + 0.5 * (pa + pb)
            w = 0.5 * (pb - pa) * gl_w
            diff = eval_field_batch(field, t1, x) - eval_field_batch(field, t2, x)
            mag = np.sqrt(np.sum(diff * diff, axis=1))
            dens = norm_pdf((x - shift) / a0) / a0
            total += float(np.dot(w, mag * dens))
    return total


def estimate_clc(
    field: UpdateField,
    spec: LinearProcessSpec,
    domain: Box,
    pair_count: int,
    mc_samples: int,
    rng: RngState,
) -> ClcReport:
    """Estimate the conditional Lipschitz constant of theta -> H(theta, X_1).

    Random theta pairs in the domain box; for each pair the one-step
    conditional expectation of |H(theta1, X_1) - H(theta2, X_1)| is
    computed in closed form (pinball) or by quadrature (other fields)
    under sampled stationary histories, and k_hat is the largest
    observed ratio against |theta1 - theta2|.
    """
    if pair_count < 1 or mc_samples < 1:
        raise ConfigError("need at least one pair and one history sample")
    a0, shift_sd = _conditional_mean_sd(spec)
    dim = domain.dimension
    lo, hi = domain.lower_array(), domain.upper_array()
    u = uniforms(rng, 2 * pair_count * dim).reshape(2, pair_count, dim)
    t1s = lo + (hi - lo) * u[0]
    t2s = lo + (hi - lo) * u[1]
    shifts = shift_sd * gaussians(rng, mc_samples)
    k_hat = 0.0
    worst = (tuple(t1s[0]), tuple(t2s[0]))
    skipped = 0
    pinball = isinstance(field, QuantilePinball)
    for i in range(pair_count):
        t1, t2 = t1s[i], t2s[i]
        dist = float(np.linalg.norm(t1 - t2))
        if dist < 1e-12:
            skipped += 1
            continue
        if pinball:
            tl, th = sorted((t1[0], t2[0]))
            vals = _pinball_conditional_increment(tl, th, shifts, a0)
            ratio = float(np.max(vals)) / dist
        else:
            ratio = (
                max(
                    _generic_conditional_increment(field, t1, t2, float(s), a0)
                    for s in shifts
                )
                / dist
            )
        if ratio > k_hat:
            k_hat = ratio
            worst = (tuple(t1), tuple(t2))
    return ClcReport(k_hat, pair_count - skipped, worst, skipped)


def forgetting_partial_sum(
    field: UpdateField,
    spec: LinearProcessSpec,
    k_max: int,
    theta_grid,
    mc_histories: int,
    rng: RngState,
) -> ForgettingReport:
    """Empirical forgetting sums for threshold fields on linear signals.

    For each k, E[H(theta, X_{k+1}) | F_0] has the semi-closed form of a
    normal CDF evaluated at the history-dependent shift (sampled exactly
    from its stationary law); the per-k term is the grid supremum of the
    mean absolute deviation from the stationary mean field.
    """
    if not theta_grid:
        raise ConfigError("theta_grid must be nonempty")
    if k_max < 0:
        raise ConfigError("k_max must be nonnegative")
    if not isinstance(field, (QuantilePinball, PiecewiseIndicator)):
        raise ConfigError("forgetting sums support pinball or piecewise-indicator fields")
    thetas = [np.atleast_1d(np.asarray(t, dtype=np.float64)) for t in theta_grid]
    total_sd = math.sqrt(tail_variance(spec, 0))
    base = gaussians(rng, mc_histories)
    per_k = np.empty(k_max + 1)
    for k in range(k_max + 1):
        v_hist = tail_variance(spec, k + 1)
        s_k = math.sqrt(max(tail_variance(spec, 0) - v_hist, 0.0))
        shifts = math.sqrt(v_hist) * base
        worst = 0.0
        for th in thetas:
            if isinstance(field, QuantilePinball):
                cond = _shifted_cdf(float(th[0]) - shifts, s_k)
                uncond = norm_cdf(float(th[0]) / total_sd)
                term = float(np.mean(np.abs(cond - uncond)))
            else:
                cond = np.asarray(
                    [
                        _generic_conditional_field_mean(field, th, float(sh), s_k)
                        for sh in shifts
                    ]
                )
                uncond = _generic_conditional_field_mean(field, th, 0.0, total_sd)
                term = float(np.mean(np.abs(cond - uncond)))
            worst = max(worst, term)
        per_k[k] = worst
    return ForgettingReport(per_k, np.cumsum(per_k), k_max, len(thetas))


def _shifted_cdf(args, sd):
    if sd == 0.0:
        return (np.asarray(args) >= 0.0).astype(np.float64)
    return norm_cdf(np.asarray(args) / sd)


def _generic_conditional_field_mean(field, theta, shift, sd, nodes=24):
    if sd == 0.0:
        return float(eval_field_batch(field, theta, np.asarray([shift]))[0, 0])
    cuts = field_discontinuities(field, theta)
    lo, hi = shift - 9.0 * sd, shift + 9.0 * sd
    edges = [lo] + [c for c in cuts if lo < c < hi] + [hi]
    gl_x, gl_w = np.polynomial.legendre.leggauss(nodes)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        panels = max(1, int(math.ceil((b - a) / (1.5 * sd))))
        bounds = np.linspace(a, b, panels + 1)
        for pa, pb in zip(bounds[:-1], bounds[1:]):
            x = 0.5 * (pb - pa) * gl_x + 0.5 * (pa + pb)
            w = 0.5 * (pb - pa) * gl_w
            vals = eval_field_batch(field, theta, x)[:, 0]
            dens = norm_pdf((x - shift) / sd) / sd
            total += float(np.dot(w, vals * dens))
    return total


def check_maximal_inequality(
    spec: LinearProcessSpec,
    field: UpdateField,
    theta,
    r: float,
    blocks,
    trials: int,
    rng: RngState,
    b_scale: float = 1.0,
) -> MaximalInequalityReport:
    """Monte Carlo check that sup-partial-sum L^r moments scale like
    sqrt(m) times the mixing normalizer.

    The summands are the field values along a stationary path, centered
    by their Monte Carlo mean; the reported ratio per block size m is
    E^(1/r)[sup_{t<=m} |sum_{s<=t} b W_s|^r] / (b sqrt(m) sqrt(M_r Gamma_r)).
    A flat trend (log-log slope near 0) means the sqrt(m) scaling has
    been divided out correctly.
    """
    if r <= 2.0:
        raise ValueError("the maximal-inequality check needs r > 2")
    blocks = sorted(int(m) for m in blocks)
    if not blocks or blocks[0] < 1:
        raise ValueError("blocks must be positive integers")
    if trials < 2:
        raise ConfigError("need at least 2 trials")
    m_max = blocks[-1]
    theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    streams = [rng.child(100 + i).stream_index for i in range(trials)]
    sig, _ = generate_paths_block(spec, rng.seed, streams, m_max)
    vals = np.empty((trials, m_max))
    for i in range(trials):
        vals[i] = eval_field_batch(field, theta, sig[i])[:, 0]
    w = b_scale * (vals - vals.mean())
    s = np.cumsum(w, axis=1)
    run_sup = np.maximum.accumulate(np.abs(s), axis=1)
    profile = gamma_total(spec, r, tau_max=max(m_max, 64))
    rhs_unit = math.sqrt(profile.m_r * (profile.gamma_total + profile.tail_bound))
    rows = []
    for m in blocks:
        sup_m = run_sup[:, m - 1]
        lhs = float(np.mean(sup_m ** r) ** (1.0 / r))
        rhs = abs(b_scale) * math.sqrt(m) * rhs_unit
        rows.append((m, lhs, rhs, lhs / rhs))
    trend = None
    if len(rows) >= 2:
        trend = fit_line([(math.log2(m), math.log2(ratio)) for m, _, _, ratio in rows])
    return MaximalInequalityReport(rows, trend, r, trials)
