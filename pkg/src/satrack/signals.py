"""Stationary driving-signal generators.

Linear (moving-average) processes with Gaussian noise are sampled
exactly from their stationary law: explicit recent noises plus a
Gaussian lump whose variance is the analytically-summed coefficient
tail.  The random-environment chain cannot be started exactly
stationary and uses a contraction burn-in instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from ._backend import kernels
from .errors import ConfigError
from .numerics import norm_cdf
from .rng import (
    RngState,
    derive_stream,
    gaussian_block,
    gaussian_matrix,
    uniform_block,
    uniform_matrix,
)

# explicit summation window before the Euler-Maclaurin remainder; with the
# correction terms the remainder error is below 1e-12 for every beta > 1/2
_POWER_EXPLICIT_TERMS = 10 ** 5


@dataclass(frozen=True)
class Geometric:
    """Coefficients a_j = alpha^j (the AR(1) case)."""

    alpha: float

    def __post_init__(self):
        if not abs(self.alpha) < 1.0:
            raise ConfigError("Geometric rule needs |alpha| < 1")


@dataclass(frozen=True)
class PowerDecay:
    """Coefficients a_j = (j+1)^-beta with beta > 1/2 (square-summable)."""

    beta: float

    def __post_init__(self):
        if not self.beta > 0.5:
            raise ConfigError("PowerDecay rule needs beta > 1/2")


@dataclass(frozen=True)
class Finite:
    """Explicit coefficient list, zero beyond."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if len(self.coeffs) == 0 or self.coeffs[0] == 0.0:
            raise ConfigError("Finite rule needs a nonempty list with leading coefficient != 0")


CoefficientRule = Union[Geometric, PowerDecay, Finite]


@dataclass(frozen=True)
class LinearProcessSpec:
    """Causal linear process X_t = sum_j a_j e_{t-j}, standard Gaussian noise."""

    rule: CoefficientRule
    tail_cutoff: int = 12

    def __post_init__(self):
        if self.tail_cutoff < 0:
            raise ConfigError("tail_cutoff must be nonnegative")

    def tag(self) -> str:
        r = self.rule
        if isinstance(r, Geometric):
            return f"linear-geometric(alpha={r.alpha})"
        if isinstance(r, PowerDecay):
            return f"linear-power(beta={r.beta})"
        return f"linear-finite(lags={len(r.coeffs)})"


@dataclass(frozen=True)
class Uniform01:
    """I.i.d. uniforms on (0, 1)."""

    def tag(self) -> str:
        return "uniform01"


@dataclass(frozen=True)
class ArctanOf:
    """arctan of a Gaussian linear process (bounded, non-Markovian signal)."""

    inner: LinearProcessSpec

    def tag(self) -> str:
        return f"arctan({self.inner.tag()})"


@dataclass(frozen=True)
class RandomEnvChainSpec:
    """Contractive chain modulated by a stationary environment.

    X_{t+1} = kappa X_t + rho v_{t+1} h2(e1_{t+1}) + sqrt(1-rho^2) v_{t+1} e2_{t+1}
    with log-volatility v = exp(h1(Y)), Y a linear process driven by the
    same e1 noise; h1, h2 are symmetric clamps at the given bounds.
    """

    kappa: float
    rho: float
    h1_bound: float
    h2_bound: float
    env_coefficients: LinearProcessSpec

    def __post_init__(self):
        if not abs(self.kappa) < 1.0:
            raise ConfigError("random-environment chain needs |kappa| < 1")
        if not abs(self.rho) < 1.0:
            raise ConfigError("random-environment chain needs |rho| < 1")
        if self.h1_bound < 0 or self.h2_bound < 0:
            raise ConfigError("clamp bounds must be nonnegative")

    def burn_in(self) -> int:
        if self.kappa == 0.0:
            return 0
        return int(math.ceil(math.log(1e-12) / math.log(abs(self.kappa))))

    def tag(self) -> str:
        return f"random-env(kappa={self.kappa},rho={self.rho})"


SignalSpec = Union[LinearProcessSpec, Uniform01, ArctanOf, RandomEnvChainSpec]


@dataclass
class SignalPath:
    """Signal values X_1..X_T plus provenance."""

    values: np.ndarray
    spec_tag: str
    burn_in_used: int = 0

    def __len__(self) -> int:
        return len(self.values)


def coefficients(spec: LinearProcessSpec, count: int) -> np.ndarray:
    """a_0 .. a_{count-1} for the spec's rule."""
    r = spec.rule
    j = np.arange(count, dtype=np.float64)
    if isinstance(r, Geometric):
        return r.alpha ** j
    if isinstance(r, PowerDecay):
        return (j + 1.0) ** (-r.beta)
    out = np.zeros(count)
    upto = min(count, len(r.coeffs))
    out[:upto] = r.coeffs[:upto]
    return out


def _power_tail_sum(s: float, start: int) -> float:
    """sum_{n >= start} n^-s for s > 1: explicit terms then an
    Euler-Maclaurin remainder (integral bound plus corrections),
    absolute error well below 1e-10."""
    start = max(start, 1)
    n_explicit_end = max(_POWER_EXPLICIT_TERMS, start)
    explicit = 0.0
    if start <= n_explicit_end:
        n = np.arange(start, n_explicit_end + 1, dtype=np.float64)
        explicit = float(np.sum(n ** (-s)))
    m = float(n_explicit_end + 1)
    remainder = (
        m ** (1.0 - s) / (s - 1.0)
        + 0.5 * m ** (-s)
        + s * m ** (-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * m ** (-s - 3.0) / 720.0
    )
    return explicit + remainder


@lru_cache(maxsize=4096)
def _tail_variance_cached(rule: CoefficientRule, from_index: int) -> float:
    if isinstance(rule, Geometric):
        return rule.alpha ** (2 * from_index) / (1.0 - rule.alpha ** 2)
    if isinstance(rule, Finite):
        tail = rule.coeffs[from_index:]
        return float(np.dot(tail, tail)) if tail else 0.0
    return _power_tail_sum(2.0 * rule.beta, from_index + 1)


def tail_variance(spec: LinearProcessSpec, from_index: int) -> float:
    """sum_{j >= from_index} a_j^2 (closed form or summed to < 1e-10)."""
    if from_index < 0:
        raise ValueError("from_index must be nonnegative")
    return _tail_variance_cached(spec.rule, from_index)


def _tail_variances(spec: LinearProcessSpec, upto: int) -> np.ndarray:
    """Vector of tail variances for from_index = 0..upto.

    Backward accumulation from the analytic far tail, so every entry is
    a sum of positive terms (no cancellation)."""
    a2 = coefficients(spec, upto) ** 2
    out = np.empty(upto + 1)
    out[upto] = tail_variance(spec, upto)
    out[:upto] = out[upto] + np.cumsum(a2[::-1])[::-1]
    return out


def stationary_cdf(spec: LinearProcessSpec, x: float) -> float:
    """CDF of the stationary (Gaussian) law of the linear process."""
    return norm_cdf(x / math.sqrt(tail_variance(spec, 0)))


# ---------------------------------------------------------------------------
# batched path generation (row p uses stream stream_indices[p]; row results
# are independent of the batch composition)
# ---------------------------------------------------------------------------


def _linear_paths_block(spec, seed, stream_indices, horizon, offset=0, want_noise=False):
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    rule = spec.rule
    T = horizon
    if isinstance(rule, Geometric):
        draws = gaussian_matrix(seed, stream_indices, T + 1, offset=offset)
        x0 = draws[:, 0] * math.sqrt(1.0 / (1.0 - rule.alpha ** 2))
        paths = kernels.linear_filter(draws[:, 1:], x0, rule.alpha)
        noise = draws[:, 1:]
        used = T + 1
    elif isinstance(rule, Finite):
        lags = len(rule.coeffs)
        noise_all = gaussian_matrix(seed, stream_indices, T + lags - 1, offset=offset)
        paths = np.zeros((noise_all.shape[0], T))
        for j, a in enumerate(rule.coeffs):
            lo = lags - 1 - j
            paths += a * noise_all[:, lo : lo + T]
        noise = noise_all[:, lags - 1 :]
        used = T + lags - 1
    else:  # PowerDecay: explicit part by FFT convolution + Gaussian tail lump
        c = spec.tail_cutoff
        n_main = T + c
        draws = gaussian_matrix(seed, stream_indices, n_main + T, offset=offset)
        noise_all = draws[:, :n_main]
        lumps = draws[:, n_main:]
        coeff = coefficients(spec, n_main)
        nfft = 1 << int(2 * n_main - 1).bit_length()
        spec_a = np.fft.rfft(coeff, nfft)
        conv = np.fft.irfft(np.fft.rfft(noise_all, nfft, axis=1) * spec_a[None, :], nfft, axis=1)
        explicit = conv[:, c : c + T]
        lump_sd = np.sqrt(_tail_variances(spec, T + c)[c + 1 :])
        paths = explicit + lump_sd[None, :] * lumps
        noise = noise_all[:, c:]
        used = n_main + T
    if want_noise:
        return paths, noise, used
    return paths, used


def _random_env_paths_block(spec, seed, stream_indices, horizon, offset=0):
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    burn = spec.burn_in()
    total = burn + horizon
    e2 = gaussian_matrix(seed, stream_indices, total, offset=offset)
    env_streams = [derive_stream(int(s), 1) for s in np.asarray(stream_indices, dtype=np.uint64)]
    y, e1, _ = _linear_paths_block(spec.env_coefficients, seed, env_streams, total, want_noise=True)
    vol = np.exp(np.clip(y, -spec.h1_bound, spec.h1_bound))
    drive = spec.rho * vol * np.clip(e1, -spec.h2_bound, spec.h2_bound)
    drive += math.sqrt(1.0 - spec.rho ** 2) * vol * e2
    chain = kernels.linear_filter(drive, np.zeros(drive.shape[0]), spec.kappa)
    return chain[:, burn:], total


def generate_paths_block(signal: SignalSpec, seed, stream_indices, horizon, offset=0):
    """Matrix of signal paths, one stream per row; used by the experiment
    driver.  Returns (values[P, T], burn_in_used)."""
    if isinstance(signal, LinearProcessSpec):
        paths, _ = _linear_paths_block(signal, seed, stream_indices, horizon, offset)
        return paths, 0
    if isinstance(signal, ArctanOf):
        paths, _ = _linear_paths_block(signal.inner, seed, stream_indices, horizon, offset)
        return np.arctan(paths), 0
    if isinstance(signal, Uniform01):
        return uniform_matrix(seed, stream_indices, horizon, offset=offset), 0
    if isinstance(signal, RandomEnvChainSpec):
        paths, _ = _random_env_paths_block(signal, seed, stream_indices, horizon, offset)
        return paths, signal.burn_in()
    raise ConfigError(f"unsupported signal spec: {signal!r}")


# ---------------------------------------------------------------------------
# single-path API
# ---------------------------------------------------------------------------


def gen_linear_path(spec: LinearProcessSpec, rng: RngState, horizon: int) -> SignalPath:
    """One exact-stationary path X_1..X_T of a linear process.

    Geometric and Finite tails are exact in closed form (the geometric
    tail collapses into a single stationary starting state); PowerDecay
    keeps `tail_cutoff` explicit pre-sample noises and lumps the rest as
    a centered Gaussian with the analytic tail variance, which makes
    every marginal exact.
    """
    values, used = _linear_paths_block(spec, rng.seed, [rng.stream_index], horizon, offset=rng.counter)
    rng.counter += used
    return SignalPath(values[0], spec.tag(), 0)


def gen_random_env_path(spec: RandomEnvChainSpec, rng: RngState, horizon: int) -> SignalPath:
    """One path of the random-environment chain after a contraction
    burn-in of ceil(ln(1e-12)/ln|kappa|) steps from X = 0."""
    values, used = _random_env_paths_block(spec, rng.seed, [rng.stream_index], horizon, offset=rng.counter)
    rng.counter += used
    return SignalPath(values[0], spec.tag(), spec.burn_in())


def gen_uniform_path(rng: RngState, horizon: int) -> SignalPath:
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    values = uniform_block(rng.seed, rng.stream_index, rng.counter, horizon)
    rng.counter += horizon
    return SignalPath(values, "uniform01", 0)


def generate_path(signal: SignalSpec, rng: RngState, horizon: int) -> SignalPath:
    """Dispatch on the signal kind."""
    if isinstance(signal, LinearProcessSpec):
        return gen_linear_path(signal, rng, horizon)
    if isinstance(signal, RandomEnvChainSpec):
        return gen_random_env_path(signal, rng, horizon)
    if isinstance(signal, Uniform01):
        return gen_uniform_path(rng, horizon)
    if isinstance(signal, ArctanOf):
        base = gen_linear_path(signal.inner, rng, horizon)
        return SignalPath(np.arctan(base.values), signal.tag(), 0)
    raise ConfigError(f"unsupported signal spec: {signal!r}")


def stationary_draws(signal: SignalSpec, rng: RngState, n: int) -> np.ndarray:
    """n independent draws from the signal's stationary marginal law."""
    if n < 1:
        raise ConfigError("need at least one draw")
    if isinstance(signal, LinearProcessSpec):
        sd = math.sqrt(tail_variance(signal, 0))
        out = gaussian_block(rng.seed, rng.stream_index, rng.counter, n) * sd
        rng.counter += n
        return out
    if isinstance(signal, ArctanOf):
        sd = math.sqrt(tail_variance(signal.inner, 0))
        out = np.arctan(gaussian_block(rng.seed, rng.stream_index, rng.counter, n) * sd)
        rng.counter += n
        return out
    if isinstance(signal, Uniform01):
        out = uniform_block(rng.seed, rng.stream_index, rng.counter, n)
        rng.counter += n
        return out
    if isinstance(signal, RandomEnvChainSpec):
        # one horizon-1 chain per draw, each on its own derived stream
        streams = [derive_stream(rng.stream_index, 2 + i) for i in range(n)]
        values, _ = _random_env_paths_block(signal, rng.seed, streams, 1)
        return values[:, 0]
    raise ConfigError(f"unsupported signal spec: {signal!r}")


def stationary_std(signal: SignalSpec) -> float:
    """Stationary standard deviation where it is known in closed form."""
    if isinstance(signal, LinearProcessSpec):
        return math.sqrt(tail_variance(signal, 0))
    if isinstance(signal, Uniform01):
        return math.sqrt(1.0 / 12.0)
    raise ConfigError(f"no closed-form stationary std for {signal!r}")
