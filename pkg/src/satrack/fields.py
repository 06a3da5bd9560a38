"""Updating functions H(theta, x) and their mean fields G = E H(theta, X_0).

Three families: piecewise indicator functionals (bounded Lipschitz
pieces gated by theta-dependent intervals), the quantile pinball
gradient, and the zero-neighbourhood two-cell quantizer.  Mean fields
come in closed form for the shipped experiment combinations and as a
Monte Carlo estimate (with standard errors) otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Union

import numpy as np

from .errors import ConfigError
from .numerics import gauss_expectation, norm_cdf
from .rng import RngState
from .signals import (
    ArctanOf,
    LinearProcessSpec,
    SignalSpec,
    Uniform01,
    stationary_cdf,
    stationary_draws,
    stationary_std,
)


@dataclass(frozen=True)
class Box:
    """Axis-aligned parameter box with per-coordinate bounds."""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lower))
        hi = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lo) != len(hi) or any(a >= b for a, b in zip(lo, hi)):
            raise ConfigError("box needs lower < upper per coordinate")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dimension(self) -> int:
        return len(self.lower)

    def lower_array(self) -> np.ndarray:
        return np.asarray(self.lower)

    def upper_array(self) -> np.ndarray:
        return np.asarray(self.upper)

    def contains(self, theta) -> bool:
        t = np.atleast_1d(np.asarray(theta, dtype=np.float64))
        return bool(np.all(t >= self.lower_array()) and np.all(t <= self.upper_array()))

    def clip(self, theta) -> np.ndarray:
        return np.clip(np.asarray(theta, dtype=np.float64), self.lower_array(), self.upper_array())

    def diameter(self) -> float:
        return float(np.linalg.norm(self.upper_array() - self.lower_array()))


# --- interval rules for indicator pieces -----------------------------------


@dataclass(frozen=True)
class BelowThreshold:
    """x in (-inf, h(theta)]; h Lipschitz with the stated constant."""

    h: Callable
    lipschitz: float = 1.0


@dataclass(frozen=True)
class AboveThreshold:
    h: Callable
    lipschitz: float = 1.0


@dataclass(frozen=True)
class Between:
    h1: Callable
    h2: Callable
    lipschitz1: float = 1.0
    lipschitz2: float = 1.0


IntervalRule = Union[BelowThreshold, AboveThreshold, Between]


@dataclass(frozen=True)
class Piece:
    """One term g(theta, x) * 1{x in I(theta)}; `bound` majorizes |g|."""

    g: Callable
    bound: float
    interval: IntervalRule


@dataclass(frozen=True)
class PiecewiseIndicator:
    pieces: tuple
    dimension: int = 1

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise ConfigError("PiecewiseIndicator needs at least one piece")


@dataclass(frozen=True)
class QuantilePinball:
    """H(theta, x) = q - 1{x <= theta}: gradient of the pinball loss."""

    q: float

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ConfigError("pinball quantile level must lie in (0, 1)")


@dataclass(frozen=True)
class Kohonen:
    """Zero-neighbourhood quantizer update on `cells` codebook points."""

    cells: int

    def __post_init__(self):
        if self.cells < 1:
            raise ConfigError("Kohonen needs at least one cell")


UpdateField = Union[PiecewiseIndicator, QuantilePinball, Kohonen]


def field_dimension(field: UpdateField) -> int:
    if isinstance(field, QuantilePinball):
        return 1
    if isinstance(field, Kohonen):
        return field.cells
    return field.dimension


def nearest_cell(theta, x: float) -> int:
    """Index of the codebook point closest to x (0-based).

    Exact tie at a cell boundary goes to the lowest index, so the
    boundary point belongs to the earlier cell.
    """
    t = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    return int(np.argmin(np.abs(x - t)))


def _interval_indicator(rule: IntervalRule, theta, x: float) -> float:
    if isinstance(rule, BelowThreshold):
        return 1.0 if x <= rule.h(theta) else 0.0
    if isinstance(rule, AboveThreshold):
        return 1.0 if x > rule.h(theta) else 0.0
    return 1.0 if rule.h1(theta) < x < rule.h2(theta) else 0.0


def eval_field(field: UpdateField, theta, x: float) -> np.ndarray:
    """H(theta, x) as an N-vector (total function; never raises on x)."""
    t = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    if isinstance(field, QuantilePinball):
        return np.asarray([field.q - (1.0 if x <= t[0] else 0.0)])
    if isinstance(field, Kohonen):
        out = np.zeros(field.cells)
        i = nearest_cell(t, x)
        out[i] = x - t[i]
        return out
    total = np.zeros(field.dimension)
    for piece in field.pieces:
        ind = _interval_indicator(piece.interval, t, x)
        if ind:
            total += np.atleast_1d(np.asarray(piece.g(t, x), dtype=np.float64)) * ind
    return total


def eval_field_batch(field: UpdateField, theta, xs: np.ndarray) -> np.ndarray:
    """H(theta, x) for a vector of x values -> [n, N] (fast paths for the
    preset families, per-point fallback otherwise)."""
    xs = np.asarray(xs, dtype=np.float64)
    t = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    if isinstance(field, QuantilePinball):
        return (field.q - (xs <= t[0]).astype(np.float64))[:, None]
    if isinstance(field, Kohonen):
        dist = np.abs(xs[:, None] - t[None, :])
        win = np.argmin(dist, axis=1)
        out = np.zeros((xs.size, field.cells))
        out[np.arange(xs.size), win] = xs - t[win]
        return out
    return np.stack([eval_field(field, t, float(x)) for x in xs])


def field_discontinuities(field: UpdateField, theta) -> list:
    """x-locations where H(theta, .) can jump (finite thresholds only)."""
    t = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    if isinstance(field, QuantilePinball):
        return [float(t[0])]
    if isinstance(field, Kohonen):
        vals = np.sort(t)
        return [float(0.5 * (a + b)) for a, b in zip(vals[:-1], vals[1:]) if a != b]
    pts = []
    for piece in field.pieces:
        rule = piece.interval
        if isinstance(rule, Between):
            pts.extend([rule.h1(t), rule.h2(t)])
        else:
            pts.append(rule.h(t))
    return sorted(float(p) for p in pts if math.isfinite(p))


def field_bound(field: UpdateField, domain: Box, x_range: Optional[tuple] = None) -> float:
    """Certified upper bound for sup |H| over domain x signal range."""
    if isinstance(field, QuantilePinball):
        return max(field.q, 1.0 - field.q)
    if isinstance(field, PiecewiseIndicator):
        return float(sum(p.bound for p in field.pieces))
    if x_range is None:
        raise ConfigError("Kohonen field_bound needs the signal range x_range=(lo, hi)")
    xlo, xhi = float(x_range[0]), float(x_range[1])
    per_coord = [
        max(abs(xhi - lo_i), abs(hi_i - xlo))
        for lo_i, hi_i in zip(domain.lower, domain.upper)
    ]
    # the winning cell is the argmin over coordinates, so any single
    # coordinate's sup is already an upper bound; take the best one
    return float(min(per_coord))


# --- mean fields -------------------------------------------------------------


@dataclass
class MeanField:
    """G(theta) = E H(theta, X_0): closed form, Monte Carlo, or a
    user-supplied callable (for studying arbitrary smooth dynamics)."""

    field: Optional[UpdateField]
    signal: Optional[SignalSpec]
    kind: str  # "closed_form" | "monte_carlo" | "callable"
    samples: int = 0
    rng: Optional[RngState] = None
    func: Optional[Callable] = dc_field(default=None, repr=False)


_CLOSED_FORM_COMBOS = (
    (QuantilePinball, LinearProcessSpec),
    (QuantilePinball, Uniform01),
    (Kohonen, Uniform01),
    (Kohonen, ArctanOf),
)


def closed_form_mean_field(field: UpdateField, signal: SignalSpec) -> MeanField:
    ok = any(isinstance(field, f) and isinstance(signal, s) for f, s in _CLOSED_FORM_COMBOS)
    if isinstance(field, Kohonen) and field.cells != 2:
        ok = False
    if not ok:
        raise ConfigError(
            f"no closed-form mean field for {type(field).__name__} x {type(signal).__name__}"
        )
    return MeanField(field, signal, "closed_form")


def monte_carlo_mean_field(
    field: UpdateField, signal: SignalSpec, samples: int, rng: RngState
) -> MeanField:
    if samples < 1:
        raise ConfigError("Monte Carlo mean field needs samples >= 1")
    return MeanField(field, signal, "monte_carlo", samples=samples, rng=rng)


def custom_mean_field(func: Callable) -> MeanField:
    """Wrap an explicit G(theta) callable as a mean field."""
    return MeanField(None, None, "callable", func=func)


def _kohonen2_uniform(theta: np.ndarray) -> np.ndarray:
    m = min(max(0.5 * (theta[0] + theta[1]), 0.0), 1.0)
    g1 = 0.5 * m * m - theta[0] * m
    g2 = 0.5 * (1.0 - m * m) - theta[1] * (1.0 - m)
    return np.asarray([g1, g2])


def _kohonen2_arctan(signal: ArctanOf, theta: np.ndarray, nodes: int = 48) -> np.ndarray:
    sigma = stationary_std(signal.inner)
    mid = 0.5 * (theta[0] + theta[1])
    mid = min(max(mid, -0.5 * math.pi + 1e-9), 0.5 * math.pi - 1e-9)
    cut = math.tan(mid)  # cell boundary in the Gaussian argument x = sigma * z
    plo = norm_cdf(cut / sigma)
    e_low = gauss_expectation(
        lambda x: np.arctan(x) * (x <= cut), sigma, nodes=nodes, split_at=cut
    )
    e_high = gauss_expectation(
        lambda x: np.arctan(x) * (x > cut), sigma, nodes=nodes, split_at=cut
    )
    return np.asarray([e_low - theta[0] * plo, e_high - theta[1] * (1.0 - plo)])


def mean_field(mf: MeanField, theta) -> np.ndarray:
    """G(theta) as an N-vector."""
    return mean_field_with_stderr(mf, theta)[0]


def mean_field_with_stderr(mf: MeanField, theta) -> tuple:
    """(G(theta), per-coordinate standard error); zero stderr for closed
    forms, sample stderr over fresh stationary draws for Monte Carlo."""
    t = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    if mf.kind == "callable":
        return np.atleast_1d(np.asarray(mf.func(t), dtype=np.float64)), None
    if mf.kind == "closed_form":
        if isinstance(mf.field, QuantilePinball):
            if isinstance(mf.signal, Uniform01):
                g = mf.field.q - min(max(t[0], 0.0), 1.0)
            else:
                g = mf.field.q - stationary_cdf(mf.signal, float(t[0]))
            return np.asarray([g]), np.zeros(1)
        if isinstance(mf.signal, Uniform01):
            return _kohonen2_uniform(t), np.zeros(2)
        return _kohonen2_arctan(mf.signal, t), np.zeros(2)
    if mf.rng is None:
        raise ConfigError("Monte Carlo mean field needs an RngState")
    draws = stationary_draws(mf.signal, mf.rng, mf.samples)
    vals = eval_field_batch(mf.field, t, draws)
    mean = vals.mean(axis=0)
    stderr = vals.std(axis=0, ddof=1) / math.sqrt(mf.samples)
    return mean, stderr
