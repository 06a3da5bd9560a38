"""The three dynamical systems: the stochastic fixed-gain recursion
theta_{t+1} = theta_t + lam * H(theta_t, X_{t+1}), its deterministic
averaged companion z_{t+1} = z_t + lam * G(z_t), and the continuous
flow dy/dt = lam * G(y), plus flow-sensitivity diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError
from .fields import Box, MeanField, UpdateField, eval_field, mean_field
from .signals import SignalPath


@dataclass(frozen=True)
class RecursionConfig:
    """Gain, horizon, start point, and the parameter box.

    With domain_policy "none" iterates run free and the first exit from
    the box is recorded; with "clamp" every iterate is projected back
    coordinatewise.  A zero gain is allowed (the recursion then sits at
    theta0, useful as a degenerate check).
    """

    theta0: tuple
    gain: float
    horizon: int
    domain: Box
    domain_policy: str = "none"

    def __post_init__(self):
        object.__setattr__(self, "theta0", tuple(float(v) for v in np.atleast_1d(self.theta0)))
        if self.gain < 0.0:
            raise ConfigError("gain must be nonnegative")
        if self.horizon < 1:
            raise ConfigError("horizon must be >= 1")
        if self.domain_policy not in ("none", "clamp"):
            raise ConfigError("domain_policy must be 'none' or 'clamp'")
        if len(self.theta0) != self.domain.dimension:
            raise ConfigError("theta0 dimension does not match the domain box")
        if not self.domain.contains(self.theta0):
            raise ConfigError("theta0 must lie inside the domain box")

    def theta0_array(self) -> np.ndarray:
        return np.asarray(self.theta0)


@dataclass
class Trajectory:
    """Iterates theta_0..theta_T ([T+1, N]) plus domain-exit bookkeeping."""

    points: np.ndarray
    exited_domain_at: Optional[int] = None
    notes: tuple = ()

    @property
    def final(self) -> np.ndarray:
        return self.points[-1]


def run_fixed_gain(field: UpdateField, signal: SignalPath, cfg: RecursionConfig) -> Trajectory:
    """Drive the stochastic recursion along one signal path.

    The signal must be at least as long as the horizon; step t consumes
    signal value X_{t+1} (the (t+1)-th entry of the path).
    """
    if len(signal) < cfg.horizon:
        raise ValueError(
            f"signal has {len(signal)} values but the horizon is {cfg.horizon}"
        )
    theta = cfg.theta0_array().copy()
    points = np.empty((cfg.horizon + 1, theta.size))
    points[0] = theta
    lo, hi = cfg.domain.lower_array(), cfg.domain.upper_array()
    exited = None
    clamp = cfg.domain_policy == "clamp"
    for t in range(1, cfg.horizon + 1):
        theta = theta + cfg.gain * eval_field(field, theta, float(signal.values[t - 1]))
        if clamp:
            theta = np.minimum(np.maximum(theta, lo), hi)
        elif exited is None and not (np.all(theta >= lo) and np.all(theta <= hi)):
            exited = t
        points[t] = theta
    return Trajectory(points, exited)


def run_averaged(mf: MeanField, cfg: RecursionConfig) -> Trajectory:
    """Deterministic averaged iteration z_{t+1} = z_t + lam * G(z_t)."""
    notes = ()
    if mf.kind == "monte_carlo":
        notes = ("averaged run used a Monte Carlo mean field; trajectory is noisy",)
    z = cfg.theta0_array().copy()
    points = np.empty((cfg.horizon + 1, z.size))
    points[0] = z
    for t in range(1, cfg.horizon + 1):
        z = z + cfg.gain * mean_field(mf, z)
        points[t] = z
    return Trajectory(points, None, notes)


def discrete_flow(mf: MeanField, n: int, m: int, xi, gain: float) -> np.ndarray:
    """z(n, m, xi): iterate the averaged map n - m times from xi."""
    if m > n:
        raise ValueError("discrete_flow needs m <= n")
    z = np.atleast_1d(np.asarray(xi, dtype=np.float64)).copy()
    for _ in range(n - m):
        z = z + gain * mean_field(mf, z)
    return z


def ode_flow(
    mf: MeanField, t: float, s: float, xi, gain: float, step: Optional[float] = None
) -> np.ndarray:
    """y(t, s, xi) for dy/du = gain * G(y), classical 4th-order one-step
    integration at a fixed step (final partial step shortened)."""
    if s > t:
        raise ValueError("ode_flow needs s <= t")
    if step is None:
        step = min(0.1, 0.1 / gain) * gain if gain > 0 else 0.1
    if step <= 0:
        raise ValueError("step must be positive")
    y = np.atleast_1d(np.asarray(xi, dtype=np.float64)).copy()
    remaining = t - s
    while remaining > 1e-15:
        h = min(step, remaining)
        k1 = gain * mean_field(mf, y)
        k2 = gain * mean_field(mf, y + 0.5 * h * k1)
        k3 = gain * mean_field(mf, y + 0.5 * h * k2)
        k4 = gain * mean_field(mf, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        remaining -= h
    return y


def flow_sensitivity(
    mf: MeanField,
    n: int,
    m: int,
    xi,
    gain: float,
    bump: Optional[float] = None,
    domain: Optional[Box] = None,
) -> float:
    """Operator norm of the Jacobian of z(n, m, .) at xi, by central
    finite differences with per-coordinate bumps."""
    x0 = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    if bump is None:
        bump = 1e-5 * domain.diameter() if domain is not None else 1e-5
    if bump <= 0:
        raise ValueError("bump must be positive")
    dim = x0.size
    jac = np.empty((dim, dim))
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = bump
        hi_pt, lo_pt = x0 + e, x0 - e
        if domain is not None and not (domain.contains(hi_pt) and domain.contains(lo_pt)):
            raise ValueError("bumped point leaves the domain box; reduce bump")
        jac[:, i] = (discrete_flow(mf, n, m, hi_pt, gain) - discrete_flow(mf, n, m, lo_pt, gain)) / (
            2.0 * bump
        )
    return float(np.linalg.norm(jac, 2))


def t0_threshold(gain: float, c_log: float) -> int:
    """Steps until the averaged transient decays: ceil(c * ln(1/lam)/lam)."""
    if not 0.0 < gain < 1.0:
        raise ValueError("t0_threshold needs 0 < gain < 1")
    if c_log <= 0.0:
        raise ValueError("c_log must be positive")
    return int(math.ceil(c_log * math.log(1.0 / gain) / gain))
