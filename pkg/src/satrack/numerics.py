"""Self-contained numerical toolbox: normal CDF/quantile, Gaussian
quadrature, least-squares line fit, and a damped 2-D fixed-point solver.

The normal CDF is built from a truncated erf series (|x| <= 1) and
frozen Chebyshev tables for the scaled complementary error function
(tools/gen_normal_tables.py regenerates them).  No special-function
library is needed at runtime, which keeps results reproducible across
environments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._normal_tables import ERFCX_TABLES, QUANTILE_CENTRAL, QUANTILE_TAIL
from .errors import ConfigError, NonConvergenceError

_SQRT2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _erf_series_coeffs(terms: int = 19) -> np.ndarray:
    # erf(x) = sum_k c_k x^(2k+1); truncation < 5e-18 on |x| <= 1
    c = np.empty(terms)
    fact = 1.0
    for k in range(terms):
        if k:
            fact *= k
        c[k] = (-1.0) ** k * 2.0 / math.sqrt(math.pi) / (fact * (2 * k + 1))
    return c


_ERF_COEFFS = _erf_series_coeffs()


def _cheb_eval(coeffs, lo: float, hi: float, x: np.ndarray) -> np.ndarray:
    t = (2.0 * x - (lo + hi)) / (hi - lo)
    b0 = np.zeros_like(x)
    b1 = np.zeros_like(x)
    for c in coeffs[::-1]:
        b0, b1 = 2.0 * t * b0 - b1 + c, b0
    return b0 - t * b1


def _erf_small(x: np.ndarray) -> np.ndarray:
    x2 = x * x
    acc = np.full_like(x, _ERF_COEFFS[-1])
    for c in _ERF_COEFFS[-2::-1]:
        acc = acc * x2 + c
    return x * acc


def _erfcx_pos(x: np.ndarray) -> np.ndarray:
    """exp(x^2) * erfc(x) for x >= 1 from the frozen tables."""
    out = np.empty_like(x)
    done = np.zeros(x.shape, dtype=bool)
    for lo, hi, coeffs in ERFCX_TABLES:
        m = (~done) & (x <= hi)
        if m.any():
            out[m] = _cheb_eval(coeffs, lo, hi, x[m])
            done |= m
    if not done.all():
        # x > 28: erfc underflows; leading asymptotic term of erfcx
        m = ~done
        out[m] = 1.0 / (x[m] * math.sqrt(math.pi))
    return out


def _erfc(x: np.ndarray) -> np.ndarray:
    ax = np.abs(x)
    res = np.empty_like(x)
    small = ax <= 1.0
    if small.any():
        res[small] = 1.0 - _erf_small(x[small])
    big = ~small
    if big.any():
        xa = ax[big]
        tail = np.exp(-xa * xa) * _erfcx_pos(xa)
        res[big] = np.where(x[big] > 0, tail, 2.0 - tail)
    return res


def norm_cdf(x):
    """Standard normal CDF, absolute error below 1e-13.

    Accepts scalars or arrays.
    """
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    out = 0.5 * _erfc(-arr.reshape(-1) / _SQRT2)
    return float(out[0]) if scalar else out.reshape(arr.shape)


def norm_pdf(x):
    arr = np.asarray(x, dtype=np.float64)
    return np.exp(-0.5 * arr * arr) / _SQRT_2PI


def norm_quantile(p):
    """Inverse standard normal CDF on (0, 1).

    Chebyshev initial guess (central / two tail ranges in the variable
    r = sqrt(-log p)) followed by one Newton step on norm_cdf, leaving
    |norm_cdf(result) - p| at rounding level.

    Raises ValueError outside (0, 1).
    """
    arr = np.asarray(p, dtype=np.float64)
    scalar = arr.ndim == 0
    flat = arr.reshape(-1)
    if flat.size and (np.min(flat) <= 0.0 or np.max(flat) >= 1.0):
        raise ValueError("norm_quantile requires 0 < p < 1")

    x = norm_quantile_fast(flat)
    pdf = norm_pdf(x)
    safe = pdf > 1e-280
    correction = np.zeros_like(x)
    if safe.any():
        cdf = 0.5 * _erfc(-x[safe] / _SQRT2)
        correction[safe] = (cdf - flat[safe]) / pdf[safe]
    x -= correction
    return float(x[0]) if scalar else x.reshape(arr.shape)


def norm_quantile_fast(p: np.ndarray) -> np.ndarray:
    """Inverse normal CDF from the Chebyshev tables alone (no Newton
    polish): absolute CDF error below ~1e-13.  Used for bulk Gaussian
    generation where the final refinement would double the cost without
    statistical effect.  Assumes 0 < p < 1 elementwise.
    """
    flat = np.asarray(p, dtype=np.float64)
    x = np.empty_like(flat)
    q = flat - 0.5
    central = np.abs(q) <= 0.425
    if central.any():
        lo, hi, coeffs = QUANTILE_CENTRAL[0]
        qc = q[central]
        x[central] = qc * _cheb_eval(coeffs, lo, hi, qc * qc)
    tails = ~central
    if tails.any():
        pt = np.minimum(flat[tails], 1.0 - flat[tails])
        r = np.sqrt(-np.log(pt))
        guess = np.empty_like(r)
        done = np.zeros(r.shape, dtype=bool)
        for lo, hi, coeffs in QUANTILE_TAIL:
            m = (~done) & (r <= hi)
            if m.any():
                guess[m] = _cheb_eval(coeffs, lo, hi, r[m])
                done |= m
        if not done.all():
            guess[~done] = -r[~done] * _SQRT2
        x[tails] = np.where(flat[tails] < 0.5, guess, -guess)
    return x


@dataclass(frozen=True)
class LineFit:
    """Ordinary least squares line y = intercept + slope * x."""

    slope: float
    intercept: float
    residual_norm: float


def fit_line(points: Sequence[tuple[float, float]]) -> LineFit:
    """OLS fit through the given (x, y) pairs.

    Needs at least 2 points with distinct x; exact (residual_norm ~ 0)
    on affine data.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise ValueError("fit_line needs at least 2 (x, y) pairs")
    x, y = pts[:, 0], pts[:, 1]
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    denom = float(np.dot(dx, dx))
    if denom == 0.0:
        raise ValueError("fit_line needs at least 2 distinct x values")
    slope = float(np.dot(dx, y - ym) / denom)
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    return LineFit(slope, intercept, float(np.sqrt(np.dot(resid, resid))))


def _call_integrand(f: Callable, x: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(f(x), dtype=np.float64)
        if vals.shape == x.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([float(f(v)) for v in x])


_Z_MAX = 9.0  # Gaussian mass beyond |z|=9 is ~2e-19


def gauss_expectation(
    integrand: Callable,
    sigma: float,
    nodes: int = 32,
    split_at: float | None = None,
) -> float:
    """E[f(sigma * Z)] for Z standard normal.

    Composite Gauss-Legendre in z over [-9, 9] with `nodes` points per
    unit-length panel; `split_at` marks a discontinuity of f in its
    argument (x = sigma * z), and the panel grid is cut there so each
    panel integrates a smooth piece.
    """
    if nodes < 16:
        raise ConfigError("gauss_expectation needs nodes >= 16")
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    edges = [-_Z_MAX, _Z_MAX]
    if split_at is not None:
        zs = split_at / sigma
        if -_Z_MAX < zs < _Z_MAX:
            edges.insert(1, zs)
    gl_x, gl_w = np.polynomial.legendre.leggauss(nodes)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        panels = max(1, int(math.ceil((b - a) / 1.5)))
        bounds = np.linspace(a, b, panels + 1)
        for pa, pb in zip(bounds[:-1], bounds[1:]):
            z = 0.5 * (pb - pa) * gl_x + 0.5 * (pa + pb)
            w = 0.5 * (pb - pa) * gl_w
            vals = _call_integrand(integrand, sigma * z)
            total += float(np.dot(w, vals * norm_pdf(z)))
    return total


def solve_fixed_point_2d(
    residual: Callable[[np.ndarray], np.ndarray],
    initial,
    tol: float = 1e-12,
    max_iter: int = 500,
) -> np.ndarray:
    """Root of a 2-vector residual by damped fixed-point iteration.

    Steps theta <- theta - damp * residual(theta); the damping factor
    starts at 1.0, is halved whenever the sup-norm of the residual fails
    to decrease, and is floored at 2^-20.

    Raises NonConvergenceError (carrying the last iterate and residual)
    if max_iter is exhausted before |residual|_inf <= tol.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    theta = np.asarray(initial, dtype=np.float64).copy()
    if theta.shape != (2,):
        raise ValueError("solve_fixed_point_2d expects a 2-vector initial point")
    r = np.asarray(residual(theta), dtype=np.float64)
    rnorm = float(np.max(np.abs(r)))
    damp = 1.0
    floor = 2.0 ** -20
    for _ in range(max_iter):
        if rnorm <= tol:
            return theta
        while True:
            cand = theta - damp * r
            rc = np.asarray(residual(cand), dtype=np.float64)
            rcnorm = float(np.max(np.abs(rc)))
            if rcnorm < rnorm or damp <= floor:
                theta, r, rnorm = cand, rc, rcnorm
                break
            damp = max(damp * 0.5, floor)
    if rnorm <= tol:
        return theta
    raise NonConvergenceError(
        f"fixed-point iteration stalled at |residual|={rnorm:.3e} after {max_iter} iterations",
        iterate=theta,
        residual=r,
    )
