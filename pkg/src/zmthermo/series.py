"""Sine-series expansion of paths with coincident endpoints.

A path on ``[0, beta]`` with ``x(0) = x(beta) = x0`` is extended to
``[-beta, beta]`` so that ``x - x0`` is odd.  The extension has a pure sine
series, so

    x(tau) ~ x0 + sum_n x_n sin(n pi tau / beta),

which fixes the endpoint value without forcing the path to be periodic.  In
particular ``x'(beta) - x'(0)`` need not vanish, unlike for the periodic
(Matsubara) expansion ``x(tau) = sum_n c_n exp(-2 pi i n tau / beta)``.

The sine series forces ``x''`` to vanish at the endpoints.  Actions built from
first derivatives are insensitive to this.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike
from scipy import fft, integrate

from .model import PotentialSpec, potential_value

_CHUNK = 1 << 22


@dataclass(frozen=True)
class SampledPath:
    """Path sampled on a uniform grid from ``origin`` to ``beta`` inclusive."""

    beta: float
    values: np.ndarray = field(repr=False)
    origin: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or len(values) < 3:
            raise ValueError("a sampled path needs at least 3 grid values")
        if not self.beta > self.origin:
            raise ValueError("beta must exceed the grid origin")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, f, beta: float, n_grid: int) -> "SampledPath":
        return cls(beta, f(np.linspace(0.0, beta, n_grid)))

    @property
    def tau(self) -> np.ndarray:
        return np.linspace(self.origin, self.beta, len(self.values))

    @property
    def x0(self) -> float:
        return float(self.values[0])


@dataclass(frozen=True)
class SineSeries:
    """``x0 + sum_{n=1}^N coeffs[n-1] sin(n pi tau / beta)`` on ``[0, beta]``."""

    beta: float
    x0: float
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=float))

    @property
    def N(self) -> int:
        return len(self.coeffs)

    @property
    def frequencies(self) -> np.ndarray:
        return np.pi * np.arange(1, self.N + 1) / self.beta


@dataclass(frozen=True)
class MatsubaraSeries:
    """Periodic expansion ``sum_{n=-N}^{N} c_n exp(-i w_n tau)``, ``w_n = 2 pi n / beta``.

    ``coeffs`` holds ``c_{-N} ... c_N``.
    """

    beta: float
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or len(c) % 2 == 0:
            raise ValueError("need an odd number of coefficients c_{-N}..c_N")
        object.__setattr__(self, "coeffs", c)

    @property
    def N(self) -> int:
        return (len(self.coeffs) - 1) // 2

    def __call__(self, tau: ArrayLike):
        tau = np.asarray(tau, dtype=float)
        n = np.arange(-self.N, self.N + 1)
        phase = np.exp(-2j * np.pi * np.multiply.outer(tau, n) / self.beta)
        return (phase @ self.coeffs).real


def odd_extend(path: SampledPath) -> SampledPath:
    """Extend ``path`` to ``[-beta, beta]`` with ``x(-tau) = 2 x0 - x(tau)``."""
    if path.origin != 0.0:
        raise ValueError("path must start at tau = 0")
    v = path.values
    left = 2.0 * v[0] - v[:0:-1]
    return SampledPath(path.beta, np.concatenate([left, v]), origin=-path.beta)


def simpson_weights(n_points: int, h: float) -> np.ndarray:
    """Composite Simpson weights; an odd interval count closes with the 3/8 rule."""
    if n_points < 3:
        raise ValueError("Simpson's rule needs at least 3 points")
    intervals = n_points - 1
    w = np.zeros(n_points)
    even = intervals if intervals % 2 == 0 else intervals - 3
    if even:
        w[:even + 1:2] = 2.0
        w[1:even:2] = 4.0
        w[0] = w[even] = 1.0
        w[:even + 1] *= h / 3.0
    if even != intervals:
        w[even:] += 3.0 * h / 8.0 * np.array([1.0, 3.0, 3.0, 1.0])
    return w


def sine_coefficients(path: SampledPath, N: int) -> SineSeries:
    """Coefficients ``x_n = (2/beta) int_0^beta (x - x0) sin(n pi tau/beta) dtau``.

    Composite Simpson on the sample grid.  Requires ``N <= n_grid / 4`` so the
    highest mode keeps at least eight samples per period.  On the uniform grid
    ``tau_j = j beta / M`` the weighted sums ``sum_j w_j f_j sin(pi n j / M)``
    for all ``n`` are one type-I discrete sine transform.
    """
    if N < 1:
        raise ValueError("need at least one coefficient")
    if path.origin != 0.0:
        raise ValueError("path must start at tau = 0")
    n_grid = len(path.values)
    if N > n_grid / 4:
        raise ValueError(f"grid too coarse: {N} modes need at least {4 * N} samples")
    M = n_grid - 1
    weighted = simpson_weights(n_grid, path.beta / M) * (path.values - path.x0)
    # sin vanishes at j = 0 and j = M; DST-I carries a factor 2
    sums = 0.5 * fft.dst(weighted[1:-1], type=1)
    return SineSeries(path.beta, path.x0, 2.0 / path.beta * sums[:N])


def reconstruct(series: SineSeries, tau: ArrayLike):
    """Evaluate the truncated sine series; exactly ``x0`` at both endpoints."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0) or np.any(tau > series.beta):
        raise ValueError(f"tau outside [0, {series.beta}]")
    flat = tau.ravel()
    out = np.empty_like(flat)
    step = max(1, _CHUNK // max(series.N, 1))
    for start in range(0, len(flat), step):
        t = flat[start:start + step]
        out[start:start + step] = np.sin(np.multiply.outer(t, series.frequencies)) @ series.coeffs
    out = series.x0 + out
    out[(flat == 0) | (flat == series.beta)] = series.x0
    return out.reshape(tau.shape)


def derivative_jump(series: SineSeries, N_partial: int | None = None) -> float:
    """Partial sum for ``x'(beta) - x'(0)``.

    ``sum_{n <= N_partial} x_n w_n (cos(w_n beta) - 1)``, i.e. ``-2 x_n w_n``
    over odd ``n``.  The sum converges like ``1/N_partial``.
    """
    if N_partial is None:
        N_partial = series.N
    if N_partial > series.N:
        raise ValueError(f"only {series.N} coefficients available")
    n = np.arange(1, N_partial + 1)
    cos_minus_one = np.where(n % 2 == 1, -2.0, 0.0)
    return float(np.sum(series.coeffs[:N_partial] * series.frequencies[:N_partial] * cos_minus_one))


def matsubara_fit(path: SampledPath, N: int) -> MatsubaraSeries:
    """Periodic Fourier coefficients from the samples (endpoint dropped).

    With ``2N + 1`` distinct samples this is trigonometric interpolation, so
    the reconstructed path passes through every sample, including ``x0``.
    """
    if path.origin != 0.0:
        raise ValueError("path must start at tau = 0")
    samples = path.values[:-1]
    M = len(samples)
    if 2 * N + 1 > M:
        raise ValueError(f"{M} periodic samples cannot fix {2 * N + 1} coefficients")
    # c_n = (1/M) sum_j x_j exp(+2 pi i n j / M)
    c = fft.ifft(samples)
    idx = np.arange(-N, N + 1) % M
    return MatsubaraSeries(path.beta, c[idx])


def matsubara_zero_mode(series: MatsubaraSeries) -> float:
    """Boundary value ``x(0) = sum_n c_n`` of a periodic expansion."""
    return float(np.sum(series.coeffs).real)


def action_of_series(series: SineSeries, spec: PotentialSpec, n_grid: int | None = None) -> float:
    """Euclidean action ``int_0^beta [m x'^2/2 + V(x)] dtau`` of the truncated series.

    The kinetic term uses orthogonality of ``cos(w_n tau)`` on ``[0, beta]``:
    ``int x'^2 = (beta/2) sum x_n^2 w_n^2``.  The potential term is integrated
    by Simpson's rule on a grid fine enough to resolve the highest mode; the
    grid values come from a type-I discrete sine transform.
    """
    beta, N = series.beta, series.N
    kinetic = 0.25 * spec.mass * beta * float(np.sum((series.coeffs * series.frequencies) ** 2))
    if n_grid is None:
        n_grid = max(8 * N, 2048)
    # samples at tau_k = k beta / n_grid, k = 1 .. n_grid - 1
    padded = np.zeros(n_grid - 1)
    m = min(N, n_grid - 1)
    padded[:m] = series.coeffs[:m]
    interior = 0.5 * fft.dst(padded, type=1)
    x = np.concatenate([[series.x0], series.x0 + interior, [series.x0]])
    tau = np.linspace(0.0, beta, n_grid + 1)
    return kinetic + float(integrate.simpson(potential_value(spec, x), x=tau))
