"""Free energy, internal energy and specific heat for each method.

Methods
-------
classical  high-temperature limit, phase-space integral of exp(-beta H)
quadratic  Gaussian fluctuations about the zero mode (Z2)
improved   Z2 plus one insertion of the cubic and quartic remainder
oneloop    first-order thermal perturbation theory in lambda
exact      Boltzmann sum over the diagonalised spectrum

For every method except ``exact``, ``U`` and ``C`` come from 5-point central
differences of ``F`` in ``ln T`` with one Richardson step.  The exact method
uses spectral averages instead, which gives an independent check on the
differencing.
"""
from __future__ import annotations

import functools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from scipy import optimize

from . import oracle, zeromode
from .green import DirichletKernel, diag_square_integral
from .model import PotentialSpec
from .quadrature import DEFAULT, QuadratureConfig, QuadratureError
from .zeromode import ApproximationBreakdown

LOG_STEP = 1e-2
NEAR_BREAKDOWN = 0.5


class Method(str, Enum):
    CLASSICAL = "classical"
    QUADRATIC = "quadratic"
    IMPROVED = "improved"
    ONELOOP = "oneloop"
    EXACT = "exact"


@dataclass(frozen=True)
class ThermoPoint:
    """Thermodynamics of one method at one temperature.

    ``err`` bounds the finite-difference error on ``U`` and ``C``; ``flags``
    is empty or a ``;``-joined list such as ``near_breakdown``.
    """

    T: float
    F: float
    U: float
    C: float
    err: float = 0.0
    flags: str = ""

    def __post_init__(self):
        for name in ("T", "F", "U", "C", "err"):
            object.__setattr__(self, name, float(getattr(self, name)))


class NoCrossing(ValueError):
    """The interaction estimate stays below 1 over the whole bracket."""


_EXACT_SIZES = (128, 256, 512, 1024, 2048)
# the variance in C weighs the tail by (beta E)^2, so truncate far below 1e-8
_EXACT_TAIL = 1e-14


@functools.lru_cache(maxsize=64)
def _exact_spectrum(spec: PotentialSpec, N: int) -> oracle.Spectrum:
    return oracle.spectrum(spec, N=N, max_N=max(N, 512))


def _exact_log_z(spec: PotentialSpec, beta: float) -> tuple[float, oracle.Spectrum]:
    for N in _EXACT_SIZES:
        sp = _exact_spectrum(spec, N)
        try:
            return oracle.log_partition_exact(spec, beta, sp, _EXACT_TAIL), sp
        except oracle.InsufficientLevels:
            continue
    raise oracle.InsufficientLevels(f"levels exhausted at T = {1 / beta:g}; lower T")


def free_energy(
    method: Method | str, spec: PotentialSpec, T: float, config: QuadratureConfig = DEFAULT
) -> float:
    """``F = -T ln Z`` for one method.

    Raises :class:`ApproximationBreakdown` for ``improved`` when
    ``Z2 + dZ <= 0``, and ``ValueError`` for ``oneloop`` when ``omega = 0``.
    """
    method = Method(method)
    if not T > 0:
        raise ValueError("temperature must be positive")
    beta = 1.0 / T
    if method is Method.CLASSICAL:
        return -T * math.log(zeromode.partition_classical(spec, beta, config))
    if method is Method.QUADRATIC:
        return -T * zeromode.log_partition_quadratic(spec, beta, config)
    if method is Method.IMPROVED:
        return -T * zeromode.zero_mode_sums(spec, beta, config).log_z_improved
    if method is Method.ONELOOP:
        return oracle.free_energy_oneloop(spec, beta)
    return -T * _exact_log_z(spec, beta)[0]


def _stencil(f, s: float, h: float):
    """Richardson-extrapolated first and second derivatives of ``f`` at ``s``."""
    offsets = np.array([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]) * h
    v = dict(zip(offsets.tolist(), (f(s + o) for o in offsets)))

    def d1(k):
        return (v[-2 * k] - 8 * v[-k] + 8 * v[k] - v[2 * k]) / (12 * k)

    def d2(k):
        return (-v[2 * k] + 16 * v[k] - 30 * v[0.0] + 16 * v[-k] - v[-2 * k]) / (12 * k * k)

    coarse1, fine1 = d1(h), d1(h / 2)
    coarse2, fine2 = d2(h), d2(h / 2)
    r1 = (16 * fine1 - coarse1) / 15
    r2 = (16 * fine2 - coarse2) / 15
    return v[0.0], r1, r2, abs(r1 - fine1), abs(r2 - fine2)


def thermo_point(
    method: Method | str,
    spec: PotentialSpec,
    T: float,
    config: QuadratureConfig = DEFAULT,
) -> ThermoPoint:
    """F, U and C at one temperature, with breakdowns reported as flags."""
    method = Method(method)
    if method is Method.EXACT:
        try:
            _, sp = _exact_log_z(spec, 1.0 / T)
        except oracle.ConvergenceError:
            return ThermoPoint(T, math.nan, math.nan, math.nan, math.nan, "nonconvergence")
        F, U, C = oracle.spectral_thermo(sp, 1.0 / T)
        return ThermoPoint(T, F, U, C)

    flags = []
    if method is Method.IMPROVED:
        try:
            sums = zeromode.zero_mode_sums(spec, 1.0 / T, config)
            if sums.correction_ratio < -NEAR_BREAKDOWN:
                flags.append("near_breakdown")
        except QuadratureError:
            return ThermoPoint(T, math.nan, math.nan, math.nan, math.nan, "nonconvergence")

    def f(s):
        return free_energy(method, spec, math.exp(s), config)

    try:
        F, d1, d2, e1, e2 = _stencil(f, math.log(T), LOG_STEP)
    except ApproximationBreakdown:
        try:
            F = f(math.log(T))
        except ApproximationBreakdown:
            F = math.nan
        flags.append("breakdown")
        return ThermoPoint(T, F, math.nan, math.nan, math.nan, ";".join(flags))
    except (QuadratureError, oracle.ConvergenceError):
        return ThermoPoint(T, math.nan, math.nan, math.nan, math.nan, "nonconvergence")
    # with s = ln T: U = F - dF/ds, C = (dF/ds - d2F/ds2) / T
    U = F - d1
    C = (d1 - d2) / T
    err = max(e1, (e1 + e2) / T)
    return ThermoPoint(T, F, U, C, err, ";".join(flags))


def _point_task(args):
    return thermo_point(*args)


def thermo_curve(
    method: Method | str,
    spec: PotentialSpec,
    T_grid: Sequence[float],
    config: QuadratureConfig = DEFAULT,
    workers: int = 1,
) -> list[ThermoPoint]:
    """Evaluate :func:`thermo_point` over a strictly increasing temperature grid.

    Points are independent; with ``workers > 1`` they run in a process pool
    and are returned in grid order.
    """
    T_grid = [float(T) for T in T_grid]
    if not T_grid or any(T <= 0 for T in T_grid):
        raise ValueError("temperatures must be positive")
    if any(b <= a for a, b in zip(T_grid, T_grid[1:])):
        raise ValueError("temperature grid must be strictly increasing")
    method = Method(method)
    tasks = [(method, spec, T, config) for T in T_grid]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_point_task, tasks))
    return [_point_task(t) for t in tasks]


def sho_thermo(omega: float, T: float) -> tuple[float, float, float]:
    """Closed-form oscillator F, U and C."""
    x = omega / T
    F = zeromode.sho_free_energy_closed(omega, 1.0 / T)
    U = 0.5 * omega + omega / math.expm1(x)
    C = (0.5 * x / math.sinh(0.5 * x)) ** 2
    return F, U, C


def ground_state_estimate(
    spec: PotentialSpec, config: QuadratureConfig = DEFAULT, n_scan: int = 41
) -> float:
    """Maximum over ``T`` of the quadratic free energy.

    The quadratic free energy rises from the oscillator value, peaks at low
    temperature and falls again where the approximation breaks down; its peak
    approximates the ground-state energy.  A log-spaced scan over
    ``[0.05, 5] * max(omega, (lambda/m^2)^(1/3))`` seeds a golden-section
    search.
    """
    if spec.coupling == 0:
        return 0.5 * spec.omega
    scale = max(spec.omega, spec.rescaled_coupling ** (1.0 / 3.0))
    Ts = np.geomspace(0.05 * scale, 5.0 * scale, n_scan)
    Fs = [free_energy(Method.QUADRATIC, spec, T, config) for T in Ts]
    i = int(np.argmax(Fs))
    if i in (0, n_scan - 1):
        raise RuntimeError(f"quadratic free energy peaks at the scan edge T = {Ts[i]:g}")
    res = optimize.minimize_scalar(
        lambda T: -free_energy(Method.QUADRATIC, spec, T, config),
        bracket=(Ts[i - 1], Ts[i], Ts[i + 1]),
        method="golden",
        tol=1e-4,
    )
    return float(max(-res.fun, Fs[i]))


def interaction_estimate(g: float, theta: float) -> float:
    """``(3g/4) int_0^theta G(t, t)^2 dt`` at unit frequency (zero mode at the origin)."""
    return 0.75 * g * diag_square_integral(DirichletKernel(1.0, theta))


def t_min_root(g: float) -> float:
    """Dimensionless inverse temperature where :func:`interaction_estimate` reaches 1."""
    if not g > 0:
        raise ValueError("coupling must be positive")
    lo = 1e-4
    # large theta: estimate ~ 3 g theta / 16; small theta: ~ g theta^3 / 40
    hi = 4.0 * max(16.0 / (3.0 * g), (40.0 / g) ** (1.0 / 3.0))
    if interaction_estimate(g, hi) < 1.0:
        raise NoCrossing(f"no crossing for g = {g:g} below theta = {hi:g}")
    return optimize.bisect(lambda th: interaction_estimate(g, th) - 1.0, lo, hi, xtol=1e-12)


def t_min(g: float) -> float:
    """Lowest temperature (in units of omega) where the quadratic approximation holds."""
    return 1.0 / t_min_root(g)
