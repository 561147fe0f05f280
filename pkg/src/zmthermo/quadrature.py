"""Panel Gauss-Legendre integration of log-weighted integrands on a half line.

Zero-mode integrals have the form ``int_0^inf exp(log_w(u)) * f_k(u) du`` for
a handful of factors ``f_k`` sharing one positive weight.  The weight may be
astronomically small or large, so sums are accumulated relative to a running
log-scale and returned as ``(log_scale, sums, errors)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


class QuadratureError(RuntimeError):
    """Raised when the panel integration does not converge."""


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings for panel integration of zero-mode integrals.

    Attributes
    ----------
    nodes : int
        Gauss-Legendre nodes per panel.  The embedded error estimate compares
        against a rule with half as many nodes.
    growth : float
        Width ratio between consecutive panels (>= 1).
    max_panels : int
        Panels allowed before giving up.
    cutoff : float
        Stop once a panel adds less than ``cutoff`` times the running total.
    rtol, atol : float
        Tolerances on the inner imaginary-time integrals and node-doubling
        checks.
    """

    nodes: int = 32
    growth: float = 1.25
    max_panels: int = 64
    cutoff: float = 1e-12
    rtol: float = 1e-10
    atol: float = 1e-14

    def __post_init__(self):
        if self.nodes < 4 or self.nodes % 2:
            raise ValueError("nodes must be an even number >= 4")
        if self.growth < 1:
            raise ValueError("growth must be >= 1")
        if not 0 < self.cutoff <= 1e-6:
            raise ValueError("cutoff must lie in (0, 1e-6]")
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_panels < 1:
            raise ValueError("max_panels must be positive")


DEFAULT = QuadratureConfig()

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point rule on [0, 1]."""
    if n not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[n]


Integrand = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


def integrate_half_line(
    fn: Integrand, width: float, config: QuadratureConfig = DEFAULT
) -> tuple[float, np.ndarray, np.ndarray]:
    """Integrate ``exp(log_w) * factors`` over ``[0, inf)``.

    Parameters
    ----------
    fn : callable
        ``fn(u) -> (log_w, factors)`` with ``log_w`` of shape ``(n,)`` and
        ``factors`` of shape ``(k, n)``.  The first factor is taken as the
        positive reference integral that drives the stopping rule.
    width : float
        Width of the first panel; later panels grow by ``config.growth``.

    Returns
    -------
    log_scale, sums, errors
        The integrals are ``sums * exp(log_scale)``; ``errors`` are absolute
        error estimates on ``sums`` (embedded rule plus truncated tail).
    """
    if not width > 0 or not np.isfinite(width):
        raise ValueError(f"panel width must be positive and finite, got {width}")
    t, wt = gauss_legendre(config.nodes)
    th, wh = gauss_legendre(config.nodes // 2)
    nodes = np.concatenate([t, th])
    n = len(t)

    log_scale = None
    sums = errs = None
    lo, h = 0.0, width
    for _ in range(config.max_panels):
        log_w, factors = fn(lo + h * nodes)
        factors = np.atleast_2d(factors)
        panel_max = float(np.max(log_w))
        if log_scale is None:
            log_scale = panel_max
            sums = np.zeros(factors.shape[0])
            errs = np.zeros(factors.shape[0])
        elif panel_max > log_scale:
            shrink = np.exp(log_scale - panel_max)
            sums *= shrink
            errs *= shrink
            log_scale = panel_max
        vals = np.exp(log_w - log_scale) * factors
        full = h * vals[:, :n] @ wt
        half = h * vals[:, n:] @ wh
        sums += full
        errs += np.abs(full - half)
        if np.all(np.abs(full) <= config.cutoff * (abs(sums[0]) + np.abs(sums))):
            errs += np.abs(full)
            return log_scale, sums, errs
        lo += h
        h *= config.growth
    raise QuadratureError(
        f"zero-mode integral not converged after {config.max_panels} panels"
    )
