"""Dirichlet Green functions on a finite imaginary-time interval.

The kernel inverts ``-d^2/dtau^2 + wbar^2`` on ``[0, L]`` with vanishing
endpoint values,

.. math:: G(\\tau, \\tau') = \\frac{\\sinh(\\bar\\omega\\tau_<)\\,
          \\sinh(\\bar\\omega(L-\\tau_>))}{\\bar\\omega\\sinh(\\bar\\omega L)} .

Hyperbolic ratios are evaluated through ``expm1`` of negative arguments, so
nothing overflows for large ``wbar * L`` and nothing cancels for small
``wbar * L``.  Below ``wbar * L = 1e-4`` short Taylor series are used, which
also covers the massless kernel ``wbar = 0`` exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy import integrate

SMALL_VALUE = 1e-4
SMALL_INTEGRAL = 0.1

_LOG_2PI = np.log(2.0 * np.pi)


@dataclass(frozen=True)
class DirichletKernel:
    """Effective frequency ``omega_bar`` and interval length ``length``."""

    omega_bar: float
    length: float

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"interval length must be positive, got {self.length}")
        if not self.omega_bar >= 0:
            raise ValueError(f"omega_bar must be non-negative, got {self.omega_bar}")

    @property
    def x(self) -> float:
        """Dimensionless product ``omega_bar * length``."""
        return self.omega_bar * self.length


def _check_domain(k: DirichletKernel, *taus):
    for tau in taus:
        if np.any(tau < 0) or np.any(tau > k.length):
            raise ValueError(f"tau outside [0, {k.length}]")


def _one_minus_exp(z):
    """1 - exp(-z) without cancellation."""
    return -np.expm1(-z)


def _green_array(w, L, tau, tau_p):
    lo = np.minimum(tau, tau_p)
    hi_gap = L - np.maximum(tau, tau_p)
    x = w * L
    small = lo * hi_gap / L * (1.0 + w * w * (lo * lo + hi_gap * hi_gap - L * L) / 6.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        a, b = w * lo, w * hi_gap
        big = (
            0.5 * np.exp(a + b - x) * _one_minus_exp(2 * a) * _one_minus_exp(2 * b)
            / (_one_minus_exp(2 * x) * w)
        )
    return np.where(x < SMALL_VALUE, small, big)


def _log_det_array(w, L):
    x = w * L
    small = -_LOG_2PI - np.log(L) + np.log1p(-x * x / 6.0 + 7.0 * x**4 / 360.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        big = np.log(w) - _LOG_2PI - (x + np.log(_one_minus_exp(2 * x)) - np.log(2.0))
    return np.where(x < SMALL_VALUE, small, big)


def _total_integral_array(w, L):
    """(x - 2 tanh(x/2)) L^3 / x^3 with x = w L, free of cancellation."""
    x = np.asarray(w * L, dtype=float)
    y2 = x * x / 4.0
    small = (1 / 12 - y2 / 30 + 17 * y2**2 / 1260 - 31 * y2**3 / 5670
             + 691 * y2**4 / 311850)
    with np.errstate(divide="ignore", invalid="ignore"):
        big = (x - 2.0 * np.tanh(0.5 * x)) / x**3
    return L**3 * np.where(x < SMALL_INTEGRAL, small, big)


def _row_integral_array(w, L, tau):
    x = w * L
    p, q = 0.5 * w * tau, 0.5 * w * (L - tau)
    small = 0.5 * tau * (L - tau) * (1.0 - (p * p + q * q) / 3.0 - p * q)
    with np.errstate(divide="ignore", invalid="ignore"):
        big = _one_minus_exp(2 * p) * _one_minus_exp(2 * q) / ((1.0 + np.exp(-x)) * w * w)
    return np.where(x < SMALL_VALUE, small, big)


def green_value(k: DirichletKernel, tau: ArrayLike, tau_p: ArrayLike):
    """Dirichlet Green function ``G(tau, tau')``.

    Symmetric in its arguments, positive in the interior and exactly zero
    when either argument sits on an endpoint.  Raises ``ValueError`` for
    arguments outside ``[0, L]``.
    """
    tau = np.asarray(tau, dtype=float)
    tau_p = np.asarray(tau_p, dtype=float)
    _check_domain(k, tau, tau_p)
    return _green_array(k.omega_bar, k.length, tau, tau_p)


def green_diagonal(k: DirichletKernel, tau: ArrayLike):
    """Coincident-point value ``G(tau, tau)``, the fluctuation variance."""
    return green_value(k, tau, tau)


def log_det_prefactor(k: DirichletKernel) -> float:
    """Logarithm of ``omega_bar / (2 pi sinh(omega_bar L))``."""
    return float(_log_det_array(k.omega_bar, k.length))


def det_prefactor(k: DirichletKernel) -> float:
    """Normalised Gaussian fluctuation determinant ``omega_bar/(2 pi sinh(omega_bar L))``.

    Its square root is the value of the path integral over fluctuations that
    vanish at both ends; for ``omega_bar -> 0`` it tends to the free-particle
    value ``1/(2 pi L)``.
    """
    return float(np.exp(log_det_prefactor(k)))


def det_prefactor_gelfand_yaglom(k: DirichletKernel, rtol: float = 1e-13) -> float:
    """Same determinant from the Gelfand-Yaglom initial-value problem.

    Integrates ``u'' = omega_bar^2 u`` with ``u(0) = 0, u'(0) = 1`` and returns
    ``1/(2 pi u(L))``.  The ODE is solved on the unit interval in the scaled
    variable ``s = tau/L`` so the step control sees only ``omega_bar * L``.
    """
    x2 = k.x**2

    def rhs(_, y):
        return (y[1], x2 * y[0])

    sol = integrate.solve_ivp(
        rhs, (0.0, 1.0), (0.0, 1.0), method="DOP853", rtol=rtol, atol=1e-20
    )
    if not sol.success:
        raise RuntimeError(f"Gelfand-Yaglom integration failed: {sol.message}")
    u_end = k.length * sol.y[0, -1]
    return 1.0 / (2.0 * np.pi * u_end)


def kernel_total_integral(k: DirichletKernel) -> float:
    """Double integral of ``G`` over the square ``[0, L]^2``.

    Equal to ``L/w^2 - 2 (cosh wL - 1)/(w^3 sinh wL)``; tends to ``L^3/12``
    as ``w -> 0``.
    """
    return float(_total_integral_array(k.omega_bar, k.length))


def kernel_row_integral(k: DirichletKernel, tau: ArrayLike):
    """Single integral ``int_0^L G(tau, tau') dtau'``.

    Closed form ``[1 - cosh(w(tau - L/2))/cosh(wL/2)]/w^2``, evaluated as
    ``2 sinh(w tau/2) sinh(w(L - tau)/2) / (w^2 cosh(wL/2))``.
    """
    tau = np.asarray(tau, dtype=float)
    _check_domain(k, tau)
    return _row_integral_array(k.omega_bar, k.length, tau)


def diag_square_integral(k: DirichletKernel, epsrel: float = 1e-10) -> float:
    """``int_0^L G(tau, tau)^2 dtau`` by adaptive quadrature.

    For ``omega_bar = 1`` and large ``L`` the value grows like ``L/4``.
    """
    half = 0.5 * k.length
    points = None
    if k.omega_bar > 0 and 10.0 / k.omega_bar < half:
        points = [10.0 / k.omega_bar]
    val, _ = integrate.quad(
        lambda t: green_diagonal(k, t) ** 2, 0.0, half,
        epsabs=0.0, epsrel=epsrel, limit=200, points=points,
    )
    return 2.0 * val


def free_propagator(omega: float, beta: float, tau: ArrayLike):
    """Periodic thermal propagator on ``[0, beta]``.

    ``(1/2w)[(1 + n) e^{-w tau} + n e^{w tau}]`` with the Bose factor
    ``n = 1/(e^{beta w} - 1)``.
    """
    if omega <= 0:
        raise ValueError("massless propagator undefined: omega must be positive")
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0) or np.any(tau > beta):
        raise ValueError(f"tau outside [0, {beta}]")
    num = np.exp(-omega * tau) + np.exp(-omega * (beta - tau))
    return num / (2.0 * omega * _one_minus_exp(beta * omega))
