"""Effective theory of the boundary value (zero mode) of imaginary-time paths.

Paths with coincident endpoints are split as ``x(tau) = x0 + y(tau)`` with
``y(0) = y(beta) = 0``.  Expanding the action to second order in ``y`` gives a
Gaussian whose integral over ``y`` leaves an ordinary integral over ``x0``:

    Z2 = int du0 sqrt(det_G) exp(-beta V(u0) + Sigma(u0))

with ``u0 = sqrt(m) x0`` the mass-rescaled zero mode, ``det_G`` the
Dirichlet determinant at the curvature frequency ``wbar(u0)`` and
``Sigma = alpha^2/2 * int int G`` the term left by completing the square
in the linear source ``alpha = V'(u0)``.

The first correction keeps one insertion of the cubic and quartic remainder
of the action, evaluated with Gaussian moments about the shifted mean
``I0(tau) = -alpha int G(tau, .)``.

The normalisation carries no free constants: at ``lambda = 0`` the zero-mode
integral reduces to the harmonic-oscillator result ``(2 cosh(beta w) - 2)^(-1/2)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from . import green
from .green import DirichletKernel
from .model import PotentialSpec, potential_value
from .quadrature import (
    DEFAULT,
    QuadratureConfig,
    QuadratureError,
    gauss_legendre,
    integrate_half_line,
)

_LOG_2PI = np.log(2.0 * np.pi)


class ApproximationBreakdown(ArithmeticError):
    """``Z2 + dZ`` is not positive; the first-order correction is unusable."""


# ---------------------------------------------------------------------------
# Harmonic oscillator, both routes


def sho_free_energy_closed(omega: float, beta: float) -> float:
    """Textbook free energy ``w/2 + ln(1 - exp(-beta w))/beta``."""
    return 0.5 * omega + np.log(-np.expm1(-beta * omega)) / beta


def sho_partition_boundary(omega: float, beta: float) -> float:
    """Harmonic-oscillator partition function from the boundary-value route.

    The fluctuation integral contributes ``sqrt(det_G)``; the classical path
    through ``x0`` contributes ``exp(-w tanh(beta w/2) x0^2)`` whose Gaussian
    integral is done in closed form.  The product equals
    ``(2 cosh(beta w) - 2)^(-1/2)``.
    """
    if not (omega > 0 and beta > 0):
        raise ValueError("omega and beta must be positive")
    log_det = green.log_det_prefactor(DirichletKernel(omega, beta))
    curvature = omega * np.tanh(0.5 * beta * omega)
    log_gauss = 0.5 * (np.log(np.pi) - np.log(curvature))
    return float(np.exp(0.5 * log_det + log_gauss))


def classical_path(omega: float, beta: float, x0: float, tau: ArrayLike):
    """Solution of ``x'' = w^2 x`` with ``x(0) = x(beta) = x0``."""
    tau = np.asarray(tau, dtype=float)
    num = np.exp(-omega * tau) + np.exp(-omega * (beta - tau))
    return x0 * num / (1.0 + np.exp(-omega * beta))


def classical_boundary_action(omega: float, beta: float, x0: float) -> float:
    """Euclidean action of :func:`classical_path`, ``x0^2 w tanh(beta w/2)``."""
    return x0 * x0 * omega * np.tanh(0.5 * beta * omega)


# ---------------------------------------------------------------------------
# Quadratic zero-mode weight


@dataclass(frozen=True)
class EffectiveWeight:
    """Ingredients of the zero-mode integrand at one boundary value.

    ``log_weight = log_det_prefactor / 2 - s_const + sigma_eta`` is the log of
    the integrand per unit mass-rescaled zero mode ``u0 = sqrt(m) x0``.
    """

    x0: float
    omega_bar: float
    s_const: float
    sigma_eta: float
    log_det_prefactor: float
    log_weight: float


def _parts(spec: PotentialSpec, beta: float, u):
    lam = spec.rescaled_coupling
    w2 = spec.omega**2
    u2 = u * u
    wbar = np.sqrt(w2 + 3.0 * lam * u2)
    alpha = u * (w2 + lam * u2)
    s_const = beta * (0.5 * w2 * u2 + 0.25 * lam * u2 * u2)
    sigma = 0.5 * alpha * alpha * green._total_integral_array(wbar, beta)
    log_det = green._log_det_array(wbar, beta)
    return wbar, alpha, s_const, sigma, log_det


def _log_weight(spec: PotentialSpec, beta: float, u):
    _, _, s_const, sigma, log_det = _parts(spec, beta, u)
    return 0.5 * log_det - s_const + sigma


def quadratic_weight(spec: PotentialSpec, beta: float, x0: float) -> EffectiveWeight:
    """Zero-mode integrand of the quadratic approximation at boundary value ``x0``."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    u0 = float(spec.rescale(x0))
    wbar, _, s_const, sigma, log_det = _parts(spec, beta, np.asarray(u0))
    return EffectiveWeight(
        x0=float(x0),
        omega_bar=float(wbar),
        s_const=float(s_const),
        sigma_eta=float(sigma),
        log_det_prefactor=float(log_det),
        log_weight=float(0.5 * log_det - s_const + sigma),
    )


def _panel_width(spec: PotentialSpec, beta: float) -> float:
    # width of the weight near u0 = 0: Gaussian part and quartic part
    widths = []
    if spec.omega > 0:
        widths.append(1.0 / np.sqrt(2.0 * spec.omega * np.tanh(0.5 * beta * spec.omega)))
    if spec.coupling > 0:
        widths.append((4.0 / (beta * spec.rescaled_coupling)) ** 0.25)
    return 0.5 * min(widths)


# ---------------------------------------------------------------------------
# First-order correction: inner imaginary-time integral


def _tau_mesh(wbar_max: float, beta: float, n: int):
    """Graded Gauss-Legendre mesh on [0, beta/2], refined toward tau = 0.

    Panels halve in width toward the boundary until they are well inside the
    boundary layer of width ``1/wbar``.
    """
    depth = int(np.clip(np.ceil(np.log2(max(wbar_max * beta, 1.0))) + 4, 2, 60))
    edges = 0.5 * beta * np.concatenate([[0.0], 2.0 ** -np.arange(depth, -1, -1)])
    t, w = gauss_legendre(n)
    lo, width = edges[:-1, None], np.diff(edges)[:, None]
    return (lo + width * t).ravel(), (width * w).ravel()


def _insertion_integrals(spec: PotentialSpec, beta: float, u, n: int):
    """Cubic and quartic insertion integrals over tau for each ``u``."""
    lam = spec.rescaled_coupling
    wbar, alpha, *_ = _parts(spec, beta, u)
    tau, wq = _tau_mesh(float(np.max(wbar)), beta, n)
    W, T = wbar[:, None], tau[None, :]
    row = green._row_integral_array(W, beta, T)
    gdiag = green._green_array(W, beta, T, T)
    i0 = -alpha[:, None] * row
    cubic = lam * u[:, None] * (i0**3 + 3.0 * i0 * gdiag)
    quartic = 0.25 * lam * (i0**4 + 6.0 * i0 * i0 * gdiag + 3.0 * gdiag * gdiag)
    # integrand is symmetric about beta/2
    return 2.0 * cubic @ wq, 2.0 * quartic @ wq


def _interaction_average(spec: PotentialSpec, beta: float, u, config: QuadratureConfig):
    """``<S_I>`` at each ``u``: tau-integral of the cubic+quartic insertion.

    Node doubling (16 -> 32 -> 64 per panel) must agree to ``config.rtol``.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if spec.coupling == 0:
        return np.zeros_like(u)
    prev = _insertion_integrals(spec, beta, u, 16)
    for n in (32, 64):
        cur = _insertion_integrals(spec, beta, u, n)
        diff = np.abs(cur[0] - prev[0]) + np.abs(cur[1] - prev[1])
        scale = np.abs(cur[0]) + np.abs(cur[1])
        if np.all(diff <= config.rtol * scale + config.atol):
            return cur[0] + cur[1]
        prev = cur
    raise QuadratureError("imaginary-time insertion integral failed node doubling")


def correction_first_order(
    spec: PotentialSpec, beta: float, x0: float, config: QuadratureConfig = DEFAULT
) -> float:
    """Integrand of the first-order correction ``dZ`` at boundary value ``x0``.

    Returns ``-w(u0) * int_0^beta [c3 <y^3> + c4 <y^4>] dtau`` per unit
    mass-rescaled zero mode, where ``w`` is the quadratic weight, ``c3 =
    lambda' u0``, ``c4 = lambda'/4`` and the Gaussian moments are
    ``<y^3> = I0^3 + 3 I0 G`` and ``<y^4> = I0^4 + 6 I0^2 G + 3 G^2``.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    u0 = np.atleast_1d(spec.rescale(x0))
    avg = _interaction_average(spec, beta, u0, config)
    return float(-np.exp(_log_weight(spec, beta, u0)[0]) * avg[0])


def interaction_average(
    spec: PotentialSpec, beta: float, x0: float, config: QuadratureConfig = DEFAULT
) -> float:
    """Gaussian average of the interaction action at boundary value ``x0``.

    At ``x0 = 0`` this is ``(3 lambda'/4) int G(tau, tau)^2 dtau``, the
    quantity whose crossing of 1 marks the low-temperature limit of the
    quadratic approximation.
    """
    return float(_interaction_average(spec, beta, np.atleast_1d(spec.rescale(x0)), config)[0])


def i0_profile(omega_bar: float, length: float, alpha: float, theta: ArrayLike):
    """Mean fluctuation ``I0(theta) = -alpha * int_0^L G(theta, theta') dtheta'``.

    Equivalently ``(alpha/wbar^2)(cosh wbar theta - sinh wbar theta tanh(wbar L/2) - 1)``.
    Dimensionless callers pass ``alpha / sqrt(g)``.
    """
    return -alpha * green.kernel_row_integral(DirichletKernel(omega_bar, length), theta)


# ---------------------------------------------------------------------------
# Partition functions


@dataclass(frozen=True)
class ZeroModeSums:
    """Zero-mode integrals kept on a common log scale.

    ``Z2 = z2 * exp(log_scale)`` and ``dZ = dz * exp(log_scale)``; the error
    fields are absolute estimates on ``z2`` and ``dz``.
    """

    log_scale: float
    z2: float
    dz: float
    z2_err: float
    dz_err: float

    @property
    def log_z2(self) -> float:
        return self.log_scale + np.log(self.z2)

    @property
    def correction_ratio(self) -> float:
        """``dZ / Z2``."""
        return self.dz / self.z2

    @property
    def log_z_improved(self) -> float:
        total = self.z2 + self.dz
        if not total > 0:
            raise ApproximationBreakdown(
                f"Z2 + dZ = {total:.3e} (x exp({self.log_scale:.3f})) is not positive"
            )
        return self.log_scale + np.log(total)


def zero_mode_sums(
    spec: PotentialSpec,
    beta: float,
    config: QuadratureConfig = DEFAULT,
    with_correction: bool = True,
) -> ZeroModeSums:
    """Integrate the quadratic weight and, optionally, the first correction."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    correct = with_correction and spec.coupling > 0

    def fn(u):
        log_w = _log_weight(spec, beta, u)
        if correct:
            return log_w, np.vstack([np.ones_like(u), -_interaction_average(spec, beta, u, config)])
        return log_w, np.vstack([np.ones_like(u), np.zeros_like(u)])

    log_scale, sums, errs = integrate_half_line(fn, _panel_width(spec, beta), config)
    # even integrand: full line is twice the half line
    return ZeroModeSums(
        log_scale=log_scale + np.log(2.0),
        z2=float(sums[0]),
        dz=float(sums[1]),
        z2_err=float(errs[0]),
        dz_err=float(errs[1]),
    )


def log_partition_quadratic(
    spec: PotentialSpec, beta: float, config: QuadratureConfig = DEFAULT
) -> float:
    return zero_mode_sums(spec, beta, config, with_correction=False).log_z2


def partition_quadratic(
    spec: PotentialSpec, beta: float, config: QuadratureConfig = DEFAULT
) -> float:
    """Quadratic (one-loop about the zero mode) partition function ``Z2``."""
    return float(np.exp(log_partition_quadratic(spec, beta, config)))


def partition_improved(
    spec: PotentialSpec, beta: float, config: QuadratureConfig = DEFAULT
) -> float:
    """``Z2 + dZ``.  Raises :class:`ApproximationBreakdown` if not positive."""
    return float(np.exp(zero_mode_sums(spec, beta, config).log_z_improved))


def effective_potential(spec: PotentialSpec, beta: float, x0: ArrayLike):
    """Zero-mode effective potential.

    Defined so that ``Z2 = int dx0 sqrt(m T / 2 pi) exp(-beta V_eff(x0))``.
    Tends to ``V(x0)`` as ``T -> inf``.
    """
    T = 1.0 / beta
    log_w = _log_weight(spec, beta, spec.rescale(x0))
    return -T * (log_w + 0.5 * (_LOG_2PI - np.log(T)))


def partition_from_effective_potential(
    spec: PotentialSpec, beta: float, config: QuadratureConfig = DEFAULT
) -> float:
    """Reassemble ``Z2`` by integrating the effective potential over ``x0``."""
    root_m = np.sqrt(spec.mass)
    log_norm = 0.5 * (np.log(spec.mass) - np.log(beta) - _LOG_2PI)

    def fn(x):
        return log_norm - beta * effective_potential(spec, beta, x), np.ones_like(x)[None]

    log_scale, sums, _ = integrate_half_line(fn, _panel_width(spec, beta) / root_m, config)
    return float(2.0 * sums[0] * np.exp(log_scale))


def partition_classical(
    spec: PotentialSpec, beta: float, config: QuadratureConfig = DEFAULT
) -> float:
    """High-temperature limit ``int dp dx / (2 pi) exp(-beta H)`` by quadrature."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    widths = []
    if spec.omega > 0:
        widths.append(1.0 / (spec.omega * np.sqrt(beta)))
    if spec.coupling > 0:
        widths.append((4.0 / (beta * spec.rescaled_coupling)) ** 0.25)
    unit = PotentialSpec(1.0, spec.omega, spec.rescaled_coupling)

    def fn(u):
        return -beta * potential_value(unit, u), np.ones_like(u)[None]

    log_scale, sums, _ = integrate_half_line(fn, 0.5 * min(widths), config)
    return float(2.0 * sums[0] * np.exp(log_scale) / np.sqrt(2.0 * np.pi * beta))


def partition_classical_closed(spec: PotentialSpec, beta: float) -> float:
    """Closed form of :func:`partition_classical`.

    ``int exp(-a u^2 - b u^4) du = (1/2) sqrt(a/b) e^z K_{1/4}(z)`` with
    ``z = a^2/(8b)``; the pure cases reduce to ``T/w`` and a Gamma function.
    """
    a = 0.5 * beta * spec.omega**2
    b = 0.25 * beta * spec.rescaled_coupling
    if b == 0:
        space = np.sqrt(np.pi / a)
    elif a == 0:
        space = special.gamma(0.25) / (2.0 * b**0.25)
    else:
        space = 0.5 * np.sqrt(a / b) * special.kve(0.25, a * a / (8.0 * b))
    return float(space / np.sqrt(2.0 * np.pi * beta))
