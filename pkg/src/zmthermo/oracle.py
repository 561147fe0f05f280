"""Reference results: exact spectra and first-order thermal perturbation theory.

The exact spectrum comes from diagonalising the Hamiltonian in a truncated
harmonic-oscillator basis.  Position and momentum are built from ladder
operators in a slightly larger space and truncated only after forming
powers, so every retained matrix element is exact.

Convention: the quartic term is ``(lambda/4) x^4``.  With ``lambda = 0.4``
the x^4 coefficient is 0.1 and the ground-state energy is 0.559.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg
from scipy.special import logsumexp

from .model import PotentialSpec
from .zeromode import sho_free_energy_closed


class ConvergenceError(RuntimeError):
    """Raised when the basis is too small for the requested accuracy."""


def _ladder(n: int) -> np.ndarray:
    """Annihilation operator in an n-dimensional number basis."""
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1)


def hamiltonian_matrix(spec: PotentialSpec, omega_b: float, N: int) -> np.ndarray:
    """Matrix of ``p^2/2m + m w^2 x^2/2 + lambda x^4/4`` in the harmonic basis.

    The basis is the number basis of an oscillator with mass ``m`` and
    frequency ``omega_b``.  Returns a symmetric ``N x N`` array.
    """
    if not omega_b > 0:
        raise ValueError("basis frequency must be positive")
    if N < 4:
        raise ValueError("basis size must be at least 4")
    m = spec.mass
    a = _ladder(N + 4)
    x = (a + a.T) / np.sqrt(2.0 * m * omega_b)
    # p = i sqrt(m wb / 2) (a^dag - a), so p^2 = -(m wb / 2)(a^dag - a)^2
    d = a.T - a
    p2 = -0.5 * m * omega_b * (d @ d)
    x2 = x @ x
    x4 = x2 @ x2
    H = p2 / (2.0 * m) + 0.5 * m * spec.omega**2 * x2 + 0.25 * spec.coupling * x4
    H = H[:N, :N]
    return 0.5 * (H + H.T)


def default_basis_frequency(spec: PotentialSpec) -> float:
    return max(spec.omega, spec.rescaled_coupling ** (1.0 / 3.0))


@dataclass(frozen=True)
class Spectrum:
    """Certified low-lying eigenvalues of one Hamiltonian.

    ``errors[n]`` is ``|E_n(N) - E_n(N/2)|``, the change on halving the basis.
    Only the leading levels whose relative change is below the level
    tolerance are kept.
    """

    N: int
    omega_b: float
    energies: np.ndarray = field(repr=False)
    errors: np.ndarray = field(repr=False)

    @property
    def E0(self) -> float:
        return float(self.energies[0])


def spectrum(
    spec: PotentialSpec,
    N: int = 128,
    omega_b: float | None = None,
    max_N: int = 512,
    tol: float = 1e-6,
    level_tol: float = 1e-10,
) -> Spectrum:
    """Diagonalise and certify the low-lying levels.

    The basis is doubled from ``N`` up to ``max_N`` until the ground-state
    energy moves by less than ``tol`` between ``N/2`` and ``N``.  Levels are
    kept up to the first whose relative change exceeds ``level_tol``; the
    harmonic basis resolves only about the lowest tenth of its levels for a
    quartic well.

    Raises
    ------
    ConvergenceError
        If the ground state is not converged at ``max_N``.
    """
    if omega_b is None:
        omega_b = default_basis_frequency(spec)
    while True:
        full = linalg.eigvalsh(hamiltonian_matrix(spec, omega_b, N))
        half = linalg.eigvalsh(hamiltonian_matrix(spec, omega_b, N // 2))
        k = N // 2
        errors = np.abs(full[:k] - half[:k])
        if errors[0] <= tol:
            bad = errors > level_tol * np.maximum(1.0, np.abs(full[:k]))
            keep = int(np.argmax(bad)) if bad.any() else k
            keep = max(keep, 2)
            return Spectrum(N=N, omega_b=omega_b, energies=full[:keep], errors=errors[:keep])
        if N >= max_N:
            raise ConvergenceError(
                f"ground state not converged at N={N}: change {errors[0]:.2e} > {tol:.0e}"
            )
        N *= 2


class InsufficientLevels(ConvergenceError):
    """The certified levels do not exhaust the Boltzmann sum."""


def _truncation_bound(sp: Spectrum, beta: float) -> float:
    """Log of a bound on the Boltzmann weight of the levels not kept.

    Level spacings of quadratic-plus-quartic wells do not shrink with energy,
    so the missing tail is bounded by a geometric series with the top spacing.
    """
    E = sp.energies
    gap = E[-1] - E[-2]
    return -beta * (E[-1] + gap) - np.log(-np.expm1(-beta * gap))


def log_partition_exact(
    spec: PotentialSpec, beta: float, sp: Spectrum | None = None, tail_tol: float = 1e-8
) -> float:
    """``ln sum_n exp(-beta E_n)`` over the certified levels.

    Raises :class:`InsufficientLevels` when the neglected tail could exceed
    ``tail_tol`` of the sum.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    if sp is None:
        sp = spectrum(spec)
    log_z = float(logsumexp(-beta * sp.energies))
    tail = _truncation_bound(sp, beta)
    if tail - log_z > np.log(tail_tol):
        raise InsufficientLevels(
            f"truncation bound {np.exp(tail - log_z):.1e} of Z at beta={beta}; raise N"
        )
    return log_z


def partition_exact(spec: PotentialSpec, beta: float, sp: Spectrum | None = None) -> float:
    return float(np.exp(log_partition_exact(spec, beta, sp)))


def spectral_thermo(sp: Spectrum, beta: float) -> tuple[float, float, float]:
    """Free energy, internal energy and specific heat from the level sum.

    ``U = <E>`` and ``C = beta^2 (<E^2> - <E>^2)``; no differentiation.
    """
    E = sp.energies
    log_w = -beta * E
    log_z = logsumexp(log_w)
    p = np.exp(log_w - log_z)
    U = float(p @ E)
    var = float(p @ (E - U) ** 2)
    return -float(log_z) / beta, U, beta * beta * var


def free_energy_oneloop(spec: PotentialSpec, beta: float) -> float:
    """First-order thermal perturbation theory in the quartic coupling.

    ``F = F_sho + (3 lambda / 4 m^2) D(0)^2`` with the coincident thermal
    propagator ``D(0) = coth(beta w / 2) / (2 w)``.
    """
    if spec.omega <= 0:
        raise ValueError(
            "infrared-divergent perturbative reference: omega must be positive"
        )
    w = spec.omega
    d0 = 1.0 / (np.tanh(0.5 * beta * w) * 2.0 * w)
    return sho_free_energy_closed(w, beta) + 0.75 * spec.rescaled_coupling * d0 * d0


def free_energy_first_order_spectral(spec: PotentialSpec, beta: float, levels: int = 4000) -> float:
    """First-order free energy from shifted oscillator levels.

    Each level moves by ``(lambda'/4) <n|u^4|n> = (3 lambda' / 16 w^2)(2n^2 + 2n + 1)``;
    to first order ``F = F_sho + <shift>`` under the unperturbed Boltzmann weights.
    """
    w = spec.omega
    n = np.arange(levels, dtype=float)
    p = np.exp(-beta * w * n) * -np.expm1(-beta * w)
    shift = 3.0 * spec.rescaled_coupling / (16.0 * w * w) * (2 * n * n + 2 * n + 1)
    return sho_free_energy_closed(w, beta) + float(p @ shift)
