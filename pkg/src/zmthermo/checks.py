"""Self-consistency suite run by ``zmthermo check``.

Each check compares two independent routes to the same quantity.  The
determinant formula is injectable so a deliberately wrong version can be
shown to trip the Gelfand-Yaglom comparison.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import green, zeromode
from .green import DirichletKernel
from .model import PotentialSpec
from .oracle import free_energy_oneloop
from .thermo import Method, free_energy


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


_KERNELS = [DirichletKernel(w, L) for w, L in [(0.3, 0.7), (1.0, 1.0), (2.5, 3.0), (7.0, 2.0)]]


def _sho_cross_method():
    worst = 0.0
    for bw in np.geomspace(0.05, 50.0, 40):
        lhs = -np.log(zeromode.sho_partition_boundary(1.0, bw)) / bw
        worst = max(worst, abs(lhs - zeromode.sho_free_energy_closed(1.0, bw)))
    return worst < 1e-12, f"max |dF| = {worst:.2e}"


def _free_theory_quadratic():
    spec = PotentialSpec(1.0, 1.0, 0.0)
    worst = 0.0
    for bw in np.geomspace(0.05, 50.0, 40):
        z = zeromode.partition_quadratic(spec, bw)
        ref = zeromode.sho_partition_boundary(1.0, bw)
        worst = max(worst, abs(z / ref - 1.0))
    return worst < 1e-9, f"max rel err = {worst:.2e}"


def _green_ode_residual():
    worst = 0.0
    h = 1e-3
    for k in _KERNELS:
        L, w = k.length, k.omega_bar
        tp = 0.37 * L
        for t in (0.15 * L, 0.8 * L):
            g = green.green_value(k, [t - h, t, t + h], tp)
            d2 = (g[0] - 2 * g[1] + g[2]) / h**2
            worst = max(worst, abs(-d2 + w * w * g[1]) / max(1.0, w * w * abs(g[1])))
    return worst < 1e-5, f"max residual = {worst:.2e}"


def _green_jump():
    worst = 0.0
    h = 1e-5
    for k in _KERNELS:
        tp = 0.37 * k.length
        right = green.green_value(k, [tp, tp + h, tp + 2 * h], tp)
        left = green.green_value(k, [tp, tp - h, tp - 2 * h], tp)
        d_right = (-3 * right[0] + 4 * right[1] - right[2]) / (2 * h)
        d_left = (3 * left[0] - 4 * left[1] + left[2]) / (2 * h)
        worst = max(worst, abs(d_right - d_left + 1.0))
    return worst < 1e-6, f"max |jump + 1| = {worst:.2e}"


def _green_boundary_symmetry():
    ok = True
    for k in _KERNELS:
        t = np.linspace(0.0, k.length, 11)
        ok &= bool(np.all(green.green_value(k, 0.0, t) == 0.0))
        ok &= bool(np.all(green.green_value(k, k.length, t) == 0.0))
        a, b = np.meshgrid(t, t)
        ok &= bool(np.array_equal(green.green_value(k, a, b), green.green_value(k, b, a)))
    return ok, "exact zeros and symmetry" if ok else "boundary or symmetry violated"


def _gelfand_yaglom(det_fn):
    worst = 0.0
    for k in _KERNELS + [DirichletKernel(1.0, 1e-3), DirichletKernel(2.0, 20.0)]:
        gy = green.det_prefactor_gelfand_yaglom(k)
        worst = max(worst, abs(det_fn(k) / gy - 1.0))
    return worst < 1e-10, f"max rel err = {worst:.2e}"


def _kernel_integrals():
    # G is analytic on each side of the diagonal: tensor Gauss-Legendre on the
    # triangle b < a, doubled by symmetry
    x, w = np.polynomial.legendre.leggauss(48)
    x, w = 0.5 * (x + 1.0), 0.5 * w
    worst = 0.0
    for k in _KERNELS:
        L = k.length
        a = L * x[:, None]
        b = a * x[None, :]
        num = 2.0 * np.sum(L * w[:, None] * a * w[None, :] * green.green_value(k, a, b))
        worst = max(worst, abs(num / green.kernel_total_integral(k) - 1.0))
        for t in (0.2 * L, 0.5 * L):
            row = t * w @ green.green_value(k, t, t * x) + (L - t) * w @ green.green_value(
                k, t, t + (L - t) * x
            )
            worst = max(worst, abs(row / green.kernel_row_integral(k, t) - 1.0))
    return worst < 1e-8, f"max rel err = {worst:.2e}"


def _overflow_probe():
    k = DirichletKernel(6.0, 100.0)  # omega_bar * L = 600
    log_det = green.log_det_prefactor(k)
    asymptote = np.log(k.omega_bar / np.pi) - k.x
    g = green.green_value(k, [1.0, 50.0, 99.0], [2.0, 50.0, 98.0])
    ok = (
        np.isfinite(log_det)
        and abs(log_det - asymptote) < 1e-12 * abs(asymptote)
        and np.all(np.isfinite(g))
        and abs(g[1] - 0.5 / k.omega_bar) < 1e-15
        and np.isfinite(green.kernel_total_integral(k))
    )
    return bool(ok), f"log det = {log_det:.6f}, asymptote {asymptote:.6f}"


def _free_theory_reductions():
    spec = PotentialSpec(1.0, 1.3, 0.0)
    worst = 0.0
    for T in (0.3, 1.0, 4.0):
        sho = zeromode.sho_free_energy_closed(1.3, 1.0 / T)
        for method in (Method.QUADRATIC, Method.IMPROVED, Method.EXACT):
            worst = max(worst, abs(free_energy(method, spec, T) - sho))
        worst = max(worst, abs(free_energy_oneloop(spec, 1.0 / T) - sho))
        cl = zeromode.partition_classical(spec, 1.0 / T)
        worst = max(worst, abs(cl * 1.3 / T - 1.0))
    return worst < 1e-9, f"max deviation = {worst:.2e}"


def _classical_closed():
    worst = 0.0
    for spec in (PotentialSpec(1.0, 1.0, 0.4), PotentialSpec(1.0, 0.0, 0.4), PotentialSpec(2.0, 0.5, 3.0)):
        for beta in (0.02, 0.5, 3.0):
            a = zeromode.partition_classical(spec, beta)
            b = zeromode.partition_classical_closed(spec, beta)
            worst = max(worst, abs(a / b - 1.0))
    return worst < 1e-10, f"max rel err = {worst:.2e}"


def _reassembly():
    worst = 0.0
    for spec in (PotentialSpec(1.0, 1.0, 0.4), PotentialSpec(2.0, 0.7, 5.0)):
        for beta in (0.1, 1.0, 5.0):
            a = zeromode.partition_from_effective_potential(spec, beta)
            b = zeromode.partition_quadratic(spec, beta)
            worst = max(worst, abs(a / b - 1.0))
    return worst < 1e-12, f"max rel err = {worst:.2e}"


def run_checks(
    det_fn: Callable[[DirichletKernel], float] = green.det_prefactor,
) -> list[CheckResult]:
    """Run every invariant and return one result per check."""
    suite = [
        ("sho_cross_method", _sho_cross_method),
        ("free_theory_quadratic", _free_theory_quadratic),
        ("green_ode_residual", _green_ode_residual),
        ("green_derivative_jump", _green_jump),
        ("green_boundary_symmetry", _green_boundary_symmetry),
        ("gelfand_yaglom", lambda: _gelfand_yaglom(det_fn)),
        ("kernel_integrals", _kernel_integrals),
        ("overflow_probe", _overflow_probe),
        ("free_theory_reductions", _free_theory_reductions),
        ("classical_closed_form", _classical_closed),
        ("effective_potential_reassembly", _reassembly),
    ]
    results = []
    for name, fn in suite:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail))
    return results
