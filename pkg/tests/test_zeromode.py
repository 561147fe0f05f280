import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from zmthermo import green, zeromode
from zmthermo.green import DirichletKernel
from zmthermo.model import PotentialSpec, potential_value
from zmthermo.quadrature import QuadratureConfig, QuadratureError
from zmthermo.zeromode import ApproximationBreakdown

F_SHO_UNIT = 0.0413248546129181090      # 1/2 + ln(1 - 1/e)
Z_SHO_UNIT = 0.959517375667471860       # (2 cosh 1 - 2)^(-1/2)
SIGMA_REF = 0.298007305055293890        # q0 = 1, g = 0.4, theta = 1
ROW_MID = 0.113181116029926091

ANHARMONIC = PotentialSpec(1.0, 1.0, 0.4)


def test_sho_free_energy():
    assert zeromode.sho_free_energy_closed(1.0, 1.0) == pytest.approx(F_SHO_UNIT, rel=1e-14)
    assert zeromode.sho_free_energy_closed(1.0, 1e3) == pytest.approx(0.5, rel=1e-14)


def test_sho_boundary_route():
    assert zeromode.sho_partition_boundary(1.0, 1.0) == pytest.approx(Z_SHO_UNIT, rel=1e-14)
    assert zeromode.sho_partition_boundary(1.0, 30.0) == pytest.approx(np.exp(-15.0), rel=1e-6)


@given(bw=st.floats(0.01, 200), w=st.floats(0.1, 10))
def test_sho_routes_agree(bw, w):
    beta = bw / w
    lhs = -np.log(zeromode.sho_partition_boundary(w, beta)) / beta
    assert lhs == pytest.approx(zeromode.sho_free_energy_closed(w, beta), rel=1e-12, abs=1e-12 * w)


def test_classical_path():
    assert zeromode.classical_path(1.0, 1.0, 1.0, 0.5) == pytest.approx(1 / np.cosh(0.5), rel=1e-15)
    np.testing.assert_allclose(zeromode.classical_path(2.0, 3.0, 0.7, [0.0, 3.0]), 0.7, rtol=1e-15)
    assert zeromode.classical_boundary_action(1.0, 1.0, 1.0) == pytest.approx(np.tanh(0.5), rel=1e-15)


def test_classical_action_by_quadrature():
    w, beta, x0 = 1.7, 0.9, 1.3
    tau = np.linspace(0, beta, 20001)
    x = zeromode.classical_path(w, beta, x0, tau)
    dx = np.gradient(x, tau, edge_order=2)
    action = integrate.simpson(0.5 * dx**2 + 0.5 * w * w * x * x, x=tau)
    assert action == pytest.approx(zeromode.classical_boundary_action(w, beta, x0), rel=1e-8)


def test_sigma_reference_value():
    x0 = 1.0 / np.sqrt(0.4)  # q0 = sqrt(g) x0 = 1
    wt = zeromode.quadratic_weight(ANHARMONIC, 1.0, x0)
    assert wt.omega_bar == pytest.approx(2.0, rel=1e-14)
    assert wt.sigma_eta == pytest.approx(SIGMA_REF, rel=1e-13)


@given(x0=st.floats(-20, 20), beta=st.floats(0.01, 50), lam=st.floats(0, 50))
def test_weight_is_even_with_nonnegative_sigma(x0, beta, lam):
    spec = PotentialSpec(1.3, 0.8, lam)
    a = zeromode.quadratic_weight(spec, beta, x0)
    b = zeromode.quadratic_weight(spec, beta, -x0)
    assert a.log_weight == b.log_weight
    assert a.sigma_eta >= 0


def test_correction_integrand_is_even():
    # u0 * I0 is even because I0 is odd in u0; the half-line doubling relies on it
    for beta in (0.3, 2.0):
        for x0 in (0.2, 1.1, 3.0):
            a = zeromode.correction_first_order(ANHARMONIC, beta, x0)
            b = zeromode.correction_first_order(ANHARMONIC, beta, -x0)
            assert abs(a - b) <= 1e-10 * max(abs(a), 1e-300)


def test_weight_is_gaussian_at_zero_coupling():
    # at lambda = 0 the integrand is the classical-path weight times the determinant
    w, beta = 1.4, 0.8
    spec = PotentialSpec(1.0, w, 0.0)
    for x0 in (0.0, 0.5, 2.0):
        wt = zeromode.quadratic_weight(spec, beta, x0)
        expected = 0.5 * wt.log_det_prefactor - zeromode.classical_boundary_action(w, beta, x0)
        assert wt.log_weight == pytest.approx(expected, rel=1e-12, abs=1e-14)


def test_partition_quadratic_free_limit():
    spec = PotentialSpec(1.0, 1.0, 0.0)
    assert zeromode.partition_quadratic(spec, 1.0) == pytest.approx(Z_SHO_UNIT, rel=1e-10)
    assert zeromode.partition_improved(spec, 1.0) == pytest.approx(Z_SHO_UNIT, rel=1e-10)


def test_partition_quadratic_mass_scaling():
    # Z depends on m, omega, lambda only through omega and lambda / m^2
    a = zeromode.partition_quadratic(PotentialSpec(4.0, 1.2, 3.2), 0.7)
    b = zeromode.partition_quadratic(PotentialSpec(1.0, 1.2, 0.2), 0.7)
    assert a == pytest.approx(b, rel=1e-12)


def test_i0_profile():
    assert zeromode.i0_profile(1.0, 1.0, 1.0, 0.0) == 0.0
    assert zeromode.i0_profile(1.0, 1.0, 1.0, 1.0) == 0.0
    assert zeromode.i0_profile(1.0, 1.0, 1.0, 0.5) == pytest.approx(-ROW_MID, rel=1e-14)
    np.testing.assert_array_equal(zeromode.i0_profile(2.0, 3.0, 0.0, np.linspace(0, 3, 7)), 0.0)
    with pytest.raises(ValueError):
        zeromode.i0_profile(1.0, 1.0, 1.0, 1.2)


@pytest.mark.parametrize("wbar,L,alpha", [(1.0, 1.0, 1.0), (3.0, 2.0, -0.7), (0.2, 5.0, 4.0)])
def test_i0_matches_quadrature(wbar, L, alpha):
    k = DirichletKernel(wbar, L)
    for theta in (0.1 * L, 0.45 * L, 0.9 * L):
        num, _ = integrate.quad(
            lambda s: float(green.green_value(k, theta, s)), 0, L, points=[theta], epsabs=1e-15
        )
        assert zeromode.i0_profile(wbar, L, alpha, theta) == pytest.approx(-alpha * num, rel=1e-8)


def test_correction_vanishes_without_coupling():
    spec = PotentialSpec(1.0, 1.0, 0.0)
    assert zeromode.correction_first_order(spec, 1.0, 0.7) == 0.0


def test_interaction_average_at_origin():
    # at x0 = 0 only the quartic self-contraction survives
    beta = 10.0
    expected = 0.75 * 0.4 * green.diag_square_integral(DirichletKernel(1.0, beta))
    assert zeromode.interaction_average(ANHARMONIC, beta, 0.0) == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("T", [0.5, 1.0, 3.0])
def test_improved_is_exact_to_first_order(T):
    # (F_improved - F_sho)/lambda -> (3/4) D(0)^2 with D(0) = coth(beta/2)/2
    beta = 1.0 / T
    d0 = 0.5 / np.tanh(0.5 * beta)

    def ratio(lam):
        z = zeromode.partition_improved(PotentialSpec(1.0, 1.0, lam), beta)
        return (-np.log(z) / beta - zeromode.sho_free_energy_closed(1.0, beta)) / lam

    extrapolated = 2 * ratio(5e-5) - ratio(1e-4)
    assert extrapolated == pytest.approx(0.75 * d0 * d0, rel=1e-5)


def test_breakdown_at_low_temperature():
    sums = zeromode.zero_mode_sums(ANHARMONIC, 1.0 / 0.04)
    assert sums.correction_ratio < -1
    with pytest.raises(ApproximationBreakdown):
        sums.log_z_improved
    with pytest.raises(ApproximationBreakdown):
        zeromode.partition_improved(ANHARMONIC, 1.0 / 0.04)


def test_effective_potential_approaches_potential():
    x0 = np.linspace(-2, 2, 4001)
    v = potential_value(ANHARMONIC, x0)
    worst = []
    for T in (100.0, 300.0, 1000.0):
        v_eff = zeromode.effective_potential(ANHARMONIC, 1.0 / T, x0)
        worst.append(np.max(np.abs(v_eff - v) / np.maximum(v, 1e-3 * T)))
    assert worst[0] > worst[1] > worst[2]
    assert worst[1] < 0.01


@pytest.mark.parametrize("T", [30.0, 100.0, 300.0])
def test_effective_potential_high_temperature_expansion(T):
    # diagonal density matrix: V_eff = V + beta V''/12 - beta^2 V'^2/24 + O(beta^2)
    beta = 1.0 / T
    x0 = np.linspace(-2, 2, 81)
    lam = ANHARMONIC.coupling
    v1 = x0 + lam * x0**3
    v2 = 1 + 3 * lam * x0**2
    expansion = potential_value(ANHARMONIC, x0) + beta * v2 / 12 - beta**2 * v1**2 / 24
    v_eff = zeromode.effective_potential(ANHARMONIC, beta, x0)
    assert np.max(np.abs(v_eff - expansion)) < 5 * beta**2


@pytest.mark.parametrize("spec", [ANHARMONIC, PotentialSpec(2.0, 0.7, 5.0), PotentialSpec(1.0, 0.0, 0.4)])
@pytest.mark.parametrize("beta", [0.05, 1.0, 8.0])
def test_effective_potential_reassembly(spec, beta):
    a = zeromode.partition_from_effective_potential(spec, beta)
    b = zeromode.partition_quadratic(spec, beta)
    assert a == pytest.approx(b, rel=1e-12)


@pytest.mark.parametrize(
    "spec", [ANHARMONIC, PotentialSpec(1.0, 0.0, 0.4), PotentialSpec(1.0, 2.0, 0.0), PotentialSpec(3.0, 0.5, 7.0)]
)
@pytest.mark.parametrize("beta", [0.01, 0.3, 4.0])
def test_classical_partition_closed_form(spec, beta):
    assert zeromode.partition_classical(spec, beta) == pytest.approx(
        zeromode.partition_classical_closed(spec, beta), rel=1e-11
    )


def test_quadrature_nonconvergence_is_reported():
    tiny = QuadratureConfig(max_panels=2)
    with pytest.raises(QuadratureError):
        zeromode.partition_quadratic(ANHARMONIC, 1.0, tiny)


def test_log_partition_handles_extreme_weights():
    # beta V spans hundreds of e-folds; the log-scaled sums keep Z finite
    spec = PotentialSpec(1.0, 1.0, 200.0)
    logz = zeromode.log_partition_quadratic(spec, 2000.0)
    assert np.isfinite(logz) and logz < -1000


@settings(max_examples=20, deadline=None)
@given(lam=st.floats(0.01, 20), T=st.floats(0.5, 20))
def test_quadratic_and_classical_free_energies_stay_close(lam, T):
    # both routes share the classical high-temperature limit
    spec = PotentialSpec(1.0, 1.0, lam)
    fq = -T * zeromode.log_partition_quadratic(spec, 1.0 / T)
    fc = -T * np.log(zeromode.partition_classical_closed(spec, 1.0 / T))
    assert abs(fq - fc) < 0.5 * (1.0 + lam ** (1 / 3))
