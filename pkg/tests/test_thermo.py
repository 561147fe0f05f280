import math

import numpy as np
import pytest

from zmthermo import thermo
from zmthermo.model import PotentialSpec
from zmthermo.thermo import Method, ThermoPoint

F_SHO_UNIT = 0.0413248546129181090
ANH = PotentialSpec(1.0, 1.0, 0.4)
SHO = PotentialSpec(1.0, 1.0, 0.0)
MASSLESS = PotentialSpec(1.0, 0.0, 0.4)


def test_method_tags():
    assert {m.value for m in Method} == {"classical", "quadratic", "improved", "oneloop", "exact"}
    assert Method("exact") is Method.EXACT


def test_exact_free_energy_of_oscillator():
    assert thermo.free_energy("exact", SHO, 1.0) == pytest.approx(F_SHO_UNIT, rel=1e-12)


@pytest.mark.parametrize("method", ["quadratic", "improved", "oneloop", "exact"])
def test_free_theory_degeneracy(method):
    for T in (0.3, 2.0):
        assert thermo.free_energy(method, SHO, T) == pytest.approx(
            thermo.sho_thermo(1.0, T)[0], abs=1e-9
        )


def test_invalid_inputs():
    with pytest.raises(ValueError):
        thermo.free_energy("quadratic", ANH, 0.0)
    with pytest.raises(ValueError):
        thermo.free_energy("oneloop", MASSLESS, 1.0)
    with pytest.raises(ValueError):
        thermo.free_energy("bogus", ANH, 1.0)
    with pytest.raises(ValueError):
        thermo.thermo_curve("quadratic", ANH, [1.0, 0.5])
    with pytest.raises(ValueError):
        thermo.thermo_curve("quadratic", ANH, [])


def test_exact_heat_capacity_of_oscillator():
    for p in thermo.thermo_curve("exact", SHO, np.geomspace(0.2, 10, 25)):
        F, U, C = thermo.sho_thermo(1.0, p.T)
        assert p.F == pytest.approx(F, abs=1e-10)
        assert p.U == pytest.approx(U, abs=1e-9)
        assert p.C == pytest.approx(C, abs=1e-6)


def test_finite_differences_match_closed_form():
    for p in thermo.thermo_curve("quadratic", SHO, np.geomspace(0.2, 10, 9)):
        F, U, C = thermo.sho_thermo(1.0, p.T)
        assert abs(p.U - U) < 1e-8
        assert abs(p.C - C) < max(10 * p.err, 1e-8)


@pytest.mark.parametrize("T", [0.5, 1.0, 3.0])
def test_differenced_exact_free_energy_matches_spectral_sums(T):
    # U = F + T S with S from differencing F reproduces the spectral <E>
    spectral = thermo.thermo_point("exact", ANH, T)
    h = 1e-2
    Fp = [thermo.free_energy("exact", ANH, T * math.exp(k * h)) for k in (-2, -1, 1, 2)]
    dF_ds = (Fp[0] - 8 * Fp[1] + 8 * Fp[2] - Fp[3]) / (12 * h)
    assert spectral.F - dF_ds == pytest.approx(spectral.U, abs=1e-7)


@pytest.mark.parametrize("method", ["quadratic", "improved", "classical"])
def test_heat_capacity_is_temperature_derivative_of_energy(method):
    T, d = 1.5, 1e-3
    lo, mid, hi = thermo.thermo_curve(method, ANH, [T * (1 - d), T, T * (1 + d)])
    dU = (hi.U - lo.U) / (hi.T - lo.T)
    assert mid.C == pytest.approx(dU, abs=1e-5)


def test_classical_limit_of_massless_oscillator():
    temps = np.geomspace(0.5, 50, 12)
    curve = thermo.thermo_curve("quadratic", MASSLESS, temps)
    within = [p.T for p in curve if abs(p.C - 0.75) < 0.0075]
    onset = within[0]
    assert all(abs(p.C - 0.75) < 0.0075 for p in curve if p.T >= onset)
    assert onset < 5.0
    classical = thermo.thermo_curve("classical", MASSLESS, [1.0, 10.0])
    for p in classical:
        assert p.C == pytest.approx(0.75, abs=1e-8)


def test_oneloop_fails_at_high_temperature():
    p = thermo.thermo_point("oneloop", ANH, 10.0)
    assert abs(p.C - 0.75) > 0.075


def test_breakdown_flags_do_not_abort():
    curve = thermo.thermo_curve("improved", ANH, [0.04, 0.07, 1.0])
    assert "breakdown" in curve[0].flags
    assert math.isnan(curve[0].C)
    assert curve[1].flags == "near_breakdown"
    assert curve[2].flags == ""
    assert np.isfinite([curve[2].F, curve[2].U, curve[2].C]).all()


def test_exact_reports_nonconvergence_past_certified_levels():
    p = thermo.thermo_point("exact", MASSLESS, 500.0)
    assert p.flags == "nonconvergence"
    assert math.isnan(p.F)


def test_parallel_curve_is_identical():
    temps = [0.3, 0.7, 1.5, 4.0]
    assert thermo.thermo_curve("improved", ANH, temps, workers=2) == thermo.thermo_curve(
        "improved", ANH, temps
    )


def test_thermo_point_fields_are_floats():
    p = thermo.thermo_point("quadratic", ANH, 1.0)
    assert isinstance(p, ThermoPoint)
    assert all(type(getattr(p, f)) is float for f in ("T", "F", "U", "C", "err"))


def test_high_temperature_agreement():
    fq = thermo.free_energy("quadratic", ANH, 50.0)
    fc = thermo.free_energy("classical", ANH, 50.0)
    assert abs(fq - fc) / abs(fc) < 0.01


@pytest.mark.parametrize("T", [1.0, 2.0, 3.0])
def test_improved_beats_quadratic(T):
    exact = thermo.free_energy("exact", ANH, T)
    assert abs(thermo.free_energy("improved", ANH, T) - exact) < abs(
        thermo.free_energy("quadratic", ANH, T) - exact
    )


@pytest.mark.parametrize("lam,expected,tol", [(0.4, 0.584, 0.005), (8.0, 0.958, 0.005), (200.0, 2.450, 0.01)])
def test_ground_state_estimate(lam, expected, tol):
    assert thermo.ground_state_estimate(PotentialSpec(1.0, 1.0, lam)) == pytest.approx(expected, abs=tol)


def test_ground_state_estimate_free_limit():
    assert thermo.ground_state_estimate(PotentialSpec(1.0, 2.0, 0.0)) == 1.0


def test_quadratic_free_energy_has_interior_maximum():
    temps = np.geomspace(0.02, 5, 60)
    F = [thermo.free_energy("quadratic", ANH, T) for T in temps]
    i = int(np.argmax(F))
    assert 0 < i < len(temps) - 1


def test_t_min():
    assert 0.8 <= thermo.t_min(50.0) <= 1.5
    theta = thermo.t_min_root(0.1)
    assert 3 * 0.1 * theta / 16 == pytest.approx(1.0, rel=0.15)
    grid = [0.1, 1.0, 10.0, 50.0]
    values = [thermo.t_min(g) for g in grid]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert thermo.interaction_estimate(2.0, thermo.t_min_root(2.0)) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        thermo.t_min(0.0)
