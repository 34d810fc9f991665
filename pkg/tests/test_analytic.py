"""Tests for the closed-form transition and crossing helpers.

Reference numbers were frozen from a plain bisection solver written
independently of the library root finder; see the individual tests.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polariton.analytic import (
    dispersive_dressed_states,
    dispersive_transitions,
    driven_cavity_photon,
    find_crossing,
    perturbed_transitions,
    resolvability_threshold,
)
from polariton.errors import DispersiveValidityWarning, NoCrossing
from polariton.eigenmode import dressed_frequencies
from polariton.hilbert import HilbertSpec
from polariton.model import (
    GHZ_TO_ANGULAR,
    MHZ_TO_ANGULAR,
    power_from_rabi,
    reference_device,
)

CHI = 8.591940478331273 * MHZ_TO_ANGULAR
ALPHA = -291.4 * MHZ_TO_ANGULAR
W_R_TILDE = 7.166434 * GHZ_TO_ANGULAR


@given(
    chi=st.floats(0.1, 50.0),
    rabi=st.floats(0.0, 300.0),
    detuning=st.floats(-100.0, 100.0),
)
@settings(max_examples=200, deadline=None)
def test_inner_and_outer_pairs_straddle_the_mean(chi, rabi, detuning):
    # w13 + w24 and w14 + w23 both telescope to 2 omega_r_tilde
    out = dispersive_transitions(
        chi * MHZ_TO_ANGULAR,
        rabi * MHZ_TO_ANGULAR,
        W_R_TILDE,
        drive_detuning=detuning * MHZ_TO_ANGULAR,
    )
    np.testing.assert_allclose(out.w13 + out.w24, 2.0 * W_R_TILDE, rtol=1e-12)
    np.testing.assert_allclose(out.w14 + out.w23, 2.0 * W_R_TILDE, rtol=1e-12)
    assert out.w23 <= out.w13 <= out.w14
    assert out.w23 <= out.w24 <= out.w14


def test_resonant_mixing_angles():
    out = dispersive_transitions(CHI, 5.0 * MHZ_TO_ANGULAR, W_R_TILDE)
    # resonant zero-photon sector mixes maximally
    np.testing.assert_allclose(out.theta0, np.pi / 2.0, rtol=1e-15)
    # one-photon sector is detuned by -2 chi, pushing theta1 past pi/2
    assert np.pi / 2.0 < out.theta1 < np.pi
    expected = np.arctan2(2.0 * 5.0 * MHZ_TO_ANGULAR, -2.0 * CHI)
    np.testing.assert_allclose(out.theta1, expected, rtol=1e-15)


def test_low_power_form_matches_exact_for_weak_drive():
    rabi = 1e-3 * MHZ_TO_ANGULAR
    exact = dispersive_transitions(CHI, rabi, W_R_TILDE)
    lin = dispersive_transitions(CHI, rabi, W_R_TILDE, low_power=True)
    # linearization error is O(rabi^2 / chi)
    budget = 2.0 * rabi**2 / CHI
    assert abs(exact.w13 - lin.w13) < budget
    assert abs(exact.w24 - lin.w24) < budget
    assert abs(exact.w14 - lin.w14) < budget
    assert abs(exact.w23 - lin.w23) < budget
    np.testing.assert_allclose(lin.h0, rabi, rtol=1e-15)
    np.testing.assert_allclose(lin.h1, CHI, rtol=1e-15)


def test_low_power_form_requires_resonant_drive():
    with pytest.raises(ValueError, match="resonant"):
        dispersive_transitions(
            CHI, MHZ_TO_ANGULAR, W_R_TILDE, drive_detuning=1.0, low_power=True
        )


def test_perturbed_reduces_to_dispersive_for_deep_anharmonicity():
    # with the repelling level pushed to -1e15 rad/us the correction is
    # below machine precision relative to the transition frequencies
    rabi = 20.0 * MHZ_TO_ANGULAR
    dsp = dispersive_transitions(CHI, rabi, W_R_TILDE)
    for closed in (True, False):
        pert = perturbed_transitions(
            CHI, rabi, W_R_TILDE, alpha=-1e15, closed_form=closed
        )
        np.testing.assert_allclose(pert.w13, dsp.w13, rtol=1e-10)
        np.testing.assert_allclose(pert.w24, dsp.w24, rtol=1e-10)


def test_closed_form_tracks_sector_resolved_shifts():
    # both variants encode the same leading correction; their difference
    # is higher order and stays a small fraction of the correction itself
    rabi = 5.0 * MHZ_TO_ANGULAR
    closed = perturbed_transitions(CHI, rabi, W_R_TILDE, ALPHA, closed_form=True)
    full = perturbed_transitions(CHI, rabi, W_R_TILDE, ALPHA, closed_form=False)
    theta1 = np.arctan2(2.0 * rabi, -2.0 * CHI)
    corr = abs(rabi**2 * np.cos(theta1) / ALPHA)
    assert abs(closed.w13 - full.w13) < 0.2 * corr
    assert abs(closed.w24 - full.w24) < 0.2 * corr
    # the correction narrows the inner pair from both sides
    base = dispersive_transitions(CHI, rabi, W_R_TILDE)
    assert closed.w13 > base.w13
    assert closed.w24 < base.w24


def test_perturbed_sector_geometry():
    rabi = 10.0 * MHZ_TO_ANGULAR
    pert = perturbed_transitions(CHI, rabi, W_R_TILDE, ALPHA, closed_form=False)
    assert pert.omega0.shape == (2, 2)
    # unperturbed sector halves straddle the sector centers 0 and -chi
    np.testing.assert_allclose(pert.omega0[0].sum(), 0.0, atol=1e-9)
    np.testing.assert_allclose(pert.omega0[1].sum(), -2.0 * CHI, rtol=1e-12)
    # repulsion from a level below pushes both doublet halves up
    assert np.all(pert.shift > 0.0)


def test_crossing_root_matches_bisection_oracle():
    # frozen from 200 rounds of interval bisection on
    # sin(t1) + rabi sin(2 t1) / (2 alpha) = 1, t1 = atan2(2 rabi, -2 chi)
    est = find_crossing(CHI, ALPHA, calib_C=0.562)
    np.testing.assert_allclose(est.rabi / MHZ_TO_ANGULAR, 35.630511, atol=1e-5)
    np.testing.assert_allclose(
        est.rabi_small_chi / MHZ_TO_ANGULAR, 35.381432, atol=1e-5
    )
    np.testing.assert_allclose(est.power_dbm, -23.958285, atol=1e-5)
    np.testing.assert_allclose(est.power_dbm_small_chi, -24.019218, atol=1e-5)
    # the small-chi estimate is good to well under 25 percent here
    assert abs(est.rabi - est.rabi_small_chi) / est.rabi_small_chi < 0.25
    np.testing.assert_allclose(
        est.power_dbm, power_from_rabi(est.rabi, 0.562), rtol=1e-14
    )


def test_crossing_without_calibration_leaves_powers_unset():
    est = find_crossing(CHI, ALPHA)
    assert est.power_dbm is None
    assert est.power_dbm_small_chi is None
    assert est.rabi > 0.0


def test_crossing_root_satisfies_the_condition():
    est = find_crossing(CHI, ALPHA)
    t1 = np.arctan2(2.0 * est.rabi, -2.0 * CHI)
    residual = np.sin(t1) + est.rabi * np.sin(2.0 * t1) / (2.0 * ALPHA) - 1.0
    assert abs(residual) < 1e-10


def test_crossing_rejects_bad_signs():
    with pytest.raises(ValueError, match="chi"):
        find_crossing(-CHI, ALPHA)
    with pytest.raises(ValueError, match="alpha"):
        find_crossing(CHI, abs(ALPHA))


def test_no_crossing_for_large_dispersive_shift():
    # at chi = |alpha| / 2 the required drive exceeds the perturbative
    # bracket, so the condition never changes sign
    with pytest.raises(NoCrossing):
        find_crossing(0.5 * abs(ALPHA), ALPHA)


def test_resolvability_threshold_reference_values():
    lo = resolvability_threshold(0.5 * MHZ_TO_ANGULAR, -300.0 * MHZ_TO_ANGULAR)
    hi = resolvability_threshold(10.0 * MHZ_TO_ANGULAR, -300.0 * MHZ_TO_ANGULAR)
    np.testing.assert_allclose(lo / MHZ_TO_ANGULAR, 5.313293, atol=1e-5)
    np.testing.assert_allclose(hi / MHZ_TO_ANGULAR, 39.148676, atol=1e-5)
    with pytest.raises(ValueError, match="kappa"):
        resolvability_threshold(0.0, -1.0)
    with pytest.raises(ValueError, match="alpha"):
        resolvability_threshold(1.0, 1.0)


@given(kappa=st.floats(0.01, 100.0), alpha=st.floats(-5000.0, -1.0))
@settings(max_examples=100, deadline=None)
def test_resolvability_threshold_scaling(kappa, alpha):
    # chi_min grows as kappa^(2/3) and |alpha|^(1/3)
    base = resolvability_threshold(kappa, alpha)
    np.testing.assert_allclose(
        resolvability_threshold(8.0 * kappa, alpha), 4.0 * base, rtol=1e-12
    )
    np.testing.assert_allclose(
        resolvability_threshold(kappa, 8.0 * alpha), 2.0 * base, rtol=1e-12
    )


def test_dispersive_dressed_states_are_orthonormal():
    dev = reference_device()
    spec = HilbertSpec(2, 12)
    gbar, ebar = dispersive_dressed_states(dev, spec, n_photons=2)
    np.testing.assert_allclose(np.vdot(gbar, gbar), 1.0, atol=1e-14)
    np.testing.assert_allclose(np.vdot(ebar, ebar), 1.0, atol=1e-14)
    np.testing.assert_allclose(np.vdot(gbar, ebar), 0.0, atol=1e-14)
    # mixing amplitude matches g0 sqrt(n) / delta_0
    lam = dev.g0 * np.sqrt(2.0) / (dev.omega_01 - dev.omega_r)
    overlap = abs(np.vdot(spec.basis_state(1, 1), gbar))
    np.testing.assert_allclose(overlap, abs(lam) / np.hypot(1.0, lam), rtol=1e-12)


def test_dispersive_dressed_states_warn_when_mixing_grows():
    dev = reference_device()
    spec = HilbertSpec(2, 12)
    # g0 sqrt(9) / delta_0 = 0.32 for the reference device
    with pytest.warns(DispersiveValidityWarning):
        dispersive_dressed_states(dev, spec, n_photons=9)


def test_dispersive_dressed_states_validate_photon_number():
    dev = reference_device()
    spec = HilbertSpec(2, 4)
    with pytest.raises(ValueError, match="n_photons"):
        dispersive_dressed_states(dev, spec, n_photons=0)
    with pytest.raises(ValueError, match="n_photons"):
        dispersive_dressed_states(dev, spec, n_photons=4)


def test_driven_cavity_photon_lorentzian_shape():
    kappa = 3.09
    rabi = 0.4
    peak = driven_cavity_photon(0.0, kappa, rabi)
    np.testing.assert_allclose(peak, 4.0 * rabi**2 / kappa**2, rtol=1e-15)
    # half maximum sits exactly half a linewidth away
    np.testing.assert_allclose(
        driven_cavity_photon(0.5 * kappa, kappa, rabi), 0.5 * peak, rtol=1e-15
    )


def test_crossing_matches_device_dressed_shift():
    # the dressed chi of the reference device feeds straight into the
    # crossing estimate used elsewhere in the package
    dev = reference_device()
    chi = dressed_frequencies(dev)["chi"]
    np.testing.assert_allclose(chi, CHI, rtol=1e-12)
    est = find_crossing(chi, dev.alpha, calib_C=dev.calib_C)
    assert -27.0 < est.power_dbm < -21.0
