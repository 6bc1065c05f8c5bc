"""Core types and pure model functions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from winfree import (
    State,
    SystemParams,
    diffusion_coefficient,
    drift_first_order,
    drift_second_order,
    interaction_mean,
    normalize_inertia,
    observables,
)

from conftest import make_params, make_state


def finite_vectors(n, lo=-50.0, hi=50.0):
    return hnp.arrays(
        np.float64,
        n,
        elements=st.floats(lo, hi, allow_nan=False, allow_infinity=False),
    )


class TestSystemParams:
    def test_basic_fields(self):
        p = SystemParams(n=3, nu=[1.0, 2.0, 3.0], kappa=0.5, gamma=2.0)
        assert p.n == 3
        assert p.nu_c == 2.0
        assert p.d_nu == 2.0
        assert p.inertia == 1.0

    def test_nu_is_readonly_copy(self):
        src = np.array([1.0, 2.0, 3.0])
        p = SystemParams(n=3, nu=src, kappa=0.1, gamma=1.0)
        src[0] = 99.0
        assert p.nu[0] == 1.0
        with pytest.raises(ValueError):
            p.nu[0] = 7.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            SystemParams(n=4, nu=[1.0, 2.0], kappa=0.1, gamma=1.0)

    def test_nonfinite_nu(self):
        with pytest.raises(ValueError):
            SystemParams(n=2, nu=[1.0, math.nan], kappa=0.1, gamma=1.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n=0, nu=[], kappa=0.1, gamma=1.0),
            dict(n=2, nu=[1.0, 2.0], kappa=-0.1, gamma=1.0),
            dict(n=2, nu=[1.0, 2.0], kappa=0.1, gamma=0.0),
            dict(n=2, nu=[1.0, 2.0], kappa=0.1, gamma=1.0, inertia=0.0),
        ],
    )
    def test_rejects_bad_scalars(self, kwargs):
        with pytest.raises(ValueError):
            SystemParams(**kwargs)

    def test_frozen(self):
        p = make_params()
        with pytest.raises(AttributeError):
            p.kappa = 1.0


class TestState:
    def test_roundtrip(self):
        s = State(theta=[0.0, 1.0], omega=[2.0, 3.0])
        assert s.n == 2
        assert s.theta.dtype == np.float64
        with pytest.raises(ValueError):
            s.theta[0] = 5.0

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            State(theta=[0.0, 1.0], omega=[2.0])
        with pytest.raises(ValueError):
            State(theta=[[0.0]], omega=[0.0])
        with pytest.raises(ValueError):
            State(theta=[], omega=[])

    def test_nonfinite(self):
        with pytest.raises(ValueError):
            State(theta=[0.0, math.inf], omega=[0.0, 0.0])


class TestNormalizeInertia:
    def test_identity_at_unit_mass(self):
        p = make_params()
        assert normalize_inertia(p) is p

    def test_rescaling(self):
        p = SystemParams(n=2, nu=[4.0, 6.0], kappa=1.0, gamma=2.0, inertia=2.0)
        q = normalize_inertia(p)
        assert q.inertia == 1.0
        assert q.gamma == 1.0
        assert q.kappa == 0.5
        np.testing.assert_allclose(q.nu, [2.0, 3.0])

    def test_dynamics_equivalence(self):
        # the unit-mass system has exactly the original drift divided by m
        p = SystemParams(n=3, nu=[4.0, 5.0, 6.0], kappa=0.8, gamma=3.0, inertia=2.5)
        q = normalize_inertia(p)
        s = State(theta=[0.1, -0.2, 0.3], omega=[1.0, 2.0, 3.0])
        _, dw_p = drift_second_order(p, s)
        _, dw_q = drift_second_order(q, s)
        np.testing.assert_allclose(dw_q, dw_p / p.inertia, rtol=1e-15)


class TestInteractionMean:
    def test_known_values(self):
        assert interaction_mean([0.0, 0.0]) == 2.0
        assert interaction_mean([math.pi]) == pytest.approx(0.0, abs=1e-15)
        assert interaction_mean([0.0, math.pi]) == pytest.approx(1.0)

    @settings(deadline=None, max_examples=100)
    @given(theta=finite_vectors(7))
    def test_range(self, theta):
        ic = interaction_mean(theta)
        assert 0.0 <= ic <= 2.0

    @settings(deadline=None, max_examples=50)
    @given(theta=finite_vectors(5))
    def test_shift_by_two_pi(self, theta):
        a = interaction_mean(theta)
        b = interaction_mean(theta + 2.0 * math.pi)
        assert a == pytest.approx(b, abs=1e-12)


class TestDrifts:
    @settings(deadline=None, max_examples=60)
    @given(theta=finite_vectors(6), omega=finite_vectors(6))
    def test_second_order_formula(self, theta, omega):
        p = make_params(n=6, kappa=0.7, gamma=1.5, nu_center=9.0, nu_ramp=0.2)
        s = State(theta=theta, omega=omega)
        dtheta, domega = drift_second_order(p, s)
        np.testing.assert_array_equal(dtheta, s.omega)
        ic = np.mean(1.0 + np.cos(s.theta))
        expected = p.nu - p.gamma * s.omega - p.kappa * ic * np.sin(s.theta)
        np.testing.assert_allclose(domega, expected, rtol=1e-14, atol=1e-14)

    def test_first_order_formula(self):
        p = make_params(n=4, kappa=0.3, nu_center=5.0, nu_ramp=0.1)
        theta = np.array([0.0, 0.5, -0.5, 2.0])
        v = drift_first_order(p, theta)
        ic = np.mean(1.0 + np.cos(theta))
        np.testing.assert_allclose(v, p.nu - p.kappa * ic * np.sin(theta), rtol=1e-15)

    def test_length_checked(self):
        p = make_params(n=4)
        with pytest.raises(ValueError):
            drift_first_order(p, [0.0, 1.0])
        with pytest.raises(ValueError):
            drift_second_order(p, State(theta=[0.0], omega=[1.0]))

    def test_uncoupled_drift(self):
        # kappa = 0 leaves pure relaxation toward nu / gamma
        p = make_params(n=3, kappa=0.0, gamma=2.0, nu_center=8.0)
        s = make_state(n=3, omega=4.0)
        _, domega = drift_second_order(p, s)
        np.testing.assert_allclose(domega, p.nu - p.gamma * s.omega)


class TestDiffusion:
    def test_formula_and_zero_mean(self):
        s = State(theta=[0.0, 0.0, 0.0], omega=[1.0, 2.0, 6.0])
        d = diffusion_coefficient(s, 0.5)
        np.testing.assert_allclose(d, 0.5 * (s.omega - 3.0))
        assert abs(d.sum()) < 1e-14

    def test_sigma_zero(self):
        s = make_state()
        np.testing.assert_array_equal(diffusion_coefficient(s, 0.0), np.zeros(s.n))

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValueError):
            diffusion_coefficient(make_state(), -0.1)

    @settings(deadline=None, max_examples=60)
    @given(omega=finite_vectors(8), sigma=st.floats(0.0, 10.0))
    def test_mean_frequency_unperturbed(self, omega, sigma):
        s = State(theta=np.zeros(8), omega=omega)
        d = diffusion_coefficient(s, sigma)
        scale = max(1.0, float(np.abs(d).max()))
        assert abs(float(d.sum())) <= 8 * 2**-48 * scale


class TestObservables:
    def test_values(self):
        p = make_params(n=3, nu_center=6.0, nu_ramp=1.0)
        s = State(theta=[0.0, 1.0, 3.0], omega=[2.0, 4.0, 9.0])
        o = observables(s, p)
        assert o.theta_c == pytest.approx(4.0 / 3.0)
        assert o.omega_c == pytest.approx(5.0)
        assert o.nu_c == pytest.approx(6.0)
        assert o.diameter_theta == 3.0
        assert o.diameter_omega == 7.0
        assert o.i_c == pytest.approx(interaction_mean(s.theta))

    def test_single_oscillator(self):
        p = make_params(n=1, nu_center=3.0)
        s = State(theta=[0.7], omega=[1.0])
        o = observables(s, p)
        assert o.diameter_theta == 0.0
        assert o.diameter_omega == 0.0
