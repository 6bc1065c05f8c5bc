"""Compiled and reference kernels must tell the same story."""

import os
import subprocess
import sys

import numpy as np
import pytest

from winfree import NoiseSpec, backend_name, generate_brownian
from winfree.backends import _ref

try:
    from winfree.backends import _fast
except ImportError:
    _fast = None

from conftest import make_params, make_state, small_grid

needs_compiled = pytest.mark.skipif(_fast is None, reason="compiled backend not built")


def kernel_inputs(n=9, steps=400, kappa=0.6, sigma=0.25, seed=13):
    p = make_params(n=n, kappa=kappa, gamma=2.0, nu_center=8.0, nu_ramp=0.3)
    s = make_state(n=n, theta_ramp=0.25, omega=2.0)
    g = small_grid(steps=steps)
    path = generate_brownian(seed, g)
    sigma_vals = NoiseSpec.constant(sigma).values_on(g.times()[:-1])
    return p, s, g, path, sigma_vals


class TestBackendSelection:
    def test_backend_name(self):
        assert backend_name() in ("compiled", "python")

    def test_env_forces_python(self):
        code = "import winfree; print(winfree.backend_name())"
        out = subprocess.run(
            [sys.executable, "-c", code],
            env={**os.environ, "WINFREE_PURE_PYTHON": "1"},
            capture_output=True,
            text=True,
            check=True,
        )
        assert out.stdout.strip() == "python"

    def test_ref_backend_label(self):
        assert _ref.BACKEND_NAME == "python"


@needs_compiled
class TestCrossBackend:
    def test_euler_trajectory_agreement(self):
        p, s, g, _, _ = kernel_inputs()
        args = (s.theta, s.omega, p.nu, p.kappa, p.gamma, g.dt, g.steps)
        tf, of, bf = _fast.euler_trajectory(*args)
        tr, orr, br = _ref.euler_trajectory(*args)
        assert bf == br == -1
        np.testing.assert_allclose(np.asarray(tf), tr, rtol=1e-10, atol=1e-10)
        np.testing.assert_allclose(np.asarray(of), orr, rtol=1e-10, atol=1e-10)

    def test_em_trajectory_agreement(self):
        p, s, g, path, sigma_vals = kernel_inputs()
        args = (s.theta, s.omega, p.nu, p.kappa, p.gamma, g.dt, sigma_vals, path.increments)
        tf, of, bf = _fast.em_trajectory(*args)
        tr, orr, br = _ref.em_trajectory(*args)
        assert bf == br == -1
        np.testing.assert_allclose(np.asarray(tf), tr, rtol=1e-10, atol=1e-10)
        np.testing.assert_allclose(np.asarray(of), orr, rtol=1e-10, atol=1e-10)

    def test_em_scan_agreement(self):
        p, s, g, path, sigma_vals = kernel_inputs(steps=600)
        for threshold in (1.0, 2.5, 50.0):
            args = (
                s.theta, s.omega, p.nu, p.kappa, p.gamma, g.dt, sigma_vals,
                path.increments, threshold,
            )
            ef, supf, bf = _fast.em_scan(*args)
            er, supr, br = _ref.em_scan(*args)
            assert (ef, bf) == (er, br)
            if ef < 0:
                # both scanned the whole horizon; sup diameters must agree
                assert supf == pytest.approx(supr, rel=1e-10)

    def test_readonly_inputs_accepted(self):
        # model types hand the kernels non-writable arrays
        p, s, g, path, sigma_vals = kernel_inputs(steps=50)
        assert not s.theta.flags.writeable
        assert not path.increments.flags.writeable
        _fast.em_trajectory(
            s.theta, s.omega, p.nu, p.kappa, p.gamma, g.dt, sigma_vals, path.increments
        )


class TestScanSemantics:
    def scan(self, theta0, threshold, steps=50, sigma=0.0, seed=2):
        n = theta0.shape[0]
        p = make_params(n=n, kappa=0.1, gamma=2.0, nu_center=8.0)
        g = small_grid(steps=steps)
        path = generate_brownian(seed, g)
        sigma_vals = np.full(steps, float(sigma))
        from winfree import backends

        return backends.em_scan(
            theta0, np.full(n, 2.0), p.nu, p.kappa, p.gamma, g.dt, sigma_vals,
            path.increments, threshold,
        )

    def test_initial_diameter_counts(self):
        theta0 = np.array([0.0, 3.0])
        exit_step, _, bad = self.scan(theta0, threshold=2.0)
        assert bad == -1
        assert exit_step == 0

    def test_threshold_is_strict(self):
        # diameter exactly equal to the threshold does not exit at step 0
        theta0 = np.array([0.0, 2.0])
        exit_step, _, _ = self.scan(theta0, threshold=2.0)
        assert exit_step != 0

    def test_no_exit_below_threshold(self):
        theta0 = np.array([0.0, 0.01])
        exit_step, sup, bad = self.scan(theta0, threshold=50.0)
        assert (exit_step, bad) == (-1, -1)
        assert 0.0 <= sup < 50.0

    def test_sup_diameter_matches_trajectory(self):
        n = 5
        p = make_params(n=n, kappa=0.4, gamma=2.0, nu_center=8.0, nu_ramp=0.4)
        s = make_state(n=n, theta_ramp=0.3, omega=2.0)
        g = small_grid(steps=300)
        path = generate_brownian(21, g)
        sigma_vals = NoiseSpec.constant(0.2).values_on(g.times()[:-1])
        from winfree import backends

        thetas, _, _ = backends.em_trajectory(
            s.theta, s.omega, p.nu, p.kappa, p.gamma, g.dt, sigma_vals, path.increments
        )
        thetas = np.asarray(thetas)
        expected_sup = float((thetas.max(axis=1) - thetas.min(axis=1)).max())
        _, sup, _ = backends.em_scan(
            s.theta, s.omega, p.nu, p.kappa, p.gamma, g.dt, sigma_vals,
            path.increments, 1e9,
        )
        assert sup == pytest.approx(expected_sup, rel=1e-12)

    def test_sigma_zero_scan_matches_euler(self):
        n = 4
        p = make_params(n=n, kappa=0.4, gamma=2.0, nu_center=8.0, nu_ramp=0.4)
        s = make_state(n=n, theta_ramp=0.3, omega=2.0)
        g = small_grid(steps=200)
        from winfree import backends

        te, oe, _ = backends.euler_trajectory(
            s.theta, s.omega, p.nu, p.kappa, p.gamma, g.dt, g.steps
        )
        tm, om, _ = backends.em_trajectory(
            s.theta, s.omega, p.nu, p.kappa, p.gamma, g.dt,
            np.zeros(g.steps), generate_brownian(3, g).increments,
        )
        np.testing.assert_array_equal(np.asarray(te), np.asarray(tm))
        np.testing.assert_array_equal(np.asarray(oe), np.asarray(om))
