"""Trajectory analysis, Monte Carlo estimation and the bundled presets."""

import math

import numpy as np
import pytest
from scipy.stats import norm

from winfree import (
    NoiseSpec,
    PRESET_NAMES,
    State,
    SystemParams,
    TimeGrid,
    Trajectory,
    diagnostic_series,
    figure_preset,
    first_exit,
    generate_brownian,
    monte_carlo_locking,
    preset_document,
    rotation_numbers,
    simulate_stochastic,
)

from conftest import make_params, make_state, small_grid


def linear_trajectory(rho, dt=0.1, steps=10):
    """Phases moving at constant speeds rho, for exercising the analysis code."""
    rho = np.asarray(rho, dtype=np.float64)
    grid = TimeGrid(dt=dt, steps=steps)
    t = grid.times()[:, None]
    return Trajectory(grid=grid, thetas=t * rho, omegas=np.tile(rho, (steps + 1, 1)))


class TestRotationNumbers:
    def test_constant_speeds_recovered(self):
        rho = np.array([1.0, 2.0, 3.5])
        est = rotation_numbers(linear_trajectory(rho))
        np.testing.assert_allclose(est.per_oscillator, rho, rtol=1e-12)
        np.testing.assert_allclose(est.windowed, rho, rtol=1e-12)
        assert est.spread == pytest.approx(2.5, rel=1e-12)

    def test_windowed_discards_transient(self):
        # speed jumps from 0 to 2 at mid-horizon; the windowed estimate only
        # sees the second half
        grid = TimeGrid(dt=0.1, steps=10)
        t = grid.times()
        theta = np.where(t <= 0.5, 0.0, 2.0 * (t - 0.5))[:, None]
        traj = Trajectory(grid=grid, thetas=theta, omegas=np.zeros_like(theta))
        est = rotation_numbers(traj)
        assert est.windowed[0] == pytest.approx(2.0, rel=1e-12)
        assert est.per_oscillator[0] == pytest.approx(1.0, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            rotation_numbers(linear_trajectory(np.array([1.0]), steps=1))
        grid = TimeGrid(dt=0.1, steps=4, t0=-10.0)
        traj = Trajectory(grid=grid, thetas=np.zeros((5, 1)), omegas=np.zeros((5, 1)))
        with pytest.raises(ValueError):
            rotation_numbers(traj)


class TestFirstExit:
    def test_strict_exit(self):
        traj = linear_trajectory(np.array([0.0, 1.0]), dt=1.0, steps=4)
        # diameters are 0, 1, 2, 3, 4 at steps 0..4
        rep = first_exit(traj, 2.0)
        assert rep.exited and rep.exit_step == 3
        rep = first_exit(traj, 3.9)
        assert rep.exit_step == 4

    def test_initial_exit(self):
        grid = TimeGrid(dt=1.0, steps=2)
        thetas = np.array([[0.0, 5.0], [0.0, 5.0], [0.0, 5.0]])
        traj = Trajectory(grid=grid, thetas=thetas, omegas=np.zeros_like(thetas))
        rep = first_exit(traj, 1.0)
        assert rep.exit_step == 0

    def test_no_exit(self):
        traj = linear_trajectory(np.array([1.0, 1.0]))
        rep = first_exit(traj, 0.5)
        assert not rep.exited
        assert rep.exit_step is None

    def test_validation(self):
        with pytest.raises(ValueError):
            first_exit(linear_trajectory(np.array([1.0])), 0.0)


class TestDiagnosticSeries:
    def test_r_values(self):
        p = make_params(n=3, gamma=2.0)
        traj = linear_trajectory(np.array([1.0, 2.0, 4.0]), dt=0.5, steps=2)
        series = diagnostic_series(traj, p, (2, 0))
        t = traj.grid.times()
        for k, (r, q) in enumerate(series):
            theta_diff = 4.0 * t[k] - 1.0 * t[k]
            assert r == pytest.approx(3.0 + 2.0 * theta_diff, rel=1e-12)
            assert q is None

    def test_q_with_y_path(self):
        p = make_params(n=2, gamma=1.5)
        traj = linear_trajectory(np.array([0.0, 1.0]), dt=0.5, steps=2)
        y = np.array([1.0, 0.5, 0.25])
        series = diagnostic_series(traj, p, (1, 0), y_path=y)
        t = traj.grid.times()
        for k, (r, q) in enumerate(series):
            assert q == pytest.approx(y[k] * 1.0 + 1.5 * t[k], rel=1e-12)

    def test_validation(self):
        p = make_params(n=2)
        traj = linear_trajectory(np.array([0.0, 1.0]))
        with pytest.raises(IndexError):
            diagnostic_series(traj, p, (0, 5))
        with pytest.raises(ValueError):
            diagnostic_series(traj, p, (0, 1), y_path=np.ones(3))


def small_mc_setup(steps=150):
    p = make_params(n=6, kappa=0.4, gamma=2.0, nu_center=8.0, nu_ramp=0.2)
    s = make_state(n=6, theta_ramp=0.05, omega=4.0)
    g = small_grid(steps=steps)
    return p, s, g, NoiseSpec.hyperbolic(4.0)


class TestMonteCarlo:
    def test_counts_consistent(self):
        p, s, g, noise = small_mc_setup()
        res = monte_carlo_locking(p, s, g, noise, 2.0, 40, 123, n_workers=1)
        assert res.n_paths == 40
        assert 0 <= res.n_bounded <= 40
        assert res.empirical_prob == res.n_bounded / 40
        assert res.master_seed == 123

    def test_worker_count_invariant(self):
        p, s, g, noise = small_mc_setup()
        results = [
            monte_carlo_locking(p, s, g, noise, 2.0, 30, 99, n_workers=w)
            for w in (1, 2, 5)
        ]
        assert results[0].to_dict() == results[1].to_dict() == results[2].to_dict()

    def test_repeat_runs_identical(self):
        p, s, g, noise = small_mc_setup()
        a = monte_carlo_locking(p, s, g, noise, 2.0, 25, 7, n_workers=2)
        b = monte_carlo_locking(p, s, g, noise, 2.0, 25, 7, n_workers=2)
        assert a.to_dict() == b.to_dict()

    def test_seed_changes_outcome_stream(self):
        # different master seeds draw different path families; with a
        # borderline threshold the counts should usually differ, but at the
        # very least the per-path streams must differ
        g = small_grid(steps=50)
        a = generate_brownian(1, g, stream=0)
        b = generate_brownian(2, g, stream=0)
        assert not np.array_equal(a.increments, b.increments)

    def test_matches_direct_simulation(self):
        # the scan must agree with simulating each path and thresholding
        p, s, g, noise = small_mc_setup()
        threshold = 1.2
        n_paths = 12
        seed = 31
        expected_bounded = 0
        for k in range(n_paths):
            path = generate_brownian(seed, g, stream=k)
            traj = simulate_stochastic(p, s, g, noise, path)
            if not first_exit(traj, threshold).exited:
                expected_bounded += 1
        res = monte_carlo_locking(p, s, g, noise, threshold, n_paths, seed, n_workers=2)
        assert res.n_bounded == expected_bounded

    def test_wilson_interval_against_scipy(self):
        p, s, g, noise = small_mc_setup()
        res = monte_carlo_locking(p, s, g, noise, 2.0, 40, 123, n_workers=1)
        z = norm.ppf(0.975)
        ph = res.empirical_prob
        n = res.n_paths
        denom = 1.0 + z * z / n
        center = (ph + z * z / (2 * n)) / denom
        half = z * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / denom
        lo, hi = res.wilson_ci_95
        assert lo == pytest.approx(max(0.0, center - half), abs=1e-12)
        assert hi == pytest.approx(min(1.0, center + half), abs=1e-12)
        assert 0.0 <= lo <= ph
        assert hi <= 1.0

    def test_theoretical_bound_optional(self):
        p, s, g, noise = small_mc_setup(steps=30)
        res = monte_carlo_locking(p, s, g, noise, 2.0, 4, 5, n_workers=1)
        assert res.theoretical_bound is None
        res = monte_carlo_locking(p, s, g, noise, 2.0, 4, 5, delta=0.07, n_workers=1)
        assert res.theoretical_bound == pytest.approx(
            1.0 - 2.0 * math.exp(-(0.07**2) / (2.0 * 0.25**2))
        )

    def test_aborted_paths_count_as_exited(self):
        # a grid with gamma dt >> 1 overflows every path
        p = make_params(n=3, kappa=0.0, gamma=100.0, nu_center=1.0)
        s = make_state(n=3, omega=1.0)
        g = TimeGrid(dt=1e5, steps=60)
        with np.errstate(over="ignore", invalid="ignore"):
            res = monte_carlo_locking(p, s, g, NoiseSpec.zero(), 1e6, 3, 11, n_workers=1)
        assert res.n_bounded == 0
        assert res.empirical_prob == 0.0
        assert res.aborted_paths == (0, 1, 2)

    def test_validation(self):
        p, s, g, noise = small_mc_setup(steps=10)
        with pytest.raises(ValueError):
            monte_carlo_locking(p, s, g, noise, 2.0, 0, 1)
        with pytest.raises(ValueError):
            monte_carlo_locking(p, s, g, noise, -1.0, 5, 1)
        with pytest.raises(ValueError):
            monte_carlo_locking(p, make_state(n=3), g, noise, 2.0, 5, 1)


class TestPresets:
    def test_names(self):
        assert PRESET_NAMES == ("fig1", "fig2a", "fig2c", "fig3", "fig4a", "fig4b")

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            preset_document("fig9")

    def test_documents_isolated(self):
        doc = preset_document("fig1")
        doc["params"]["kappa"] = 999.0
        assert preset_document("fig1")["params"]["kappa"] != 999.0

    def test_all_presets_parse(self):
        for name in PRESET_NAMES:
            cfg = figure_preset(name)
            assert cfg.params.n == 21
            assert cfg.grid.dt == 0.01

    def test_fig1_shape(self):
        cfg = figure_preset("fig1")
        p = cfg.params
        assert (p.kappa, p.gamma) == (0.2, 4.0)
        assert p.nu_c == pytest.approx(128.0)
        # ramped phases spanning 0.08, all frequencies at 32
        assert cfg.initial.theta.max() - cfg.initial.theta.min() == pytest.approx(0.08)
        np.testing.assert_allclose(cfg.initial.omega, 32.0)
        assert cfg.theory.big_d == pytest.approx(0.1)
        assert cfg.noise is None

    def test_fig2_pair(self):
        a, c = figure_preset("fig2a"), figure_preset("fig2c")
        assert a.params.kappa == 1.0
        assert c.params.kappa == 50.0
        # identical apart from the coupling
        np.testing.assert_array_equal(a.initial.theta, c.initial.theta)
        np.testing.assert_array_equal(a.params.nu, c.params.nu)
        d0 = a.initial.theta.max() - a.initial.theta.min()
        assert d0 == pytest.approx(4.0 * math.pi / 3.0)

    def test_fig3_shape(self):
        cfg = figure_preset("fig3")
        assert (cfg.params.kappa, cfg.params.gamma) == (0.1, 5.0)
        assert cfg.params.nu_c == pytest.approx(12.0)
        assert cfg.params.d_nu == 0.0
        assert cfg.noise.family == "hyperbolic"
        assert cfg.noise.l2_norm == pytest.approx(0.02)
        assert cfg.theory.delta == pytest.approx(math.sqrt(math.log(9.0)) / 50.0)
        assert cfg.monte_carlo.n_paths == 5000
        assert cfg.monte_carlo.threshold == pytest.approx(0.08)

    def test_fig4_pair(self):
        a, b = figure_preset("fig4a"), figure_preset("fig4b")
        assert a.params.kappa == 1.0
        assert b.params.kappa == 5.0
        assert a.monte_carlo.n_paths == b.monte_carlo.n_paths == 500
        assert a.monte_carlo.threshold == pytest.approx(4.0 * math.pi / 3.0)
        assert a.noise.family == "hyperbolic"
        assert a.noise.sup_norm == pytest.approx(0.5)
        assert a.monte_carlo.master_seed != b.monte_carlo.master_seed
