"""Time-stepping engines and reproducible Brownian path generation.

Deterministic runs use explicit Euler (the workhorse, backed by the compiled
kernel when available) or classical RK4 (a slower high-accuracy reference).
Stochastic runs use explicit Euler-Maruyama where all oscillators share one
scalar Brownian increment per step and both drift and noise intensity are
evaluated at the left endpoint.

Brownian increments come from the counter-based Philox generator keyed by
(seed, stream), so any path is reproducible bit-for-bit from its two integers
without generating any other path.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import backends
from .model import State, normalize_inertia, observables

__all__ = [
    "TimeGrid",
    "BrownianPath",
    "Trajectory",
    "SimulationAbort",
    "euler_step",
    "rk4_step",
    "euler_maruyama_step",
    "generate_brownian",
    "simulate_deterministic",
    "simulate_stochastic",
    "simulate_first_order",
    "simulate_y_process",
]


class SimulationAbort(RuntimeError):
    """A trajectory produced a non-finite state; carries the offending step index."""

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"non-finite state at step {step}")


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_k = t0 + k * dt for k = 0 .. steps.

    Grid times are always recomputed from k, never accumulated, so t_k is
    the same floating-point number no matter how it is reached.
    """

    dt: float
    steps: int
    t0: float = 0.0

    def __post_init__(self):
        if not (self.dt > 0):
            raise ValueError("dt must be positive")
        if self.steps < 1:
            raise ValueError("steps must be at least 1")

    def times(self):
        return self.t0 + self.dt * np.arange(self.steps + 1)

    def time_at(self, k):
        return self.t0 + self.dt * k

    @property
    def t_end(self):
        return self.t0 + self.dt * self.steps


@dataclass(frozen=True)
class BrownianPath:
    """One scalar Brownian path sampled on a grid.

    increments[k] is B_{t_{k+1}} - B_{t_k}, Normal(0, dt). running_sum has
    one more entry than increments with running_sum[0] = 0, so
    running_sum[k] = B_{t_k}.
    """

    seed: int
    stream: int
    dt: float
    increments: np.ndarray
    running_sum: np.ndarray

    @property
    def steps(self):
        return self.increments.shape[0]


def generate_brownian(seed, grid, stream=0):
    """Generate the (seed, stream) Brownian path on the given grid.

    Uses numpy's Philox counter-based generator keyed by the two integers,
    which makes every (seed, stream) pair an independent, individually
    reproducible path.
    """
    rng = np.random.Generator(np.random.Philox(key=[int(seed), int(stream)]))
    increments = rng.standard_normal(grid.steps) * math.sqrt(grid.dt)
    running = np.concatenate(([0.0], np.cumsum(increments)))
    increments.flags.writeable = False
    running.flags.writeable = False
    return BrownianPath(
        seed=int(seed), stream=int(stream), dt=grid.dt, increments=increments, running_sum=running
    )


@dataclass
class Trajectory:
    """A simulated path: grid plus per-step phases, frequencies and summaries.

    thetas and omegas have shape (steps + 1, n). The scalar series (diameters,
    means, interaction mean) are precomputed arrays; states and observables
    expose the same data as per-step objects.
    """

    grid: TimeGrid
    thetas: np.ndarray
    omegas: np.ndarray
    params: object = None
    diameter_theta: np.ndarray = field(init=False)
    diameter_omega: np.ndarray = field(init=False)
    theta_c_series: np.ndarray = field(init=False)
    omega_c_series: np.ndarray = field(init=False)
    i_c_series: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.thetas.shape != self.omegas.shape:
            raise ValueError("thetas and omegas must have the same shape")
        if self.thetas.shape[0] != self.grid.steps + 1:
            raise ValueError("trajectory length must equal steps + 1")
        if not (np.all(np.isfinite(self.thetas)) and np.all(np.isfinite(self.omegas))):
            raise ValueError("trajectory contains non-finite values")
        self.diameter_theta = self.thetas.max(axis=1) - self.thetas.min(axis=1)
        self.diameter_omega = self.omegas.max(axis=1) - self.omegas.min(axis=1)
        self.theta_c_series = self.thetas.mean(axis=1)
        self.omega_c_series = self.omegas.mean(axis=1)
        self.i_c_series = (1.0 + np.cos(self.thetas)).mean(axis=1)

    @property
    def times(self):
        return self.grid.times()

    @property
    def n(self):
        return self.thetas.shape[1]

    @cached_property
    def states(self):
        return [State(theta=self.thetas[k], omega=self.omegas[k]) for k in range(self.thetas.shape[0])]

    @cached_property
    def observables(self):
        if self.params is None:
            raise ValueError("trajectory has no params attached")
        return [observables(s, self.params) for s in self.states]


# ---------------------------------------------------------------------------
# single steps (duck-typed on params so tests may bypass invariants, e.g. gamma = 0)


def _freq_drift(params, theta, omega):
    n = theta.shape[0]
    ic = (1.0 + np.cos(theta)).sum() / n
    return params.nu - params.gamma * omega - params.kappa * ic * np.sin(theta)


def euler_step(params, state, dt):
    """One explicit Euler step; drift evaluated once at the pre-step state."""
    if not (dt > 0):
        raise ValueError("dt must be positive")
    theta = state.theta
    omega = state.omega
    o2 = omega + dt * _freq_drift(params, theta, omega)
    t2 = theta + dt * omega
    if not (np.all(np.isfinite(t2)) and np.all(np.isfinite(o2))):
        raise SimulationAbort(0, "non-finite state after Euler step")
    return State(theta=t2, omega=o2)


def euler_maruyama_step(params, state, sigma_t, dt, dB):
    """One Euler-Maruyama step with the shared increment dB.

    The noise term sigma_t * (omega_i - mean(omega)) * dB uses the pre-step
    state; with sigma_t = 0 the arithmetic is identical to euler_step.
    """
    if not (dt > 0):
        raise ValueError("dt must be positive")
    if sigma_t < 0:
        raise ValueError("sigma_t must be nonnegative")
    theta = state.theta
    omega = state.omega
    o2 = omega + dt * _freq_drift(params, theta, omega)
    if sigma_t != 0.0:
        oc = omega.sum() / omega.shape[0]
        o2 = o2 + (sigma_t * dB) * (omega - oc)
    t2 = theta + dt * omega
    if not (np.all(np.isfinite(t2)) and np.all(np.isfinite(o2))):
        raise SimulationAbort(0, "non-finite state after Euler-Maruyama step")
    return State(theta=t2, omega=o2)


def rk4_step(params, state, dt):
    """One classical Runge-Kutta step on the coupled (theta, omega) system."""
    if not (dt > 0):
        raise ValueError("dt must be positive")
    t0, o0 = state.theta, state.omega

    def f(theta, omega):
        return omega, _freq_drift(params, theta, omega)

    k1t, k1o = f(t0, o0)
    k2t, k2o = f(t0 + 0.5 * dt * k1t, o0 + 0.5 * dt * k1o)
    k3t, k3o = f(t0 + 0.5 * dt * k2t, o0 + 0.5 * dt * k2o)
    k4t, k4o = f(t0 + dt * k3t, o0 + dt * k3o)
    t2 = t0 + dt / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
    o2 = o0 + dt / 6.0 * (k1o + 2.0 * k2o + 2.0 * k3o + k4o)
    if not (np.all(np.isfinite(t2)) and np.all(np.isfinite(o2))):
        raise SimulationAbort(0, "non-finite state after RK4 step")
    return State(theta=t2, omega=o2)


# ---------------------------------------------------------------------------
# full trajectories


def _prepare(params, initial, coupling_scale):
    p = normalize_inertia(params)
    if initial.n != p.n:
        raise ValueError(f"initial state has {initial.n} oscillators, params expect {p.n}")
    kappa_eff = p.kappa * coupling_scale
    return p, kappa_eff


def simulate_deterministic(params, initial, grid, method="euler", coupling_scale=1.0):
    """Integrate the deterministic system over the grid.

    method is "euler" (default, compiled kernel when available) or "rk4"
    (pure-python reference). coupling_scale multiplies kappa inside the
    dynamics only; scale n restores the population-summed coupling variant.
    Raises SimulationAbort when a non-finite state appears.
    """
    p, kappa_eff = _prepare(params, initial, coupling_scale)
    if method == "euler":
        thetas, omegas, bad = backends.euler_trajectory(
            initial.theta, initial.omega, p.nu, kappa_eff, p.gamma, grid.dt, grid.steps
        )
        if bad >= 0:
            raise SimulationAbort(bad)
        return Trajectory(grid=grid, thetas=thetas, omegas=omegas, params=p)
    if method == "rk4":
        run_params = _ScaledParams(p, kappa_eff)
        thetas = np.empty((grid.steps + 1, p.n))
        omegas = np.empty((grid.steps + 1, p.n))
        state = State(theta=initial.theta, omega=initial.omega)
        thetas[0] = state.theta
        omegas[0] = state.omega
        for k in range(grid.steps):
            try:
                state = rk4_step(run_params, state, grid.dt)
            except SimulationAbort:
                raise SimulationAbort(k + 1)
            thetas[k + 1] = state.theta
            omegas[k + 1] = state.omega
        return Trajectory(grid=grid, thetas=thetas, omegas=omegas, params=p)
    raise ValueError(f"unknown method {method!r}")


class _ScaledParams:
    """Params view with kappa replaced by the effective coupling."""

    def __init__(self, params, kappa_eff):
        self.n = params.n
        self.nu = params.nu
        self.gamma = params.gamma
        self.kappa = kappa_eff


def simulate_stochastic(params, initial, grid, noise, path, coupling_scale=1.0):
    """Integrate the stochastic system along one Brownian path.

    The noise intensity is sampled at the left endpoint of every step. The
    result is a deterministic function of all inputs; a zero noise spec
    reproduces simulate_deterministic bit for bit.
    """
    p, kappa_eff = _prepare(params, initial, coupling_scale)
    if path.steps != grid.steps:
        raise ValueError(f"Brownian path has {path.steps} steps, grid has {grid.steps}")
    sigma_vals = noise.values_on(grid.times()[:-1])
    thetas, omegas, bad = backends.em_trajectory(
        initial.theta, initial.omega, p.nu, kappa_eff, p.gamma, grid.dt, sigma_vals, path.increments
    )
    if bad >= 0:
        raise SimulationAbort(bad)
    return Trajectory(grid=grid, thetas=thetas, omegas=omegas, params=p)


def simulate_first_order(params, theta0, grid, coupling_scale=1.0):
    """Integrate the inertia-free model; omegas hold the phase velocities."""
    p = normalize_inertia(params)
    theta0 = np.asarray(theta0, dtype=np.float64)
    if theta0.shape[0] != p.n:
        raise ValueError(f"theta0 has length {theta0.shape[0]}, params expect {p.n}")
    kappa_eff = p.kappa * coupling_scale
    thetas = np.empty((grid.steps + 1, p.n))
    omegas = np.empty((grid.steps + 1, p.n))
    t = theta0.copy()
    for k in range(grid.steps + 1):
        ic = (1.0 + np.cos(t)).sum() / p.n
        v = p.nu - kappa_eff * ic * np.sin(t)
        thetas[k] = t
        omegas[k] = v
        if not np.all(np.isfinite(t)):
            raise SimulationAbort(k)
        if k < grid.steps:
            t = t + grid.dt * v
    return Trajectory(grid=grid, thetas=thetas, omegas=omegas, params=p)


def simulate_y_process(noise, path, y0, grid):
    """Integrate dY = sigma^2/2 Y dt - sigma Y dB two ways.

    Returns (em_path, exact_path): the Euler-Maruyama iteration and the exact
    exponential representation y0 * exp(-sum sigma(t_j) dB_j) evaluated with
    the same increments. Used as the strong-convergence oracle for the
    Euler-Maruyama implementation.
    """
    if y0 <= 0:
        raise ValueError("y0 must be positive")
    if path.steps != grid.steps:
        raise ValueError("path and grid disagree on step count")
    sig = noise.values_on(grid.times()[:-1])
    dB = path.increments
    em = np.empty(grid.steps + 1)
    em[0] = y0
    y = y0
    for k in range(grid.steps):
        y = y + grid.dt * 0.5 * sig[k] ** 2 * y - sig[k] * y * dB[k]
        em[k + 1] = y
    exact = y0 * np.exp(-np.concatenate(([0.0], np.cumsum(sig * dB))))
    return em, exact
