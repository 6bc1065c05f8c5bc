"""Core types and pure functions for the second-order Winfree system.

Each of N all-to-all coupled oscillators carries an unwrapped phase theta_i
and a frequency omega_i. The frequency relaxes with friction gamma toward the
natural frequency nu_i and is pushed by the pulse coupling

    -kappa * I_c(theta) * sin(theta_i),   I_c(theta) = mean(1 + cos(theta_j)),

which is the classical Winfree interaction averaged over the population. The
stochastic variant perturbs each frequency by a common scalar Brownian
increment with amplitude sigma_t * (omega_i - mean(omega)).
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SystemParams",
    "State",
    "Observables",
    "normalize_inertia",
    "drift_first_order",
    "drift_second_order",
    "diffusion_coefficient",
    "observables",
]


def _as_float_vector(x, n, what):
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise ValueError(f"{what} must be a length-{n} vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite entries")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SystemParams:
    """Static parameters of one oscillator population.

    nu is the vector of natural frequencies (rad per time unit), kappa the
    coupling strength, gamma the friction coefficient and inertia the common
    mass m. Most formulas assume m = 1; use normalize_inertia to rescale.
    """

    n: int
    nu: np.ndarray
    kappa: float
    gamma: float
    inertia: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not (self.gamma > 0):
            raise ValueError("gamma must be positive")
        if not (self.kappa >= 0):
            raise ValueError("kappa must be nonnegative")
        if not (self.inertia > 0):
            raise ValueError("inertia must be positive")
        object.__setattr__(self, "nu", _as_float_vector(self.nu, self.n, "nu"))

    @property
    def nu_c(self):
        """Mean natural frequency."""
        return float(np.mean(self.nu))

    @property
    def d_nu(self):
        """Spread (max minus min) of the natural frequencies."""
        return float(np.max(self.nu) - np.min(self.nu))


@dataclass(frozen=True)
class State:
    """Instantaneous phases (unwrapped, never reduced mod 2 pi) and frequencies."""

    theta: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=np.float64)
        if theta.ndim != 1 or theta.shape[0] < 1:
            raise ValueError(f"theta must be a nonempty vector, got shape {theta.shape}")
        object.__setattr__(self, "theta", _as_float_vector(theta, theta.shape[0], "theta"))
        object.__setattr__(self, "omega", _as_float_vector(self.omega, self.theta.shape[0], "omega"))

    @property
    def n(self):
        return self.theta.shape[0]


@dataclass(frozen=True)
class Observables:
    """Scalar summaries of a state: means, diameters and the interaction mean."""

    theta_c: float
    omega_c: float
    nu_c: float
    diameter_theta: float
    diameter_omega: float
    i_c: float


def normalize_inertia(params):
    """Rescale a system with mass m to the equivalent unit-mass system.

    Dividing gamma, nu and kappa by m leaves the dynamics of (theta, omega)
    unchanged while making inertia equal to 1. The identity transformation
    when m is already 1.
    """
    m = params.inertia
    if m == 1.0:
        return params
    return SystemParams(
        n=params.n,
        nu=params.nu / m,
        kappa=params.kappa / m,
        gamma=params.gamma / m,
        inertia=1.0,
    )


def interaction_mean(theta):
    """I_c(theta) = mean over j of 1 + cos(theta_j), a number in [0, 2]."""
    theta = np.asarray(theta, dtype=np.float64)
    return float(np.mean(1.0 + np.cos(theta)))


def _check_length(params, vec, what):
    if np.asarray(vec).shape[0] != params.n:
        raise ValueError(f"{what} has length {np.asarray(vec).shape[0]}, expected {params.n}")


def drift_first_order(params, theta):
    """Phase velocity of the first-order (inertia-free) system.

    Component i is nu_i - kappa * I_c(theta) * sin(theta_i).
    """
    _check_length(params, theta, "theta")
    theta = np.asarray(theta, dtype=np.float64)
    ic = np.mean(1.0 + np.cos(theta))
    return params.nu - params.kappa * ic * np.sin(theta)


def drift_second_order(params, state):
    """Drift of the inertial system: (phase velocity, frequency velocity).

    The phase velocity is omega. The frequency velocity of component i is
    -gamma * omega_i + nu_i - kappa * I_c(theta) * sin(theta_i).
    """
    _check_length(params, state.theta, "theta")
    theta = state.theta
    omega = state.omega
    ic = np.mean(1.0 + np.cos(theta))
    domega = params.nu - params.gamma * omega - params.kappa * ic * np.sin(theta)
    return omega.copy(), domega


def diffusion_coefficient(state, sigma_t):
    """Per-oscillator noise amplitude sigma_t * (omega_i - mean(omega)).

    All oscillators share one Brownian increment, so this vector times dB is
    the full noise term. Its components sum to zero in exact arithmetic,
    which keeps the mean frequency noise-free.
    """
    if sigma_t < 0:
        raise ValueError("sigma_t must be nonnegative")
    omega = state.omega
    return sigma_t * (omega - np.mean(omega))


def observables(state, params):
    """Compute means, diameters (max minus min) and the interaction mean."""
    theta = state.theta
    omega = state.omega
    return Observables(
        theta_c=float(np.mean(theta)),
        omega_c=float(np.mean(omega)),
        nu_c=params.nu_c,
        diameter_theta=float(np.max(theta) - np.min(theta)),
        diameter_omega=float(np.max(omega) - np.min(omega)),
        i_c=interaction_mean(theta),
    )
