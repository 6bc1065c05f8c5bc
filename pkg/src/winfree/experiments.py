"""Experiment drivers: rotation numbers, exit detection, Monte Carlo locking
probabilities and the bundled figure presets.

The presets reproduce six published parameter sets (fig1, fig2a, fig2c, fig3,
fig4a, fig4b): a tightly spread deterministic population that locks, a
coupling contrast with widely spread phases, a stochastic population whose
sample paths stay inside their initial diameter and a stochastic coupling
contrast. All use 21 oscillators and step size 0.01.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import backends
from .model import normalize_inertia
from .theory import prob_lower_bound

__all__ = [
    "MonteCarloResult",
    "RotationEstimate",
    "ExitReport",
    "rotation_numbers",
    "first_exit",
    "diagnostic_series",
    "monte_carlo_locking",
    "figure_preset",
    "PRESET_NAMES",
]

_WILSON_Z = 1.959963984540054  # two-sided 95 percent normal quantile


@dataclass(frozen=True)
class MonteCarloResult:
    """Aggregate of many stochastic runs against one diameter threshold."""

    n_paths: int
    n_bounded: int
    empirical_prob: float
    wilson_ci_95: Tuple[float, float]
    theoretical_bound: Optional[float]
    master_seed: int
    aborted_paths: Tuple[int, ...] = ()

    def to_dict(self):
        return {
            "n_paths": self.n_paths,
            "n_bounded": self.n_bounded,
            "empirical_prob": self.empirical_prob,
            "wilson_ci_95": list(self.wilson_ci_95),
            "theoretical_bound": self.theoretical_bound,
            "master_seed": self.master_seed,
            "aborted_paths": list(self.aborted_paths),
        }


@dataclass(frozen=True)
class RotationEstimate:
    """Finite-time rotation numbers theta_i(T)/T.

    windowed uses only the second half of the horizon, which discards the
    transient; its spread (max minus min) is the headline locking indicator.
    """

    per_oscillator: np.ndarray
    windowed: np.ndarray
    spread: float


@dataclass(frozen=True)
class ExitReport:
    """First grid index where the phase diameter strictly exceeded a threshold."""

    threshold: float
    exit_step: Optional[int]
    exited: bool


def rotation_numbers(traj):
    """Estimate rotation numbers from a trajectory.

    Returns full-horizon estimates theta_i(T)/T together with second-half
    windowed estimates and the windowed spread.
    """
    grid = traj.grid
    if grid.steps < 2:
        raise ValueError("rotation numbers need at least 2 steps")
    t_end = grid.t_end
    if t_end <= 0:
        raise ValueError("rotation numbers need a positive end time")
    k_half = grid.steps // 2
    t_half = grid.time_at(k_half)
    per = traj.thetas[-1] / t_end
    windowed = (traj.thetas[-1] - traj.thetas[k_half]) / (t_end - t_half)
    return RotationEstimate(
        per_oscillator=per,
        windowed=windowed,
        spread=float(windowed.max() - windowed.min()),
    )


def first_exit(traj, threshold):
    """Detect the first step with phase diameter strictly above threshold."""
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    above = np.nonzero(traj.diameter_theta > threshold)[0]
    if above.shape[0] == 0:
        return ExitReport(threshold=threshold, exit_step=None, exited=False)
    return ExitReport(threshold=threshold, exit_step=int(above[0]), exited=True)


def diagnostic_series(traj, params, pair, y_path=None):
    """Per-step comparison quantities for one oscillator pair (i, j).

    Each element is (R_ij, Q_ij) with R_ij = omega_ij + gamma * theta_ij. The
    noise-rescaled Q_ij = Y * omega_ij + gamma * theta_ij is filled in when a
    Y-process path aligned with the grid is supplied, otherwise None.
    """
    i, j = pair
    n = traj.thetas.shape[1]
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"pair {pair} out of range for {n} oscillators")
    g = params.gamma
    th = traj.thetas[:, i] - traj.thetas[:, j]
    om = traj.omegas[:, i] - traj.omegas[:, j]
    r = om + g * th
    if y_path is None:
        return [(float(rv), None) for rv in r]
    y = np.asarray(y_path, dtype=np.float64)
    if y.shape[0] != traj.thetas.shape[0]:
        raise ValueError("y_path must align with the trajectory grid")
    q = y * om + g * th
    return list(zip((float(v) for v in r), (float(v) for v in q)))


# ---------------------------------------------------------------------------
# Monte Carlo


def _scan_batch(payload):
    """Worker: run a contiguous block of paths, return (n_exited, aborted)."""
    (theta0, omega0, nu, kappa_eff, gamma, dt, sigma_vals, threshold, master_seed, start, stop) = payload
    steps = sigma_vals.shape[0]
    sqrt_dt = math.sqrt(dt)
    n_exited = 0
    aborted = []
    for k in range(start, stop):
        rng = np.random.Generator(np.random.Philox(key=[master_seed, k]))
        dB = rng.standard_normal(steps) * sqrt_dt
        exit_step, _sup, bad = backends.em_scan(
            theta0, omega0, nu, kappa_eff, gamma, dt, sigma_vals, dB, threshold
        )
        if bad >= 0:
            aborted.append(k)
            n_exited += 1
        elif exit_step >= 0:
            n_exited += 1
    return n_exited, aborted


def _wilson_interval(n_bounded, n_paths):
    z = _WILSON_Z
    p_hat = n_bounded / n_paths
    denom = 1.0 + z * z / n_paths
    center = (p_hat + z * z / (2.0 * n_paths)) / denom
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / n_paths + z * z / (4.0 * n_paths * n_paths)) / denom
    # rounding can push the limits a few ulp outside [0, 1]
    return max(0.0, center - half), min(1.0, center + half)


def monte_carlo_locking(
    params,
    initial,
    grid,
    noise,
    threshold,
    n_paths,
    master_seed,
    *,
    delta=None,
    n_workers=None,
    coupling_scale=1.0,
):
    """Estimate the probability that the phase diameter never exceeds threshold.

    Path k draws its Brownian increments from the (master_seed, k) stream, so
    the result is a deterministic function of the inputs and is independent
    of n_workers. Paths that produce non-finite states count as exited and
    their indices are recorded. The attached theoretical bound is the
    Bernstein probability for the given delta, or None when delta is omitted.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be at least 1")
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    p = normalize_inertia(params)
    if initial.n != p.n:
        raise ValueError("initial state size mismatch")
    sigma_vals = noise.values_on(grid.times()[:-1])
    kappa_eff = p.kappa * coupling_scale
    base = (
        np.ascontiguousarray(initial.theta),
        np.ascontiguousarray(initial.omega),
        np.ascontiguousarray(p.nu),
        kappa_eff,
        p.gamma,
        grid.dt,
        np.ascontiguousarray(sigma_vals),
        threshold,
        int(master_seed),
    )
    if n_workers is None:
        n_workers = os.cpu_count() or 1
    n_workers = max(1, min(int(n_workers), n_paths))

    if n_workers == 1:
        n_exited, aborted = _scan_batch(base + (0, n_paths))
    else:
        # contiguous blocks, one per worker, merged in path order
        bounds = np.linspace(0, n_paths, n_workers + 1).astype(int)
        payloads = [base + (int(bounds[w]), int(bounds[w + 1])) for w in range(n_workers)]
        n_exited = 0
        aborted = []
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            for cnt, ab in pool.map(_scan_batch, payloads):
                n_exited += cnt
                aborted.extend(ab)

    n_bounded = n_paths - n_exited
    bound = None if delta is None else prob_lower_bound(delta, noise.l2_norm)
    return MonteCarloResult(
        n_paths=n_paths,
        n_bounded=n_bounded,
        empirical_prob=n_bounded / n_paths,
        wilson_ci_95=_wilson_interval(n_bounded, n_paths),
        theoretical_bound=bound,
        master_seed=int(master_seed),
        aborted_paths=tuple(sorted(aborted)),
    )


# ---------------------------------------------------------------------------
# figure presets

_THETA_RAMP_WIDE = 2.0 * math.pi / 30.0  # spans a diameter of 4 pi / 3 over 21 oscillators
_FOUR_PI_3 = 4.0 * math.pi / 3.0

_FIG1 = {
    "schema_version": 1,
    "model": "second_order_det",
    "params": {"n": 21, "kappa": 0.2, "gamma": 4.0, "inertia": 1.0,
               "nu": {"center": 128.0, "ramp": 1e-4}},
    "initial": {"theta": {"ramp": 4e-3}, "omega": {"center": 32.0}},
    "grid": {"dt": 0.01, "steps": 500},
    "analysis": {"rotation": True, "exit_threshold": 0.1},
    "theory": {"big_d": 0.1},
    "output": {"format": "csv"},
}

_FIG2A = {
    "schema_version": 1,
    "model": "second_order_det",
    "params": {"n": 21, "kappa": 1.0, "gamma": 4.0, "inertia": 1.0,
               "nu": {"center": 128.0, "ramp": 0.8}},
    "initial": {"theta": {"ramp": _THETA_RAMP_WIDE}, "omega": {"center": 32.0}},
    "grid": {"dt": 0.01, "steps": 500},
    "analysis": {"rotation": True, "exit_threshold": _FOUR_PI_3},
    "theory": {"big_d": _FOUR_PI_3},
    "output": {"format": "csv"},
}

_FIG2C = dict(_FIG2A, params=dict(_FIG2A["params"], kappa=50.0))

_FIG3 = {
    "schema_version": 1,
    "model": "second_order_stoch",
    "params": {"n": 21, "kappa": 0.1, "gamma": 5.0, "inertia": 1.0,
               "nu": {"center": 12.0, "ramp": 0.0}},
    "initial": {"theta": {"ramp": 4e-3}, "omega": {"center": 2.4}},
    "grid": {"dt": 0.01, "steps": 5000},
    "noise": {"family": "hyperbolic", "param": 50.0},
    "analysis": {"rotation": True, "exit_threshold": 0.08},
    "theory": {"big_d": 0.1, "delta": math.sqrt(math.log(9.0)) / 50.0},
    "monte_carlo": {"n_paths": 5000, "threshold": 0.08, "master_seed": 20260823},
    "output": {"format": "csv"},
}

_FIG4A = {
    "schema_version": 1,
    "model": "second_order_stoch",
    "params": {"n": 21, "kappa": 1.0, "gamma": 5.0, "inertia": 1.0,
               "nu": {"center": 12.0, "ramp": 0.1}},
    "initial": {"theta": {"ramp": _THETA_RAMP_WIDE}, "omega": {"center": 2.4}},
    "grid": {"dt": 0.01, "steps": 5000},
    "noise": {"family": "hyperbolic", "param": 2.0},
    "analysis": {"rotation": True, "exit_threshold": _FOUR_PI_3},
    "theory": {"big_d": _FOUR_PI_3},
    "monte_carlo": {"n_paths": 500, "threshold": _FOUR_PI_3, "master_seed": 20260824},
    "output": {"format": "csv"},
}

_FIG4B = dict(
    _FIG4A,
    params=dict(_FIG4A["params"], kappa=5.0),
    monte_carlo=dict(_FIG4A["monte_carlo"], master_seed=20260825),
)

_PRESETS = {
    "fig1": _FIG1,
    "fig2a": _FIG2A,
    "fig2c": _FIG2C,
    "fig3": _FIG3,
    "fig4a": _FIG4A,
    "fig4b": _FIG4B,
}

PRESET_NAMES = tuple(sorted(_PRESETS))


def preset_document(name):
    """The raw config document (a plain dict) for a preset name."""
    try:
        doc = _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}") from None
    import copy

    return copy.deepcopy(doc)


def figure_preset(name):
    """The full, validated experiment configuration for a preset name."""
    from .config import parse_config

    return parse_config(preset_document(name))
