"""Pure numpy implementation of the integrator kernels.

This is the fallback used when the compiled extension is unavailable. The
arithmetic inside each step is written in the same order as the compiled
kernels so that, per backend, a Euler run and a noise-free Euler-Maruyama
run produce bit-identical trajectories.
"""

import numpy as np

BACKEND_NAME = "python"


def _finite(arr):
    return bool(np.all(np.isfinite(arr)))


def euler_trajectory(theta0, omega0, nu, kappa, gamma, dt, steps):
    """Explicit Euler for the deterministic system.

    Returns (thetas, omegas, bad_step) where thetas and omegas have shape
    (steps + 1, n) and bad_step is the first step index producing a
    non-finite state, or -1 if the whole run is finite. kappa is the
    effective coupling applied to the population mean interaction.
    """
    n = theta0.shape[0]
    thetas = np.empty((steps + 1, n), dtype=np.float64)
    omegas = np.empty((steps + 1, n), dtype=np.float64)
    t = theta0.astype(np.float64).copy()
    o = omega0.astype(np.float64).copy()
    thetas[0] = t
    omegas[0] = o
    for k in range(steps):
        ic = (1.0 + np.cos(t)).sum() / n
        o2 = o + dt * (nu - gamma * o - kappa * ic * np.sin(t))
        t = t + dt * o
        o = o2
        thetas[k + 1] = t
        omegas[k + 1] = o
        if not (_finite(t) and _finite(o)):
            return thetas, omegas, k + 1
    return thetas, omegas, -1


def em_trajectory(theta0, omega0, nu, kappa, gamma, dt, sigma_vals, dB):
    """Euler-Maruyama with one shared Brownian increment per step.

    sigma_vals[k] is the noise intensity at the left endpoint of step k and
    dB[k] the common increment. The noise update is skipped entirely when
    sigma_vals[k] is exactly zero, which makes a zero-noise run bit-identical
    to euler_trajectory.
    """
    n = theta0.shape[0]
    steps = dB.shape[0]
    thetas = np.empty((steps + 1, n), dtype=np.float64)
    omegas = np.empty((steps + 1, n), dtype=np.float64)
    t = theta0.astype(np.float64).copy()
    o = omega0.astype(np.float64).copy()
    thetas[0] = t
    omegas[0] = o
    for k in range(steps):
        ic = (1.0 + np.cos(t)).sum() / n
        o2 = o + dt * (nu - gamma * o - kappa * ic * np.sin(t))
        sig = sigma_vals[k]
        if sig != 0.0:
            oc = o.sum() / n
            o2 = o2 + (sig * dB[k]) * (o - oc)
        t = t + dt * o
        o = o2
        thetas[k + 1] = t
        omegas[k + 1] = o
        if not (_finite(t) and _finite(o)):
            return thetas, omegas, k + 1
    return thetas, omegas, -1


def em_scan(theta0, omega0, nu, kappa, gamma, dt, sigma_vals, dB, threshold):
    """Euler-Maruyama without state storage, watching the phase diameter.

    Returns (exit_step, sup_diameter, bad_step). exit_step is the first grid
    index (0 counts the initial state) where max(theta) - min(theta) strictly
    exceeds threshold, or -1 if it never does; integration stops at the exit.
    bad_step mirrors em_trajectory; a non-finite state also stops the scan.
    """
    n = theta0.shape[0]
    steps = dB.shape[0]
    t = theta0.astype(np.float64).copy()
    o = omega0.astype(np.float64).copy()
    d = float(t.max() - t.min())
    sup = d
    if d > threshold:
        return 0, sup, -1
    for k in range(steps):
        ic = (1.0 + np.cos(t)).sum() / n
        o2 = o + dt * (nu - gamma * o - kappa * ic * np.sin(t))
        sig = sigma_vals[k]
        if sig != 0.0:
            oc = o.sum() / n
            o2 = o2 + (sig * dB[k]) * (o - oc)
        t = t + dt * o
        o = o2
        if not (_finite(t) and _finite(o)):
            return -1, sup, k + 1
        d = float(t.max() - t.min())
        if d > sup:
            sup = d
        if d > threshold:
            return k + 1, sup, -1
    return -1, sup, -1
