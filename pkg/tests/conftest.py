"""Shared fixtures and the acceptance-criteria summary hook."""

import numpy as np

from winfree import State, SystemParams, TimeGrid

# Populated by tests/test_acceptance.py; printed after the run so the verdict
# for every numbered criterion is visible in one place even when pytest
# captures per-test stdout.
ACCEPTANCE_RESULTS = []


def record_acceptance(number, ok, detail=""):
    ACCEPTANCE_RESULTS.append((number, bool(ok), detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(ACCEPTANCE_RESULTS):
        verdict = "PASS" if ok else "FAIL"
        line = f"criterion {number}: {verdict}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


def ramp(n, center, slope):
    """center + slope * (i - (n+1)/2) for i = 1..n, the standard ramp layout."""
    i = np.arange(1, n + 1, dtype=np.float64)
    return center + slope * (i - (n + 1) / 2.0)


def make_params(n=5, kappa=0.5, gamma=2.0, nu_center=10.0, nu_ramp=0.0):
    return SystemParams(n=n, nu=ramp(n, nu_center, nu_ramp), kappa=kappa, gamma=gamma)


def make_state(n=5, theta_ramp=0.01, omega=1.0):
    return State(theta=ramp(n, 0.0, theta_ramp), omega=np.full(n, float(omega)))


def small_grid(dt=0.01, steps=50):
    return TimeGrid(dt=dt, steps=steps)
