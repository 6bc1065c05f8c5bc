"""Closed-form constants and sufficient-condition checkers for phase locking.

The locking analysis controls the pairwise quantity omega_ij + gamma*theta_ij
by comparing it with the periodic ODE dx/dr = alpha - beta(r) * x, where

    beta(r) = kappa / nu_c * cos(r) * (1 + cos(r)).

The unique periodic orbit of that comparison equation lies between 2*pi*L*alpha
and 2*pi*R*alpha, with L and R determined by the signed area of beta over one
period. Phase locking follows when the drift level alpha_D, built from the
parameter spreads, is small enough relative to gamma * D for a chosen phase
diameter budget D. The stochastic version discounts initial deviations by a
noise factor (the delta and cosh/sinh terms below) and charges a Bernstein
probability for the event that the running noise integral stays inside
(-delta, delta).
"""

import math
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np

__all__ = [
    "ComparisonInapplicableError",
    "InfiniteNoiseNormError",
    "NoiseSpec",
    "DetConstants",
    "StochConstants",
    "Margin",
    "ConditionReport",
    "beta",
    "beta_integrals",
    "comparison_bounds",
    "det_m0",
    "det_alpha",
    "check_det_theorem",
    "stoch_c0",
    "stoch_alpha",
    "check_stoch_theorem",
    "prob_lower_bound",
    "noise_norms",
]


class ComparisonInapplicableError(ValueError):
    """The periodic comparison bounds need kappa > 0 (beta must have positive area)."""


class InfiniteNoiseNormError(ValueError):
    """An operation requiring a finite L2 noise norm received an infinite one."""


# ---------------------------------------------------------------------------
# noise specification


@dataclass(frozen=True)
class NoiseSpec:
    """Time-dependent noise intensity sigma(t) with its L2 and sup norms.

    Supported families: "zero", "constant" (value c), "hyperbolic" (value a,
    meaning sigma(t) = 1 / (a * (1 + t))) and "table" (piecewise-linear
    through given knots, constant after the last knot). Norms are exact for
    the first three families; table norms come from segment quadrature and
    are flagged via norms_exact = False.
    """

    family: str
    param: Optional[float] = None
    knot_times: Optional[np.ndarray] = None
    knot_values: Optional[np.ndarray] = None
    l2_norm: float = 0.0
    sup_norm: float = 0.0
    norms_exact: bool = True

    @classmethod
    def zero(cls):
        return cls(family="zero", l2_norm=0.0, sup_norm=0.0)

    @classmethod
    def constant(cls, c):
        if c < 0:
            raise ValueError("constant noise level must be nonnegative")
        l2 = 0.0 if c == 0 else math.inf
        return cls(family="constant", param=float(c), l2_norm=l2, sup_norm=float(c))

    @classmethod
    def hyperbolic(cls, a):
        """sigma(t) = 1 / (a * (1 + t)); both norms equal 1 / a."""
        if a <= 0:
            raise ValueError("hyperbolic scale must be positive")
        return cls(family="hyperbolic", param=float(a), l2_norm=1.0 / a, sup_norm=1.0 / a)

    @classmethod
    def table(cls, times, values):
        times = np.asarray(times, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64)
        if times.ndim != 1 or times.shape != values.shape or times.shape[0] < 1:
            raise ValueError("table noise needs matching 1-d knot arrays")
        if times[0] != 0.0:
            raise ValueError("table noise must start at t = 0")
        if np.any(np.diff(times) <= 0):
            raise ValueError("table knot times must be strictly increasing")
        if np.any(values < 0):
            raise ValueError("table noise values must be nonnegative")
        # exact integral of the square of a piecewise-linear function
        sq = 0.0
        for k in range(times.shape[0] - 1):
            h = times[k + 1] - times[k]
            a, b = values[k], values[k + 1]
            sq += h * (a * a + a * b + b * b) / 3.0
        if values[-1] > 0:
            l2 = math.inf
        else:
            l2 = math.sqrt(sq)
        times = times.copy()
        values = values.copy()
        times.flags.writeable = False
        values.flags.writeable = False
        return cls(
            family="table",
            knot_times=times,
            knot_values=values,
            l2_norm=l2,
            sup_norm=float(values.max()),
            norms_exact=False,
        )

    def sigma_at(self, t):
        """Evaluate sigma at time t (scalar or array)."""
        t = np.asarray(t, dtype=np.float64)
        if self.family == "zero":
            out = np.zeros_like(t)
        elif self.family == "constant":
            out = np.full_like(t, self.param)
        elif self.family == "hyperbolic":
            out = 1.0 / (self.param * (1.0 + t))
        elif self.family == "table":
            out = np.interp(t, self.knot_times, self.knot_values)
        else:
            raise ValueError(f"unknown noise family {self.family!r}")
        return out if out.ndim else float(out)

    def values_on(self, times):
        return np.atleast_1d(np.asarray(self.sigma_at(times), dtype=np.float64))


def noise_norms(noise):
    """(L2 norm over [0, inf), sup norm) of a NoiseSpec."""
    return noise.l2_norm, noise.sup_norm


# ---------------------------------------------------------------------------
# comparison machinery


def beta(r, kappa, nu_c):
    """Periodic weight kappa / nu_c * cos(r) * (1 + cos(r))."""
    if nu_c <= 0:
        raise ValueError("nu_c must be positive")
    r = np.asarray(r, dtype=np.float64)
    out = kappa / nu_c * np.cos(r) * (1.0 + np.cos(r))
    return out if out.ndim else float(out)


def beta_integrals(kappa, nu_c):
    """Closed forms of the signed, positive and negative areas of beta.

    Over one period: integral of beta is kappa*pi/nu_c, of its positive part
    (4 + pi) * kappa / (2 * nu_c), of its negative part
    (4 - pi) * kappa / (2 * nu_c).
    """
    if nu_c <= 0:
        raise ValueError("nu_c must be positive")
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    int_beta = kappa * math.pi / nu_c
    int_plus = (4.0 + math.pi) * kappa / (2.0 * nu_c)
    int_minus = (4.0 - math.pi) * kappa / (2.0 * nu_c)
    return int_beta, int_plus, int_minus


def comparison_bounds(kappa, nu_c):
    """Multipliers (L, R) bounding the periodic orbit of dx/dr = 1 - beta(r) x.

    L = exp(-int beta_plus) / (1 - exp(-int beta)) and
    R = exp(+int beta_minus) / (1 - exp(-int beta)). Undefined at kappa = 0,
    where the denominator vanishes.
    """
    int_beta, int_plus, int_minus = beta_integrals(kappa, nu_c)
    if int_beta <= 0:
        raise ComparisonInapplicableError(
            "comparison bounds need kappa > 0 so that beta has positive area"
        )
    denom = 1.0 - math.exp(-int_beta)
    big_l = math.exp(-int_plus) / denom
    big_r = math.exp(int_minus) / denom
    return big_l, big_r


# ---------------------------------------------------------------------------
# deterministic constants


@dataclass(frozen=True)
class DetConstants:
    m0: float
    alpha_d: float
    big_l: float
    big_r: float
    int_beta: float
    int_beta_plus: float
    int_beta_minus: float


def det_m0(params, d_omega0, big_d):
    """Frequency-diameter bound max{D(Omega_0), (D(nu) + 2 kappa D) / gamma}."""
    if big_d <= 0:
        raise ValueError("big_d must be positive")
    return max(d_omega0, (params.d_nu + 2.0 * params.kappa * big_d) / params.gamma)


def det_alpha(params, m0, big_d):
    """Drift level alpha_D of the deterministic comparison inequality."""
    k = params.kappa
    g = params.gamma
    nc = params.nu_c
    dn = params.d_nu
    if nc <= 2.0 * k:
        raise ValueError("alpha_D needs nu_c > 2 kappa")
    first = (g * dn + 2.0 * k * m0 + 3.0 * g * k * big_d**2) / nc
    second = (
        2.0 * g**2 * k * dn
        + 8.0 * g * k**2 * m0
        + 6.0 * g**2 * k**2 * big_d**2
        + 4.0 * g**2 * k**2 * big_d
    ) / (nc * (nc - 2.0 * k))
    return first + second


# ---------------------------------------------------------------------------
# stochastic constants


@dataclass(frozen=True)
class StochConstants:
    c0: float
    alpha_d: float
    delta: float
    prob_lower_bound: float
    big_l: float
    big_r: float
    noise_l2: float
    noise_sup: float


def stoch_c0(params, d_omega0, big_d, delta, noise):
    """Noise-discounted frequency-diameter bound.

    (1 / cosh delta) * max{D(Omega_0),
    (D(nu) + 2 kappa D) * exp(l2_norm^2 / 2 + delta) / gamma}.
    """
    if big_d <= 0:
        raise ValueError("big_d must be positive")
    if delta <= 0:
        raise ValueError("delta must be positive")
    l2, _ = noise_norms(noise)
    if math.isinf(l2):
        raise InfiniteNoiseNormError("stoch_c0 requires a finite L2 noise norm")
    grown = (params.d_nu + 2.0 * params.kappa * big_d) * math.exp(l2**2 / 2.0 + delta) / params.gamma
    return max(d_omega0, grown) / math.cosh(delta)


def stoch_alpha(params, c0, big_d, delta):
    """Drift level alpha_D of the stochastic comparison inequality."""
    k = params.kappa
    g = params.gamma
    nc = params.nu_c
    dn = params.d_nu
    if nc <= 2.0 * k:
        raise ValueError("alpha_D needs nu_c > 2 kappa")
    ed = math.exp(delta)
    ch = math.cosh(delta)
    sh = math.sinh(delta)
    first = (g / nc) * (
        g * c0 * ed * sh
        + ed * dn / ch
        + 3.0 * k * big_d**2
        + 2.0 * k * big_d * math.tanh(delta)
        + (9.0 * k / (4.0 * g)) * c0
    )
    second = (2.0 * g * k / (nc * (nc - 2.0 * k))) * (
        g * c0 * ed * sh
        + ed * dn / ch
        + 3.0 * k * big_d**2
        + 2.0 * k * big_d * ed / ch
        + (17.0 * k / (4.0 * g)) * c0
    )
    return first + second


def prob_lower_bound(delta, l2_norm):
    """Bernstein lower bound 1 - 2 exp(-delta^2 / (2 l2_norm^2)).

    A noise-free system (l2_norm = 0) gets probability 1 by convention. The
    bound can be negative for small delta; it is reported as is, a vacuous
    but honest number.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if l2_norm < 0:
        raise ValueError("l2_norm must be nonnegative")
    if l2_norm == 0:
        return 1.0
    return 1.0 - 2.0 * math.exp(-(delta**2) / (2.0 * l2_norm**2))


# ---------------------------------------------------------------------------
# condition reports


@dataclass(frozen=True)
class Margin:
    """One signed condition margin.

    require is the inequality the value must satisfy for the condition to
    hold, one of "<0", "<=0", ">0", ">=0". A NaN value never satisfies.
    """

    label: str
    value: float
    require: str

    @property
    def ok(self):
        v = self.value
        if self.require == "<0":
            return v < 0
        if self.require == "<=0":
            return v <= 0
        if self.require == ">0":
            return v > 0
        if self.require == ">=0":
            return v >= 0
        raise ValueError(f"unknown requirement {self.require!r}")


@dataclass(frozen=True)
class ConditionReport:
    constants: object
    margins: Tuple[Margin, ...]
    satisfied: bool

    def margin(self, label):
        for m in self.margins:
            if m.label == label:
                return m
        raise KeyError(label)

    def to_dict(self):
        return {
            "constants": asdict(self.constants),
            "margins": [
                {"label": m.label, "value": m.value, "require": m.require, "ok": bool(m.ok)}
                for m in self.margins
            ],
            "satisfied": bool(self.satisfied),
        }


def _diameter(vec):
    return float(np.max(vec) - np.min(vec))


def check_det_theorem(params, initial, big_d):
    """Evaluate every sufficient condition of the deterministic locking result.

    Margins, in order: the coupling gap nu_c - 2 kappa (> 0), the two sides
    of the initial mean-frequency band (>= 0 each), the contraction condition
    2 pi R alpha_D - gamma D (< 0), the initial phase diameter D(Theta_0) - D
    (< 0) and the initial mixed diameter D(Omega_0 + gamma Theta_0) minus
    2 pi L alpha_D (<= 0). Raises ComparisonInapplicableError at kappa = 0.
    When nu_c <= 2 kappa the alpha-dependent margins are reported as NaN.
    """
    if big_d <= 0:
        raise ValueError("big_d must be positive")
    big_l, big_r = comparison_bounds(params.kappa, params.nu_c)
    int_beta, int_plus, int_minus = beta_integrals(params.kappa, params.nu_c)
    nc = params.nu_c
    k = params.kappa
    g = params.gamma
    omega_c0 = float(np.mean(initial.omega))
    d_theta0 = _diameter(initial.theta)
    d_omega0 = _diameter(initial.omega)
    m0 = det_m0(params, d_omega0, big_d)
    if nc > 2.0 * k:
        alpha_d = det_alpha(params, m0, big_d)
        contraction = 2.0 * math.pi * big_r * alpha_d - g * big_d
        mix = _diameter(initial.omega + g * initial.theta) - 2.0 * math.pi * big_l * alpha_d
    else:
        alpha_d = math.nan
        contraction = math.nan
        mix = math.nan
    constants = DetConstants(
        m0=m0,
        alpha_d=alpha_d,
        big_l=big_l,
        big_r=big_r,
        int_beta=int_beta,
        int_beta_plus=int_plus,
        int_beta_minus=int_minus,
    )
    margins = (
        Margin("coupling_gap", nc - 2.0 * k, ">0"),
        Margin("freq_band_lower", g * omega_c0 - (nc - 2.0 * k), ">=0"),
        Margin("freq_band_upper", (nc + 2.0 * k) - g * omega_c0, ">=0"),
        Margin("contraction", contraction, "<0"),
        Margin("initial_phase_diameter", d_theta0 - big_d, "<0"),
        Margin("initial_mix_diameter", mix, "<=0"),
    )
    return ConditionReport(constants=constants, margins=margins, satisfied=all(m.ok for m in margins))


def check_stoch_theorem(params, initial, big_d, delta, noise):
    """Evaluate every sufficient condition of the stochastic locking result.

    Mirrors check_det_theorem with the noise-aware constants: the sup-norm
    budget on sigma, the initial mixed diameter discounted by cosh(delta) and
    the contraction condition with the c_0 e^delta sinh(delta) surcharge.
    The report's constants carry the Bernstein probability lower bound.
    Raises InfiniteNoiseNormError for noise with infinite L2 norm and
    ComparisonInapplicableError at kappa = 0.
    """
    if big_d <= 0:
        raise ValueError("big_d must be positive")
    if delta <= 0:
        raise ValueError("delta must be positive")
    l2, sup = noise_norms(noise)
    if math.isinf(l2):
        raise InfiniteNoiseNormError("the stochastic conditions require a finite L2 noise norm")
    big_l, big_r = comparison_bounds(params.kappa, params.nu_c)
    nc = params.nu_c
    k = params.kappa
    g = params.gamma
    omega_c0 = float(np.mean(initial.omega))
    d_theta0 = _diameter(initial.theta)
    d_omega0 = _diameter(initial.omega)
    c0 = stoch_c0(params, d_omega0, big_d, delta, noise)
    ch = math.cosh(delta)
    if nc > 2.0 * k:
        alpha_d = stoch_alpha(params, c0, big_d, delta)
        contraction = (
            2.0 * math.pi * big_r * alpha_d + c0 * math.exp(delta) * math.sinh(delta) - g * big_d
        )
        mix = _diameter(initial.omega / ch + g * initial.theta) - 2.0 * math.pi * big_l * alpha_d
    else:
        alpha_d = math.nan
        contraction = math.nan
        mix = math.nan
    constants = StochConstants(
        c0=c0,
        alpha_d=alpha_d,
        delta=delta,
        prob_lower_bound=prob_lower_bound(delta, l2),
        big_l=big_l,
        big_r=big_r,
        noise_l2=l2,
        noise_sup=sup,
    )
    margins = (
        Margin("noise_sup_budget", sup - math.sqrt(4.0 * k / g), "<=0"),
        Margin("coupling_gap", nc - 2.0 * k, ">0"),
        Margin("freq_band_lower", g * omega_c0 - (nc - 2.0 * k), ">=0"),
        Margin("freq_band_upper", (nc + 2.0 * k) - g * omega_c0, ">=0"),
        Margin("initial_phase_diameter", d_theta0 - big_d, "<0"),
        Margin("initial_mix_diameter", mix, "<=0"),
        Margin("contraction", contraction, "<0"),
    )
    return ConditionReport(constants=constants, margins=margins, satisfied=all(m.ok for m in margins))
