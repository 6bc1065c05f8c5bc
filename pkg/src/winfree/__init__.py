"""winfree: second-order Winfree oscillator networks with inertia.

Simulation (Euler, RK4, Euler-Maruyama with common multiplicative noise),
closed-form sufficient conditions for phase locking, and Monte Carlo
estimation of locking probabilities, with six bundled experiment presets.
"""

__version__ = "0.1.0"

from .backends import backend_name
from .config import ConfigError, ExperimentConfig, parse_config
from .experiments import (
    PRESET_NAMES,
    ExitReport,
    MonteCarloResult,
    RotationEstimate,
    diagnostic_series,
    figure_preset,
    first_exit,
    monte_carlo_locking,
    preset_document,
    rotation_numbers,
)
from .integrate import (
    BrownianPath,
    SimulationAbort,
    TimeGrid,
    Trajectory,
    generate_brownian,
    simulate_deterministic,
    simulate_first_order,
    simulate_stochastic,
    simulate_y_process,
)
from .model import (
    Observables,
    State,
    SystemParams,
    diffusion_coefficient,
    drift_first_order,
    drift_second_order,
    interaction_mean,
    normalize_inertia,
    observables,
)
from .theory import (
    ComparisonInapplicableError,
    ConditionReport,
    DetConstants,
    InfiniteNoiseNormError,
    Margin,
    NoiseSpec,
    StochConstants,
    beta,
    beta_integrals,
    check_det_theorem,
    check_stoch_theorem,
    comparison_bounds,
    det_alpha,
    det_m0,
    noise_norms,
    prob_lower_bound,
    stoch_alpha,
    stoch_c0,
)

__all__ = [
    "__version__",
    "backend_name",
    "ConfigError",
    "ExperimentConfig",
    "parse_config",
    "figure_preset",
    "preset_document",
    "PRESET_NAMES",
    "first_exit",
    "rotation_numbers",
    "diagnostic_series",
    "monte_carlo_locking",
    "MonteCarloResult",
    "RotationEstimate",
    "ExitReport",
    "TimeGrid",
    "BrownianPath",
    "Trajectory",
    "SimulationAbort",
    "generate_brownian",
    "simulate_deterministic",
    "simulate_stochastic",
    "simulate_first_order",
    "simulate_y_process",
    "SystemParams",
    "State",
    "Observables",
    "normalize_inertia",
    "drift_first_order",
    "drift_second_order",
    "diffusion_coefficient",
    "interaction_mean",
    "observables",
    "NoiseSpec",
    "DetConstants",
    "StochConstants",
    "ConditionReport",
    "Margin",
    "ComparisonInapplicableError",
    "InfiniteNoiseNormError",
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
