"""Experiment configuration: a strict JSON-compatible schema and its parser.

Documents are plain key-value trees (schema_version 1). Unknown keys are
rejected and every violation is reported with the dotted path of the
offending key, so a typo in a preset cannot silently change an experiment.

Vector fields accept either an explicit list of n numbers or a generator
spec {"center": c, "ramp": a} meaning c + a * (i - (n + 1) / 2) for
i = 1 .. n, the linear ramps used by all bundled presets.
"""

import copy
import json
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .integrate import TimeGrid
from .model import State, SystemParams
from .theory import NoiseSpec

__all__ = ["ConfigError", "ExperimentConfig", "parse_config", "MODELS"]

MODELS = ("first_order", "second_order_det", "second_order_stoch")


class ConfigError(ValueError):
    """A configuration document violated the schema; path names the key."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class AnalysisSpec:
    rotation: bool = False
    exit_threshold: Optional[float] = None
    diagnostics: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class TheorySpec:
    big_d: float
    delta: Optional[float] = None


@dataclass(frozen=True)
class MonteCarloSpec:
    n_paths: int
    threshold: float
    master_seed: Optional[int] = None


@dataclass(frozen=True)
class OutputSpec:
    dir: Optional[str] = None
    format: str = "csv"


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """A fully validated experiment description.

    document holds the canonical form of the parsed input (defaults
    materialized, generator specs preserved), so emitting and re-parsing a
    config reproduces it exactly.
    """

    model: str
    params: SystemParams
    initial: State
    grid: TimeGrid
    noise: Optional[NoiseSpec]
    analysis: AnalysisSpec
    theory: Optional[TheorySpec]
    monte_carlo: Optional[MonteCarloSpec]
    output: OutputSpec
    unnormalized_coupling: bool
    document: dict

    def to_dict(self):
        return copy.deepcopy(self.document)

    def to_json(self, indent=2):
        return json.dumps(self.document, indent=indent)

    @property
    def coupling_scale(self):
        """Multiplier applied to kappa inside the dynamics (n when the
        population-summed coupling variant is requested)."""
        return float(self.params.n) if self.unnormalized_coupling else 1.0

    def __eq__(self, other):
        if not isinstance(other, ExperimentConfig):
            return NotImplemented
        return self.document == other.document

    def __hash__(self):
        return hash(json.dumps(self.document, sort_keys=True))


# ---------------------------------------------------------------------------
# low-level checked readers


def _require_mapping(node, path):
    if not isinstance(node, dict):
        raise ConfigError(path, f"expected an object, got {type(node).__name__}")


def _reject_unknown(node, path, allowed):
    unknown = sorted(set(node) - set(allowed))
    if unknown:
        where = f"{path}.{unknown[0]}" if path else unknown[0]
        raise ConfigError(where, "unknown key (strict schema)")


def _missing(node, path, required):
    missing = sorted(set(required) - set(node))
    if missing:
        shown = ", ".join(f"{path}.{k}" if path else k for k in missing)
        raise ConfigError(path, f"missing required keys: {shown}")


def _read_number(node, path, key, *, required=True, default=None, positive=False, nonnegative=False):
    if key not in node:
        if required:
            raise ConfigError(f"{path}.{key}" if path else key, "missing required key")
        return default
    v = node[key]
    where = f"{path}.{key}" if path else key
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(where, f"expected a number, got {type(v).__name__}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(where, "must be finite")
    if positive and not v > 0:
        raise ConfigError(where, "must be positive")
    if nonnegative and v < 0:
        raise ConfigError(where, "must be nonnegative")
    return v


def _read_int(node, path, key, *, required=True, default=None, minimum=None):
    if key not in node:
        if required:
            raise ConfigError(f"{path}.{key}" if path else key, "missing required key")
        return default
    v = node[key]
    where = f"{path}.{key}" if path else key
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(where, f"expected an integer, got {type(v).__name__}")
    if minimum is not None and v < minimum:
        raise ConfigError(where, f"must be at least {minimum}")
    return v


def _read_bool(node, path, key, default):
    if key not in node:
        return default
    v = node[key]
    if not isinstance(v, bool):
        raise ConfigError(f"{path}.{key}" if path else key, "expected true or false")
    return v


def _read_vector(node, path, n):
    """Explicit list or {"center", "ramp"} generator; returns (ndarray, canonical)."""
    if isinstance(node, list):
        if len(node) != n:
            raise ConfigError(path, f"expected {n} entries, got {len(node)}")
        vals = []
        for idx, v in enumerate(node):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"{path}[{idx}]", "expected a number")
            vals.append(float(v))
        arr = np.asarray(vals)
        if not np.all(np.isfinite(arr)):
            raise ConfigError(path, "entries must be finite")
        return arr, vals
    if isinstance(node, dict):
        _reject_unknown(node, path, {"center", "ramp"})
        center = _read_number(node, path, "center", required=False, default=0.0)
        ramp = _read_number(node, path, "ramp", required=False, default=0.0)
        offsets = np.arange(1, n + 1) - (n + 1) / 2.0
        return center + ramp * offsets, {"center": center, "ramp": ramp}
    raise ConfigError(path, "expected a list of numbers or a {center, ramp} object")


# ---------------------------------------------------------------------------
# section parsers


def _parse_params(node):
    _require_mapping(node, "params")
    _reject_unknown(node, "params", {"n", "nu", "kappa", "gamma", "inertia"})
    _missing(node, "params", {"n", "nu", "kappa", "gamma"})
    n = _read_int(node, "params", "n", minimum=1)
    kappa = _read_number(node, "params", "kappa", nonnegative=True)
    gamma = _read_number(node, "params", "gamma", positive=True)
    inertia = _read_number(node, "params", "inertia", required=False, default=1.0, positive=True)
    nu, nu_doc = _read_vector(node["nu"], "params.nu", n)
    params = SystemParams(n=n, nu=nu, kappa=kappa, gamma=gamma, inertia=inertia)
    doc = {"n": n, "kappa": kappa, "gamma": gamma, "inertia": inertia, "nu": nu_doc}
    return params, doc


def _parse_initial(node, n, model):
    _require_mapping(node, "initial")
    _reject_unknown(node, "initial", {"theta", "omega"})
    if "theta" not in node:
        raise ConfigError("initial.theta", "missing required key")
    theta, theta_doc = _read_vector(node["theta"], "initial.theta", n)
    if "omega" in node:
        omega, omega_doc = _read_vector(node["omega"], "initial.omega", n)
    elif model == "first_order":
        omega, omega_doc = np.zeros(n), {"center": 0.0, "ramp": 0.0}
    else:
        raise ConfigError("initial.omega", "missing required key for a second-order model")
    return State(theta=theta, omega=omega), {"theta": theta_doc, "omega": omega_doc}


def _parse_grid(node):
    _require_mapping(node, "grid")
    _reject_unknown(node, "grid", {"dt", "steps", "t0"})
    _missing(node, "grid", {"dt", "steps"})
    dt = _read_number(node, "grid", "dt", positive=True)
    steps = _read_int(node, "grid", "steps", minimum=1)
    t0 = _read_number(node, "grid", "t0", required=False, default=0.0)
    return TimeGrid(dt=dt, steps=steps, t0=t0), {"dt": dt, "steps": steps, "t0": t0}


def _parse_noise(node):
    _require_mapping(node, "noise")
    _reject_unknown(node, "noise", {"family", "param", "times", "values"})
    if "family" not in node:
        raise ConfigError("noise.family", "missing required key")
    family = node["family"]
    if family == "zero":
        _reject_unknown(node, "noise", {"family"})
        return NoiseSpec.zero(), {"family": "zero"}
    if family == "constant":
        _reject_unknown(node, "noise", {"family", "param"})
        c = _read_number(node, "noise", "param", nonnegative=True)
        return NoiseSpec.constant(c), {"family": "constant", "param": c}
    if family == "hyperbolic":
        _reject_unknown(node, "noise", {"family", "param"})
        a = _read_number(node, "noise", "param", positive=True)
        return NoiseSpec.hyperbolic(a), {"family": "hyperbolic", "param": a}
    if family == "table":
        _reject_unknown(node, "noise", {"family", "times", "values"})
        _missing(node, "noise", {"times", "values"})
        times = node["times"]
        values = node["values"]
        if not isinstance(times, list) or not isinstance(values, list):
            raise ConfigError("noise.times", "table noise needs lists of times and values")
        try:
            spec = NoiseSpec.table(times, values)
        except ValueError as e:
            raise ConfigError("noise", str(e)) from None
        return spec, {"family": "table", "times": [float(t) for t in times],
                      "values": [float(v) for v in values]}
    raise ConfigError("noise.family", f"unknown family {family!r}")


def _parse_analysis(node, n):
    if node is None:
        return AnalysisSpec(), {"rotation": False, "exit_threshold": None, "diagnostics": None}
    _require_mapping(node, "analysis")
    _reject_unknown(node, "analysis", {"rotation", "exit_threshold", "diagnostics"})
    rotation = _read_bool(node, "analysis", "rotation", False)
    threshold = node.get("exit_threshold")
    if threshold is not None:
        threshold = _read_number(node, "analysis", "exit_threshold", positive=True)
    diagnostics = node.get("diagnostics")
    if diagnostics is not None:
        if (not isinstance(diagnostics, list) or len(diagnostics) != 2
                or any(isinstance(v, bool) or not isinstance(v, int) for v in diagnostics)):
            raise ConfigError("analysis.diagnostics", "expected a pair of oscillator indices")
        i, j = diagnostics
        if not (0 <= i < n and 0 <= j < n):
            raise ConfigError("analysis.diagnostics", f"indices must lie in [0, {n})")
        diagnostics = (i, j)
    doc = {"rotation": rotation, "exit_threshold": threshold,
           "diagnostics": None if diagnostics is None else list(diagnostics)}
    return AnalysisSpec(rotation=rotation, exit_threshold=threshold, diagnostics=diagnostics), doc


def _parse_theory(node):
    if node is None:
        return None, None
    _require_mapping(node, "theory")
    _reject_unknown(node, "theory", {"big_d", "delta"})
    _missing(node, "theory", {"big_d"})
    big_d = _read_number(node, "theory", "big_d", positive=True)
    delta = node.get("delta")
    if delta is not None:
        delta = _read_number(node, "theory", "delta", positive=True)
    return TheorySpec(big_d=big_d, delta=delta), {"big_d": big_d, "delta": delta}


def _parse_monte_carlo(node):
    if node is None:
        return None, None
    _require_mapping(node, "monte_carlo")
    _reject_unknown(node, "monte_carlo", {"n_paths", "threshold", "master_seed"})
    _missing(node, "monte_carlo", {"n_paths", "threshold"})
    n_paths = _read_int(node, "monte_carlo", "n_paths", minimum=1)
    threshold = _read_number(node, "monte_carlo", "threshold", positive=True)
    seed = node.get("master_seed")
    if seed is not None:
        seed = _read_int(node, "monte_carlo", "master_seed", minimum=0)
        if seed >= 2**64:
            raise ConfigError("monte_carlo.master_seed", "must fit in 64 bits")
    return (MonteCarloSpec(n_paths=n_paths, threshold=threshold, master_seed=seed),
            {"n_paths": n_paths, "threshold": threshold, "master_seed": seed})


def _parse_output(node):
    if node is None:
        return OutputSpec(), {"dir": None, "format": "csv"}
    _require_mapping(node, "output")
    _reject_unknown(node, "output", {"dir", "format"})
    out_dir = node.get("dir")
    if out_dir is not None and not isinstance(out_dir, str):
        raise ConfigError("output.dir", "expected a string path")
    fmt = node.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("output.format", "expected \"csv\" or \"json\"")
    return OutputSpec(dir=out_dir, format=fmt), {"dir": out_dir, "format": fmt}


_TOP_KEYS = {
    "schema_version", "model", "params", "initial", "grid", "noise",
    "analysis", "theory", "monte_carlo", "output", "unnormalized_coupling",
}


def parse_config(source):
    """Parse and validate a config document (JSON text, dict, or preset ref).

    A document {"preset": name, ...} expands the named preset first and then
    overlays any other top-level keys given alongside it.
    """
    if isinstance(source, str):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as e:
            raise ConfigError("", f"invalid JSON: {e}") from None
    elif isinstance(source, dict):
        doc = copy.deepcopy(source)
    else:
        raise ConfigError("", f"expected JSON text or a dict, got {type(source).__name__}")
    _require_mapping(doc, "")

    if "preset" in doc:
        from .experiments import preset_document

        overlay = {k: v for k, v in doc.items() if k != "preset"}
        try:
            doc = preset_document(doc["preset"])
        except ValueError as e:
            raise ConfigError("preset", str(e)) from None
        doc.update(overlay)

    _reject_unknown(doc, "", _TOP_KEYS)
    _missing(doc, "", {"model", "params", "initial", "grid"})

    version = doc.get("schema_version", 1)
    if version != 1:
        raise ConfigError("schema_version", f"unsupported version {version!r}")

    model = doc["model"]
    if model not in MODELS:
        raise ConfigError("model", f"expected one of {', '.join(MODELS)}")

    params, params_doc = _parse_params(doc["params"])
    initial, initial_doc = _parse_initial(doc["initial"], params.n, model)
    grid, grid_doc = _parse_grid(doc["grid"])

    stochastic = model == "second_order_stoch"
    if stochastic:
        if "noise" not in doc or doc["noise"] is None:
            raise ConfigError("noise", "a stochastic model requires a noise block")
        noise, noise_doc = _parse_noise(doc["noise"])
    else:
        if doc.get("noise") is not None:
            raise ConfigError("noise", "noise is only valid for the stochastic model")
        noise, noise_doc = None, None

    analysis, analysis_doc = _parse_analysis(doc.get("analysis"), params.n)
    theory, theory_doc = _parse_theory(doc.get("theory"))
    monte_carlo, mc_doc = _parse_monte_carlo(doc.get("monte_carlo"))
    if monte_carlo is not None and not stochastic:
        raise ConfigError("monte_carlo", "Monte Carlo runs require the stochastic model")
    output, output_doc = _parse_output(doc.get("output"))
    unnormalized = _read_bool(doc, "", "unnormalized_coupling", False)

    canonical = {
        "schema_version": 1,
        "model": model,
        "params": params_doc,
        "initial": initial_doc,
        "grid": grid_doc,
        "noise": noise_doc,
        "analysis": analysis_doc,
        "theory": theory_doc,
        "monte_carlo": mc_doc,
        "output": output_doc,
        "unnormalized_coupling": unnormalized,
    }
    return ExperimentConfig(
        model=model,
        params=params,
        initial=initial,
        grid=grid,
        noise=noise,
        analysis=analysis,
        theory=theory,
        monte_carlo=monte_carlo,
        output=output,
        unnormalized_coupling=unnormalized,
        document=canonical,
    )
