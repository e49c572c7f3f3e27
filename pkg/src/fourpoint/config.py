"""Experiment configuration: a sectioned TOML-subset file mapped losslessly
onto model, algorithm, and harness settings.  Unknown keys are rejected so
typos fail loudly."""

from __future__ import annotations

from dataclasses import dataclass, field

try:
    import tomllib as tomli
except ModuleNotFoundError:
    import tomli

from . import inference
from .models import MODEL_FAMILIES, make_model
from .optimizer import METHODS, AlgoConfig, ConfigurationError


class ConfigError(ValueError):
    """Raised for unreadable, malformed, or inconsistent config files."""


_MODEL_KEYS = {"family", "dim", "quad", "df", "mean", "sd"}
_ALGO_KEYS = {"method", "theta0", "total_budget", "k", "m", "m1", "m2",
              "nu", "c0", "c1", "beta", "record_trajectory",
              "allow_nu_outside_range"}
_HARNESS_KEYS = {"replications", "master_seed", "checkpoints", "ci_level",
                 "histogram_bin_width", "histogram_lo", "histogram_hi",
                 "records_csv", "summary_json", "compare_json",
                 "trajectory_csv", "threads",
                 "paper_scale_budget", "paper_scale_replications"}
_METADATA_KEYS = {"q", "n_total", "label"}
_SECTIONS = {"model": _MODEL_KEYS, "algorithm": _ALGO_KEYS,
             "harness": _HARNESS_KEYS, "metadata": _METADATA_KEYS}


@dataclass
class ExperimentConfig:
    model: dict
    algorithm: dict
    harness: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def to_dict(self):
        return {"model": dict(self.model), "algorithm": dict(self.algorithm),
                "harness": dict(self.harness),
                "metadata": dict(self.metadata)}


def _require(section, data, key):
    if key not in data:
        raise ConfigError(f"missing required key {section}.{key}")
    return data[key]


def parse_config(text):
    """Parse and validate config text into an ExperimentConfig."""
    try:
        raw = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"config syntax error: {exc}") from exc
    for section in raw:
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        for key in raw[section]:
            if key not in _SECTIONS[section]:
                raise ConfigError(f"unknown key {section}.{key}")
    model = dict(raw.get("model", {}))
    algorithm = dict(raw.get("algorithm", {}))
    family = _require("model", model, "family")
    if family not in MODEL_FAMILIES:
        raise ConfigError(f"model.family {family!r} is not one of "
                          f"{MODEL_FAMILIES}")
    _require("algorithm", algorithm, "total_budget")
    method = algorithm.get("method", "four_point")
    if method not in METHODS:
        raise ConfigError(f"algorithm.method {method!r} is not one of "
                          f"{METHODS}")
    cfg = ExperimentConfig(model=model, algorithm=algorithm,
                           harness=dict(raw.get("harness", {})),
                           metadata=dict(raw.get("metadata", {})))
    # fail fast on inconsistent numerics
    build_model(cfg)
    build_algo_config(cfg)
    return cfg


def load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def build_model(cfg):
    model = cfg.model
    family = model["family"]
    params = {}
    if "quad" in model:
        quad = model["quad"]
        if len(quad) != 3:
            raise ConfigError("model.quad must have 3 coefficients")
        params["quad"] = tuple(float(v) for v in quad)
    for key in ("df", "mean", "sd"):
        if key in model:
            params[key] = float(model[key])
    try:
        return make_model(family, dim=model.get("dim"), **params)
    except ValueError as exc:
        raise ConfigError(f"invalid model section: {exc}") from exc


def build_algo_config(cfg, overrides=None):
    algo = dict(cfg.algorithm)
    algo.pop("method", None)
    if overrides:
        algo.update(overrides)
    model = build_model(cfg)
    theta0 = algo.pop("theta0", [0.5] * model.dim)
    if isinstance(theta0, (int, float)):
        theta0 = [theta0]
    m = int(algo.pop("m", 50))
    k = float(algo.pop("k", 3.0))
    if "m1" in algo or "m2" in algo:
        if not ("m1" in algo and "m2" in algo):
            raise ConfigError("algorithm.m1 and algorithm.m2 must be "
                              "given together")
        m1, m2 = int(algo.pop("m1")), int(algo.pop("m2"))
    else:
        m1, m2 = inference.recommend_split(m, k)
    try:
        return AlgoConfig(
            dim=model.dim,
            theta0=[float(v) for v in theta0],
            total_budget=int(algo.pop("total_budget")),
            k=k, m=m, m1=m1, m2=m2,
            nu=float(algo.pop("nu", 0.2)),
            c0=float(algo.pop("c0", 30.0)),
            c1=float(algo.pop("c1", 1.0)),
            beta=float(algo.pop("beta", 0.5)),
            seed=int(overrides.get("seed", 0)) if overrides else 0,
            record_trajectory=bool(algo.pop("record_trajectory", False)),
            allow_nu_outside_range=bool(
                algo.pop("allow_nu_outside_range", False)),
        )
    except ConfigurationError as exc:
        raise ConfigError(f"invalid algorithm section: {exc}") from exc


def serialize_config(cfg):
    """Write an ExperimentConfig back to config-file text."""
    lines = []
    for section, data in cfg.to_dict().items():
        if not data:
            continue
        lines.append(f"[{section}]")
        for key, value in data.items():
            lines.append(f"{key} = {_format_value(value)}")
        lines.append("")
    return "\n".join(lines)


def _format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    raise ConfigError(f"cannot serialize value of type {type(value)!r}")
