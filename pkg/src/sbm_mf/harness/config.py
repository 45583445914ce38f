"""Experiment configuration: YAML document -> validated ExperimentConfig."""

import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import yaml

from ..exceptions import InputError

ALGORITHMS = ("bcavi-digamma", "bcavi-log", "cavi", "gibbs", "mle")
INITIALIZERS = ("spectral", "corrupt", "file")
PRIORS = ("uniform", "explicit")


class ConfigError(InputError):
    """Config validation failed; ``errors`` lists (field path, message) pairs."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"{path}: {msg}" for path, msg in self.errors))


@dataclass(frozen=True)
class PriorSpec:
    type: str = "uniform"
    weights: list | None = None  # explicit: one categorical prior shared by all nodes
    path: str | None = None  # explicit: n x k whitespace matrix
    alpha_p: float = 1.0
    beta_p: float = 1.0
    alpha_q: float = 1.0
    beta_q: float = 1.0


@dataclass(frozen=True)
class InitSpec:
    type: str = "spectral"
    fraction: float = 0.1
    path: str | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    k: int
    p: float
    q: float
    sizes: object = "balanced"
    prior: PriorSpec = field(default_factory=PriorSpec)
    init: InitSpec = field(default_factory=InitSpec)
    algorithm: str = "bcavi-digamma"
    iterations: int | None = None
    replications: int = 1
    seed: int = 0
    out: str | None = None
    timings: bool = False

    def resolved_iterations(self):
        if self.iterations is not None:
            return self.iterations
        return max(1, math.ceil(math.log(max(self.n, 2))))

    def to_dict(self):
        return asdict(self)

    def override(self, **changes):
        changes = {k: v for k, v in changes.items() if v is not None}
        return validate(replace(self, **changes))


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def validate(cfg):
    errors = []
    if not _is_int(cfg.n) or cfg.n < 2:
        errors.append(("n", f"must be an integer >= 2, got {cfg.n!r}"))
    if not _is_int(cfg.k) or cfg.k < 2:
        errors.append(("k", f"must be an integer >= 2, got {cfg.k!r}"))
    for name in ("p", "q"):
        v = getattr(cfg, name)
        if not _is_num(v) or not 0.0 <= v <= 1.0:
            errors.append((name, f"must be a probability, got {v!r}"))
    if _is_num(cfg.p) and _is_num(cfg.q) and not cfg.p > cfg.q:
        errors.append(("q", f"must be smaller than p (got p={cfg.p}, q={cfg.q})"))
    if cfg.sizes != "balanced":
        if not isinstance(cfg.sizes, (list, tuple)) or not all(_is_int(s) and s >= 1 for s in cfg.sizes):
            errors.append(("sizes", "must be 'balanced' or a list of positive integers"))
        else:
            if _is_int(cfg.k) and len(cfg.sizes) != cfg.k:
                errors.append(("sizes", f"needs {cfg.k} entries, got {len(cfg.sizes)}"))
            if _is_int(cfg.n) and sum(cfg.sizes) != cfg.n:
                errors.append(("sizes", f"sum to {sum(cfg.sizes)}, expected n={cfg.n}"))

    pr = cfg.prior
    if pr.type not in PRIORS:
        errors.append(("prior.type", f"must be one of {PRIORS}, got {pr.type!r}"))
    for name in ("alpha_p", "beta_p", "alpha_q", "beta_q"):
        v = getattr(pr, name)
        if not _is_num(v) or not v > 0:
            errors.append((f"prior.{name}", f"must be positive, got {v!r}"))
    if pr.type == "explicit":
        if (pr.weights is None) == (pr.path is None):
            errors.append(("prior", "explicit prior needs exactly one of 'weights' or 'path'"))
        if pr.weights is not None:
            if not isinstance(pr.weights, list) or not all(_is_num(w) and w > 0 for w in pr.weights):
                errors.append(("prior.weights", "must be a list of positive numbers"))
            elif _is_int(cfg.k) and len(pr.weights) != cfg.k:
                errors.append(("prior.weights", f"needs {cfg.k} entries, got {len(pr.weights)}"))
        if pr.path is not None and not Path(pr.path).is_file():
            errors.append(("prior.path", f"file not found: {pr.path}"))

    ini = cfg.init
    if ini.type not in INITIALIZERS:
        errors.append(("init.type", f"must be one of {INITIALIZERS}, got {ini.type!r}"))
    if ini.type == "corrupt" and (not _is_num(ini.fraction) or not 0.0 <= ini.fraction < 1.0):
        errors.append(("init.fraction", f"must lie in [0, 1), got {ini.fraction!r}"))
    if ini.type == "file" and (ini.path is None or not Path(ini.path).is_file()):
        errors.append(("init.path", f"file not found: {ini.path}"))

    if cfg.algorithm not in ALGORITHMS:
        errors.append(("algorithm", f"must be one of {ALGORITHMS}, got {cfg.algorithm!r}"))
    if cfg.iterations is not None and (not _is_int(cfg.iterations) or cfg.iterations < 1):
        errors.append(("iterations", f"must be a positive integer, got {cfg.iterations!r}"))
    if not _is_int(cfg.replications) or cfg.replications < 1:
        errors.append(("replications", f"must be a positive integer, got {cfg.replications!r}"))
    if not _is_int(cfg.seed) or not 0 <= cfg.seed < 2**64:
        errors.append(("seed", f"must be an unsigned 64-bit integer, got {cfg.seed!r}"))
    if errors:
        raise ConfigError(errors)
    return cfg


def _section(data, key, cls, errors):
    raw = data.pop(key, None) or {}
    if not isinstance(raw, dict):
        errors.append((key, "must be a mapping"))
        return cls()
    known = set(cls.__dataclass_fields__)
    for extra in sorted(set(raw) - known):
        errors.append((f"{key}.{extra}", "unknown field"))
    return cls(**{k: v for k, v in raw.items() if k in known})


def from_dict(data):
    data = dict(data)
    errors = []
    prior = _section(data, "prior", PriorSpec, errors)
    init = _section(data, "init", InitSpec, errors)
    known = set(ExperimentConfig.__dataclass_fields__)
    for extra in sorted(set(data) - known):
        errors.append((extra, "unknown field"))
    for required in ("n", "k", "p", "q"):
        if required not in data:
            errors.append((required, "missing"))
    if errors:
        raise ConfigError(errors)
    cfg = ExperimentConfig(prior=prior, init=init, **{k: v for k, v in data.items() if k in known})
    return validate(cfg)


def load_config(path):
    data = yaml.safe_load(Path(path).read_text())
    if not isinstance(data, dict):
        raise ConfigError([("<root>", "config must be a mapping")])
    return from_dict(data)
