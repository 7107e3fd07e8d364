"""Run configuration: YAML file + ``--set key=value`` overrides.

Every key has a default, so an empty file is a valid configuration. Unknown
keys and ill-typed values are reported with their dotted path.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .errors import NLQMError

MODES = ("analytic", "nonlinear", "linearized", "reduced", "spatial", "appendix_a", "appendix_b", "verify")

DEFAULTS = {
    "mode": "analytic",
    "hamiltonian": {"kind": "random", "dim": 4, "seed": 42, "values": None, "path": None},
    "coupling": {"a": 1.0, "b": 0.5},
    "solution": {"omega0": 1.0, "vartheta": 0.3, "theta": 0.7, "t0": 0.0},
    "states": {"init": "analytic", "seed": 1, "A": None, "B": None},
    "time": {"t_start": -2.0, "t_end": 2.0, "n_samples": 41},
    "integrator": {"method": "rk45_adaptive", "abs_tol": 1e-10, "rel_tol": 1e-10,
                   "max_step": math.inf, "initial_step": 0.0},
    "rhs_variant": "derived",
    "spatial": {"x_min": -10.0, "x_max": 10.0, "n_points": 256, "dt": 1e-3,
                "modes": [-3, -1, 2, 5], "trap_omega": 0.0},
    "appendix_a": {"t0": 0.0},
    "appendix_b": {"tau0": 0.7, "gamma0": [0.8, 0.3], "g_real": 1.3, "a_weight": 0.5},
    "checks": {},
    "suite": "all",
    "output": {"directory": "nlqm_out", "formats": ["csv", "json"]},
}


class ConfigError(NLQMError, ValueError):
    """Invalid configuration; ``field`` is the dotted key at fault."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


def _merge(base, override, path=""):
    out = copy.deepcopy(base)
    for key, value in (override or {}).items():
        where = f"{path}.{key}" if path else str(key)
        if key not in base:
            raise ConfigError(where, "unknown key")
        if isinstance(base[key], dict) and key != "checks":
            if not isinstance(value, dict):
                raise ConfigError(where, "expected a mapping")
            out[key] = _merge(base[key], value, where)
        else:
            out[key] = value
    return out


def _set_dotted(tree, dotted, value):
    keys = dotted.split(".")
    node = tree
    for k in keys[:-1]:
        node = node.setdefault(k, {})
        if not isinstance(node, dict):
            raise ConfigError(dotted, "cannot set a sub-key of a scalar")
    node[keys[-1]] = value


def parse_override(item: str):
    if "=" not in item:
        raise ConfigError(item, "override must look like key=value")
    key, raw = item.split("=", 1)
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError(key, f"cannot parse value {raw!r}: {exc}") from exc
    return key.strip(), value


def load_config(path=None, overrides=()) -> "RunConfig":
    """Read a YAML config (or defaults when ``path`` is None) and apply overrides."""
    tree = {}
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError("", f"config file {p} does not exist")
        try:
            tree = yaml.safe_load(p.read_text()) or {}
        except yaml.YAMLError as exc:
            raise ConfigError("", f"{p}: {exc}") from exc
        if not isinstance(tree, dict):
            raise ConfigError("", f"{p}: top level must be a mapping")
    for item in overrides:
        key, value = parse_override(item) if isinstance(item, str) else item
        _set_dotted(tree, key, value)
    return RunConfig.from_tree(_merge(DEFAULTS, tree))


def _num(tree, dotted, kind=float, positive=False, nonneg=False):
    node = tree
    for k in dotted.split("."):
        node = node[k]
    if isinstance(node, str) and node.strip().lower() in (".inf", "inf", "infinity"):
        node = math.inf
    try:
        if isinstance(node, bool):
            raise TypeError
        value = kind(node)
        if kind is int and value != node:
            raise TypeError
    except (TypeError, ValueError):
        raise ConfigError(dotted, f"expected {kind.__name__}, got {node!r}") from None
    if kind is float and math.isnan(value):
        raise ConfigError(dotted, "NaN is not allowed")
    if positive and not value > 0:
        raise ConfigError(dotted, "must be positive")
    if nonneg and value < 0:
        raise ConfigError(dotted, "must be non-negative")
    return value


def _complex_list(value, dotted):
    """Accept ``[[re, im], ...]``, ``[re, ...]`` or strings like ``"1+2j"``."""
    if value is None:
        return None
    out = []
    try:
        for item in value:
            if isinstance(item, (list, tuple)):
                re_, im_ = item
                out.append(complex(float(re_), float(im_)))
            else:
                out.append(complex(str(item).replace(" ", "")) if isinstance(item, str) else complex(item))
    except (TypeError, ValueError):
        raise ConfigError(dotted, "expected a list of numbers, [re, im] pairs or complex strings") from None
    return np.array(out, dtype=np.complex128)


@dataclass(frozen=True)
class RunConfig:
    tree: dict

    @classmethod
    def from_tree(cls, tree) -> "RunConfig":
        cfg = cls(tree)
        cfg.validate()
        return cfg

    def __getitem__(self, key):
        return self.tree[key]

    @property
    def mode(self) -> str:
        return self.tree["mode"]

    def validate(self):
        t = self.tree
        if t["mode"] not in MODES:
            raise ConfigError("mode", f"must be one of {MODES}")
        kind = t["hamiltonian"]["kind"]
        if kind not in ("random", "diag", "file"):
            raise ConfigError("hamiltonian.kind", "must be random, diag or file")
        if kind == "random":
            if _num(t, "hamiltonian.dim", int) < 1:
                raise ConfigError("hamiltonian.dim", "must be >= 1")
            _num(t, "hamiltonian.seed", int)
        if kind == "diag" and not t["hamiltonian"]["values"]:
            raise ConfigError("hamiltonian.values", "diag Hamiltonian needs a list of energies")
        if kind == "file":
            path = t["hamiltonian"]["path"]
            if not path or not Path(path).exists():
                raise ConfigError("hamiltonian.path", f"file {path!r} does not exist")
        _num(t, "coupling.a")
        _num(t, "coupling.b")
        _num(t, "solution.omega0", positive=True)
        _num(t, "solution.vartheta")
        _num(t, "solution.theta")
        _num(t, "solution.t0")
        if t["states"]["init"] not in ("analytic", "orthogonal"):
            raise ConfigError("states.init", "must be analytic or orthogonal")
        t0, t1 = _num(t, "time.t_start"), _num(t, "time.t_end")
        if not t1 > t0:
            raise ConfigError("time.t_end", "must exceed time.t_start")
        if _num(t, "time.n_samples", int) < 2:
            raise ConfigError("time.n_samples", "must be >= 2")
        if t["integrator"]["method"] not in ("rk4_fixed", "rk45_adaptive"):
            raise ConfigError("integrator.method", "must be rk4_fixed or rk45_adaptive")
        _num(t, "integrator.abs_tol", positive=True)
        _num(t, "integrator.rel_tol", positive=True)
        _num(t, "integrator.max_step", positive=True)
        step = _num(t, "integrator.initial_step", nonneg=True)
        if t["integrator"]["method"] == "rk4_fixed" and step == 0:
            raise ConfigError("integrator.initial_step", "rk4_fixed needs a positive step")
        if t["rhs_variant"] not in ("derived", "printed"):
            raise ConfigError("rhs_variant", "must be derived or printed")
        n = _num(t, "spatial.n_points", int)
        if n < 8 or n & (n - 1):
            raise ConfigError("spatial.n_points", "must be a power of two >= 8")
        _num(t, "spatial.dt", positive=True)
        _num(t, "spatial.trap_omega", nonneg=True)
        if _num(t, "spatial.x_max") <= _num(t, "spatial.x_min"):
            raise ConfigError("spatial.x_max", "must exceed spatial.x_min")
        _num(t, "appendix_b.tau0")
        _num(t, "appendix_b.g_real")
        _num(t, "appendix_b.a_weight", nonneg=True)
        _complex_list(t["states"]["A"], "states.A")
        _complex_list(t["states"]["B"], "states.B")
        if not isinstance(t["checks"], dict):
            raise ConfigError("checks", "expected a mapping of metric -> tolerance")
        for k in t["checks"]:
            _num(t, f"checks.{k}", positive=True)
        if t["suite"] not in ("all", "reduced", "analytic", "integrator", "appendix", "spatial"):
            raise ConfigError("suite", "unknown suite")
        fmts = t["output"]["formats"]
        if not isinstance(fmts, list) or any(f not in ("csv", "json", "svg") for f in fmts):
            raise ConfigError("output.formats", "must be a list drawn from csv, json, svg")

    def gamma0(self) -> complex:
        v = self.tree["appendix_b"]["gamma0"]
        if isinstance(v, (list, tuple)):
            return complex(float(v[0]), float(v[1]))
        return complex(str(v).replace(" ", "")) if isinstance(v, str) else complex(v)

    def complex_vector(self, dotted):
        section, key = dotted.split(".")
        return _complex_list(self.tree[section][key], dotted)
