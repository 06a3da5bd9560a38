"""JSON experiment configuration: strict parsing and round-tripping.

Unknown keys are rejected so a typo cannot silently change a scientific
run.  The same mapping serializes a config back into the metadata echo
written next to every result file.
"""

from __future__ import annotations

import json

from .errors import ConfigError
from .experiments import (
    Analytic,
    ExperimentConfig,
    Fixed,
    PerGain,
    SelfReferential,
)
from .fields import Box, Kohonen, QuantilePinball
from .signals import (
    ArctanOf,
    Finite,
    Geometric,
    LinearProcessSpec,
    PowerDecay,
    RandomEnvChainSpec,
    Uniform01,
)


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ConfigError(f"{where}: missing required key '{key}'")
    return obj[key]


def _check_keys(obj: dict, allowed: set, where: str):
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")


def _number(value, key: str, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: '{key}' must be a number")
    return float(value)


def _integer(value, key: str, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: '{key}' must be an integer")
    return value


def _parse_linear(obj: dict, where: str) -> LinearProcessSpec:
    kind = _require(obj, "kind", where)
    cutoff = obj.get("tail_cutoff", 12)
    if kind == "geometric":
        _check_keys(obj, {"kind", "alpha", "tail_cutoff"}, where)
        return LinearProcessSpec(Geometric(_number(_require(obj, "alpha", where), "alpha", where)), cutoff)
    if kind == "power":
        _check_keys(obj, {"kind", "beta", "tail_cutoff"}, where)
        return LinearProcessSpec(PowerDecay(_number(_require(obj, "beta", where), "beta", where)), cutoff)
    if kind == "finite":
        _check_keys(obj, {"kind", "coeffs", "tail_cutoff"}, where)
        coeffs = _require(obj, "coeffs", where)
        if not isinstance(coeffs, list) or not coeffs:
            raise ConfigError(f"{where}: 'coeffs' must be a nonempty list")
        return LinearProcessSpec(Finite(tuple(float(c) for c in coeffs)), cutoff)
    raise ConfigError(f"{where}: '{kind}' is not a linear signal kind")


def parse_signal(obj: dict, where: str = "signal"):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: must be an object")
    kind = _require(obj, "kind", where)
    if kind in ("geometric", "power", "finite"):
        return _parse_linear(obj, where)
    if kind == "uniform01":
        _check_keys(obj, {"kind"}, where)
        return Uniform01()
    if kind == "arctan":
        _check_keys(obj, {"kind", "inner"}, where)
        return ArctanOf(_parse_linear(_require(obj, "inner", where), f"{where}.inner"))
    if kind == "random_env":
        _check_keys(obj, {"kind", "kappa", "rho", "h1_bound", "h2_bound", "env"}, where)
        return RandomEnvChainSpec(
            kappa=_number(_require(obj, "kappa", where), "kappa", where),
            rho=_number(_require(obj, "rho", where), "rho", where),
            h1_bound=_number(_require(obj, "h1_bound", where), "h1_bound", where),
            h2_bound=_number(_require(obj, "h2_bound", where), "h2_bound", where),
            env_coefficients=_parse_linear(_require(obj, "env", where), f"{where}.env"),
        )
    raise ConfigError(f"{where}: unknown signal kind '{kind}'")


def parse_field(obj: dict, where: str = "field"):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: must be an object")
    kind = _require(obj, "kind", where)
    if kind == "pinball":
        _check_keys(obj, {"kind", "q"}, where)
        return QuantilePinball(_number(_require(obj, "q", where), "q", where))
    if kind == "kohonen":
        _check_keys(obj, {"kind", "cells"}, where)
        return Kohonen(_integer(_require(obj, "cells", where), "cells", where))
    raise ConfigError(f"{where}: unknown field kind '{kind}' (configs support pinball and kohonen)")


_TOP_KEYS = {
    "name",
    "signal",
    "field",
    "theta0",
    "domain",
    "domain_policy",
    "lambda_grid",
    "horizon",
    "paths",
    "seed",
    "reference",
    "full_scale",
}


def parse_config_dict(doc: dict, full_scale: bool = False) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    _check_keys(doc, _TOP_KEYS, "config")
    name = _require(doc, "name", "config")
    if not isinstance(name, str) or not name:
        raise ConfigError("config: 'name' must be a nonempty string")

    signal = parse_signal(_require(doc, "signal", "config"))
    field = parse_field(_require(doc, "field", "config"))

    theta0 = _require(doc, "theta0", "config")
    if not isinstance(theta0, list) or not theta0:
        raise ConfigError("config: 'theta0' must be a nonempty list of numbers")

    dom = _require(doc, "domain", "config")
    _check_keys(dom, {"lower", "upper"}, "domain")
    domain = Box(tuple(_require(dom, "lower", "domain")), tuple(_require(dom, "upper", "domain")))

    grid = _require(doc, "lambda_grid", "config")
    if not isinstance(grid, list) or not grid:
        raise ConfigError("config: 'lambda_grid' must be a nonempty list")
    if any(a <= b for a, b in zip(grid, grid[1:])):
        raise ConfigError("config: lambda_grid must be strictly decreasing")
    if any(not (0.0 < g < 1.0) for g in grid):
        raise ConfigError("config: lambda_grid entries must lie in (0, 1)")

    hz = _require(doc, "horizon", "config")
    hkind = _require(hz, "kind", "horizon")
    if hkind == "per_gain":
        _check_keys(hz, {"kind", "c"}, "horizon")
        horizon = PerGain(_number(_require(hz, "c", "horizon"), "c", "horizon"))
    elif hkind == "fixed":
        _check_keys(hz, {"kind", "steps"}, "horizon")
        horizon = Fixed(_integer(_require(hz, "steps", "horizon"), "steps", "horizon"))
    else:
        raise ConfigError(f"horizon: unknown kind '{hkind}'")

    paths = _integer(_require(doc, "paths", "config"), "paths", "config")
    seed = _integer(_require(doc, "seed", "config"), "seed", "config")

    ref_obj = _require(doc, "reference", "config")
    rkind = _require(ref_obj, "kind", "reference")
    if rkind == "analytic":
        _check_keys(ref_obj, {"kind"}, "reference")
        reference = Analytic()
    elif rkind == "self_referential":
        _check_keys(ref_obj, {"kind", "lambda_ref"}, "reference")
        reference = SelfReferential(
            _number(_require(ref_obj, "lambda_ref", "reference"), "lambda_ref", "reference")
        )
    else:
        raise ConfigError(f"reference: unknown kind '{rkind}'")

    if full_scale:
        fs = doc.get("full_scale")
        if fs is None:
            raise ConfigError("config: no 'full_scale' section to apply")
        _check_keys(fs, {"horizon", "paths"}, "full_scale")
        if "horizon" in fs:
            hz = fs["horizon"]
            if _require(hz, "kind", "full_scale.horizon") == "fixed":
                _check_keys(hz, {"kind", "steps"}, "full_scale.horizon")
                horizon = Fixed(_integer(hz["steps"], "steps", "full_scale.horizon"))
            else:
                _check_keys(hz, {"kind", "c"}, "full_scale.horizon")
                horizon = PerGain(_number(hz["c"], "c", "full_scale.horizon"))
        if "paths" in fs:
            paths = _integer(fs["paths"], "paths", "full_scale")

    return ExperimentConfig(
        name=name,
        signal=signal,
        field=field,
        theta0=tuple(float(v) for v in theta0),
        lambda_grid=tuple(float(g) for g in grid),
        horizon_rule=horizon,
        paths=paths,
        base_seed=seed,
        reference=reference,
        domain=domain,
        domain_policy=doc.get("domain_policy", "none"),
    )


def parse_config(text: str, full_scale: bool = False) -> ExperimentConfig:
    """Parse and validate a JSON config document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_config_dict(doc, full_scale=full_scale)


def _signal_to_dict(signal) -> dict:
    if isinstance(signal, LinearProcessSpec):
        r = signal.rule
        if isinstance(r, Geometric):
            return {"kind": "geometric", "alpha": r.alpha, "tail_cutoff": signal.tail_cutoff}
        if isinstance(r, PowerDecay):
            return {"kind": "power", "beta": r.beta, "tail_cutoff": signal.tail_cutoff}
        return {"kind": "finite", "coeffs": list(r.coeffs), "tail_cutoff": signal.tail_cutoff}
    if isinstance(signal, Uniform01):
        return {"kind": "uniform01"}
    if isinstance(signal, ArctanOf):
        return {"kind": "arctan", "inner": _signal_to_dict(signal.inner)}
    return {
        "kind": "random_env",
        "kappa": signal.kappa,
        "rho": signal.rho,
        "h1_bound": signal.h1_bound,
        "h2_bound": signal.h2_bound,
        "env": _signal_to_dict(signal.env_coefficients),
    }


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Normalized echo of a config (used in metadata files)."""
    if isinstance(cfg.field, QuantilePinball):
        field = {"kind": "pinball", "q": cfg.field.q}
    else:
        field = {"kind": "kohonen", "cells": cfg.field.cells}
    if isinstance(cfg.horizon_rule, Fixed):
        horizon = {"kind": "fixed", "steps": cfg.horizon_rule.steps}
    else:
        horizon = {"kind": "per_gain", "c": cfg.horizon_rule.c}
    if isinstance(cfg.reference, Analytic):
        reference = {"kind": "analytic"}
    else:
        reference = {"kind": "self_referential", "lambda_ref": cfg.reference.lambda_ref}
    return {
        "name": cfg.name,
        "signal": _signal_to_dict(cfg.signal),
        "field": field,
        "theta0": list(cfg.theta0),
        "domain": {"lower": list(cfg.domain.lower), "upper": list(cfg.domain.upper)},
        "domain_policy": cfg.domain_policy,
        "lambda_grid": list(cfg.lambda_grid),
        "horizon": horizon,
        "paths": cfg.paths,
        "seed": cfg.base_seed,
        "reference": reference,
    }
