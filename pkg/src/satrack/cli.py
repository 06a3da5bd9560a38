"""Command-line entry point.

    satrack <run|rate|mixing|fixed-point|validate> --config <path>
            [--out <dir>] [--full-scale] [--workers N] [--seed-override S]

`run` writes <name>_curve.csv and <name>_meta.json; `rate` prints the
fitted slope and writes the meta file; `mixing` writes the mixing
profile, CLC, and forgetting reports as CSV; `fixed-point` prints the
reference root and its residual; `validate` echoes the parsed config
and computes nothing.  All files are written atomically (temp file +
rename), so an error never leaves partial output.  Exit codes: 0 ok,
2 configuration/validation, 3 non-convergence, 4 domain exits, 5 I/O,
1 anything else; errors also emit a JSON object on standard error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import __version__
from ._backend import backend_name
from .config import config_to_dict, parse_config
from .errors import ConfigError, DomainExitError, NonConvergenceError, SatrackError
from .experiments import (
    Analytic,
    ExperimentConfig,
    reference_value_with_stderr,
    run_error_curve,
)
from .fields import Kohonen, QuantilePinball, mean_field, closed_form_mean_field
from .mixing import estimate_clc, forgetting_partial_sum, gamma_total
from .rng import RngState
from .signals import LinearProcessSpec


@dataclass
class RunManifest:
    config_path: str
    output_dir: str
    full_scale: bool
    workers: int
    resolved_config: ExperimentConfig


def _load_config_text(path: str) -> str:
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    # bare preset names resolve to the shipped configs
    stem = path[:-5] if path.endswith(".json") else path
    try:
        return (resources.files("satrack") / "presets" / f"{stem}.json").read_text()
    except (FileNotFoundError, TypeError):
        raise ConfigError(f"config not found: {path} (and no preset of that name)")


def list_presets() -> list:
    root = resources.files("satrack") / "presets"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def build_manifest(args) -> RunManifest:
    text = _load_config_text(args.config)
    cfg = parse_config(text, full_scale=args.full_scale)
    if args.seed_override is not None:
        cfg = dataclasses.replace(cfg, base_seed=args.seed_override)
    out_dir = args.out or os.environ.get("SATRACK_OUT", ".")
    workers = args.workers if args.workers > 0 else (os.cpu_count() or 1)
    return RunManifest(args.config, out_dir, args.full_scale, workers, cfg)


def _atomic_write(path: str, data: str):
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".satrack-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _curve_meta(manifest, curve) -> dict:
    return {
        "config": config_to_dict(manifest.resolved_config),
        "satrack_version": __version__,
        "kernel_backend": backend_name(),
        "full_scale": manifest.full_scale,
        "reference_value": [float(v) for v in curve.reference],
        "reference_stderr": [float(v) for v in curve.reference_stderr],
        "slope": curve.slope_fit.slope if curve.slope_fit else None,
        "intercept": curve.slope_fit.intercept if curve.slope_fit else None,
        "total_domain_exits": curve.total_exits,
        "rows": [
            {
                "lambda": r.gain,
                "mean_abs_error": r.mean_abs_error,
                "stderr": r.stderr,
                "paths": r.paths,
                "horizon": r.horizon,
                "exits": r.exits,
                "mean_theta": list(r.mean_theta),
                "theta_stderr": list(r.theta_stderr),
            }
            for r in curve.rows
        ],
    }


def write_trajectory_csv(trajectory, path: str):
    """Export a Trajectory as CSV with columns t, theta_1..theta_N."""
    dim = trajectory.points.shape[1]
    header = ["t"] + [f"theta_{j + 1}" for j in range(dim)]
    rows = [
        (t, *[float(v) for v in trajectory.points[t]])
        for t in range(trajectory.points.shape[0])
    ]
    _atomic_write(path, _csv_text(header, rows))


def _cmd_run(manifest: RunManifest) -> int:
    curve = run_error_curve(manifest.resolved_config, workers=manifest.workers)
    name = manifest.resolved_config.name
    rows = [
        (r.gain, r.mean_abs_error, r.stderr, r.paths, r.horizon) for r in curve.rows
    ]
    _atomic_write(
        os.path.join(manifest.output_dir, f"{name}_curve.csv"),
        _csv_text(["lambda", "mean_abs_error", "stderr", "paths", "horizon"], rows),
    )
    _atomic_write(
        os.path.join(manifest.output_dir, f"{name}_meta.json"),
        _json_text(_curve_meta(manifest, curve)),
    )
    return 0


def _cmd_rate(manifest: RunManifest) -> int:
    curve = run_error_curve(manifest.resolved_config, workers=manifest.workers)
    name = manifest.resolved_config.name
    slope = curve.slope()  # raises for degenerate single-point grids
    print(f"{name}: fitted log2-log2 slope = {slope:.4f} "
          f"(intercept {curve.slope_fit.intercept:.4f}, {len(curve.rows)} gains)")
    for r in curve.rows:
        print(f"  lambda={r.gain!r} mean_abs_error={r.mean_abs_error!r} stderr={r.stderr!r}")
    _atomic_write(
        os.path.join(manifest.output_dir, f"{name}_meta.json"),
        _json_text(_curve_meta(manifest, curve)),
    )
    return 0


def _cmd_mixing(manifest: RunManifest) -> int:
    cfg = manifest.resolved_config
    if not isinstance(cfg.signal, LinearProcessSpec):
        raise ConfigError("mixing diagnostics need a linear-process signal")
    name = cfg.name
    profile = gamma_total(cfg.signal, r=2.0, tau_max=60)
    rows = [(int(t + 1), float(g)) for t, g in enumerate(profile.gamma_sequence)]
    _atomic_write(
        os.path.join(manifest.output_dir, f"{name}_mixing_profile.csv"),
        _csv_text(["tau", "gamma"], rows),
    )
    clc = estimate_clc(
        cfg.field, cfg.signal, cfg.domain, pair_count=200, mc_samples=20000,
        rng=RngState(cfg.base_seed, 1),
    )
    _atomic_write(
        os.path.join(manifest.output_dir, f"{name}_clc.csv"),
        _csv_text(
            ["k_hat", "pairs_tested", "pairs_skipped", "worst_pair"],
            [(clc.k_hat, clc.pairs_tested, clc.pairs_skipped, json.dumps([list(p) for p in clc.worst_pair]))],
        ),
    )
    lo, hi = cfg.domain.lower[0], cfg.domain.upper[0]
    grid = [np.asarray([v]) for v in np.linspace(lo, hi, 9)]
    forgetting = forgetting_partial_sum(
        cfg.field, cfg.signal, k_max=60, theta_grid=grid, mc_histories=4000,
        rng=RngState(cfg.base_seed, 2),
    )
    rows = [
        (int(k), float(forgetting.per_k_terms[k]), float(forgetting.partial_sums[k]))
        for k in range(forgetting.k_max + 1)
    ]
    _atomic_write(
        os.path.join(manifest.output_dir, f"{name}_forgetting.csv"),
        _csv_text(["k", "term", "partial_sum"], rows),
    )
    meta = {
        "config": config_to_dict(cfg),
        "satrack_version": __version__,
        "gamma_total": profile.gamma_total,
        "gamma_tail_bound": profile.tail_bound,
        "m_r": profile.m_r,
        "clc_k_hat": clc.k_hat,
        "forgetting_c0_estimate": forgetting.c0_estimate,
    }
    _atomic_write(os.path.join(manifest.output_dir, f"{name}_mixing_meta.json"), _json_text(meta))
    return 0


def _cmd_fixed_point(manifest: RunManifest) -> int:
    cfg = manifest.resolved_config
    if not isinstance(cfg.reference, Analytic):
        cfg = dataclasses.replace(cfg, reference=Analytic())
    root, _ = reference_value_with_stderr(cfg)
    if isinstance(cfg.field, (QuantilePinball, Kohonen)):
        mf = closed_form_mean_field(cfg.field, cfg.signal)
        residual = float(np.max(np.abs(mean_field(mf, root))))
    else:  # pragma: no cover - config layer only builds the two families
        residual = float("nan")
    print(_json_text({"theta_star": [float(v) for v in root], "residual": residual}), end="")
    return 0


def _cmd_validate(manifest: RunManifest) -> int:
    print(_json_text(config_to_dict(manifest.resolved_config)), end="")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "rate": _cmd_rate,
    "mixing": _cmd_mixing,
    "fixed-point": _cmd_fixed_point,
    "validate": _cmd_validate,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satrack",
        description="Fixed-gain stochastic approximation experiments and diagnostics",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("run", "run an error curve; write CSV + metadata"),
        ("rate", "run an error curve; print the fitted slope"),
        ("mixing", "write mixing profile, CLC, and forgetting reports"),
        ("fixed-point", "print the reference root and its residual"),
        ("validate", "parse and echo the config without computing"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="config path or shipped preset name")
        p.add_argument("--out", default=None, help="output directory (default: $SATRACK_OUT or .)")
        p.add_argument("--full-scale", action="store_true", help="apply the config's full_scale section")
        p.add_argument("--workers", type=int, default=1, help="worker processes (0 = all cores)")
        p.add_argument("--seed-override", type=int, default=None, help="replace the config seed")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        manifest = build_manifest(args)
        return _COMMANDS[args.command](manifest)
    except (ConfigError, ValueError) as exc:
        _emit_error("config", exc)
        return 2
    except NonConvergenceError as exc:
        _emit_error("non-convergence", exc)
        return 3
    except DomainExitError as exc:
        _emit_error("domain-exit", exc)
        return 4
    except OSError as exc:
        _emit_error("io", exc)
        return 5
    except SatrackError as exc:  # pragma: no cover - catch-all for new subtypes
        _emit_error("error", exc)
        return 1


def _emit_error(category: str, exc: Exception):
    payload = {"error": {"category": category, "message": str(exc)}}
    print(json.dumps(payload), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
