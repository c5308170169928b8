"""Run configurations, report documents, and their JSON/CSV serialization.

Reports are plain dictionaries with a pinned schema version, no
timestamps, and deterministic content for a fixed config and seed, so
emitted files are byte-identical across runs. CSV numbers are written
with 12 significant digits and '.' as the decimal point regardless of
locale.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

import jsonschema
import numpy as np

from .alpha import AlphaReport, optimize_alpha, theorem_bounds
from .certificates import chain_check, khinchin_check
from .errors import ConfigError, GroupError
from .groups import Group, difference_set, make_group, make_point_set, sample_point_set
from .operators import NormCertificate, canonical_operator, norm_certified
from .peaks import build_peak, greedy_base_set, validate_peak

SCHEMA_VERSION = 1
MODES = ("bounds", "alpha", "chain", "khinchin", "sweep")

SWEEP_CSV_COLUMNS = ("n", "seed", "theorem_lower", "canonical_hi", "optimized_hi", "theorem_upper")


@dataclass(frozen=True)
class InstanceConfig:
    """One resolved run configuration with defaults applied."""

    mode: str
    group: tuple[int, ...] | None = None
    points: tuple[tuple[int, ...], ...] | None = None
    resolution: int = 32
    budget: int = 2000
    seed: int = 0
    n_max: int = 4
    seeds: tuple[int, ...] = (0,)
    count: int = 1000
    max_n: int = 10


_CONFIG_KEYS = {
    "mode",
    "group",
    "K",
    "M",
    "budget",
    "seed",
    "n_max",
    "seeds",
    "count",
    "max_n",
}


def _require_int(raw: dict, key: str, default: int, minimum: int) -> int:
    value = raw.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"field '{key}' must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"field '{key}' must be >= {minimum}, got {value}")
    return value


def config_from_dict(raw: dict, mode: str | None = None) -> InstanceConfig:
    """Validate a raw config mapping and apply defaults.

    ``mode`` overrides the config's own mode field (the CLI subcommand
    wins). Unknown keys, missing required fields and malformed values
    raise ``ConfigError`` naming the offending field.
    """
    if not isinstance(raw, dict):
        raise ConfigError(f"config must be a JSON object, got {type(raw).__name__}")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")

    mode = mode or raw.get("mode")
    if mode not in MODES:
        raise ConfigError(f"field 'mode' must be one of {list(MODES)}, got {mode!r}")

    group = None
    if "group" in raw:
        factors = raw["group"]
        if not isinstance(factors, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in factors
        ):
            raise ConfigError(f"field 'group' must be a list of integers, got {factors!r}")
        group = tuple(factors)

    points = None
    if "K" in raw:
        entries = raw["K"]
        if not isinstance(entries, list) or not all(isinstance(p, list) for p in entries):
            raise ConfigError("field 'K' must be a list of residue vectors")
        points = tuple(tuple(int(x) for x in p) for p in entries)

    seeds_raw = raw.get("seeds", [0])
    if not isinstance(seeds_raw, list) or not all(
        isinstance(s, int) and not isinstance(s, bool) for s in seeds_raw
    ):
        raise ConfigError(f"field 'seeds' must be a list of integers, got {seeds_raw!r}")
    if not seeds_raw:
        raise ConfigError("field 'seeds' must not be empty")

    config = InstanceConfig(
        mode=mode,
        group=group,
        points=points,
        resolution=_require_int(raw, "M", 32, 4),
        budget=_require_int(raw, "budget", 2000, 0),
        seed=_require_int(raw, "seed", 0, -(2**63)),
        n_max=_require_int(raw, "n_max", 4, 1),
        seeds=tuple(seeds_raw),
        count=_require_int(raw, "count", 1000, 1),
        max_n=_require_int(raw, "max_n", 10, 1),
    )
    _check_mode_requirements(config)
    return config


def _check_mode_requirements(config: InstanceConfig) -> None:
    needs_group = config.mode in ("bounds", "alpha", "chain", "sweep")
    if needs_group and config.group is None:
        raise ConfigError(f"field 'group' is required for mode '{config.mode}'")
    needs_points = config.mode in ("bounds", "alpha", "chain")
    if needs_points and config.points is None:
        raise ConfigError(f"field 'K' is required for mode '{config.mode}'")
    if config.group is not None:
        try:
            group = make_group(config.group)
        except GroupError as exc:
            raise ConfigError(f"field 'group': {exc}") from exc
        if config.points is not None:
            try:
                make_point_set(group, config.points)
            except GroupError as exc:
                raise ConfigError(f"field 'K': {exc}") from exc
        if config.mode == "sweep" and config.n_max > group.order:
            raise ConfigError(
                f"field 'n_max' ({config.n_max}) exceeds the group order ({group.order})"
            )


def load_config(path: str | Path, mode: str | None = None) -> InstanceConfig:
    """Read and validate a JSON config file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON (line {exc.lineno}, col {exc.colno}): {exc.msg}") from exc
    return config_from_dict(raw, mode=mode)


def override_config(
    config: InstanceConfig,
    seed: int | None = None,
    resolution: int | None = None,
    budget: int | None = None,
) -> InstanceConfig:
    """Apply CLI flag overrides on top of a loaded config."""
    if seed is not None:
        config = replace(config, seed=seed)
    if resolution is not None:
        if resolution < 4:
            raise ConfigError(f"grid resolution must be >= 4, got {resolution}")
        config = replace(config, resolution=resolution)
    if budget is not None:
        if budget < 0:
            raise ConfigError(f"budget must be >= 0, got {budget}")
        config = replace(config, budget=budget)
    return config


def _certificate_dict(cert: NormCertificate) -> dict:
    return {
        "grid_max": cert.grid_max,
        "slack": cert.slack,
        "lo": cert.lo,
        "hi": cert.hi,
        "resolution": cert.resolution,
    }


def _base_report(config: InstanceConfig) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "mode": config.mode,
        "resolution": config.resolution,
        "seed": config.seed,
        "violations": [],
    }


def _instance_parts(config: InstanceConfig):
    group = make_group(config.group)
    points = make_point_set(group, config.points)
    forbidden = difference_set(group, points)
    peak = build_peak(group, greedy_base_set(group, forbidden))
    return group, points, forbidden, peak


def _group_dict(group: Group) -> dict:
    return {"factors": list(group.factors), "order": group.order}


def _alpha_sections(report: AlphaReport) -> dict:
    return {
        "theorem_lower": report.theorem_lower,
        "theorem_upper": report.theorem_upper,
        "canonical": _certificate_dict(report.canonical),
        "optimized": _certificate_dict(report.optimized),
        "iterations": report.iterations,
        "objective_trace": list(report.objective_trace),
    }


def _run_bounds(config: InstanceConfig) -> dict:
    group, points, forbidden, peak = _instance_parts(config)
    validation = validate_peak(peak, forbidden)
    operator = canonical_operator(group, points, peak)
    cert = norm_certified(operator, config.resolution)
    lower, upper = theorem_bounds(points.n)

    report = _base_report(config)
    report.update(
        {
            "group": _group_dict(group),
            "n": points.n,
            "points": [list(p) for p in points],
            "theorem_lower": lower,
            "theorem_upper": upper,
            "base_set": [list(e) for e in peak.base_set],
            "peak_validation": validation.as_dict(),
            "canonical": _certificate_dict(cert),
        }
    )
    if not validation.passed:
        report["violations"].append(f"peak validation failed (worst {validation.worst:.3e})")
    if cert.grid_max > upper + 1e-6:
        report["violations"].append(
            f"canonical grid_max {cert.grid_max:.12g} exceeds sqrt(n) = {upper:.12g}"
        )
    if cert.hi < lower - 1e-9:
        report["violations"].append(
            f"certified upper bound {cert.hi:.12g} fell below sqrt(n/2) = {lower:.12g}"
        )
    return report


def _run_alpha_report(config: InstanceConfig) -> tuple[AlphaReport, object, object]:
    group, points, _, peak = _instance_parts(config)
    result = optimize_alpha(
        group,
        points,
        peak,
        resolution=config.resolution,
        budget=config.budget,
        seed=config.seed,
    )
    return result, group, points


def _run_alpha(config: InstanceConfig) -> dict:
    result, group, points = _run_alpha_report(config)
    report = _base_report(config)
    report.update(
        {
            "group": _group_dict(group),
            "n": points.n,
            "points": [list(p) for p in points],
            "budget": config.budget,
        }
    )
    report.update(_alpha_sections(result))
    if result.optimized.hi > result.canonical.hi + 1e-9:
        report["violations"].append("optimized certificate exceeds canonical certificate")
    if result.optimized.hi < result.theorem_lower - 1e-9:
        report["violations"].append(
            f"optimized upper bound {result.optimized.hi:.12g} fell below sqrt(n/2)"
        )
    return report


def _run_chain(config: InstanceConfig) -> dict:
    group, points, _, peak = _instance_parts(config)
    operator = canonical_operator(group, points, peak)
    result = optimize_alpha(
        group,
        points,
        peak,
        resolution=config.resolution,
        budget=config.budget,
        seed=config.seed,
    )
    canonical_chain = chain_check(operator, config.resolution, certificate=result.canonical)
    optimized_chain = chain_check(
        result.operator, config.resolution, certificate=result.optimized
    )

    report = _base_report(config)
    report.update(
        {
            "group": _group_dict(group),
            "n": points.n,
            "points": [list(p) for p in points],
            "canonical_chain": canonical_chain.as_dict(),
            "optimized_chain": optimized_chain.as_dict(),
        }
    )
    for name, chain in (("canonical", canonical_chain), ("optimized", optimized_chain)):
        if not chain.passed:
            report["violations"].append(f"{name} operator failed the inequality chain")
    return report


def _run_khinchin(config: InstanceConfig) -> dict:
    rng = np.random.default_rng(config.seed)
    failures = 0
    min_ratio = math.inf
    worst: dict | None = None
    for _ in range(config.count):
        n = int(rng.integers(1, config.max_n + 1))
        coeffs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        check = khinchin_check(coeffs)
        if not check.passed:
            failures += 1
        if check.ratio < min_ratio:
            min_ratio = check.ratio
            worst = {
                "n": check.n,
                "ratio": check.ratio,
                "exact_average": check.exact_average,
                "rhs": check.rhs,
            }
    equality = khinchin_check([1.0, 1.0])

    report = _base_report(config)
    report.update(
        {
            "count": config.count,
            "max_n": config.max_n,
            "failures": failures,
            "min_ratio": min_ratio,
            "worst_case": worst,
            "equality_ratio": equality.ratio,
        }
    )
    if failures:
        report["violations"].append(f"{failures} sign-average checks fell below the RMS floor")
    if abs(equality.ratio - 1.0) > 1e-12:
        report["violations"].append("equality case (1, 1) did not reproduce ratio 1")
    return report


def _run_sweep(config: InstanceConfig) -> dict:
    group = make_group(config.group)
    rows = []
    for n in range(1, config.n_max + 1):
        for seed in config.seeds:
            rng = np.random.default_rng([seed, n])
            points = sample_point_set(group, n, rng)
            peak = build_peak(group, greedy_base_set(group, difference_set(group, points)))
            result = optimize_alpha(
                group,
                points,
                peak,
                resolution=config.resolution,
                budget=config.budget,
                seed=seed,
            )
            rows.append(
                {
                    "n": n,
                    "seed": seed,
                    "points": [list(p) for p in points],
                    "theorem_lower": result.theorem_lower,
                    "canonical_hi": result.canonical.hi,
                    "optimized_hi": result.optimized.hi,
                    "theorem_upper": result.theorem_upper,
                    "lower_margin": result.optimized.hi - result.theorem_lower,
                }
            )

    summary = []
    for n in range(1, config.n_max + 1):
        group_rows = [r for r in rows if r["n"] == n]
        lower, upper = theorem_bounds(n)
        summary.append(
            {
                "n": n,
                "theorem_lower": lower,
                "best_hi": min(r["optimized_hi"] for r in group_rows),
                "theorem_upper": upper,
            }
        )

    report = _base_report(config)
    report.update(
        {
            "group": _group_dict(group),
            "n_max": config.n_max,
            "seeds": list(config.seeds),
            "budget": config.budget,
            "rows": rows,
            "summary": summary,
        }
    )
    for row in rows:
        if row["lower_margin"] < -1e-9:
            report["violations"].append(
                f"row n={row['n']} seed={row['seed']} violates the sqrt(n/2) lower bound"
            )
    return report


def run(config: InstanceConfig) -> dict:
    """Execute one configured run and return its report document."""
    handler = {
        "bounds": _run_bounds,
        "alpha": _run_alpha,
        "chain": _run_chain,
        "khinchin": _run_khinchin,
        "sweep": _run_sweep,
    }[config.mode]
    return _sanitize(handler(config))


def _sanitize(value):
    """Make a report strictly JSON-serializable (finite floats, plain types)."""
    if isinstance(value, dict):
        return {k: _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        value = float(value)
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def report_json(report: dict) -> str:
    """Canonical JSON text of a report (sorted keys, trailing newline)."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


_CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": ["grid_max", "slack", "lo", "hi", "resolution"],
    "properties": {
        "grid_max": {"type": "number"},
        "slack": {"type": "number", "minimum": 0},
        "lo": {"type": "number"},
        "hi": {"type": "number"},
        "resolution": {"type": "integer", "minimum": 4},
    },
}

_CHAIN_SCHEMA = {
    "type": "object",
    "required": [
        "n",
        "norm_hi",
        "rms_integral",
        "generator_norm_sum",
        "lower_bound",
        "rms_margin",
        "generator_margin",
        "lower_margin",
        "cauchy_schwarz_defect",
        "passed",
    ],
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "mode", "violations"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "mode": {"enum": list(MODES)},
        "violations": {"type": "array", "items": {"type": "string"}},
        "canonical": _CERTIFICATE_SCHEMA,
        "optimized": _CERTIFICATE_SCHEMA,
        "canonical_chain": _CHAIN_SCHEMA,
        "optimized_chain": _CHAIN_SCHEMA,
    },
    "allOf": [
        {
            "if": {"properties": {"mode": {"const": "bounds"}}},
            "then": {
                "required": [
                    "group",
                    "n",
                    "points",
                    "theorem_lower",
                    "theorem_upper",
                    "base_set",
                    "peak_validation",
                    "canonical",
                ]
            },
        },
        {
            "if": {"properties": {"mode": {"const": "alpha"}}},
            "then": {
                "required": [
                    "group",
                    "n",
                    "points",
                    "theorem_lower",
                    "theorem_upper",
                    "canonical",
                    "optimized",
                    "iterations",
                    "objective_trace",
                ]
            },
        },
        {
            "if": {"properties": {"mode": {"const": "chain"}}},
            "then": {"required": ["group", "n", "points", "canonical_chain", "optimized_chain"]},
        },
        {
            "if": {"properties": {"mode": {"const": "khinchin"}}},
            "then": {
                "required": ["count", "max_n", "failures", "min_ratio", "equality_ratio"]
            },
        },
        {
            "if": {"properties": {"mode": {"const": "sweep"}}},
            "then": {"required": ["group", "n_max", "seeds", "rows", "summary"]},
        },
    ],
}


def validate_report(report: dict) -> None:
    """Raise if a report does not conform to the schema."""
    jsonschema.validate(report, REPORT_SCHEMA)


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _csv_text(columns: Iterable[str], rows: Iterable[Iterable]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def report_csv(report: dict) -> str:
    """Flat CSV rendering of a report's headline numbers.

    Sweep reports produce one row per (n, seed); the other modes produce
    a single summary row.
    """
    mode = report["mode"]
    if mode == "sweep":
        rows = [[row[c] for c in SWEEP_CSV_COLUMNS] for row in report["rows"]]
        return _csv_text(SWEEP_CSV_COLUMNS, rows)
    if mode == "bounds":
        columns = ("n", "theorem_lower", "canonical_lo", "canonical_hi", "theorem_upper")
        cert = report["canonical"]
        row = [report["n"], report["theorem_lower"], cert["lo"], cert["hi"], report["theorem_upper"]]
        return _csv_text(columns, [row])
    if mode == "alpha":
        columns = (
            "n",
            "theorem_lower",
            "canonical_hi",
            "optimized_hi",
            "theorem_upper",
            "iterations",
        )
        row = [
            report["n"],
            report["theorem_lower"],
            report["canonical"]["hi"],
            report["optimized"]["hi"],
            report["theorem_upper"],
            report["iterations"],
        ]
        return _csv_text(columns, [row])
    if mode == "chain":
        columns = (
            "operator",
            "n",
            "norm_hi",
            "rms_integral",
            "generator_norm_sum",
            "lower_bound",
            "rms_margin",
            "generator_margin",
            "lower_margin",
            "passed",
        )
        rows = []
        for name in ("canonical", "optimized"):
            chain = report[f"{name}_chain"]
            rows.append([name] + [chain[c] for c in columns[1:]])
        return _csv_text(columns, rows)
    if mode == "khinchin":
        columns = ("count", "max_n", "failures", "min_ratio", "equality_ratio")
        row = [report[c] for c in columns]
        return _csv_text(columns, [row])
    raise ConfigError(f"unknown mode {mode!r}")
