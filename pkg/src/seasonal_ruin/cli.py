"""Batch front end: YAML model description in, CSV table and JSON report out.

Config schema (``schema_version: 1``)::

    schema_version: 1
    claims:                       # one entry per season, in order
      - {kind: poisson, lambda: 0.3}
      - {kind: table, weights: [0.8, 0.2]}
    u_max: 15
    t_values: [1, 2, 3]           # optional finite horizons
    eps_tail: 1.0e-14             # optional, Poisson truncation
    root_tol: 1.0e-10             # optional
    cluster_tol: 1.0e-6           # optional
    outputs: {table_path: out.csv, report_path: out.json}
    oracle: {mc_paths: 100000, seed: 0, enum_cap: 2000000}   # optional

Relative output paths resolve against the config file's directory.
Exit codes: 0 success, 2 config error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import yaml

from .errors import ConfigError, OracleTooLarge, SeasonalRuinError
from .model import build_model, classify
from .oracle import ENUM_CAP, enum_survival_exact, mc_survival
from .pmf import DEFAULT_EPS_TAIL, pmf_from_table, pmf_poisson
from .roots import RootConfig
from .survival import consistency_check, round_display, survival_ultimate

SCHEMA_VERSION = 1
ORACLE_U_LIMIT = 10  # oracle comparisons cover u = 0..min(u_max, this)


@dataclass(frozen=True)
class OracleConfig:
    mc_paths: int = 0
    seed: int = 0
    enum_cap: int = ENUM_CAP


@dataclass(frozen=True)
class RunConfig:
    claims: tuple
    u_max: int
    table_path: Path
    report_path: Path
    t_values: tuple = ()
    eps_tail: float = DEFAULT_EPS_TAIL
    root_tol: float = 1e-10
    cluster_tol: float = 1e-6
    max_poly_degree: int = 4096
    oracle: Optional[OracleConfig] = None


def _int(value, name, lo=0):
    if isinstance(value, bool) or not isinstance(value, int) or value < lo:
        raise ConfigError(f"{name} must be an integer >= {lo}, got {value!r}")
    return value


def _tol(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not 0 < value < 1:
        raise ConfigError(f"{name} must lie in (0, 1), got {value!r}")
    return float(value)


def _claim(entry, i):
    if not isinstance(entry, dict) or "kind" not in entry:
        raise ConfigError(f"claims[{i}] must be a mapping with a 'kind' key")
    kind = entry["kind"]
    if kind == "table":
        extra = set(entry) - {"kind", "weights"}
        weights = entry.get("weights")
        if not isinstance(weights, list) or not weights:
            raise ConfigError(f"claims[{i}].weights must be a non-empty list")
        if not all(isinstance(w, (int, float)) and not isinstance(w, bool) for w in weights):
            raise ConfigError(f"claims[{i}].weights must be numbers")
    elif kind == "poisson":
        extra = set(entry) - {"kind", "lambda"}
        lam = entry.get("lambda")
        if isinstance(lam, bool) or not isinstance(lam, (int, float)) or not lam > 0:
            raise ConfigError(f"claims[{i}].lambda must be a positive number")
    else:
        raise ConfigError(f"claims[{i}].kind must be 'table' or 'poisson', got {kind!r}")
    if extra:
        raise ConfigError(f"claims[{i}] has unknown keys {sorted(extra)}")
    return dict(entry)


def load_config(path) -> RunConfig:
    """Parse and validate a config file; every problem raises ``ConfigError``."""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path} is not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    known = {"schema_version", "claims", "u_max", "t_values", "eps_tail", "root_tol",
             "cluster_tol", "max_poly_degree", "outputs", "oracle"}
    if set(raw) - known:
        raise ConfigError(f"unknown keys {sorted(set(raw) - known)}")
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"schema_version must be {SCHEMA_VERSION}, got {raw.get('schema_version')!r}")

    claims = raw.get("claims")
    if not isinstance(claims, list) or not claims:
        raise ConfigError("claims must be a non-empty list")
    t_values = raw.get("t_values") or []
    if not isinstance(t_values, list):
        raise ConfigError("t_values must be a list")
    outputs = raw.get("outputs")
    if not isinstance(outputs, dict) or set(outputs) != {"table_path", "report_path"}:
        raise ConfigError("outputs must have exactly table_path and report_path")
    if not all(isinstance(v, str) and v for v in outputs.values()):
        raise ConfigError("output paths must be non-empty strings")

    oracle = None
    if raw.get("oracle") is not None:
        o = raw["oracle"]
        if not isinstance(o, dict) or set(o) - {"mc_paths", "seed", "enum_cap"}:
            raise ConfigError("oracle accepts only mc_paths, seed and enum_cap")
        oracle = OracleConfig(_int(o.get("mc_paths", 0), "oracle.mc_paths"),
                              _int(o.get("seed", 0), "oracle.seed"),
                              _int(o.get("enum_cap", ENUM_CAP), "oracle.enum_cap"))

    base = path.resolve().parent
    return RunConfig(
        claims=tuple(_claim(c, i) for i, c in enumerate(claims)),
        u_max=_int(raw.get("u_max"), "u_max"),
        table_path=base / outputs["table_path"],
        report_path=base / outputs["report_path"],
        t_values=tuple(sorted({_int(t, "t_values entry", 1) for t in t_values})),
        eps_tail=_tol(raw.get("eps_tail", DEFAULT_EPS_TAIL), "eps_tail"),
        root_tol=_tol(raw.get("root_tol", 1e-10), "root_tol"),
        cluster_tol=_tol(raw.get("cluster_tol", 1e-6), "cluster_tol"),
        max_poly_degree=_int(raw.get("max_poly_degree", 4096), "max_poly_degree", 1),
        oracle=oracle,
    )


def _pmfs(cfg: RunConfig):
    return [pmf_from_table(c["weights"]) if c["kind"] == "table"
            else pmf_poisson(float(c["lambda"]), cfg.eps_tail)
            for c in cfg.claims]


def _oracle_rows(model, table, cfg: RunConfig):
    rows = []
    o = cfg.oracle
    for t in cfg.t_values:
        for u in range(min(cfg.u_max, ORACLE_U_LIMIT) + 1):
            dp = float(table.finite[u, t])
            row = {"u": u, "T": t, "dp": dp}
            try:
                exact = enum_survival_exact(model, u, t, cap=o.enum_cap)
                row.update(enum=exact, enum_delta=abs(exact - dp))
            except OracleTooLarge:
                row.update(enum=None, enum_delta=None)
            if o.mc_paths:
                est = mc_survival(model, u, t, o.mc_paths, o.seed)
                row.update(mc=est.point, mc_half_width_95=est.half_width_95,
                           mc_delta=abs(est.point - dp), mc_covers=bool(est.covers(dp)))
            rows.append(row)
    return rows


def run_pipeline(cfg: RunConfig):
    """Compute the survival table and the report dictionary for ``cfg``."""
    model = build_model(_pmfs(cfg))
    cls = classify(model)
    root_cfg = RootConfig(tol_root=cfg.root_tol, tol_cluster=cfg.cluster_tol,
                          max_poly_degree=cfg.max_poly_degree)
    table = survival_ultimate(model, cfg.u_max, list(cfg.t_values), root_cfg)
    table.check_monotone()
    consistency = consistency_check(model, table)

    report = {
        "schema_version": SCHEMA_VERSION,
        "classification": cls.tag.value,
        "n_seasons": model.n_seasons,
        "mean_s_n": model.mean_s_n,
        "tail_mass": model.tail_mass,
        "t_star": cls.t_star,
        "min_drift": cls.min_drift,
        "roots": None,
        "m0": None,
        "mass_identity_defect": consistency.mass_identity_defect,
        "condition_number": None,
        "initial_residual": None,
        "consistency": {
            "max_recursion_defect": consistency.max_recursion_defect,
            "finite_gap_max": None if consistency.finite_gap is None
            else max(consistency.finite_gap),
        },
        "phi": [float(x) for x in table.phi],
        "oracle": None,
    }
    if table.roots is not None:
        report["roots"] = [{"re": r.value.real, "im": r.value.imag,
                            "multiplicity": r.multiplicity, "residual": r.residual}
                           for r in table.roots]
    if table.initial is not None:
        report["m0"] = [float(x) for x in table.initial.m0]
        report["condition_number"] = table.initial.condition
        report["initial_residual"] = table.initial.residual
    if cfg.oracle is not None and cfg.t_values:
        report["oracle"] = _oracle_rows(model, table, cfg)
    return table, report


def _columns(table, t_values):
    header = ["u", "phi_inf"] + [f"phi_T{t}" for t in t_values]
    cols = [table.phi] + [table.finite[:, t] for t in t_values]
    return header, cols


def format_csv(table, t_values) -> str:
    header, cols = _columns(table, t_values)
    lines = [",".join(header)]
    for u in range(table.u_max + 1):
        lines.append(",".join([str(u)] + ["%.10g" % c[u] for c in cols]))
    return "\n".join(lines) + "\n"


def format_pretty(table, t_values) -> str:
    header, cols = _columns(table, t_values)
    rows = [header] + [[str(u)] + [round_display(float(c[u])) for c in cols]
                       for u in range(table.u_max + 1)]
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    return "\n".join("  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in rows) + "\n"


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run(config_path, overrides: Optional[dict] = None, pretty: bool = False, stdout=None) -> int:
    """Execute a config end to end and return the process exit code."""
    stdout = stdout or sys.stdout
    try:
        cfg = load_config(config_path)
        if overrides:
            cfg = _apply(cfg, overrides)
        table, report = run_pipeline(cfg)
        _write(cfg.table_path, format_csv(table, cfg.t_values))
        _write(cfg.report_path, json.dumps(report, sort_keys=True, indent=2) + "\n")
        if pretty:
            stdout.write(format_pretty(table, cfg.t_values))
    except ConfigError as exc:
        print(f"ConfigError: {exc}", file=sys.stderr)
        return 2
    except SeasonalRuinError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0


def _apply(cfg: RunConfig, ov: dict) -> RunConfig:
    changes = {}
    if ov.get("u_max") is not None:
        changes["u_max"] = _int(ov["u_max"], "--u-max")
    if ov.get("t_values"):
        changes["t_values"] = tuple(sorted({_int(t, "--t", 1) for t in ov["t_values"]}))
    if ov.get("out"):
        changes["table_path"] = Path(ov["out"]).resolve()
    if ov.get("report"):
        changes["report_path"] = Path(ov["report"]).resolve()
    for key in ("root_tol", "cluster_tol"):
        if ov.get(key) is not None:
            changes[key] = _tol(ov[key], "--" + key.replace("_", "-"))
    if ov.get("max_poly_degree") is not None:
        changes["max_poly_degree"] = _int(ov["max_poly_degree"], "--max-poly-degree", 1)
    if ov.get("mc_paths") is not None or ov.get("seed") is not None:
        o = cfg.oracle or OracleConfig()
        if ov.get("mc_paths") is not None:
            o = replace(o, mc_paths=_int(ov["mc_paths"], "--mc-paths"))
        if ov.get("seed") is not None:
            o = replace(o, seed=_int(ov["seed"], "--seed"))
        changes["oracle"] = o
    return replace(cfg, **changes)


def _t_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="seasonal-ruin",
                                 description="Survival probabilities of the N-seasonal risk model.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a config file")
    r.add_argument("config")
    r.add_argument("--pretty", action="store_true", help="print a 3-decimal table to stdout")
    r.add_argument("--mc-paths", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--u-max", type=int)
    r.add_argument("--t", type=_t_list, action="append", help="finite horizons, e.g. 1,2,10")
    r.add_argument("--out", help="CSV path (relative to the working directory)")
    r.add_argument("--report", help="JSON report path (relative to the working directory)")
    r.add_argument("--root-tol", type=float)
    r.add_argument("--cluster-tol", type=float)
    r.add_argument("--max-poly-degree", type=int)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    overrides = {
        "u_max": args.u_max,
        "t_values": [t for chunk in args.t for t in chunk] if args.t else None,
        "out": args.out,
        "report": args.report,
        "root_tol": args.root_tol,
        "cluster_tol": args.cluster_tol,
        "max_poly_degree": args.max_poly_degree,
        "mc_paths": args.mc_paths,
        "seed": args.seed,
    }
    return run(args.config, overrides, pretty=args.pretty)
