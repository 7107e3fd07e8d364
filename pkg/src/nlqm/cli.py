"""``nlqm`` command line: run, verify, compare, sweep.

Exit codes: 0 success, 1 a requested check failed, 2 configuration or
contract error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import yaml

from .config import ConfigError, load_config
from .errors import ContractViolation, IntegrationError, ValidationError
from .runner import RunResult, read_csv_table, run_config, write_outputs
from .verification import SUITES, format_summary, run_suite

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _err(msg):
    print(f"nlqm: error: {msg}", file=sys.stderr)


def execute(config_path, overrides=(), out_dir=None, quiet=False):
    """Run one configuration and write its artifacts. Returns ``(exit_code, result_or_None)``."""
    try:
        cfg = load_config(config_path, overrides)
        out = Path(out_dir) if out_dir is not None else Path(cfg["output"]["directory"])
        formats = cfg["output"]["formats"]
        result = run_config(cfg)
    except (ConfigError, ContractViolation, ValidationError) as exc:
        _err(str(exc))
        return EXIT_CONFIG, None
    except IntegrationError as exc:
        _err(str(exc))
        res = RunResult(cfg.mode, {}, {"last_good_time": exc.last_good_time}, error=str(exc))
        write_outputs(res, out, ("json",))
        return EXIT_NUMERIC, res
    write_outputs(result, out, formats)
    if not quiet:
        if result.mode == "verify":
            print(format_summary(result.checks))
        else:
            for k, v in result.drift.items():
                print(f"{k:<28} {v:.3e}" if isinstance(v, float) else f"{k:<28} {v}")
            for c in result.checks:
                print(f"check {c.name}: {c.value:.3e} <= {c.tol:.0e} {'PASS' if c.passed else 'FAIL'}")
    return (EXIT_OK if result.ok else EXIT_CHECK), result


def _load_table(source, overrides=()):
    p = Path(source)
    if p.suffix.lower() == ".csv":
        if not p.exists():
            raise ConfigError("", f"{p} does not exist")
        return read_csv_table(p)
    res = run_config(load_config(p, overrides))
    if not res.table:
        raise ConfigError("mode", f"{p} produces no trajectory to compare")
    return res.table


def _field_groups(columns, field):
    """Map a requested field to column groups; ``psi``/``phi`` compare whole vectors."""
    data_cols = [c for c in columns if c != "t"]
    if field == "all":
        names = ["psi", "phi"] + [c for c in data_cols if not c[3:].startswith(("psi_", "phi_"))]
        return {n: g for n in names if (g := _field_groups(columns, n)[n])}
    if field in ("psi", "phi"):
        return {field: [c for c in data_cols if c[3:].startswith(field + "_")]}
    if field not in columns:
        raise ConfigError("--field", f"unknown column {field!r}; available: {', '.join(columns)}")
    return {field: [field]}


def compare_tables(a: dict, b: dict, field: str = "all", time_atol: float = 1e-12) -> dict:
    """Max deviation per field between two tables sampled at the same times.

    Raises
    ------
    ContractViolation
        If the sample times differ.
    """
    ta, tb = np.asarray(a["t"]), np.asarray(b["t"])
    if ta.shape != tb.shape or np.max(np.abs(ta - tb)) > time_atol * max(1.0, np.max(np.abs(ta))):
        raise ContractViolation("sample times of the two runs are not aligned")
    common = [c for c in a if c in b]
    report = {}
    for name, cols in _field_groups(common, field).items():
        if not cols:
            raise ConfigError("--field", f"no columns for {name!r}")
        if name in ("psi", "phi"):
            n = len(cols) // 2
            va = np.stack([a[f"Re_{name}_{i}"] + 1j * a[f"Im_{name}_{i}"] for i in range(n)], axis=1)
            vb = np.stack([b[f"Re_{name}_{i}"] + 1j * b[f"Im_{name}_{i}"] for i in range(n)], axis=1)
            report[name] = float(np.max(np.linalg.norm(va - vb, axis=1)))
        else:
            report[name] = float(np.max(np.abs(a[name] - b[name])))
    return report


def parse_grid(spec: str):
    """``"a.b=1,2;c.d=3"`` -> ``[("a.b", [1, 2]), ("c.d", [3])]``."""
    axes = []
    for part in filter(None, (s.strip() for s in spec.split(";"))):
        if "=" not in part:
            raise ConfigError(part, "grid axis must look like key=v1,v2,...")
        key, raw = part.split("=", 1)
        try:
            values = [yaml.safe_load(v) for v in raw.split(",") if v.strip()]
        except yaml.YAMLError as exc:
            raise ConfigError(key.strip(), f"cannot parse grid values {raw!r}") from exc
        if not values:
            raise ConfigError(key.strip(), "empty value list in --grid")
        axes.append((key.strip(), values))
    if not axes:
        raise ConfigError("--grid", "no axes given")
    return axes


def worker_count(n_jobs: int) -> int:
    raw = os.environ.get("NLQM_THREADS")
    cap = os.cpu_count() or 1
    if raw:
        try:
            cap = max(1, int(raw))
        except ValueError:
            raise ConfigError("NLQM_THREADS", f"expected an integer, got {raw!r}") from None
    return max(1, min(cap, n_jobs))


def sweep(config_path, grid: str, out_dir, overrides=()):
    axes = parse_grid(grid)
    keys = [k for k, _ in axes]
    combos = list(itertools.product(*(v for _, v in axes)))
    out = Path(out_dir)
    load_config(config_path, overrides)  # fail fast on a broken base config

    def job(i_combo):
        i, combo = i_combo
        sets = list(overrides) + [(k, v) for k, v in zip(keys, combo)]
        code, _ = execute(config_path, sets, out / f"run_{i:03d}", quiet=True)
        return i, combo, code

    with ThreadPoolExecutor(max_workers=worker_count(len(combos))) as pool:
        rows = sorted(pool.map(job, enumerate(combos)))
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "sweep_index.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["run"] + keys + ["exit_code"])
        for i, combo, code in rows:
            w.writerow([f"run_{i:03d}"] + [str(v) for v in combo] + [code])
    for i, combo, code in rows:
        print(f"run_{i:03d} " + " ".join(f"{k}={v}" for k, v in zip(keys, combo)) + f" exit={code}")
    codes = {c for _, _, c in rows}
    for code in (EXIT_CONFIG, EXIT_NUMERIC, EXIT_CHECK):
        if code in codes:
            return code
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nlqm", description="Two-state nonlinear quantum dynamics toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="execute one configuration")
    r.add_argument("config", help="YAML configuration file")
    r.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    r.add_argument("--out", help="output directory (overrides output.directory)")

    v = sub.add_parser("verify", help="run the invariant suites")
    v.add_argument("--suite", default="all", choices=("all",) + SUITES)

    c = sub.add_parser("compare", help="max deviation between two runs or CSV files")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--field", default="all", help="column name, psi, phi or all")
    c.add_argument("--tol", type=float, help="exit 1 if any deviation exceeds this")
    c.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override applied to both configs")

    s = sub.add_parser("sweep", help="run a parameter grid")
    s.add_argument("config")
    s.add_argument("--grid", required=True, help='e.g. "coupling.b=0.25,0.5;solution.theta=0,0.7"')
    s.add_argument("--out", default="nlqm_sweep")
    s.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return execute(args.config, args.overrides, args.out)[0]
        if args.command == "verify":
            checks = run_suite(args.suite)
            print(format_summary(checks))
            return EXIT_OK if all(c.passed for c in checks) else EXIT_CHECK
        if args.command == "compare":
            report = compare_tables(_load_table(args.a, args.overrides), _load_table(args.b, args.overrides),
                                    args.field)
            for k, val in report.items():
                print(f"{k:<12} max|a-b| = {val:.3e}")
            if args.tol is not None and any(val > args.tol for val in report.values()):
                return EXIT_CHECK
            return EXIT_OK
        return sweep(args.config, args.grid, args.out, args.overrides)
    except (ConfigError, ContractViolation, ValidationError) as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except IntegrationError as exc:
        _err(str(exc))
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
