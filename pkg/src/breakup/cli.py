"""Command-line front end: ``breakup <command> [options]``.

Every run writes its tables plus ``manifest.json`` into ``--out``. Exit
status is 0 on success, 2 for configuration problems and 3 for numeric or
validation failures; failures also print a JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from importlib import metadata
from pathlib import Path

import numpy as np

from . import dynamics, entanglement, figures, oracle, wavepackets
from .errors import BreakupError, ConfigError
from .params import SystemParams, derive, params_from_mapping, read_config
from .tables import Table, write_table

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

# options that a config file may also supply (command-line wins)
_OPTION_KEYS = ("eta_grid", "mass_ratio", "zeta", "rho_grid", "t_grid", "eta0", "suite", "figure_id")


class ValidationFailure(BreakupError):
    """A run completed but one or more checks failed."""

    def __init__(self, message, failures):
        super().__init__(message)
        self.failures = failures


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def parse_grid(spec: str) -> np.ndarray:
    """``log:a:b:n``, ``lin:a:b:n`` or a comma-separated list of numbers."""
    text = str(spec).strip()
    try:
        if text.startswith(("log:", "lin:")):
            kind, a, b, n = text.split(":")
            a, b, n = float(a), float(b), int(n)
            if n < 1:
                raise ConfigError(f"grid {spec!r}: point count must be >= 1")
            if kind == "log":
                if not (a > 0 and b > 0):
                    raise ConfigError(f"grid {spec!r}: log grid bounds must be positive")
                return np.geomspace(a, b, n)
            return np.linspace(a, b, n)
        values = np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError:
        raise ConfigError(f"cannot parse grid {spec!r}") from None
    if values.size == 0:
        raise ConfigError("grid is empty")
    if not np.all(np.isfinite(values)):
        raise ConfigError(f"grid {spec!r} has non-finite values")
    return values


def _float_option(name, value):
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"--{name.replace('_', '-')}: expected a number, got {value!r}") from None
    if not math.isfinite(out):
        raise ConfigError(f"--{name.replace('_', '-')}: must be finite")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="flat key = value parameter file")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory (default: .)")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="breakup", parents=[common],
                                     description="Entanglement and packet widths after photo-breakup.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("widths", parents=[common], help="single-particle and coincidence widths")
    p.add_argument("--eta-grid", help="grid spec for eta (default log:1e-3:1e3:61)")
    p.add_argument("--mass-ratio", help="m1/m2; default from the config masses, else 1e-4")

    p = sub.add_parser("entanglement", parents=[common], help="R(eta) curve")
    p.add_argument("--eta-grid", help="grid spec for eta (default log:1e-8:1e8:200)")
    p.add_argument("--mass-ratio", help="m1/m2; default from the config masses, else 1e-4")

    p = sub.add_parser("profile", parents=[common], help="relative-motion shape S(rho, zeta)")
    p.add_argument("--zeta", help="comma list of zeta values (default 0.01,20)")
    p.add_argument("--rho-grid", help="grid spec for rho (default lin:-10-3z:5+3z:1501 per zeta)")

    p = sub.add_parser("evolve", parents=[common], help="eta(t) and R(t) traces")
    p.add_argument("--t-grid", help="grid spec for t in atomic units (default: 0 plus log grid)")
    p.add_argument("--eta0", help="override the initial width ratio (keeps masses, E* and gamma/E*)")

    p = sub.add_parser("oracle", parents=[common], help="closed forms against brute-force oracles")
    p.add_argument("--suite", help="all, " + ", ".join(oracle.SUITES) + " (default all)")

    p = sub.add_parser("figure", parents=[common], help="figure datasets")
    p.add_argument("figure_id", nargs="?", help="one of " + ", ".join(figures.FIGURE_IDS) + " or all")
    return parser


def _resolve(args):
    """Merge config-file values under command-line options."""
    config = {}
    if getattr(args, "config", None):
        try:
            config = read_config(args.config)
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc.strerror}") from None
    options = {}
    for key in _OPTION_KEYS:
        if hasattr(args, key):
            value = getattr(args, key)
            options[key] = value if value is not None else config.get(key)
    params = None
    if config and any(k in config for k in ("m1", "m2", "gamma", "dipole_coupling")):
        params = params_from_mapping(config)
    return params, options


def _masses(params, ratio):
    if ratio is not None:
        r = _float_option("mass_ratio", ratio)
        if not r > 0:
            raise ConfigError("--mass-ratio must be positive")
        return r, 1.0
    if params is not None:
        return params.m1, params.m2
    return 1e-4, 1.0


def _cmd_widths(params, opts):
    m1, m2 = _masses(params, opts["mass_ratio"])
    etas = parse_grid(opts["eta_grid"] or "log:1e-3:1e3:61")
    reports = entanglement.width_table(etas, m1, m2)
    table = Table("widths", entanglement.REPORT_COLUMNS, [r.row() for r in reports],
                  f"widths in units of dr_rel, m1={m1:g}, m2={m2:g}")
    return [table], {"m1": m1, "m2": m2, "eta_star": entanglement.eta_star(m1, m2)}


def _cmd_entanglement(params, opts):
    m1, m2 = _masses(params, opts["mass_ratio"])
    etas = parse_grid(opts["eta_grid"] or "log:1e-8:1e8:200")
    r = entanglement.entanglement_r(etas, m1, m2)
    regimes = [entanglement.classify_regime(e, m1, m2).value for e in etas]
    rows = list(zip(np.log(etas).tolist(), etas.tolist(), r.tolist(), regimes))
    table = Table("entanglement", ("ln_eta", "eta", "r", "regime"), rows, f"R(eta), m1={m1:g}, m2={m2:g}")
    return [table], {"m1": m1, "m2": m2, "eta_star": entanglement.eta_star(m1, m2), "r_min": float(np.min(r))}


def _cmd_profile(params, opts):
    zetas = parse_grid(opts["zeta"] or "0.01,20")
    tables = []
    for zeta in zetas.tolist():
        if not zeta > 0:
            raise ConfigError("zeta values must be positive")
        rho = parse_grid(opts["rho_grid"]) if opts["rho_grid"] else np.linspace(-10 - 3 * zeta, 5 + 3 * zeta, 1501)
        prof = wavepackets.rel_profile(zeta, rho)
        tables.append(Table(f"profile_zeta{zeta:g}", ("rho", "zeta", "density"), list(prof.rows()),
                            "S(rho, zeta); integrates to 4"))
    return tables, {"zetas": zetas.tolist()}


def _cmd_evolve(params, opts):
    if params is None:
        raise ConfigError("evolve needs a parameter file (--config)")
    if opts["eta0"] is not None:
        eta0 = _float_option("eta0", opts["eta0"])
        params = dynamics.params_for_eta0(eta0, params.m1, params.m2, e_star=params.e_star,
                                          pole_ratio=params.pole_ratio, mode=params.mode)
    times = parse_grid(opts["t_grid"]) if opts["t_grid"] else None
    trace = dynamics.evolve(params, times)
    d = derive(params)
    table = Table("evolve", trace.COLUMNS, list(trace.rows()), "widths in atomic units")
    summary = {"eta0": d.eta0, "eta_star": d.eta_star, "eta_inf": d.eta_inf,
               "eta_end": float(trace.eta[-1]), "r_start": float(trace.r_e[0]), "r_end": float(trace.r_e[-1])}
    return [table], summary, params


def _cmd_oracle(params, opts):
    suite = opts["suite"] or "all"
    if suite != "all" and suite not in oracle.SUITES:
        raise ConfigError(f"unknown oracle suite {suite!r}")
    cases = oracle.run_suite(suite)
    table = Table(f"oracle_{suite}", ("case_id", "closed_form", "oracle", "deviation", "passed"),
                  [c.row() for c in cases])
    failed = [c.case_id for c in cases if not c.passed]
    summary = {"suite": suite, "cases": len(cases), "passed": len(cases) - len(failed), "failed": failed,
               "max_deviation_over_tolerance": max(c.deviation / c.tolerance for c in cases)}
    return [table], summary


def _cmd_figure(params, opts):
    which = opts["figure_id"] or "all"
    if which != "all" and which not in figures.FIGURE_IDS:
        raise ConfigError(f"unknown figure id {which!r}")
    ids = figures.FIGURE_IDS if which == "all" else (which,)
    tables = [t for fid in ids for t in figures.fig_profiles(fid)]
    return tables, {"figures": list(ids)}


_COMMANDS = {
    "widths": _cmd_widths,
    "entanglement": _cmd_entanglement,
    "profile": _cmd_profile,
    "evolve": _cmd_evolve,
    "oracle": _cmd_oracle,
    "figure": _cmd_figure,
}


def _output_dir(path) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc.strerror}") from None
    if not os.access(out, os.W_OK):
        raise ConfigError(f"output directory {out} is not writable")
    return out


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "csv")
    try:
        out = _output_dir(getattr(args, "out", "."))
        params, opts = _resolve(args)
        result = _COMMANDS[args.command](params, opts)
        tables, summary = result[0], result[1]
        if len(result) > 2:
            params = result[2]
        files = [write_table(t, out, fmt) for t in tables]
        manifest = {
            "tool": "breakup",
            "version": tool_version(),
            "command": args.command,
            "format": fmt,
            "options": {k: v for k, v in opts.items() if v is not None},
            "params": params.to_dict() if isinstance(params, SystemParams) else None,
            "outputs": [
                {"file": f.name, "columns": list(t.columns), "rows": len(t.rows), "description": t.description}
                for f, t in zip(files, tables)
            ],
            "summary": summary,
        }
        (out / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True, default=str) + "\n")
        if args.command == "oracle" and summary["failed"]:
            raise ValidationFailure(f"{len(summary['failed'])} oracle case(s) failed", summary["failed"])
    except ConfigError as exc:
        return _report(exc, EXIT_CONFIG)
    except ValidationFailure as exc:
        return _report(exc, EXIT_NUMERIC, failures=exc.failures)
    except (BreakupError, ValueError, ArithmeticError) as exc:
        return _report(exc, EXIT_NUMERIC)
    return EXIT_OK


def _report(exc, code, failures=None) -> int:
    record = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if failures:
        record["failures"] = failures
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
