"""Command-line entry point.

Subcommands regenerate the reference tables and figure data (table2,
table3, fig3..fig6), run free-form sweeps, or run the fast self-check
suite.  Results are written as CSV or JSON; figure runners can also render
a PNG next to the delimited output.
"""

import argparse
from dataclasses import replace
import json
import os
import sys

from . import __version__
from .config import ConfigError, parse_config
from .experiments import (
    ResultSet,
    Scenario,
    fig3_scenario,
    fig4_scenario,
    fig5_scenario,
    fig6_scenario,
    run_sweep,
    table1_scenario,
    table2_scenario,
    table3_scenario,
)
from .validation import run_validation

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_RUNTIME_ERROR = 3
EXIT_VALIDATION_FAILURE = 4

_PRESETS = {
    "table2": table2_scenario,
    "table3": table3_scenario,
    "fig3": fig3_scenario,
    "fig4": fig4_scenario,
    "fig5": fig5_scenario,
    "fig6": fig6_scenario,
}


def _format_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_results(rs: ResultSet, fmt: str, path) -> None:
    """Serialize a result set: CSV (header + one row per point) or JSON
    with a meta block.  Output is byte-stable for identical inputs."""
    if fmt == "csv":
        lines = [",".join(rs.columns)]
        for row in rs.rows:
            lines.append(",".join(_format_value(v) for v in row))
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        payload = {
            "meta": {
                "fingerprint": rs.fingerprint,
                "seed": rs.meta.get("seed"),
                "version": rs.meta.get("version"),
                "power_split": rs.meta.get("power_split"),
                "scenario": rs.meta.get("scenario"),
                "config": rs.meta.get("config"),
            },
            "columns": list(rs.columns),
            "rows": [list(row) for row in rs.rows],
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    with open(path, "w") as handle:
        handle.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oamlink",
        description="Link-level simulator for misaligned multi-mode OAM broadband links",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*_PRESETS, "sweep"):
        cmd = sub.add_parser(name, help=f"run the {name} data generator")
        cmd.add_argument("--config", help="scenario config file (YAML or JSON)")
        cmd.add_argument("--out", required=True, help="output file path")
        cmd.add_argument("--format", choices=("csv", "json"), default="csv")
        cmd.add_argument("--seed", type=int, help="override the scenario seed")
        cmd.add_argument(
            "--threads",
            type=int,
            default=int(os.environ.get("OAMLINK_THREADS", "1")),
            help="sweep worker threads (default from OAMLINK_THREADS, else 1)",
        )
        cmd.add_argument("--figure", help="also render a PNG figure to this path")
        cmd.add_argument("--verbose", "-v", action="store_true")
    val = sub.add_parser("validate", help="run the fast invariant self-checks")
    val.add_argument("--verbose", "-v", action="store_true")
    return parser


def _resolve_scenario(args) -> Scenario:
    base = parse_config(args.config) if args.config else table1_scenario()
    if args.command == "sweep":
        scenario = base
        if not scenario.sweep:
            raise ConfigError("sweep command requires a config with a 'sweep' section")
    else:
        scenario = _PRESETS[args.command](base)
    if args.seed is not None:
        scenario = replace(scenario, seed=args.seed)
    return scenario


def _run_validate(args) -> int:
    results = run_validation()
    failed = False
    for check in results:
        status = "PASS" if check.passed else "FAIL"
        print(
            f"{status}  {check.name}  measured={check.measured:.3e}  "
            f"tolerance={check.tolerance:.3e}"
        )
        failed = failed or not check.passed
    return EXIT_VALIDATION_FAILURE if failed else EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "validate":
        return _run_validate(args)

    try:
        scenario = _resolve_scenario(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    try:
        rs = run_sweep(scenario, threads=max(1, args.threads))
        emit_results(rs, args.format, args.out)
        if args.figure:
            from .plotting import render_resultset

            render_resultset(rs, args.figure)
    except Exception as exc:  # noqa: BLE001 - boundary: map to exit code
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME_ERROR

    print(f"scenario={scenario.name} seed={scenario.seed} rows={len(rs.rows)}")
    print(f"fingerprint={rs.fingerprint}")
    print(f"wrote {args.out}" + (f" and {args.figure}" if args.figure else ""))
    if args.verbose:
        print(",".join(rs.columns))
        for row in rs.rows[:10]:
            print(",".join(_format_value(v) for v in row))
        if len(rs.rows) > 10:
            print(f"... {len(rs.rows) - 10} more rows")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
