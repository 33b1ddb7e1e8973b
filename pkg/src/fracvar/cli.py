"""Command-line driver.

Every subcommand writes one row per (check, alpha, case) with columns
``check_id, alpha, case_id, lhs, rhs, abs_residual, rel_residual, pass`` and
exits 0 when every judged row passes, 1 on a tolerance failure and 2 on a
usage or configuration error.  Rows with an empty ``pass`` are reported only.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import FracVarError
from .fields import Box
from .suites import (
    COLUMNS,
    DEFAULT_ALPHAS,
    Row,
    Settings,
    run_el,
    run_ftc,
    run_identities,
    run_leibniz,
    run_string,
    run_theorems,
)

log = logging.getLogger("fracvar")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COMMANDS = ("ftc", "leibniz", "theorems", "identities", "el", "string")


class ConfigError(Exception):
    pass


def parse_alphas(text) -> tuple[float, ...]:
    try:
        if isinstance(text, (list, tuple)):
            items = [float(v) for v in text]
        else:
            items = [float(v) for v in str(text).replace(" ", "").split(",") if v]
    except (TypeError, ValueError):
        raise ConfigError(f"cannot parse alpha list {text!r}") from None
    if not items:
        raise ConfigError("alpha list is empty")
    for a in items:
        if not (math.isfinite(a) and 0.0 < a <= 1.0):
            raise ConfigError(f"alpha must lie in (0, 1], got {a}")
    return tuple(items)


def parse_box(text) -> Box:
    """``"a1,b1;a2,b2[;a3,b3]"`` or a list of ``[lo, hi]`` pairs."""
    try:
        if isinstance(text, (list, tuple)):
            pairs = [tuple(float(v) for v in p) for p in text]
        else:
            pairs = [tuple(float(v) for v in part.split(",")) for part in str(text).split(";") if part]
        if not pairs or any(len(p) != 2 for p in pairs):
            raise ValueError
    except ValueError:
        raise ConfigError(f"cannot parse box {text!r}; expected 'a1,b1;a2,b2'") from None
    if any(not lo < hi for lo, hi in pairs):
        raise ConfigError(f"box needs lo < hi on every axis, got {text!r}")
    if len(pairs) not in (2, 3):
        raise ConfigError("box must be 2- or 3-dimensional")
    return Box(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", help=f"comma-separated orders in (0, 1] (default {','.join(map(str, DEFAULT_ALPHAS))})")
    common.add_argument("--order", type=int, help="Gauss-Jacobi nodes per axis (default 40)")
    common.add_argument("--cheb-degree", type=int, help="Chebyshev surrogate degree (default 32)")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--seed", type=int, help="seed for randomised cases (default 0)")
    common.add_argument("--tol", type=float, help="override the pass threshold on the relative residual")
    common.add_argument("--config", help="JSON file with any of the above keys; flags take precedence")
    common.add_argument("--box", help="extra box 'a1,b1;a2,b2[;a3,b3]' replacing the non-unit default (write --box=-1,1;0,2 when it starts with '-')")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(prog="fracvar", description="Jumarie fractional calculus of variations: checks and experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("ftc", parents=[common], help="fundamental theorem pair on the 1-D function suite")
    sub.add_parser("leibniz", parents=[common], help="Leibniz rule on all pairs of the 1-D function suite")
    p = sub.add_parser("theorems", parents=[common], help="Green, Gauss and planar Stokes theorems")
    p.add_argument("--suite", choices=("default", "constants"), help="case suite (default: polynomials)")
    sub.add_parser("identities", parents=[common], help="vector identities (i)-(v) on a 3x3x3 interior grid")
    sub.add_parser("el", parents=[common], help="Gateaux derivatives, Euler-Lagrange residuals, integration by parts")
    p = sub.add_parser("string", parents=[common], help="alpha sweep of the fractional vibrating string")
    p.add_argument("--modes", type=int, help="sine modes per axis (default 4)")
    p.add_argument("--shape", choices=("sine", "zero"), help="initial shape (default sine)")
    p.add_argument("--grid-out", help="solution grid file (default: derived from --out)")
    p.add_argument("--sweep-out", help="sweep table file (default: derived from --out)")
    p.add_argument("--trace", help="solver trace file (rows alpha, iter, J, grad_norm)")
    return parser


_DEFAULTS = {
    "alpha": None,
    "order": 40,
    "cheb_degree": 32,
    "format": "csv",
    "out": None,
    "seed": 0,
    "tol": None,
    "box": None,
    "suite": "default",
    "modes": 4,
    "shape": "sine",
    "grid_out": None,
    "sweep_out": None,
    "trace": None,
}


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(_DEFAULTS)
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        for key, value in data.items():
            k = key.replace("-", "_")
            if k not in cfg:
                raise ConfigError(f"unknown config key {key!r}")
            cfg[k] = value
    for key in cfg:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if cfg["format"] not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    for key in ("order", "cheb_degree", "modes"):
        if int(cfg[key]) != cfg[key] or cfg[key] < 1:
            raise ConfigError(f"{key} must be a positive integer")
    if cfg["tol"] is not None and not float(cfg["tol"]) > 0:
        raise ConfigError("tol must be positive")
    return cfg


def settings_for(command: str, cfg: dict) -> Settings:
    if cfg["alpha"] is not None:
        alphas = parse_alphas(cfg["alpha"])
    elif command == "string":
        alphas = (0.9, 0.95, 0.99, 1.0)
    elif command == "el":
        alphas = (0.5, 0.75, 1.0)
    else:
        alphas = DEFAULT_ALPHAS
    box = parse_box(cfg["box"]) if cfg["box"] is not None else None
    return Settings(
        alphas=alphas,
        order=int(cfg["order"]),
        cheb_degree=int(cfg["cheb_degree"]),
        seed=int(cfg["seed"]),
        tol=None if cfg["tol"] is None else float(cfg["tol"]),
        box=box,
        suite=cfg["suite"],
    )


# --- output ------------------------------------------------------------------


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def render(rows: Sequence[Row], fmt: str) -> str:
    rows = sorted(rows, key=Row.key)
    if fmt == "json":
        payload = [dict(zip(COLUMNS, (_json_value(v) for v in r.values()))) for r in rows]
        return json.dumps(payload, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([_cell(v) for v in r.values()])
    return buf.getvalue()


def render_table(header: Sequence[str], table: Sequence[Sequence], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, (_json_value(v) for v in row))) for row in table], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in table:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _write(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _sibling(path: Optional[str], suffix: str, fmt: str) -> Optional[str]:
    if path is None:
        return None
    p = Path(path)
    return str(p.with_name(f"{p.stem}_{suffix}.{fmt}"))


# --- driver ------------------------------------------------------------------

_RUNNERS = {
    "ftc": run_ftc,
    "leibniz": run_leibniz,
    "theorems": run_theorems,
    "identities": run_identities,
    "el": run_el,
}


def execute(command: str, cfg: dict) -> int:
    settings = settings_for(command, cfg)
    fmt = cfg["format"]
    if command == "string":
        rows, sweep, grids = run_string(settings, modes=int(cfg["modes"]), shape=cfg["shape"])
        sweep_table = [
            (r.alpha, r.value, r.max_el_residual, r.grad_norm, r.converged, " ".join(repr(c) for c in r.coeffs)) for r in sweep
        ]
        grid_table = [(alpha, *map(float, row)) for alpha in sorted(grids) for row in grids[alpha]]
        extras = {
            cfg["sweep_out"] or _sibling(cfg["out"], "sweep", fmt): render_table(
                ("alpha", "value", "max_el_residual", "grad_norm", "converged", "coeffs"), sweep_table, fmt
            ),
            cfg["grid_out"] or _sibling(cfg["out"], "grid", fmt): render_table(("alpha", "x", "t", "w"), grid_table, fmt),
        }
        if cfg["trace"]:
            trace = [(r.alpha, 0, r.value, r.grad_norm) for r in sweep]
            extras[cfg["trace"]] = render_table(("alpha", "iter", "J", "grad_norm"), trace, fmt)
    else:
        rows = _RUNNERS[command](settings)
        extras = {}
    _write(render(rows, fmt), cfg["out"])
    for path, text in extras.items():
        if path is not None:
            Path(path).write_text(text)
    failed = [r for r in rows if r.passed is False]
    for r in failed:
        log.info("FAIL %s alpha=%r %s rel=%r", r.check_id, r.alpha, r.case_id, r.rel_residual)
    return EXIT_FAIL if failed else EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s", stream=sys.stderr)
    try:
        cfg = resolve_config(args)
        settings_for(args.command, cfg)  # validate before any output is produced
        return execute(args.command, cfg)
    except ConfigError as exc:
        print(f"fracvar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FracVarError as exc:
        print(f"fracvar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
