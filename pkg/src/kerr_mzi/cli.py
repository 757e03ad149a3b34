"""Command-line front end.

    kerr-mzi signal --state tmsv --nbar 2 3 4 --phi-steps 101
    kerr-mzi sensitivity --state ec --nbar 1 2 4 --format json
    kerr-mzi figure fig3 --out fig3.csv
    kerr-mzi sweep --config sweep.json

Exit codes: 0 success, 2 validation error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .figures import FIGURE_IDS, run_figure
from .states import STATE_TAGS
from .sweep import ConfigError, config_from_mapping, run_sweep
from .tables import FORMATS, write_table

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 2, 3


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", choices=STATE_TAGS)
    p.add_argument("--n", type=int, help="photon number: n of |n,n> (tf) or N (noon)")
    p.add_argument("--nbar", type=float, nargs="+", help="mean total photon number(s)")
    p.add_argument("--alpha", type=float, help="EC amplitude (real)")
    p.add_argument("--phi-min", type=float)
    p.add_argument("--phi-max", type=float)
    p.add_argument("--phi-steps", type=int)
    p.add_argument("--nu", type=int, help="repetitions (default 1)")
    p.add_argument("--tail-eps", type=float, help="dropped photon-number mass (default 1e-12)")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--config", help="JSON sweep config; flags override its entries")
    p.add_argument("--workers", type=int, default=1, help="threads for sweep points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kerr-mzi", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"kerr-mzi {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("signal", "parity signal and slope over a phi grid"),
        ("qfi", "quantum Fisher information and QCR bound"),
        ("sensitivity", "parity sensitivity (phi -> 0+) against every bound"),
        ("bounds", "1/nbar^2, 1/nbar^1.5, <N^4> and the fluctuating-number limit"),
        ("sweep", "run the quantity named in --config"),
    ]:
        _common(sub.add_parser(name, help=help_))
    fig = sub.add_parser("figure", help="regenerate a figure table")
    fig.add_argument("figure_id", choices=FIGURE_IDS)
    _common(fig)
    return parser


def _load_mapping(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("<root>", f"not valid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    return data


def _mapping_from_args(args) -> dict:
    data = _load_mapping(args.config) if args.config else {}
    if args.state is not None:
        state = {"kind": args.state}
        if args.n is not None:
            state["n"] = args.n
        if args.alpha is not None:
            state["alpha"] = args.alpha
        if args.state == "tmsv" and args.nbar and len(args.nbar) == 1 and args.n is None:
            state["nbar"] = args.nbar[0]
        data["state"] = state if len(state) > 1 else args.state
    flags = {
        "phi_min": args.phi_min,
        "phi_max": args.phi_max,
        "phi_steps": args.phi_steps,
        "nu": args.nu,
        "tail_epsilon": args.tail_eps,
        "format": args.format,
        "output_path": args.out,
    }
    data.update({k: v for k, v in flags.items() if v is not None})
    if args.nbar:
        data["nbar_list"] = list(args.nbar)
    return data


def _emit(table, out, fmt) -> None:
    text = write_table(table, out, fmt)
    if out is None or out == "-":
        sys.stdout.write(text)


def _run(args) -> None:
    if args.command == "figure":
        overrides = _mapping_from_args(args) if args.config else {}
        overrides.pop("state", None)
        for key, value in [
            ("phi_min", args.phi_min),
            ("phi_max", args.phi_max),
            ("phi_steps", args.phi_steps),
            ("nu", args.nu),
            ("tail_epsilon", args.tail_eps),
            ("nbar_list", args.nbar),
        ]:
            if value is not None:
                overrides[key] = value
        out = overrides.pop("output_path", None) or args.out
        fmt = overrides.pop("format", None) or args.format or "csv"
        table = run_figure(args.figure_id, overrides, out=None, workers=args.workers)
        _emit(table, out, fmt)
        return
    data = _mapping_from_args(args)
    if args.command != "sweep":
        data["quantity"] = args.command
    elif not args.config:
        raise ConfigError("config", "the sweep command needs --config")
    cfg = config_from_mapping(data)
    out = cfg.output_path
    table = run_sweep(config_from_mapping({**data, "output_path": None}), workers=args.workers)
    _emit(table, out, cfg.format)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1:
        parser.error("--workers must be >= 1")
    try:
        _run(args)
    except ConfigError as exc:
        print(f"kerr-mzi: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"kerr-mzi: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, TypeError) as exc:
        print(f"kerr-mzi: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
