"""Command-line interface.

Subcommands: design (emit an alphabet file), detect-eval (SER at one noise
point), sweep (full noise sweep to CSV), constellation (per-symbol clouds
and confidence ellipses), plot (CSV to a static image).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import parse_config
from .design import save_alphabet
from .errors import MixcommError
from .harness import (
    constellation_rng,
    export_constellation,
    resolve_alphabet,
    run_sweep,
    write_constellation_csvs,
    write_ser_csv,
)
from .plotting import load_ser_csv, plot_ser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixcomm",
        description="Molecule-mixture communication simulator and alphabet designer",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", help="design an alphabet and write it to a file")
    p_design.add_argument("-c", "--config", required=True)
    p_design.add_argument("-o", "--output", help="alphabet file (default <output_dir>/alphabet.txt)")

    p_eval = sub.add_parser("detect-eval", help="estimate SER at a single noise point")
    p_eval.add_argument("-c", "--config", required=True)
    p_eval.add_argument("--nu", type=float, help="noise scale (default: first of nu_values)")
    p_eval.add_argument("--workers", type=int, default=1)
    p_eval.add_argument("-o", "--output", help="CSV path (default <output_dir>/ser.csv)")

    p_sweep = sub.add_parser("sweep", help="estimate SER over the configured noise sweep")
    p_sweep.add_argument("-c", "--config", required=True)
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.add_argument("-o", "--output", help="CSV path (default <output_dir>/ser.csv)")

    p_const = sub.add_parser("constellation", help="export per-symbol clouds and ellipses")
    p_const.add_argument("-c", "--config", required=True)
    p_const.add_argument("--samples", type=int, default=200, help="samples per symbol")
    p_const.add_argument("-o", "--output", help="output directory (default <output_dir>)")

    p_plot = sub.add_parser("plot", help="render a SER CSV to a static image")
    p_plot.add_argument("csv", help="SER CSV produced by sweep/detect-eval")
    p_plot.add_argument("-o", "--output", help="image path (default <csv>.png)")
    return parser


def _cmd_design(args) -> int:
    cfg = parse_config(args.config)
    name, symbols = resolve_alphabet(cfg)
    out = Path(args.output) if args.output else Path(cfg.output_dir) / "alphabet.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    save_alphabet(out, symbols)
    print(f"wrote {symbols.shape[0]}-symbol alphabet '{name}' to {out}")
    return 0


def _cmd_sweep(args, single_nu: float | None = None) -> int:
    cfg = parse_config(args.config)
    if single_nu is not None:
        cfg = replace(cfg, nu_values=(single_nu,))
    rows = run_sweep(cfg, workers=args.workers)
    out = Path(args.output) if args.output else Path(cfg.output_dir) / "ser.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    write_ser_csv(out, rows)
    print(f"wrote {len(rows)} SER rows to {out}")
    return 0


def _cmd_detect_eval(args) -> int:
    cfg = parse_config(args.config)
    nu = args.nu if args.nu is not None else cfg.nu_values[0]
    return _cmd_sweep(args, single_nu=float(nu))


def _cmd_constellation(args) -> int:
    cfg = parse_config(args.config)
    _, symbols = resolve_alphabet(cfg)
    rng = constellation_rng(cfg.master_seed)
    data = export_constellation(symbols, cfg.system, args.samples, rng)
    outdir = Path(args.output) if args.output else Path(cfg.output_dir)
    written = write_constellation_csvs(data, outdir)
    print("wrote " + ", ".join(str(p) for p in written))
    return 0


def _cmd_plot(args) -> int:
    rows = load_ser_csv(args.csv)
    out = Path(args.output) if args.output else Path(args.csv).with_suffix(".png")
    plot_ser(rows, out)
    print(f"wrote {out}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "design": _cmd_design,
        "detect-eval": _cmd_detect_eval,
        "sweep": lambda a: _cmd_sweep(a),
        "constellation": _cmd_constellation,
        "plot": _cmd_plot,
    }
    try:
        return handlers[args.command](args)
    except MixcommError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
