"""Static figures rendered from the SER CSV contract."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .errors import ParseError
from .harness import SER_CSV_HEADER, SerPoint


def load_ser_csv(path) -> list[SerPoint]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != SER_CSV_HEADER.split(","):
            raise ParseError(
                f"{path}: expected header {SER_CSV_HEADER!r}, got {reader.fieldnames}"
            )
        rows = []
        for rec in reader:
            rows.append(
                SerPoint(
                    alphabet=rec["alphabet"],
                    detector=rec["detector"],
                    nu=float(rec["nu"]),
                    inv_nu=float(rec["inv_nu"]),
                    trials=int(rec["trials"]),
                    errors=int(rec["errors"]),
                    ser=float(rec["ser"]),
                    wilson_halfwidth=float(rec["wilson_halfwidth"]),
                    seed=int(rec["seed"]),
                )
            )
    return rows


def plot_ser(rows, out_path) -> Path:
    """SER against 1/nu, one curve per (alphabet, detector)."""
    groups: dict[tuple[str, str], list[SerPoint]] = {}
    for p in rows:
        groups.setdefault((p.alphabet, p.detector), []).append(p)

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for (alphabet, detector), pts in sorted(groups.items()):
        pts = sorted(pts, key=lambda p: p.inv_nu)
        x = [p.inv_nu for p in pts]
        y = [max(p.ser, 0.5 / p.trials) for p in pts]  # keep log axis finite
        err = [p.wilson_halfwidth for p in pts]
        ax.errorbar(x, y, yerr=err, marker="o", capsize=2, label=f"{alphabet} / {detector}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("inverse noise scale 1/nu")
    ax.set_ylabel("symbol error rate")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
