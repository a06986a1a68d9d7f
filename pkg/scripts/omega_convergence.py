"""Residual of the omega-limit check as the orbit tail grows, for several r.

Writes a CSV with one row per (r, length): both one-sided distances and the
residual, as floats, next to the exact residual.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from wazewski.dynamics import omega_report


@dataclass
class Config:
    rs: tuple = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))
    lengths: tuple = (2_500, 5_000, 10_000, 20_000, 40_000)
    skip: int = 1000
    eps: Fraction = Fraction(1, 64)
    branch_cutoff: int = 16
    tail_tol: Fraction = Fraction(1, 256)
    out: str | None = None


def run(cfg: Config) -> list[dict]:
    rows = []
    for r in cfg.rs:
        for n in cfg.lengths:
            rep = omega_report(r, cfg.skip, n, cfg.eps, cfg.branch_cutoff, cfg.tail_tol)
            rows.append(
                {
                    "r": str(r),
                    "length": n,
                    "tail_points": rep["tail_points"],
                    "tail_to_Dr": f"{float(rep['tail_to_Dr']):.6g}",
                    "Dr_to_tail": f"{float(rep['Dr_to_tail']):.6g}",
                    "residual": f"{float(rep['residual']):.6g}",
                    "residual_exact": str(rep["residual"]),
                }
            )
            print(f"r={r} length={n} residual={float(rep['residual']):.6f}", file=sys.stderr)
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", help="CSV path (default stdout)")
    ap.add_argument("--quick", action="store_true", help="short lengths only")
    args = ap.parse_args()
    cfg = Config(out=args.out)
    if args.quick:
        cfg.lengths = (1_000, 2_000, 4_000)
    rows = run(cfg)
    fh = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    w = csv.DictWriter(fh, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    if cfg.out:
        fh.close()


if __name__ == "__main__":
    main()
