"""Draw the truncated dendrite, a fan D_r, and the orbit of the special point."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from wazewski.dynamics import orbit
from wazewski.geometry import Scene, build_net_D_truncated, build_net_Dr, embedding_disjointness_check, render_svg
from wazewski.itinerary import special_point


@dataclass
class Config:
    outdir: str = "figures"
    depth: int = 3
    branch_cutoff: int = 6
    level_cutoff: int = 2
    eps: Fraction = Fraction(1, 32)
    r: Fraction = Fraction(3, 4)
    orbit_length: int = 400


def run(cfg: Config) -> dict:
    out = Path(cfg.outdir)
    out.mkdir(parents=True, exist_ok=True)
    tree = build_net_D_truncated(cfg.depth, cfg.branch_cutoff, cfg.level_cutoff, cfg.eps)
    fan = build_net_Dr(cfg.r, cfg.eps, cfg.branch_cutoff)
    orb = tuple(orbit(special_point(cfg.r), cfg.orbit_length))
    files = {
        "dendrite.svg": Scene((tree,)),
        "fan.svg": Scene((fan,)),
        "orbit.svg": Scene((fan,), (orb,)),
    }
    for name, scene in files.items():
        (out / name).write_text(render_svg(scene), encoding="utf-8")
    check = embedding_disjointness_check(2, cfg.branch_cutoff, cfg.level_cutoff)
    return {"written": sorted(files), "tree_points": len(tree.points), "planar_check_passed": check["passed"]}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default=Config.outdir)
    print(run(Config(outdir=ap.parse_args().outdir)))


if __name__ == "__main__":
    main()
