"""How often sampled tent-map cycles fall in the margin around the cut points.

For each window half-width delta and seed, separates the fixed point 2/3 from
the 2-cycle {2/5, 4/5} and classifies sampled cycles.
"""

from __future__ import annotations

import argparse
import json
import random
from dataclasses import dataclass
from fractions import Fraction

from wazewski.geometry import CompactApprox
from wazewski.interval import _random_unit_rational, cycle_net, separation_construct, separation_verify


@dataclass
class Config:
    deltas: tuple = (Fraction(1, 16), Fraction(1, 32), Fraction(1, 64))
    seeds: tuple = (0, 1, 2, 3, 4)
    samples: int = 100
    max_den: int = 200


def run(cfg: Config) -> list[dict]:
    A = CompactApprox("fixed", (Fraction(2, 3),), Fraction(0))
    B = CompactApprox("2-cycle", (Fraction(2, 5), Fraction(4, 5)), Fraction(0))
    rows = []
    for delta in cfg.deltas:
        for seed in cfg.seeds:
            sep = separation_construct(A, B, delta, rng_seed=seed)
            rng = random.Random(seed)
            samples = [cycle_net(_random_unit_rational(rng, cfg.max_den)) for _ in range(cfg.samples)]
            rep = separation_verify(sep, samples)
            rows.append({"delta": str(delta), "seed": seed, **rep["counts"], "outside_margin": rep["outside_margin_fraction"]})
    return rows


def main() -> None:
    argparse.ArgumentParser(description=__doc__).parse_args()
    for row in run(Config()):
        print(json.dumps(row, sort_keys=True))


if __name__ == "__main__":
    main()
