"""Run the acceptance battery and save a JSON report."""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass

from wazewski import acceptance


@dataclass
class Config:
    out: str = "acceptance_report.json"
    seed: int | None = None  # None keeps each criterion's own seed


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=Config.out)
    ap.add_argument("--seed", type=int, default=None)
    args = ap.parse_args()
    cfg = Config(args.out, args.seed)
    results = acceptance.run_all(cfg.seed)
    for r in results:
        print(r.line())
    with open(cfg.out, "w", encoding="utf-8") as fh:
        json.dump([r.to_json() for r in results], fh, sort_keys=True, indent=2)


if __name__ == "__main__":
    main()
