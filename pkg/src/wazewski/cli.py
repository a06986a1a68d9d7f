"""Command-line front end.

Every subcommand writes one deterministic artifact (JSON with sorted keys
and rationals as "p/q", RFC 4180 CSV, or SVG) to stdout or ``--out``.
Exit codes: 0 all checks passed, 1 a check failed, 2 usage or config error.

Settings come from flags, then from ``--config`` (a flat ``key = value``
file, keys spelled like the long flags with dashes or underscores), then
from built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import acceptance
from .dynamics import (
    connecting_point,
    mixing_threshold,
    mixing_window,
    omega_report,
    orbit,
    parse_cylinder,
    transitivity_batch,
)
from .geometry import CompactApprox, Scene, build_net_D_truncated, build_net_Dr, render_svg
from .hyperspace import arc_profile, lemma_trials
from .interval import classify, cycle_net, separation_construct, separation_verify, _random_unit_rational
from .itinerary import ItineraryParseError, iterate_f, parse_itinerary, special_point


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _positive_fraction(text: str) -> Fraction:
    x = _fraction(text)
    if x <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return x


def _int(text: str) -> int:
    try:
        return int(str(text).strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc


# key -> (converter, help); shared by flags and the config file
SETTINGS: dict[str, tuple[Callable, str]] = {
    "r": (_fraction, "fan parameter r in (0, 1]"),
    "skip": (_int, "orbit steps discarded before the tail"),
    "length": (_int, "number of orbit steps kept"),
    "eps": (_positive_fraction, "net spacing"),
    "branch_cutoff": (_int, "largest beam index J"),
    "level_cutoff": (_int, "largest dyadic level for star positions"),
    "tail_tol": (_positive_fraction, "truncation tolerance for infinite itineraries"),
    "tolerance": (_positive_fraction, "pass threshold for the residual"),
    "grid": (str, "grid step like 1/8, or a comma list of r values"),
    "window": (_int, "number of consecutive hitting times"),
    "n_min": (_int, "first hitting time of the window (default: threshold)"),
    "seed": (_int, "RNG seed (required for randomized runs)"),
    "steps": (_int, "number of map applications"),
    "trials": (_int, "number of random trials"),
    "pairs": (_int, "number of random cylinder pairs"),
    "depth": (_int, "star depth of the truncated dendrite"),
    "samples": (_int, "number of sampled periodic orbits"),
    "delta": (_positive_fraction, "half-width of the separating window"),
    "a": (str, "comma list of rationals for the first omega-limit set"),
    "b": (str, "comma list of rationals for the second omega-limit set"),
    "u": (str, "source cylinder [n1,a1,...,n,(lo,hi)]"),
    "v": (str, "target cylinder [n1,a1,...,n,(lo,hi)]"),
    "scene": (str, "what to draw: net, dr or orbit"),
    "out": (str, "output path (default stdout)"),
}

DEFAULTS: dict[str, dict] = {
    "iterate": {"steps": 10},
    "verify-omega": {
        "r": Fraction(1, 2),
        "skip": 1000,
        "length": 20000,
        "eps": Fraction(1, 64),
        "branch_cutoff": 16,
        "tail_tol": Fraction(1, 256),
        "tolerance": Fraction(1, 16),
    },
    "arc-profile": {"grid": "1/8", "eps": Fraction(1, 64), "branch_cutoff": 16},
    "transitivity": {"window": 5, "pairs": 50},
    "mixing": {"window": 10},
    "tent-separation": {"a": "2/3", "b": "2/5,4/5", "delta": Fraction(1, 16), "samples": 20},
    "lemmas": {"trials": 100},
    "render": {
        "scene": "net",
        "depth": 2,
        "branch_cutoff": 6,
        "level_cutoff": 2,
        "eps": Fraction(1, 4),
        "r": Fraction(1, 2),
        "length": 50,
    },
    "suite": {},
}

FLAGS: dict[str, tuple[str, ...]] = {
    "iterate": ("steps",),
    "verify-omega": ("r", "skip", "length", "eps", "branch_cutoff", "tail_tol", "tolerance"),
    "arc-profile": ("grid", "eps", "branch_cutoff"),
    "transitivity": ("u", "v", "window", "pairs", "seed"),
    "mixing": ("u", "v", "window", "n_min"),
    "tent-separation": ("a", "b", "delta", "samples", "seed"),
    "lemmas": ("trials", "seed"),
    "render": ("scene", "depth", "branch_cutoff", "level_cutoff", "eps", "r", "length"),
    "suite": ("seed",),
}


# ---------------------------------------------------------------------------
# output helpers


def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(cfg: dict, text: str) -> None:
    out = cfg.get("out")
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fractions(text: str) -> list[Fraction]:
    try:
        return [Fraction(v.strip()) for v in text.split(",") if v.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational list {text!r}") from exc


def _require_seed(cfg: dict) -> int:
    if cfg.get("seed") is None:
        raise UsageError("this command is randomized; pass --seed (or seed = ... in the config file)")
    return cfg["seed"]


# ---------------------------------------------------------------------------
# commands


def cmd_iterate(cfg: dict) -> int:
    try:
        it = parse_itinerary(cfg["itinerary"])
    except ItineraryParseError as exc:
        raise UsageError(str(exc)) from exc
    if cfg["steps"] < 0:
        raise UsageError("--steps must be nonnegative")
    lines = [str(it)]
    for _ in range(cfg["steps"]):
        it = iterate_f(it, 1)
        lines.append(str(it))
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_verify_omega(cfg: dict) -> int:
    r = cfg["r"]
    if not 0 < r <= 1:
        raise UsageError(f"r must lie in (0, 1], got {r}")
    if cfg["skip"] < 0 or cfg["length"] < 1:
        raise UsageError("need skip >= 0 and length >= 1")
    rep = omega_report(r, cfg["skip"], cfg["length"], cfg["eps"], cfg["branch_cutoff"], cfg["tail_tol"])
    rep["tolerance"] = cfg["tolerance"]
    rep["passed"] = rep["residual"] <= cfg["tolerance"]
    _emit(cfg, dump_json(rep))
    return 0 if rep["passed"] else 1


def _grid(text: str) -> list[Fraction]:
    vals = _fractions(text)
    if len(vals) == 1 and "," not in text:
        step = vals[0]
        if not 0 < step <= 1:
            raise UsageError("grid step must lie in (0, 1]")
        n = int(1 / step)
        vals = [i * step for i in range(n + 1)]
        if vals[-1] != 1:
            vals.append(Fraction(1))
    if any(not 0 <= v <= 1 for v in vals):
        raise UsageError("grid values must lie in [0, 1]")
    return vals


def cmd_arc_profile(cfg: dict) -> int:
    prof = arc_profile(_grid(cfg["grid"]), cfg["eps"], cfg["branch_cutoff"])
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\r\n").writerows(prof.to_csv_rows())
    _emit(cfg, buf.getvalue())
    return 0 if prof.max_law_violation() == 0 else 1


def _cylinders(cfg: dict):
    try:
        return parse_cylinder(cfg["u"]), parse_cylinder(cfg["v"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_transitivity(cfg: dict) -> int:
    if cfg.get("u") is None and cfg.get("v") is None:
        rep = transitivity_batch(cfg["pairs"], _require_seed(cfg), cfg["window"])
        _emit(cfg, dump_json(rep))
        return 0 if not rep["failures"] else 1
    if cfg.get("u") is None or cfg.get("v") is None:
        raise UsageError("give both --u and --v, or neither (random batch)")
    U, V = _cylinders(cfg)
    w = connecting_point(U, V)
    mix = mixing_window(U, V, mixing_threshold(U), cfg["window"])
    ok = w.verified and mix.all_verified and not mix.unreachable
    _emit(cfg, dump_json({"connecting": w.to_json(), "mixing": mix.to_json(), "passed": ok}))
    return 0 if ok else 1


def cmd_mixing(cfg: dict) -> int:
    if cfg.get("u") is None or cfg.get("v") is None:
        raise UsageError("mixing needs --u and --v")
    U, V = _cylinders(cfg)
    n_min = cfg.get("n_min")
    if n_min is None:
        n_min = mixing_threshold(U)
    if cfg["window"] < 1:
        raise UsageError("--window must be at least 1")
    rep = mixing_window(U, V, n_min, cfg["window"])
    body = rep.to_json()
    body["n_min"] = n_min
    ok = rep.all_verified and not rep.unreachable
    body["passed"] = ok
    _emit(cfg, dump_json(body))
    return 0 if ok else 1


def cmd_tent_separation(cfg: dict) -> int:
    import random

    seed = _require_seed(cfg)
    A = CompactApprox("A", tuple(_fractions(cfg["a"])), Fraction(0))
    B = CompactApprox("B", tuple(_fractions(cfg["b"])), Fraction(0))
    if any(not 0 <= x <= 1 for x in A.points + B.points):
        raise UsageError("points must lie in [0, 1]")
    try:
        sep = separation_construct(A, B, cfg["delta"], rng_seed=seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rng = random.Random(seed)
    samples = [cycle_net(_random_unit_rational(rng, 60)) for _ in range(cfg["samples"])]
    rep = separation_verify(sep, samples)
    rep["A_class"], rep["B_class"] = classify(sep, A), classify(sep, B)
    rep["passed"] = rep["A_class"] == "V" and rep["B_class"] == "U" and rep["outside_margin_fraction"] >= 0.95
    _emit(cfg, dump_json(rep))
    return 0 if rep["passed"] else 1


def cmd_lemmas(cfg: dict) -> int:
    rep = lemma_trials(cfg["trials"], _require_seed(cfg))
    _emit(cfg, dump_json(rep))
    return 0 if not rep["failures"] else 1


def cmd_render(cfg: dict) -> int:
    kind = cfg["scene"]
    if kind == "net":
        nets = (build_net_D_truncated(cfg["depth"], cfg["branch_cutoff"], cfg["level_cutoff"], cfg["eps"]),)
        orbits = ()
    elif kind in ("dr", "orbit"):
        r = cfg["r"]
        if not 0 < r <= 1:
            raise UsageError(f"r must lie in (0, 1], got {r}")
        nets = (build_net_Dr(r, cfg["eps"], cfg["branch_cutoff"]),)
        orbits = (tuple(orbit(special_point(r), cfg["length"])),) if kind == "orbit" else ()
    else:
        raise UsageError(f"unknown scene {kind!r}; choose net, dr or orbit")
    _emit(cfg, render_svg(Scene(nets, orbits)))
    return 0


def cmd_suite(cfg: dict) -> int:
    results = acceptance.run_all(_require_seed(cfg))
    for res in results:
        print(res.line(), file=sys.stderr)
    ok = all(r.passed for r in results)
    _emit(cfg, dump_json({"criteria": [r.to_json() for r in results], "passed": ok}))
    return 0 if ok else 1


COMMANDS = {
    "iterate": cmd_iterate,
    "verify-omega": cmd_verify_omega,
    "arc-profile": cmd_arc_profile,
    "transitivity": cmd_transitivity,
    "mixing": cmd_mixing,
    "tent-separation": cmd_tent_separation,
    "lemmas": cmd_lemmas,
    "render": cmd_render,
    "suite": cmd_suite,
}


# ---------------------------------------------------------------------------
# argument handling


def read_config(path: str) -> dict:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from exc
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{no}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in SETTINGS:
            raise UsageError(f"{path}:{no}: unknown key {key!r}")
        try:
            out[key] = SETTINGS[key][0](value)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"{path}:{no}: {exc}") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wazewski", description="Exact experiments on a universal dendrite map.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, keys in FLAGS.items():
        p = sub.add_parser(name, help=(COMMANDS[name].__doc__ or name))
        if name == "iterate":
            p.add_argument("itinerary", help='itinerary text such as "(3,7/10)"')
        for key in keys:
            conv, help_ = SETTINGS[key]
            p.add_argument("--" + key.replace("_", "-"), dest=key, type=conv, default=None, help=help_)
        p.add_argument("--out", default=None, help=SETTINGS["out"][1])
        p.add_argument("--config", default=None, help="flat key = value settings file")
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Merge flags over the config file over the defaults."""
    cfg = dict(DEFAULTS[args.command])
    if args.config:
        file_cfg = read_config(args.config)
        allowed = set(FLAGS[args.command]) | {"out"}
        cfg.update({k: v for k, v in file_cfg.items() if k in allowed})
    for k, v in vars(args).items():
        if v is not None and k not in ("command", "config"):
            cfg[k] = v
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"wazewski {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
