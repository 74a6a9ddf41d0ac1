"""Command-line driver: ``multihomeo <scenario> [flags]``.

Writes ``<scenario>.json`` (report), ``<scenario>.csv`` (one row per check)
and ``<scenario>.timing.json`` into ``--out``.  Exit status is 0 exactly when
every check passes, 1 when some check fails and 2 on usage or stage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .experiments import SCENARIOS, ExperimentConfig, run

log = logging.getLogger("multihomeo")


def _p_list(text: str) -> list:
    try:
        return [float(Fraction(tok.strip())) for tok in text.split(",") if tok.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad p list {text!r}: {exc}") from None


def _on_off(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multihomeo",
        description="Build changes of variable that tame Fourier multiplier norms and check them numerically.",
    )
    sub = parser.add_subparsers(dest="scenario", required=True, metavar="SCENARIO")
    for name in SCENARIOS:
        sp = sub.add_parser(name, help=f"run the {name} scenario")
        sp.add_argument("--config", type=Path, help="JSON config file (flags override its fields)")
        sp.add_argument("--out", type=Path, default=Path("results"), help="output directory")
        sp.add_argument("--seed", type=int, help="base seed (unsigned 64-bit)")
        sp.add_argument("--grid", type=int, help="grid size N (power of two)")
        sp.add_argument("--p", type=_p_list, help="comma-separated exponents, e.g. 4/3,2,4")
        sp.add_argument("--dim", type=int, help="dimension d (1, 2 or 3)")
        sp.add_argument("--jitter", type=_on_off, help="nowhere-linear jitter of the target net")
        sp.add_argument("-v", "--verbose", action="store_true")
    return parser


def make_config(args) -> ExperimentConfig:
    data = {}
    if args.config is not None:
        data = json.loads(Path(args.config).read_text())
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
    data["scenario"] = args.scenario
    overrides = {"seed": args.seed, "N": args.grid, "p": args.p, "d": args.dim, "jitter": args.jitter}
    for key, value in overrides.items():
        if value is not None:
            data[key] = value
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return ExperimentConfig.from_dict(data)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = make_config(args)
        report = run(cfg)
    except (ValueError, RuntimeError, OSError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = cfg.scenario
    (out / f"{stem}.json").write_text(report.to_json())
    (out / f"{stem}.csv").write_text(report.to_csv())
    (out / f"{stem}.timing.json").write_text(json.dumps(report.timing, indent=2) + "\n")
    failed = report.failures()
    status = "PASS" if not failed else "FAIL"
    print(f"{stem}: {status} ({len(report.checks) - len(failed)}/{len(report.checks)} checks) -> {out}")
    for c in failed:
        print(f"  failed {c.name} p={c.p} N={c.N} n={c.n}: measured {c.measured!r} > bound {c.bound!r}")
    log.info("elapsed %.2fs", report.timing.get("seconds", float("nan")))
    return 0 if not failed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
