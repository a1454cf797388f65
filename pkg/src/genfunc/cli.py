"""Command-line entry point: ``genfunc run|sweep|check|calculus-test``.

Exit codes: 0 PASS, 1 FAIL, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import harness
from .errors import ConfigError


def _values(text: str):
    vals = [v.strip() for v in text.split(",") if v.strip()]
    if not vals:
        raise argparse.ArgumentTypeError("empty value list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="genfunc", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="certify, simulate and check domination")
    r.add_argument("--config", required=True)
    r.add_argument("--override", action="append", default=[], metavar="KEY=VAL")
    r.add_argument("--output", help="artifact directory (default: config output)")

    s = sub.add_parser("sweep", help="refinement study along one axis")
    s.add_argument("--config", required=True)
    s.add_argument("--axis", required=True, choices=harness.SWEEP_AXES)
    s.add_argument("--values", required=True, type=_values)
    s.add_argument("--override", action="append", default=[], metavar="KEY=VAL")
    s.add_argument("--output")

    c = sub.add_parser("check", help="re-verify domination from stored artifacts")
    c.add_argument("--artifacts", required=True)

    t = sub.add_parser("calculus-test", help="random generator-calculus suite")
    t.add_argument("--trials", type=int, default=200)
    t.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return harness.EXIT_USAGE if exc.code else harness.EXIT_PASS
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            cfg = harness.ExperimentConfig.load(args.config).with_overrides(args.override)
            res = harness.run(cfg, args.output)
            print(res.summary)
            return res.exit_code
        if args.command == "sweep":
            cfg = harness.ExperimentConfig.load(args.config).with_overrides(args.override)
            text = harness.sweep(cfg, args.axis, args.values, args.output)
            sys.stdout.write(text)
            failed = any(",PASS," not in ln for ln in text.splitlines()[1:])
            return harness.EXIT_FAIL if failed else harness.EXIT_PASS
        if args.command == "check":
            res = harness.check(args.artifacts)
            note = "" if res.reproduced else f" (stored {res.stored_status}, not reproduced)"
            print(f"{res.status}{note}")
            return res.exit_code
        if args.command == "calculus-test":
            if args.trials < 1:
                raise ConfigError("--trials must be at least 1")
            res = harness.calculus_suite(args.trials, args.seed)
            sys.stdout.write(res.to_text())
            return harness.EXIT_PASS if res.passed else harness.EXIT_FAIL
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return harness.EXIT_USAGE
    return harness.EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
