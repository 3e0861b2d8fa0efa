"""Command-line interface: learn / navigate / dual / selftest."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from snapmem.harness import (
    ExperimentSpec,
    run_learning,
    run_navigation,
    selftest,
)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="experiment spec JSON file")
    parser.add_argument("--seed", type=int, help="rng seed (required)")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--runs", type=int)
    parser.add_argument("--steps", type=int)
    parser.add_argument("--sample-interval", type=int, dest="sample_interval")
    parser.add_argument("--jobs", type=int)
    parser.add_argument("--setting")
    parser.add_argument("--agent")


def _build_spec(args, defaults: ExperimentSpec) -> ExperimentSpec:
    if args.config:
        with open(args.config) as handle:
            spec = ExperimentSpec.from_json(handle.read())
    else:
        spec = defaults
    overrides = {
        name: getattr(args, name)
        for name in ("seed", "runs", "steps", "sample_interval", "jobs",
                     "setting", "agent")
        if getattr(args, name, None) is not None
    }
    return dataclasses.replace(spec, **overrides)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="snapmem",
        description="snapshot-memory learning and navigation experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    learn = sub.add_parser("learn", help="random-walk learning sweep")
    _add_common(learn)

    navigate = sub.add_parser("navigate", help="excitation-driven navigation")
    _add_common(navigate)

    dual = sub.add_parser("dual", help="print/export a poc set's dual")
    dual.add_argument("pocset", help="poc set JSON file")
    dual.add_argument("--format", choices=("dot", "json"), default="dot")
    dual.add_argument("--out", help="output file (default stdout)")

    sub.add_parser("selftest", help="run the oracle-equivalence suites")

    args = parser.parse_args(argv)

    if args.command == "selftest":
        return selftest()

    if args.command == "dual":
        from snapmem.cubing import Cubing
        from snapmem.pocset import WeakPocSet

        with open(args.pocset) as handle:
            pocset = WeakPocSet.from_json(handle.read())
        quotient, _ = pocset.canonical_quotient()
        cubing = Cubing(quotient)
        text = cubing.to_dot() if args.format == "dot" else cubing.to_json()
        if args.out:
            with open(args.out, "w") as handle:
                handle.write(text + "\n")
        else:
            print(text)
        return 0

    if args.command == "learn":
        spec = _build_spec(args, ExperimentSpec())
        path = run_learning(spec, args.out)
    else:
        spec = _build_spec(
            args,
            ExperimentSpec(
                agent="empirical,discounted",
                sweep=(1 / 8000,),
                steps=4000,
            ),
        )
        path = run_navigation(spec, args.out)
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
