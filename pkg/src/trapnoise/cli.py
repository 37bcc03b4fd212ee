"""Command-line entry points.

Subcommands:

* ``reproduce <figN>``    run a built-in preset and write its artifact set
* ``dump-preset <figN>``  print (or save) a preset as editable JSON
* ``simulate``            event-level / sampled export for a config file
* ``spectrum``            spectrum CSVs only for a config file
* ``analyze``             spectrum plus the analysis report

``--scale`` divides horizon and realization count, ``--full`` enables the
long horizon-1e8 run of fig4, ``--workers`` caps parallelism (results do
not depend on it), ``--seed`` overrides the master seed.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .presets import DEFAULT_SEED, PRESET_NAMES, preset, spec_from_dict, spec_to_dict
from .runner import run


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="master seed")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--workers", type=int, default=None, help="worker processes")


def _add_preset_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("figure", choices=PRESET_NAMES)
    parser.add_argument(
        "--scale", type=float, default=1.0, help="divide horizon and realizations"
    )
    parser.add_argument(
        "--full", action="store_true", help="include the gated long run (fig4)"
    )


def _load_spec(args):
    with open(args.config) as fh:
        spec = spec_from_dict(json.load(fh))
    if args.seed is not None:
        runs = tuple(
            (label, dataclasses.replace(cfg, seed=args.seed))
            for label, cfg in spec.runs
        )
        spec = dataclasses.replace(spec, runs=runs)
    return spec


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="trapnoise",
        description="Trapping-detrapping flicker-noise experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reproduce", help="run a built-in preset")
    _add_preset_args(p)
    _add_common(p)

    p = sub.add_parser("dump-preset", help="emit a preset as editable JSON")
    _add_preset_args(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="file path (default: stdout)")

    for name, help_text in (
        ("simulate", "write event-level (and sampled) exports"),
        ("spectrum", "write spectrum CSVs for a config"),
        ("analyze", "write spectrum CSVs plus the analysis report"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="experiment JSON file")
        _add_common(p)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except Exception as exc:  # surface a diagnostic, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    if args.command == "dump-preset":
        spec = preset(
            args.figure,
            scale=args.scale,
            seed=args.seed if args.seed is not None else DEFAULT_SEED,
            full=args.full,
        )
        text = json.dumps(spec_to_dict(spec), indent=2) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return 0

    if args.command == "reproduce":
        spec = preset(
            args.figure,
            scale=args.scale,
            seed=args.seed if args.seed is not None else DEFAULT_SEED,
            full=args.full,
        )
        artifacts = run(spec, args.out, workers=args.workers)
        for role in sorted(artifacts):
            print(f"{role}: {artifacts[role]}")
        return 0

    spec = _load_spec(args)
    if args.command == "simulate":
        artifacts = run(spec, args.out, workers=args.workers, events_csv=True)
    elif args.command == "spectrum":
        spec = dataclasses.replace(spec, analyses=())
        artifacts = run(spec, args.out, workers=args.workers)
    else:  # analyze
        artifacts = run(spec, args.out, workers=args.workers)
    for role in sorted(artifacts):
        print(f"{role}: {artifacts[role]}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
