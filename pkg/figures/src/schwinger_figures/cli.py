"""Command line entry: render figure specs given as JSON files.

Exit codes follow the simulator CLI: 0 success, 1 data problem (missing or
schema-mismatched CSV, figure/data shape conflict), 2 usage problem (bad
arguments, unreadable or invalid spec JSON).
"""
from __future__ import annotations

import argparse
import json
import sys

from .render import FigureSpec, FigureError, render
from .schema import SchemaError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="schwinger-figures",
        description="render simulator CSV output into publication-style figures",
    )
    parser.add_argument(
        "--spec",
        action="append",
        required=True,
        metavar="JSON",
        help="figure spec file; repeat to render several figures in one call",
    )
    args = parser.parse_args(argv)

    specs = []
    for spec_path in args.spec:
        try:
            specs.append(FigureSpec.load(spec_path))
        except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
            print(f"error: {spec_path}: {exc}", file=sys.stderr)
            return 2
    for spec in specs:
        try:
            written = render(spec)
        except FileNotFoundError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        except (SchemaError, FigureError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"wrote {written}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
