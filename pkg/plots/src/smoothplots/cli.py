"""Render every figure a harness run directory has tables for.

Usage: smoothlot-plots RUN_DIR

Images are written into the run directory next to the tables they were
built from: sweep.png, tradeoff.png, tightness.png, ccdf.png.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import PlotSpec, render

TABLE_FIGURES = (
    ("sweep.csv", "sweep"),
    ("tradeoff.csv", "tradeoff"),
    ("tightness.csv", "tightness"),
    ("marginals.csv", "ccdf"),
)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="smoothlot-plots", description=__doc__.splitlines()[0]
    )
    parser.add_argument("run_dir", help="output directory of a harness run")
    args = parser.parse_args(argv)
    run = Path(args.run_dir)
    if not run.is_dir():
        print(f"error: {run} is not a directory", file=sys.stderr)
        return 1
    written = []
    try:
        for filename, kind in TABLE_FIGURES:
            table = run / filename
            if not table.exists():
                continue
            written.append(render(PlotSpec(kind=kind, tables=(table,), out=run / f"{kind}.png")))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not written:
        print(f"error: no renderable tables in {run}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
