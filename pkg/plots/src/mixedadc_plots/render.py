"""Command line entry: one CSV in, one figure file out."""

import argparse
import sys

import matplotlib.pyplot as plt

from .figures import FIGURES
from .schemas import SCHEMAS, EmptyTable, SchemaMismatch, read_table

__all__ = ["render", "main"]


def render(csv_path, figure_kind: str, out_path) -> str:
    """Read a schema-locked CSV and write its figure. Returns out_path.

    The table is fully validated before any drawing starts, so a bad or
    empty input never leaves a file behind.
    """
    columns = read_table(csv_path, figure_kind)
    fig = FIGURES[figure_kind](columns)
    try:
        fig.savefig(out_path)
    finally:
        plt.close(fig)
    return out_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mixedadc-plot",
        description="Render a simulator CSV table into a figure file.",
    )
    parser.add_argument("csv", help="input table written by the simulator CLI")
    parser.add_argument("kind", choices=sorted(SCHEMAS), help="table schema the file follows")
    parser.add_argument("out", help="figure destination; the extension picks the format")
    args = parser.parse_args(argv)
    try:
        render(args.csv, args.kind, args.out)
    except (SchemaMismatch, EmptyTable, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
