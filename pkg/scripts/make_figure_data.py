#!/usr/bin/env python3
"""Write the bound-versus-exact curve data to CSV files.

One file per figure/panel combination, using the same grids as the
`geomax figures` subcommand, so plotted output can be regenerated from
a clean checkout with one command:

    python scripts/make_figure_data.py --out-dir data/
"""

from __future__ import annotations

import argparse
import pathlib

from geomax.cli import FIGURE_GRIDS, figure_rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=pathlib.Path, default=pathlib.Path("data"))
    parser.add_argument("--precision", type=int, default=12)
    args = parser.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    for figure, panel in FIGURE_GRIDS:
        path = args.out_dir / f"{figure}-{panel}.csv"
        with path.open("w") as fh:
            fh.write("n,s,exact,elementary_bound,improved_bound\n")
            for n, s, exact, elementary, improved in figure_rows(figure, panel):
                fh.write(
                    f"{n},{s},{exact:.{args.precision}g},"
                    f"{elementary:.{args.precision}g},{improved:.{args.precision}g}\n"
                )
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
