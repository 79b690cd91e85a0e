"""Write CSV + JSON data for every figure panel.

    python scripts/reproduce_figures.py --out figures --samples 1000000 --seed 0
"""

import argparse
import time

from dgplab.figures import DEFAULT_N, FIGURE_IDS, figure_data


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    ap.add_argument("--samples", type=int, default=DEFAULT_N)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--ids", nargs="*", default=list(FIGURE_IDS))
    args = ap.parse_args()
    for fid in args.ids:
        t0 = time.perf_counter()
        data = figure_data(fid, n=args.samples, seed=args.seed, threads=args.threads)
        csv_path, _ = data.write(args.out)
        print(f"{fid}: {csv_path} ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
