"""Run a sweep grid and print a compact summary table.

    python3 scripts/run_grid.py scripts/grids/eta_trend.json --out eta.csv
"""
import argparse
import sys

from spectral_gmm.sweep import load_grid, run_sweep

SHOW = ("n", "m", "eta", "alpha_min", "feasible", "corollary_ratio",
        "emp_miss_rate", "emp_allcorrect", "degenerate_reps")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("grid")
    ap.add_argument("--out", help="also write the full CSV here")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    if args.out:
        with open(args.out, "w", newline="") as fh:
            rows = run_sweep(load_grid(args.grid), fh, workers=args.workers)
    else:
        rows = run_sweep(load_grid(args.grid), workers=args.workers)

    print("  ".join(f"{c:>15}" for c in SHOW))
    for row in rows:
        if row["error"]:
            print(f"error: {row['error']}", file=sys.stderr)
            continue
        cells = []
        for c in SHOW:
            v = row[c]
            cells.append(f"{v:15.4g}" if isinstance(v, float) else f"{v!s:>15}")
        print("  ".join(cells))


if __name__ == "__main__":
    main()
