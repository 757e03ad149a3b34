"""Write every figure table to a directory (CSV by default).

    python scripts/reproduce_figures.py --out-dir figures --workers 4
"""
import argparse
import time
from pathlib import Path

from kerr_mzi.figures import FIGURE_IDS, run_figure


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="figures")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--tail-eps", type=float, default=None)
    args = ap.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    overrides = {"tail_epsilon": args.tail_eps}
    for fid in FIGURE_IDS:
        t0 = time.perf_counter()
        path = out_dir / f"{fid}.{args.format}"
        table = run_figure(fid, overrides, out=str(path), fmt=args.format, workers=args.workers)
        print(f"{fid}: {table.n_rows} rows -> {path} ({time.perf_counter() - t0:.2f} s)")


if __name__ == "__main__":
    main()
