#!/usr/bin/env python3
"""Run the standard ablation sweeps into CSV files, one per axis.

Grids cover the usual operating ranges: localization threshold k,
center-law alpha, and refresh frequency. Each CSV follows the long
format emitted by the library (axis_name, axis_value, arm, metrics).
"""

import argparse
import pathlib

from cropsim import CropConfig, TrainPlan, load_scenes, sweep, write_sweep_csv

GRIDS = {
    "k": [0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5],
    "alpha": [0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4],
    "freq": [0.0, 0.1, 0.2, 0.25, 0.5],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scenes", required=True)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n-pairs", type=int, default=10_000)
    ap.add_argument("--epochs", type=int, default=100, help="schedule length for the freq axis")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out-dir", default="sweep_out")
    ap.add_argument("--axes", nargs="+", default=list(GRIDS), choices=list(GRIDS))
    args = ap.parse_args()

    scenes = load_scenes(args.scenes)
    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = CropConfig()
    plan = TrainPlan(args.epochs, cfg.update_freq)
    for axis in args.axes:
        rows = sweep(
            axis, GRIDS[axis], cfg, plan, scenes, args.seed, args.n_pairs, threads=args.threads
        )
        path = out_dir / f"sweep_{axis}.csv"
        write_sweep_csv(rows, path)
        print(f"{axis}: {len(rows)} rows -> {path}")


if __name__ == "__main__":
    main()
