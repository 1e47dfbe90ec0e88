#!/usr/bin/env python3
"""Generate a corpus of random synthetic scenes for the harness."""

import argparse

from cropsim import make_scenes, save_scenes


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--noise", type=float, default=0.3, help="heatmap noise level")
    ap.add_argument("--out", required=True, help="scene file to write")
    args = ap.parse_args()
    scenes = make_scenes(args.seed, args.count, noise_level=args.noise)
    save_scenes(scenes, args.out)
    print(f"wrote {len(scenes)} scenes to {args.out}")


if __name__ == "__main__":
    main()
