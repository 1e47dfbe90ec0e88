"""Command-line front end.

Subcommands: sample, localize, simulate, sweep, schedule. Exit codes:
0 success, 2 bad input or configuration, 3 internal invariant violation.
Output goes to stdout unless --out is given. --threads only affects how
work is scheduled, never the results.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, CropConfig, config_from_mapping, load_config
from .geometry import Rect
from .heatmap import load_heatmap, localize
from .metrics import PairStats
from .rng import SAMPLE_STREAM, rng_stream
from .sampling import contrastive_crop, random_crop
from .schedule import TrainPlan, update_epochs
from .simulate import load_scenes, scheduled_stats_per_scene
from .sweeps import rows_to_csv, sweep

SIMULATE_COLUMNS = (
    "scene",
    "n_pairs",
    "fp_strict",
    "fp_tau",
    "mean_iou",
    "se_iou",
    "mean_cov",
    "se_cov",
    "seed",
)


def _common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    sub.add_argument("--config", default=None, help="key=value config file")
    sub.add_argument("--out", default=None, help="output file (default stdout)")
    sub.add_argument("--threads", type=int, default=1,
                     help="worker threads; affects speed only, never results")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cropsim", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("sample", help="emit crops for a fixed guide box as CSV")
    _common_flags(p)
    p.add_argument("--n", type=int, default=1, help="number of crops")
    p.add_argument("--box", default="0,0,1,1", help="guide box as x0,y0,x1,y1")
    p.add_argument("--sampler", choices=["random", "contrastive"], default="contrastive")

    p = subs.add_parser("localize", help="threshold a heatmap file into a box")
    _common_flags(p)
    p.add_argument("heatmap", help="heatmap text file ('rows cols' header + grid lines)")
    p.add_argument("--k", type=float, default=None, help="threshold override")

    p = subs.add_parser("simulate", help="scheduled run over a scene file, per-scene stats CSV")
    _common_flags(p)
    p.add_argument("--scenes", required=True, help="scene file")
    p.add_argument("--epochs", type=int, default=None, help="override total_epochs")
    p.add_argument("--freq", type=float, default=None, help="override update_freq")
    p.add_argument("--pairs-per-epoch", type=int, default=10, help="pairs per scene per epoch")
    p.add_argument("--tau", type=float, default=0.05, help="coverage threshold for fp_tau")

    p = subs.add_parser("sweep", help="ablation sweep over k, alpha, or freq")
    _common_flags(p)
    p.add_argument("--axis", required=True, choices=["k", "alpha", "freq"])
    p.add_argument("--grid", required=True, help="comma-separated grid values")
    p.add_argument("--scenes", required=True, help="scene file")
    p.add_argument("--n-pairs", type=int, default=10000, help="pairs per scene per evaluation")
    p.add_argument("--epochs", type=int, default=None, help="override total_epochs (freq axis)")
    p.add_argument("--tau", type=float, default=0.05, help="coverage threshold for fp_tau")

    p = subs.add_parser("schedule", help="print the update epochs for a training plan")
    _common_flags(p)
    p.add_argument("--epochs", type=int, default=None, help="override total_epochs")
    p.add_argument("--freq", type=float, default=None, help="override update_freq")

    return parser


def _load_cfg_plan(args) -> tuple:
    if args.config is not None:
        cfg, plan = load_config(args.config)
    else:
        cfg, plan = config_from_mapping({})
    if getattr(args, "epochs", None) is not None:
        plan = TrainPlan(total_epochs=args.epochs, update_freq=plan.update_freq)
    if getattr(args, "freq", None) is not None:
        plan = TrainPlan(total_epochs=plan.total_epochs, update_freq=args.freq)
        cfg = CropConfig(
            scale_min=cfg.scale_min, scale_max=cfg.scale_max,
            ratio_min=cfg.ratio_min, ratio_max=cfg.ratio_max,
            k=cfg.k, alpha=cfg.alpha, update_freq=args.freq,
        )
    return cfg, plan


def _parse_box(text: str) -> Rect:
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError(f"--box expects x0,y0,x1,y1, got {text!r}")
    try:
        coords = [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"--box has a non-numeric coordinate: {text!r}") from None
    try:
        return Rect(*coords)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _fmt9(x: float) -> str:
    return f"{x:.9g}"


def _stats_csv_line(scene_id: str, st: PairStats, seed: int) -> str:
    return ",".join(
        [
            scene_id,
            str(st.n_pairs),
            _fmt9(st.fp_rate_strict),
            _fmt9(st.fp_rate_thresholded),
            _fmt9(st.mean_pair_iou),
            _fmt9(st.se_iou),
            _fmt9(st.mean_object_coverage),
            _fmt9(st.se_cov),
            str(seed),
        ]
    )


def _cmd_sample(args) -> str:
    cfg, _ = _load_cfg_plan(args)
    if args.n < 1:
        raise ConfigError("--n must be >= 1")
    box = _parse_box(args.box)
    rng = rng_stream(args.seed, SAMPLE_STREAM)
    lines = ["crop_index,x0,y0,x1,y1"]
    for i in range(args.n):
        if args.sampler == "random":
            rect = random_crop(rng, cfg)
        else:
            rect = contrastive_crop(rng, cfg, box)
        lines.append(f"{i},{rect.x0!r},{rect.y0!r},{rect.x1!r},{rect.y1!r}")
    return "\n".join(lines) + "\n"


def _cmd_localize(args) -> str:
    cfg, _ = _load_cfg_plan(args)
    k = cfg.k if args.k is None else args.k
    m = load_heatmap(args.heatmap)
    box = localize(m, k)
    return f"{box.x0!r} {box.y0!r} {box.x1!r} {box.y1!r}\n"


def _cmd_simulate(args) -> str:
    cfg, plan = _load_cfg_plan(args)
    scenes = load_scenes(args.scenes)
    if args.pairs_per_epoch < 1:
        raise ConfigError("--pairs-per-epoch must be >= 1")
    per_scene = scheduled_stats_per_scene(
        args.seed, cfg, plan, scenes, args.pairs_per_epoch, args.tau, args.threads
    )
    lines = [",".join(SIMULATE_COLUMNS)]
    for scene in scenes:
        lines.append(_stats_csv_line(scene.scene_id, per_scene[scene.scene_id], args.seed))
    return "\n".join(lines) + "\n"


def _cmd_sweep(args) -> str:
    cfg, plan = _load_cfg_plan(args)
    scenes = load_scenes(args.scenes)
    try:
        grid = [float(v) for v in args.grid.split(",") if v.strip() != ""]
    except ValueError:
        raise ConfigError(f"--grid has a non-numeric value: {args.grid!r}") from None
    rows = sweep(args.axis, grid, cfg, plan, scenes, args.seed, args.n_pairs,
                 args.tau, args.threads)
    return rows_to_csv(rows)


def _cmd_schedule(args) -> str:
    _, plan = _load_cfg_plan(args)
    return " ".join(str(e) for e in update_epochs(plan)) + "\n"


_COMMANDS = {
    "sample": _cmd_sample,
    "localize": _cmd_localize,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "schedule": _cmd_schedule,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        text = _COMMANDS[args.command](args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal invariant violation
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def entry() -> None:
    sys.exit(main())
