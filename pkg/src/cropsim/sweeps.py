"""Ablation sweeps over k, alpha, and update frequency, with CSV output.

Each sweep holds every knob but one fixed and reuses identical random
streams across grid values, so rows are paired and differences between
them are attributable to the swept knob alone.

Axis semantics:
  k     - localization threshold. Guide boxes are re-derived per value by
          localizing each scene's synthetic end-of-training heatmap, then
          the three-arm comparison runs against those boxes.
  alpha - beta concentration. Three-arm comparison with ground-truth
          guide boxes; only the guided arm responds to the value.
  freq  - refresh cadence. One full scheduled run per value (warm-up,
          refreshes, hard sampler switch), reported as a single arm
          labelled 'scheduled'; freq 0 is the pure baseline run.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Sequence

from .config import ConfigError, CropConfig, InvalidAlphaError
from .geometry import Rect
from .heatmap import localize
from .metrics import PairStats
from .rng import CH_HEAT, rng_stream, stream_id
from .schedule import TrainPlan
from .simulate import SceneSpec, compare_samplers, scheduled_stats, synth_heatmap

SWEEP_AXES = ("k", "alpha", "freq")

ARM_SCHEDULED = "scheduled"

CSV_COLUMNS = (
    "axis_name",
    "axis_value",
    "arm",
    "n_pairs",
    "fp_strict",
    "fp_tau",
    "mean_iou",
    "se_iou",
    "mean_cov",
    "se_cov",
    "seed",
)


@dataclass(frozen=True)
class SweepRow:
    axis_name: str
    axis_value: float
    arm: str
    stats: PairStats
    seed: int


def validate_grid(axis: str, grid: Sequence[float]) -> None:
    """Reject bad axis names and out-of-range grid values up front."""
    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    if not grid:
        raise ConfigError("sweep grid must not be empty")
    if len(set(grid)) != len(grid):
        raise ConfigError("sweep grid values must be distinct")
    for v in grid:
        if axis == "alpha" and not v > 0.0:
            raise InvalidAlphaError(f"alpha grid value must be > 0, got {v}")
        if axis == "k" and not 0.0 <= v <= 1.0:
            raise ConfigError(f"k grid value must be in [0, 1], got {v}")
        if axis == "freq" and not 0.0 <= v <= 0.5:
            raise ConfigError(f"freq grid value must be in [0, 0.5], got {v}")


def localization_boxes(
    master_seed: int,
    scenes: Sequence[SceneSpec],
    k: float,
    progress: float = 1.0,
) -> List[Rect]:
    """Guide boxes from localized synthetic heatmaps, one per scene.

    Heatmap noise comes from each scene's dedicated stream, restarted on
    every call, so boxes for different k are derived from identical maps.
    """
    out = []
    for i, scene in enumerate(scenes):
        rng = rng_stream(master_seed, stream_id(i, CH_HEAT))
        out.append(localize(synth_heatmap(rng, scene, progress), k))
    return out


def sweep(
    axis: str,
    grid: Sequence[float],
    base_cfg: CropConfig,
    plan: TrainPlan,
    scenes: Sequence[SceneSpec],
    master_seed: int,
    n_pairs: int,
    tau: float = 0.05,
    threads: int = 1,
) -> List[SweepRow]:
    """Run the ablation and return rows ordered by (grid position, arm).

    n_pairs is the per-scene pair budget for each evaluation; freq rows
    split it across epochs as max(1, round(n_pairs / total_epochs)) pairs
    per epoch.
    """
    validate_grid(axis, grid)
    rows: List[SweepRow] = []
    for value in grid:
        if axis == "freq":
            plan_v = replace(plan, update_freq=value)
            cfg_v = replace(base_cfg, update_freq=value)
            per_epoch = max(1, round(n_pairs / plan_v.total_epochs))
            stats = scheduled_stats(master_seed, cfg_v, plan_v, scenes, per_epoch, tau, threads)
            rows.append(SweepRow(axis, float(value), ARM_SCHEDULED, stats, master_seed))
            continue
        if axis == "k":
            cfg_v = replace(base_cfg, k=value)
            guide = localization_boxes(master_seed, scenes, value)
        else:
            cfg_v = replace(base_cfg, alpha=value)
            guide = None
        per_arm = compare_samplers(master_seed, cfg_v, scenes, n_pairs, tau, threads, boxes=guide)
        for arm, stats in per_arm.items():
            rows.append(SweepRow(axis, float(value), arm, stats, master_seed))
    return rows


def _fmt(x: float) -> str:
    """Decimal with at most 9 significant digits."""
    return f"{x:.9g}"


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    """Canonical sweep CSV: fixed column order, LF line endings."""
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        st = row.stats
        lines.append(
            ",".join(
                [
                    row.axis_name,
                    _fmt(row.axis_value),
                    row.arm,
                    str(st.n_pairs),
                    _fmt(st.fp_rate_strict),
                    _fmt(st.fp_rate_thresholded),
                    _fmt(st.mean_pair_iou),
                    _fmt(st.se_iou),
                    _fmt(st.mean_object_coverage),
                    _fmt(st.se_cov),
                    str(row.seed),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def parse_sweep_csv(text: str) -> List[SweepRow]:
    """Inverse of rows_to_csv, for round-trip checks and downstream tools."""
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or lines[0] != ",".join(CSV_COLUMNS):
        raise ValueError("missing or wrong CSV header")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != len(CSV_COLUMNS):
            raise ValueError(f"expected {len(CSV_COLUMNS)} columns, got {len(parts)}")
        stats = PairStats(
            n_pairs=int(parts[3]),
            fp_rate_strict=float(parts[4]),
            fp_rate_thresholded=float(parts[5]),
            mean_pair_iou=float(parts[6]),
            mean_object_coverage=float(parts[8]),
            se_iou=float(parts[7]),
            se_cov=float(parts[9]),
        )
        rows.append(SweepRow(parts[0], float(parts[1]), parts[2], stats, int(parts[10])))
    return rows


def write_sweep_csv(rows: Sequence[SweepRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(rows_to_csv(rows))
