"""Synthetic scenes with known object boxes, and the evaluation runs on them.

A scene is an object box on a heatmap grid plus two nuisance parameters:
uniform per-cell noise and a sharpness schedule that scales the object
signal as training progresses (weak early heatmaps, confident late ones).
Because the ground truth is exact, false-positive rates and coverage can
be measured without any labeling ambiguity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import CropConfig
from .geometry import Rect
from .heatmap import Heatmap, localize, normalize
from .metrics import PairAccumulator, PairStats
from .rng import CH_CROPS, CH_HEAT, CH_SCENES, rng_stream, stream_id
from .sampling import contrastive_crop_batch, random_crop_batch
from .schedule import BoxStore, SamplerKind, TrainPlan, sampler_for_epoch, update_epochs

# Pairs per work block; fixed so that results never depend on thread count.
BLOCK_PAIRS = 32768

ARM_RANDOM = "random"
ARM_LOCALIZED = "localized"
ARM_CONTRASTIVE = "contrastive"
ARMS = (ARM_RANDOM, ARM_LOCALIZED, ARM_CONTRASTIVE)


class SceneFormatError(ValueError):
    """Malformed scene file."""


@dataclass(frozen=True)
class SceneSpec:
    """One synthetic scene: ground-truth box plus heatmap nuisances."""

    scene_id: str
    object_box: Rect
    heatmap_rows: int
    heatmap_cols: int
    noise_level: float = 0.0
    sharpness_schedule: Tuple[Tuple[float, float], ...] = ((0.0, 1.0), (1.0, 1.0))

    def __post_init__(self):
        if not self.scene_id or any(ch.isspace() for ch in self.scene_id):
            raise ValueError(f"scene id must be non-empty without whitespace, got {self.scene_id!r}")
        if self.heatmap_rows < 2 or self.heatmap_cols < 2:
            raise ValueError("heatmap grid must be at least 2x2")
        if not self.noise_level >= 0.0:
            raise ValueError(f"noise_level must be >= 0, got {self.noise_level}")
        pts = self.sharpness_schedule
        if len(pts) < 1:
            raise ValueError("sharpness_schedule needs at least one breakpoint")
        for t, v in pts:
            if not 0.0 <= t <= 1.0:
                raise ValueError(f"schedule progress {t} outside [0, 1]")
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"schedule sharpness {v} must be finite and >= 0")
        ts = [t for t, _ in pts]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("schedule breakpoints must have strictly increasing progress")

    def sharpness_at(self, progress: float) -> float:
        """Piecewise-linear schedule value, clamped at the end breakpoints."""
        if not 0.0 <= progress <= 1.0:
            raise ValueError(f"progress {progress} outside [0, 1]")
        ts = [t for t, _ in self.sharpness_schedule]
        vs = [v for _, v in self.sharpness_schedule]
        return float(np.interp(progress, ts, vs))


def synth_heatmap(rng, scene: SceneSpec, progress: float) -> Heatmap:
    """Normalized synthetic activation map at a point in training.

    Cells whose area overlaps the object box carry the sharpness-scaled
    object signal; every cell additionally receives independent uniform
    noise in [0, noise_level]. Noise variates are drawn even when
    noise_level is 0 so the stream position does not depend on the scene.
    """
    c = scene.sharpness_at(progress)
    rows, cols = scene.heatmap_rows, scene.heatmap_cols
    b = scene.object_box
    row_edges = np.arange(rows + 1) / rows
    col_edges = np.arange(cols + 1) / cols
    row_overlap = np.minimum(row_edges[1:], b.y1) - np.maximum(row_edges[:-1], b.y0)
    col_overlap = np.minimum(col_edges[1:], b.x1) - np.maximum(col_edges[:-1], b.x0)
    indicator = np.outer(row_overlap > 0.0, col_overlap > 0.0).astype(np.float64)
    noise = rng.uniform(0.0, scene.noise_level, size=(rows, cols))
    return normalize(Heatmap(c * indicator + noise))


# Scene file grammar (also documented in the README):
#   scene <id>
#   object <x0> <y0> <x1> <y1>
#   grid <rows> <cols>
#   noise <level>                      (optional, default 0)
#   sharpness <t>:<v> [<t>:<v> ...]    (optional, default 0:1 1:1)
# '#' starts a comment; blank lines are ignored; a record runs until the
# next 'scene' line or end of file.

def parse_scenes(text: str) -> List[SceneSpec]:
    records: List[SceneSpec] = []
    cur: Optional[dict] = None
    seen_ids = set()

    def flush():
        if cur is None:
            return
        for req in ("object", "grid"):
            if req not in cur:
                raise SceneFormatError(f"scene {cur['scene_id']!r} is missing the {req!r} field")
        try:
            spec = SceneSpec(
                scene_id=cur["scene_id"],
                object_box=cur["object"],
                heatmap_rows=cur["grid"][0],
                heatmap_cols=cur["grid"][1],
                noise_level=cur.get("noise", 0.0),
                sharpness_schedule=cur.get("sharpness", ((0.0, 1.0), (1.0, 1.0))),
            )
        except ValueError as exc:
            raise SceneFormatError(f"scene {cur['scene_id']!r}: {exc}") from None
        records.append(spec)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw, args = parts[0], parts[1:]
        if kw == "scene":
            if len(args) != 1:
                raise SceneFormatError(f"line {lineno}: expected 'scene <id>'")
            flush()
            if args[0] in seen_ids:
                raise SceneFormatError(f"line {lineno}: duplicate scene id {args[0]!r}")
            seen_ids.add(args[0])
            cur = {"scene_id": args[0]}
            continue
        if cur is None:
            raise SceneFormatError(f"line {lineno}: field {kw!r} before any 'scene' line")
        if kw in cur:
            raise SceneFormatError(f"line {lineno}: duplicate field {kw!r}")
        try:
            if kw == "object":
                if len(args) != 4:
                    raise ValueError("expected 4 coordinates")
                cur["object"] = Rect(*[float(a) for a in args])
            elif kw == "grid":
                if len(args) != 2:
                    raise ValueError("expected 2 integers")
                cur["grid"] = (int(args[0]), int(args[1]))
            elif kw == "noise":
                if len(args) != 1:
                    raise ValueError("expected 1 value")
                cur["noise"] = float(args[0])
            elif kw == "sharpness":
                if not args:
                    raise ValueError("expected at least one t:v breakpoint")
                pts = []
                for a in args:
                    t_s, sep, v_s = a.partition(":")
                    if not sep:
                        raise ValueError(f"breakpoint {a!r} is not t:v")
                    pts.append((float(t_s), float(v_s)))
                cur["sharpness"] = tuple(pts)
            else:
                raise ValueError(f"unknown field {kw!r}")
        except SceneFormatError:
            raise
        except ValueError as exc:
            raise SceneFormatError(f"line {lineno}: {exc}") from None
    flush()
    if not records:
        raise SceneFormatError("no scenes in file")
    return records


def scenes_to_text(scenes: Sequence[SceneSpec]) -> str:
    lines = []
    for sc in scenes:
        b = sc.object_box
        lines.append(f"scene {sc.scene_id}")
        lines.append(f"object {b.x0!r} {b.y0!r} {b.x1!r} {b.y1!r}")
        lines.append(f"grid {sc.heatmap_rows} {sc.heatmap_cols}")
        lines.append(f"noise {sc.noise_level!r}")
        lines.append("sharpness " + " ".join(f"{t!r}:{v!r}" for t, v in sc.sharpness_schedule))
    return "\n".join(lines) + "\n"


def load_scenes(path) -> List[SceneSpec]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenes(fh.read())


def save_scenes(scenes: Sequence[SceneSpec], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(scenes_to_text(scenes))


def random_scene(
    rng,
    scene_id: str,
    area_range: Tuple[float, float] = (0.05, 0.3),
    grid: Tuple[int, int] = (8, 8),
    noise_level: float = 0.3,
    sharpness_schedule: Tuple[Tuple[float, float], ...] = ((0.0, 0.2), (1.0, 3.0)),
) -> SceneSpec:
    """Scene with a uniformly placed object box of uniform area fraction.

    The box aspect ratio is log-uniform on [3/4, 4/3], mirroring the crop
    sampler's own range.
    """
    lo, hi = area_range
    if not 0.0 < lo <= hi <= 1.0:
        raise ValueError(f"area_range must satisfy 0 < lo <= hi <= 1, got {area_range}")
    a = float(rng.uniform(lo, hi))
    q = float(np.exp(rng.uniform(math.log(0.75), math.log(4.0 / 3.0))))
    h = min(1.0, math.sqrt(a * q))
    w = min(1.0, math.sqrt(a / q))
    cx = float(rng.uniform(w / 2.0, 1.0 - w / 2.0))
    cy = float(rng.uniform(h / 2.0, 1.0 - h / 2.0))
    x0 = min(max(cx - w / 2.0, 0.0), 1.0 - w)
    y0 = min(max(cy - h / 2.0, 0.0), 1.0 - h)
    box = Rect(x0, y0, min(x0 + w, 1.0), min(y0 + h, 1.0))
    return SceneSpec(scene_id, box, grid[0], grid[1], noise_level, sharpness_schedule)


def make_scenes(master_seed: int, n: int, **kwargs) -> List[SceneSpec]:
    """n random scenes drawn from one dedicated stream."""
    rng = rng_stream(master_seed, stream_id(0, CH_SCENES))
    return [random_scene(rng, f"scene{i}", **kwargs) for i in range(n)]


@dataclass(frozen=True)
class PairSample:
    """Two crops drawn for the same scene at one epoch."""

    scene_id: str
    epoch: int
    sampler_kind: SamplerKind
    crop_a: Rect
    crop_b: Rect


def _check_unique_ids(scenes: Sequence[SceneSpec]) -> None:
    ids = [sc.scene_id for sc in scenes]
    if len(set(ids)) != len(ids):
        raise ValueError("scene ids must be unique")


def _rect_rows(boxes: np.ndarray, start: int, count: int) -> List[Rect]:
    return [Rect(*map(float, boxes[i])) for i in range(start, start + count)]


def _scene_pairs(
    master_seed: int,
    plan: TrainPlan,
    cfg: CropConfig,
    scene: SceneSpec,
    scene_index: int,
    pairs_per_epoch: int,
) -> Iterator[PairSample]:
    """Scheduled pair stream for one scene.

    The scene's streams are keyed by its index in the experiment, so the
    same scene list yields the same pairs whether scenes are consumed
    interleaved (run_experiment) or independently (worker per scene).
    """
    ups = set(update_epochs(plan))
    store = BoxStore()
    heat_rng = rng_stream(master_seed, stream_id(scene_index, CH_HEAT))
    crop_rng = rng_stream(master_seed, stream_id(scene_index, CH_CROPS))
    p = pairs_per_epoch
    for epoch in range(plan.total_epochs):
        if epoch in ups:
            m = synth_heatmap(heat_rng, scene, epoch / plan.total_epochs)
            store.refresh(scene.scene_id, m, cfg.k)
        kind = sampler_for_epoch(plan, epoch)
        if kind is SamplerKind.RANDOM:
            boxes = random_crop_batch(crop_rng, cfg, 2 * p)
        else:
            boxes = contrastive_crop_batch(crop_rng, cfg, store.get(scene.scene_id), 2 * p)
        first = _rect_rows(boxes, 0, p)
        second = _rect_rows(boxes, p, p)
        for a, b in zip(first, second):
            yield PairSample(scene.scene_id, epoch, kind, a, b)


def run_experiment(
    master_seed: int,
    plan: TrainPlan,
    cfg: CropConfig,
    scenes: Sequence[SceneSpec],
    pairs_per_scene_per_epoch: int = 1,
) -> Iterator[PairSample]:
    """Scheduled end-to-end run over all scenes.

    Per epoch: refresh every scene's stored box if the epoch is an update
    epoch (heatmap synthesized at progress = epoch / total_epochs), then
    emit pairs with whichever sampler the schedule selects. Before the
    first refresh all boxes are the whole image and the baseline sampler
    runs, so early training is exactly the uniform baseline.
    """
    if pairs_per_scene_per_epoch < 1:
        raise ValueError("pairs_per_scene_per_epoch must be >= 1")
    _check_unique_ids(scenes)
    gens = [
        _scene_pairs(master_seed, plan, cfg, scene, i, pairs_per_scene_per_epoch)
        for i, scene in enumerate(scenes)
    ]
    for _ in range(plan.total_epochs):
        for gen in gens:
            for _ in range(pairs_per_scene_per_epoch):
                yield next(gen)


def _pair_blocks(n_pairs: int) -> List[Tuple[int, int]]:
    """(block_index, pairs_in_block) partition, independent of threading."""
    blocks = []
    done = 0
    idx = 0
    while done < n_pairs:
        take = min(BLOCK_PAIRS, n_pairs - done)
        blocks.append((idx, take))
        done += take
        idx += 1
    return blocks


def _run_tasks(tasks, fn, threads: int):
    """Apply fn over tasks, preserving task order in the results."""
    if threads <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, tasks))


def compare_samplers(
    master_seed: int,
    cfg: CropConfig,
    scenes: Sequence[SceneSpec],
    n_pairs: int,
    tau: float = 0.05,
    threads: int = 1,
    boxes: Optional[Sequence[Rect]] = None,
) -> Dict[str, PairStats]:
    """Three-arm evaluation with n_pairs pairs per scene per arm.

    Arms: the uniform baseline, the guided sampler with alpha forced to 1
    (localization only), and the guided sampler with cfg.alpha. Guide
    boxes default to each scene's ground-truth object box; pass `boxes`
    (one per scene, e.g. localized from heatmaps) to override. All arms
    restart the same per-(scene, block) stream, so they face identical
    randomness, and results are pooled over scenes per arm.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    _check_unique_ids(scenes)
    if boxes is not None and len(boxes) != len(scenes):
        raise ValueError("need exactly one guide box per scene")
    loc_cfg = replace(cfg, alpha=1.0)

    tasks = []
    for si, scene in enumerate(scenes):
        guide = scene.object_box if boxes is None else boxes[si]
        for arm in ARMS:
            for bi, bp in _pair_blocks(n_pairs):
                tasks.append((si, scene, guide, arm, bi, bp))

    def run(task):
        si, scene, guide, arm, bi, bp = task
        rng = rng_stream(master_seed, stream_id(si, CH_CROPS, bi))
        if arm == ARM_RANDOM:
            crops = random_crop_batch(rng, cfg, 2 * bp)
        elif arm == ARM_LOCALIZED:
            crops = contrastive_crop_batch(rng, loc_cfg, guide, 2 * bp)
        else:
            crops = contrastive_crop_batch(rng, cfg, guide, 2 * bp)
        acc = PairAccumulator(scene.object_box, tau)
        acc.add_batch(crops[:bp], crops[bp:])
        return arm, acc

    results = _run_tasks(tasks, run, threads)
    merged: Dict[str, PairAccumulator] = {}
    for arm, acc in results:
        if arm in merged:
            merged[arm].merge(acc)
        else:
            merged[arm] = acc
    return {arm: merged[arm].stats() for arm in ARMS}


def scheduled_stats(
    master_seed: int,
    cfg: CropConfig,
    plan: TrainPlan,
    scenes: Sequence[SceneSpec],
    pairs_per_scene_per_epoch: int,
    tau: float = 0.05,
    threads: int = 1,
) -> PairStats:
    """Pooled metrics for one scheduled run (localized boxes, warm-up, all)."""
    _check_unique_ids(scenes)

    def run(task):
        si, scene = task
        acc = PairAccumulator(scene.object_box, tau)
        for pair in _scene_pairs(master_seed, plan, cfg, scene, si, pairs_per_scene_per_epoch):
            acc.add(pair.crop_a, pair.crop_b)
        return acc

    accs = _run_tasks(list(enumerate(scenes)), run, threads)
    total = accs[0]
    for acc in accs[1:]:
        total.merge(acc)
    return total.stats()


def scheduled_stats_per_scene(
    master_seed: int,
    cfg: CropConfig,
    plan: TrainPlan,
    scenes: Sequence[SceneSpec],
    pairs_per_scene_per_epoch: int,
    tau: float = 0.05,
    threads: int = 1,
) -> Dict[str, PairStats]:
    """Per-scene metrics for one scheduled run, keyed by scene id."""
    _check_unique_ids(scenes)

    def run(task):
        si, scene = task
        acc = PairAccumulator(scene.object_box, tau)
        for pair in _scene_pairs(master_seed, plan, cfg, scene, si, pairs_per_scene_per_epoch):
            acc.add(pair.crop_a, pair.crop_b)
        return scene.scene_id, acc.stats()

    return dict(_run_tasks(list(enumerate(scenes)), run, threads))
