"""Crop sampling with semantic guide boxes, plus a Monte-Carlo harness.

Two samplers produce axis-aligned crops in normalized [0, 1] coordinates:
a uniform resized-crop baseline, and a guided variant whose crop centers
are confined to a localization box and spread toward its borders by a
symmetric beta law. Heatmap localization, refresh scheduling, synthetic
scenes, and pair metrics make the behavioral claims measurable end to end.
"""

from .config import ConfigError, CropConfig, InvalidAlphaError, config_from_mapping, load_config
from .geometry import (
    EmptyActivationError,
    GridIndexBox,
    Rect,
    UNIT_RECT,
    grid_box_to_rect,
    intersection_area,
    iou,
    rectangular_closure,
)
from .heatmap import (
    EmptyStackError,
    Heatmap,
    ShapeMismatchError,
    heatmap_from_text,
    heatmap_to_text,
    load_heatmap,
    localize,
    normalize,
    reduce_features,
    save_heatmap,
)
from .metrics import EmptyStreamError, PairAccumulator, PairStats, aggregate
from .rng import rng_stream, stream_id
from .sampling import (
    beta_symmetric,
    contrastive_crop,
    contrastive_crop_batch,
    crop_dims,
    random_crop,
    random_crop_batch,
    sample_scale_ratio,
)
from .schedule import (
    BoxStore,
    SamplerKind,
    TrainPlan,
    first_update_epoch,
    sampler_for_epoch,
    update_epochs,
)
from .simulate import (
    PairSample,
    SceneFormatError,
    SceneSpec,
    compare_samplers,
    load_scenes,
    make_scenes,
    parse_scenes,
    random_scene,
    run_experiment,
    save_scenes,
    scenes_to_text,
    scheduled_stats,
    scheduled_stats_per_scene,
    synth_heatmap,
)
from .sweeps import SweepRow, localization_boxes, parse_sweep_csv, rows_to_csv, sweep, validate_grid, write_sweep_csv

__version__ = "0.1.0"

__all__ = [
    "BoxStore",
    "ConfigError",
    "CropConfig",
    "EmptyActivationError",
    "EmptyStackError",
    "EmptyStreamError",
    "GridIndexBox",
    "Heatmap",
    "InvalidAlphaError",
    "PairAccumulator",
    "PairSample",
    "PairStats",
    "Rect",
    "SamplerKind",
    "SceneFormatError",
    "SceneSpec",
    "ShapeMismatchError",
    "SweepRow",
    "TrainPlan",
    "UNIT_RECT",
    "aggregate",
    "beta_symmetric",
    "compare_samplers",
    "config_from_mapping",
    "contrastive_crop",
    "contrastive_crop_batch",
    "crop_dims",
    "first_update_epoch",
    "grid_box_to_rect",
    "heatmap_from_text",
    "heatmap_to_text",
    "intersection_area",
    "iou",
    "load_config",
    "load_heatmap",
    "load_scenes",
    "localization_boxes",
    "localize",
    "make_scenes",
    "normalize",
    "parse_scenes",
    "parse_sweep_csv",
    "random_crop",
    "random_crop_batch",
    "random_scene",
    "rectangular_closure",
    "reduce_features",
    "rng_stream",
    "rows_to_csv",
    "run_experiment",
    "sample_scale_ratio",
    "sampler_for_epoch",
    "save_heatmap",
    "save_scenes",
    "scenes_to_text",
    "scheduled_stats",
    "scheduled_stats_per_scene",
    "stream_id",
    "sweep",
    "synth_heatmap",
    "update_epochs",
    "validate_grid",
    "write_sweep_csv",
]
