"""Deterministic random streams keyed by (master_seed, stream_id).

Every stochastic component owns its own stream so that trials can be
re-run, reordered, or distributed across workers without perturbing one
another. Streams are derived with numpy's SeedSequence, which gives
platform-independent output for a fixed numpy version.
"""

from __future__ import annotations

import numpy as np

# Per-purpose channel tags packed into stream ids.
CH_HEAT = 0      # synthetic heatmap noise
CH_CROPS = 1     # crop sampling
CH_SCENES = 2    # random scene generation

# Stream used by the CLI 'sample' subcommand and by external adapters that
# must reproduce its output draw-for-draw.
SAMPLE_STREAM = 0

_BLOCK_BITS = 20
_CHANNEL_BITS = 3


def rng_stream(master_seed: int, stream_id: int) -> np.random.Generator:
    """Independent generator for one (master_seed, stream_id) pair."""
    if master_seed < 0 or stream_id < 0:
        raise ValueError("master_seed and stream_id must be non-negative")
    seq = np.random.SeedSequence((int(master_seed), int(stream_id)))
    return np.random.Generator(np.random.PCG64(seq))


def stream_id(scene_index: int, channel: int, block: int = 0) -> int:
    """Pack (scene, channel, block) into a single stream id."""
    if scene_index < 0:
        raise ValueError("scene_index must be non-negative")
    if not 0 <= channel < (1 << _CHANNEL_BITS):
        raise ValueError(f"channel must be in [0, {1 << _CHANNEL_BITS})")
    if not 0 <= block < (1 << _BLOCK_BITS):
        raise ValueError(f"block must be in [0, {1 << _BLOCK_BITS})")
    return ((scene_index << _CHANNEL_BITS) | channel) << _BLOCK_BITS | block
