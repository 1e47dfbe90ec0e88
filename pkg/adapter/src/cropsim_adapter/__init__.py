"""Per-image transform adapter over the cropsim samplers.

open() turns a config mapping into a live handle: the mapping is checked
by the very same rules as cropsim's config parser, so rejection behavior
matches the library exactly. crop() then acts like a dataloader
transform: one call, one integer pixel box. All pixel rounding lives
here (floor the origin, ceil the extent, clamp to the image) so the
core library stays in exact normalized coordinates; crop_rect() exposes
those untouched normalized rects for callers that do their own scaling.

A handle is single-caller. Workers sharing one handle would interleave
draws from its stream; give each worker its own handle instead.
"""

from __future__ import annotations

import math
from typing import Mapping, Tuple

from cropsim import BoxStore, Heatmap, Rect, config_from_mapping, contrastive_crop
from cropsim.rng import SAMPLE_STREAM, rng_stream

__version__ = "0.1.0"

__all__ = [
    "AdapterClosedError",
    "AdapterHandle",
    "close",
    "crop",
    "crop_rect",
    "open",
    "to_pixel_box",
]


class AdapterClosedError(RuntimeError):
    """Use of a handle after close(), including closing it twice."""


def to_pixel_box(rect: Rect, image_width: int, image_height: int) -> Tuple[int, int, int, int]:
    """Normalized rect to integer pixels as (left, top, height, width).

    Floor the origin, ceil the extent, then clamp the extent so the box
    never leaves the image. The extent is rounded as a length, not as a
    right edge, so a crop keeps every pixel it touches.
    """
    left = math.floor(rect.x0 * image_width)
    top = math.floor(rect.y0 * image_height)
    width = math.ceil((rect.x1 - rect.x0) * image_width)
    height = math.ceil((rect.y1 - rect.y0) * image_height)
    width = min(width, image_width - left)
    height = min(height, image_height - top)
    return left, top, height, width


def _as_heatmap(value) -> Heatmap:
    return value if isinstance(value, Heatmap) else Heatmap(value)


def _check_dimension(name: str, value) -> None:
    if not (isinstance(value, int) and value >= 1):
        raise ValueError(f"{name} must be an integer >= 1, got {value!r}")


class AdapterHandle:
    """A configured sampler stream plus per-sample guide boxes.

    Not constructed directly; use open(). The handle owns its own draw
    stream, so two handles opened with the same config and seed replay
    the same crops.
    """

    def __init__(self, cfg, seed: int):
        self._cfg = cfg
        self._store = BoxStore()
        self._rng = rng_stream(seed, SAMPLE_STREAM)
        self._closed = False

    def _check_open(self) -> None:
        if self._closed:
            raise AdapterClosedError("adapter handle is closed")

    @property
    def closed(self) -> bool:
        return self._closed

    @property
    def cfg(self):
        self._check_open()
        return self._cfg

    def crop_rect(self, sample_id, heatmap=None) -> Rect:
        """One guided crop in normalized coordinates.

        A heatmap argument refreshes the stored guide box for sample_id
        before drawing; without one the last stored box is reused, and a
        never-seen sample falls back to the whole image.
        """
        self._check_open()
        if heatmap is not None:
            self._store.refresh(sample_id, _as_heatmap(heatmap), self._cfg.k)
        return contrastive_crop(self._rng, self._cfg, self._store.get(sample_id))

    def crop(self, image_width: int, image_height: int, sample_id,
             heatmap=None) -> Tuple[int, int, int, int]:
        """One guided crop as integer pixels: (left, top, height, width)."""
        self._check_open()
        _check_dimension("image_width", image_width)
        _check_dimension("image_height", image_height)
        rect = self.crop_rect(sample_id, heatmap)
        return to_pixel_box(rect, image_width, image_height)

    def close(self) -> None:
        """Release the handle; any later call on it raises."""
        self._check_open()
        self._closed = True
        self._store = None
        self._rng = None


def open(config: Mapping, seed: int = 0) -> AdapterHandle:
    """Validate a config mapping into a live handle.

    Keys and values follow the cropsim config-file grammar; rejection
    (unknown keys, out-of-range values) is delegated to the library
    parser, so error types and messages match it exactly. The seed fixes
    the handle's draw stream, mirroring the library CLI's --seed.
    """
    cfg, _ = config_from_mapping(config)
    return AdapterHandle(cfg, seed)


def crop_rect(handle: AdapterHandle, sample_id, heatmap=None) -> Rect:
    return handle.crop_rect(sample_id, heatmap)


def crop(handle: AdapterHandle, image_width: int, image_height: int, sample_id,
         heatmap=None) -> Tuple[int, int, int, int]:
    return handle.crop(image_width, image_height, sample_id, heatmap)


def close(handle: AdapterHandle) -> None:
    handle.close()
