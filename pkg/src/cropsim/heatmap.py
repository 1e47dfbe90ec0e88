"""Activation heatmaps and box localization.

A heatmap is a non-negative 2-D grid (e.g. channel-summed backbone
features). Localization thresholds the normalized map and returns the
rectangular closure of the surviving cells in normalized coordinates,
falling back to the whole image when nothing clears the threshold.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .geometry import UNIT_RECT, Rect, grid_box_to_rect, rectangular_closure


class ShapeMismatchError(ValueError):
    """Channel grids passed to reduce_features disagree in shape."""


class EmptyStackError(ValueError):
    """reduce_features was called with no channels."""


class Heatmap:
    """Grid of finite, non-negative activation values.

    The degenerate flag marks maps produced by normalizing a constant
    input, where min-max scaling carries no information.
    """

    __slots__ = ("values", "degenerate")

    def __init__(self, values, degenerate: bool = False):
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"heatmap must be a non-empty 2-D grid, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("heatmap values must be finite")
        if np.any(arr < 0.0):
            raise ValueError("heatmap values must be non-negative")
        self.values = arr
        self.degenerate = bool(degenerate)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


def reduce_features(channels: Sequence) -> Heatmap:
    """Collapse a stack of same-shaped channel grids by elementwise sum."""
    grids = [np.asarray(c, dtype=np.float64) for c in channels]
    if not grids:
        raise EmptyStackError("no channels to reduce")
    shape = grids[0].shape
    for g in grids[1:]:
        if g.shape != shape:
            raise ShapeMismatchError(f"channel shapes differ: {g.shape} vs {shape}")
    return Heatmap(sum(grids))


def normalize(m: Heatmap) -> Heatmap:
    """Min-max rescale to [0, 1]; a constant map becomes all zeros, flagged."""
    lo = float(m.values.min())
    hi = float(m.values.max())
    if hi == lo:
        return Heatmap(np.zeros_like(m.values), degenerate=True)
    return Heatmap((m.values - lo) / (hi - lo))


def localize(m: Heatmap, k: float) -> Rect:
    """Bounding box of cells strictly above threshold k, in normalized coords.

    Expects a normalized map. Cells must exceed k (not merely reach it), so
    k = 1 never activates anything. When no cell clears the threshold the
    whole image is returned, keeping downstream samplers well-defined.
    """
    if not 0.0 <= k <= 1.0:
        raise ValueError(f"threshold k must be in [0, 1], got {k}")
    active = np.argwhere(m.values > k)
    if active.size == 0:
        return UNIT_RECT
    box = rectangular_closure([(int(r), int(c)) for r, c in active], m.rows, m.cols)
    return grid_box_to_rect(box, m.rows, m.cols)


def heatmap_to_text(m: Heatmap) -> str:
    """Serialize as 'rows cols' header plus one line of decimals per row."""
    lines = [f"{m.rows} {m.cols}"]
    for row in m.values:
        lines.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def heatmap_from_text(text: str) -> Heatmap:
    """Parse the text format; rejects NaN and negative values."""
    lines = [
        ln
        for ln in (raw.strip() for raw in text.splitlines())
        if ln and not ln.startswith("#")
    ]
    if not lines:
        raise ValueError("empty heatmap text")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"expected 'rows cols' header, got {lines[0]!r}")
    try:
        rows, cols = int(header[0]), int(header[1])
    except ValueError:
        raise ValueError(f"non-integer grid size in header {lines[0]!r}") from None
    if rows < 1 or cols < 1:
        raise ValueError("grid size must be at least 1x1")
    if len(lines) != 1 + rows:
        raise ValueError(f"expected {rows} grid lines, got {len(lines) - 1}")
    grid = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != cols:
            raise ValueError(f"line {lineno}: expected {cols} values, got {len(parts)}")
        try:
            row = [float(p) for p in parts]
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric value") from None
        grid.append(row)
    arr = np.array(grid, dtype=np.float64)
    if np.any(np.isnan(arr)):
        raise ValueError("heatmap contains NaN")
    if np.any(arr < 0.0):
        raise ValueError("heatmap contains negative values")
    if not np.all(np.isfinite(arr)):
        raise ValueError("heatmap contains non-finite values")
    return Heatmap(arr)


def load_heatmap(path) -> Heatmap:
    with open(path, "r", encoding="utf-8") as fh:
        return heatmap_from_text(fh.read())


def save_heatmap(m: Heatmap, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(heatmap_to_text(m))
