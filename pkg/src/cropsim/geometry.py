"""Axis-aligned rectangles in normalized [0, 1] image coordinates.

All geometry is scale-free: boxes and crops are stored as fractions of
image width/height, so the same math serves any pixel resolution.
Overlap is measured continuously; rects that merely share an edge have
zero-measure intersection and count as disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np


class EmptyActivationError(ValueError):
    """Rectangular closure was requested for an empty set of cells."""


@dataclass(frozen=True)
class Rect:
    """Rectangle (x0, y0, x1, y1) with strictly positive area.

    Coordinates are normalized: 0 <= x0 < x1 <= 1 and 0 <= y0 < y1 <= 1.
    """

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (0.0 <= self.x0 < self.x1 <= 1.0):
            raise ValueError(f"invalid x interval [{self.x0}, {self.x1}]")
        if not (0.0 <= self.y0 < self.y1 <= 1.0):
            raise ValueError(f"invalid y interval [{self.y0}, {self.y1}]")

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    def area(self) -> float:
        return self.width * self.height

    def center(self) -> Tuple[float, float]:
        return (self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.x0, self.y0, self.x1, self.y1)


UNIT_RECT = Rect(0.0, 0.0, 1.0, 1.0)


@dataclass(frozen=True)
class GridIndexBox:
    """Half-open block of grid cells: rows [row0, row1), cols [col0, col1)."""

    row0: int
    col0: int
    row1: int
    col1: int

    def __post_init__(self):
        if not (0 <= self.row0 < self.row1 and 0 <= self.col0 < self.col1):
            raise ValueError(f"invalid grid box {self}")


def intersection_area(a: Rect, b: Rect) -> float:
    """Area of the overlap of two rects; 0.0 when disjoint or edge-touching."""
    ox = min(a.x1, b.x1) - max(a.x0, b.x0)
    oy = min(a.y1, b.y1) - max(a.y0, b.y0)
    if ox <= 0.0 or oy <= 0.0:
        return 0.0
    return ox * oy


def iou(a: Rect, b: Rect) -> float:
    """Intersection over union. Equals 1.0 exactly for identical rects."""
    inter = intersection_area(a, b)
    union = a.area() + b.area() - inter
    return inter / union


def rectangular_closure(active: Iterable[Tuple[int, int]], grid_rows: int, grid_cols: int) -> GridIndexBox:
    """Smallest cell-aligned box containing every active (row, col) cell.

    Raises EmptyActivationError when no cells are given.
    """
    if grid_rows < 1 or grid_cols < 1:
        raise ValueError("grid must be at least 1x1")
    cells = list(active)
    if not cells:
        raise EmptyActivationError("no active cells to enclose")
    rows = [c[0] for c in cells]
    cols = [c[1] for c in cells]
    if min(rows) < 0 or max(rows) >= grid_rows or min(cols) < 0 or max(cols) >= grid_cols:
        raise ValueError("active cell outside the grid")
    return GridIndexBox(min(rows), min(cols), max(rows) + 1, max(cols) + 1)


def grid_box_to_rect(box: GridIndexBox, grid_rows: int, grid_cols: int) -> Rect:
    """Map a cell-index box to normalized coordinates using full cell extents.

    Cell (i, j) occupies [j/cols, (j+1)/cols) x [i/rows, (i+1)/rows), so the
    returned rect covers the complete area of every included cell.
    """
    if box.row1 > grid_rows or box.col1 > grid_cols:
        raise ValueError("grid box exceeds grid dimensions")
    return Rect(
        box.col0 / grid_cols,
        box.row0 / grid_rows,
        box.col1 / grid_cols,
        box.row1 / grid_rows,
    )


# Vectorized twins used by the simulation harness. Boxes are float arrays of
# shape (..., 4) in the same (x0, y0, x1, y1) layout; broadcasting applies.

def boxes_area(boxes: np.ndarray) -> np.ndarray:
    boxes = np.asarray(boxes, dtype=np.float64)
    return (boxes[..., 2] - boxes[..., 0]) * (boxes[..., 3] - boxes[..., 1])


def boxes_intersection_area(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    ox = np.minimum(a[..., 2], b[..., 2]) - np.maximum(a[..., 0], b[..., 0])
    oy = np.minimum(a[..., 3], b[..., 3]) - np.maximum(a[..., 1], b[..., 1])
    return np.maximum(ox, 0.0) * np.maximum(oy, 0.0)


def boxes_iou(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    inter = boxes_intersection_area(a, b)
    union = boxes_area(a) + boxes_area(b) - inter
    return inter / union
