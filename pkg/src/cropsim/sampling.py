"""Crop samplers: a uniform baseline and a box-guided, border-biased variant.

Both samplers draw an area fraction s uniformly from [scale_min, scale_max]
and an aspect ratio r = height/width log-uniformly from [ratio_min,
ratio_max], then place a crop of height sqrt(s*r) and width sqrt(s/r).

random_crop centers the crop uniformly over every position where it fits
inside the unit square. contrastive_crop instead confines the center to a
guide box and spreads it with a symmetric Beta(alpha, alpha) law, which
for alpha < 1 pushes centers toward the edges of the admissible region.

Draw-order contract (relied on for reproducibility): batch samplers
consume the stream column-wise (all s, then all r, then the x-axis draw,
then the y-axis draw). Scalar samplers are batches of one, so a loop of
scalar calls interleaves the four draws per crop. Every code path draws
the same number of variates regardless of input values; there are no
rejection loops.
"""

from __future__ import annotations

import math
from typing import Tuple

import numpy as np

from .config import CropConfig, InvalidAlphaError
from .geometry import Rect


def beta_symmetric(rng, alpha: float) -> float:
    """One draw from Beta(alpha, alpha) on [0, 1].

    Mean is 1/2 and variance 1 / (4 * (2 * alpha + 1)) for every alpha;
    alpha = 1 is the uniform distribution, alpha < 1 is U-shaped.
    """
    if not alpha > 0.0:
        raise InvalidAlphaError(f"alpha must be > 0, got {alpha}")
    return float(rng.beta(alpha, alpha))


def sample_scale_ratio(rng, cfg: CropConfig) -> Tuple[float, float]:
    """Draw (s, r): uniform area fraction, log-uniform aspect ratio."""
    s = float(rng.uniform(cfg.scale_min, cfg.scale_max))
    r = float(np.exp(rng.uniform(math.log(cfg.ratio_min), math.log(cfg.ratio_max))))
    return s, r


def crop_dims(s: float, r: float) -> Tuple[float, float]:
    """Height and width of a crop with area s and aspect ratio h/w = r.

    h = sqrt(s * r) and w = sqrt(s / r), so h * w == s and h / w == r up
    to floating-point error. Values may exceed 1 for extreme (s, r);
    clamping is the caller's concern.
    """
    if not s > 0.0:
        raise ValueError(f"area fraction must be > 0, got {s}")
    if not r > 0.0:
        raise ValueError(f"aspect ratio must be > 0, got {r}")
    return math.sqrt(s * r), math.sqrt(s / r)


def _dims_clamped(s: np.ndarray, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized crop_dims with the oversize rule applied.

    When one dimension exceeds the unit square it is clamped to 1 and the
    other recomputed as s / 1, preserving the crop area at the cost of the
    exact aspect ratio. Both cannot exceed 1 at once since h * w = s <= 1.
    """
    h = np.sqrt(s * r)
    w = np.sqrt(s / r)
    over_h = h > 1.0
    over_w = w > 1.0
    w = np.where(over_h, s, w)
    h = np.where(over_h, 1.0, h)
    h = np.where(over_w, s, h)
    w = np.where(over_w, 1.0, w)
    return h, w


def _assemble(cx, cy, h, w) -> np.ndarray:
    """Boxes from centers and extents, nudged inside the unit square.

    Centers are already admissible up to floating-point rounding; the clip
    translates a spilling crop by the minimum amount needed to fit.
    """
    x0 = np.clip(cx - w / 2.0, 0.0, 1.0 - w)
    y0 = np.clip(cy - h / 2.0, 0.0, 1.0 - h)
    x1 = np.minimum(x0 + w, 1.0)
    y1 = np.minimum(y0 + h, 1.0)
    return np.stack([x0, y0, x1, y1], axis=-1)


def _scales_ratios(rng, cfg: CropConfig, n: int) -> Tuple[np.ndarray, np.ndarray]:
    s = rng.uniform(cfg.scale_min, cfg.scale_max, size=n)
    r = np.exp(rng.uniform(math.log(cfg.ratio_min), math.log(cfg.ratio_max), size=n))
    return s, r


def random_crop_batch(rng, cfg: CropConfig, n: int) -> np.ndarray:
    """n baseline crops as an (n, 4) array of (x0, y0, x1, y1) rows.

    The center is uniform over the region where the whole crop fits, so
    every crop lies inside the unit square by construction.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    s, r = _scales_ratios(rng, cfg, n)
    h, w = _dims_clamped(s, r)
    cx = rng.uniform(w / 2.0, 1.0 - w / 2.0, size=n)
    cy = rng.uniform(h / 2.0, 1.0 - h / 2.0, size=n)
    return _assemble(cx, cy, h, w)


def _beta_centers(rng, alpha: float, b_lo: float, b_hi: float, length: np.ndarray) -> np.ndarray:
    """Beta-distributed centers on one axis, confined to the guide interval.

    The admissible center interval for a crop of extent L is
    [L/2, 1 - L/2]. The beta draw spans the overlap of the guide interval
    [b_lo, b_hi] with the admissible interval, so the crop both stays on
    the guide box and fits the image. If the overlap is empty (guide box
    tucked entirely into a margin narrower than the crop) the center pins
    to the admissible point nearest the box, i.e. the crop sits flush
    against that image edge. The beta variate is drawn either way to keep
    the stream position independent of the geometry.
    """
    c_lo = length / 2.0
    c_hi = 1.0 - length / 2.0
    lo = np.maximum(b_lo, c_lo)
    hi = np.minimum(b_hi, c_hi)
    t = rng.beta(alpha, alpha, size=len(length))
    centers = lo + (hi - lo) * t
    pinned = np.where(b_hi < c_lo, c_lo, c_hi)
    return np.where(hi < lo, pinned, centers)


def contrastive_crop_batch(rng, cfg: CropConfig, box: Rect, n: int) -> np.ndarray:
    """n guided crops as an (n, 4) array; centers beta-spread over the box.

    With the unit square as guide box and alpha = 1 the center law
    degenerates to the uniform-over-admissible-region law of
    random_crop_batch. Any crop intersects the guide box with positive
    area: the center lands inside the box whenever the overlap of box and
    admissible region is non-empty, and in the pinned case the crop spans
    the full margin containing the box.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not cfg.alpha > 0.0:
        raise InvalidAlphaError(f"alpha must be > 0, got {cfg.alpha}")
    s, r = _scales_ratios(rng, cfg, n)
    h, w = _dims_clamped(s, r)
    cx = _beta_centers(rng, cfg.alpha, box.x0, box.x1, w)
    cy = _beta_centers(rng, cfg.alpha, box.y0, box.y1, h)
    return _assemble(cx, cy, h, w)


def _as_rect(row: np.ndarray) -> Rect:
    return Rect(float(row[0]), float(row[1]), float(row[2]), float(row[3]))


def random_crop(rng, cfg: CropConfig) -> Rect:
    """Single baseline crop (batch of one)."""
    return _as_rect(random_crop_batch(rng, cfg, 1)[0])


def contrastive_crop(rng, cfg: CropConfig, box: Rect) -> Rect:
    """Single guided crop (batch of one)."""
    return _as_rect(contrastive_crop_batch(rng, cfg, box, 1)[0])
