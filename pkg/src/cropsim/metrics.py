"""Streaming pair metrics: false-positive rates, pair overlap, object coverage.

A crop is a false positive when it misses the scene's object box: strictly
(zero intersection) or in thresholded form (object coverage below tau). A
pair counts as a false positive if at least one of its two crops misses.
Pair IoU measures how similar the two views of a positive pair are, and
object coverage how much of the object each single crop retains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Rect, boxes_intersection_area, boxes_iou


class EmptyStreamError(ValueError):
    """Statistics were requested for an empty pair stream."""


@dataclass(frozen=True)
class PairStats:
    """Aggregated metrics over a stream of crop pairs."""

    n_pairs: int
    fp_rate_strict: float
    fp_rate_thresholded: float
    mean_pair_iou: float
    mean_object_coverage: float
    se_iou: float
    se_cov: float

    def __post_init__(self):
        if self.n_pairs < 1:
            raise ValueError("n_pairs must be >= 1")
        for name in ("fp_rate_strict", "fp_rate_thresholded", "mean_pair_iou", "mean_object_coverage"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.se_iou < 0.0 or self.se_cov < 0.0:
            raise ValueError("standard errors must be non-negative")


class PairAccumulator:
    """Single-pass accumulator whose partial results merge associatively.

    Only counts and running sums are stored, so combining two accumulators
    is exact for the counts and within float-addition error for the means.
    Coverage is tracked per crop (two per pair), IoU per pair.
    """

    def __init__(self, object_box: Rect, tau: float = 0.05):
        if not 0.0 <= tau <= 1.0:
            raise ValueError(f"tau must be in [0, 1], got {tau}")
        self.object_box = object_box
        self.tau = tau
        self.n_pairs = 0
        self.n_fp_strict = 0
        self.n_fp_tau = 0
        self.sum_iou = 0.0
        self.sum_iou_sq = 0.0
        self.sum_cov = 0.0
        self.sum_cov_sq = 0.0

    def add_batch(self, crops_a: np.ndarray, crops_b: np.ndarray) -> None:
        """Fold in n pairs given as two (n, 4) box arrays."""
        crops_a = np.asarray(crops_a, dtype=np.float64)
        crops_b = np.asarray(crops_b, dtype=np.float64)
        if crops_a.shape != crops_b.shape or crops_a.ndim != 2 or crops_a.shape[1] != 4:
            raise ValueError("expected two (n, 4) box arrays of equal shape")
        obj = np.array(self.object_box.as_tuple(), dtype=np.float64)
        obj_area = self.object_box.area()
        cov_a = boxes_intersection_area(crops_a, obj) / obj_area
        cov_b = boxes_intersection_area(crops_b, obj) / obj_area
        pair_iou = boxes_iou(crops_a, crops_b)

        self.n_pairs += crops_a.shape[0]
        self.n_fp_strict += int(np.count_nonzero((cov_a == 0.0) | (cov_b == 0.0)))
        self.n_fp_tau += int(np.count_nonzero((cov_a < self.tau) | (cov_b < self.tau)))
        self.sum_iou += float(pair_iou.sum())
        self.sum_iou_sq += float((pair_iou * pair_iou).sum())
        cov = np.concatenate([cov_a, cov_b])
        self.sum_cov += float(cov.sum())
        self.sum_cov_sq += float((cov * cov).sum())

    def add(self, crop_a: Rect, crop_b: Rect) -> None:
        """Fold in one pair."""
        a = np.array([crop_a.as_tuple()], dtype=np.float64)
        b = np.array([crop_b.as_tuple()], dtype=np.float64)
        self.add_batch(a, b)

    def merge(self, other: "PairAccumulator") -> None:
        """Fold another accumulator into this one (same tau required)."""
        if other.tau != self.tau:
            raise ValueError("cannot merge accumulators with different tau")
        self.n_pairs += other.n_pairs
        self.n_fp_strict += other.n_fp_strict
        self.n_fp_tau += other.n_fp_tau
        self.sum_iou += other.sum_iou
        self.sum_iou_sq += other.sum_iou_sq
        self.sum_cov += other.sum_cov
        self.sum_cov_sq += other.sum_cov_sq

    def stats(self) -> PairStats:
        n = self.n_pairs
        if n == 0:
            raise EmptyStreamError("no pairs accumulated")
        n_crops = 2 * n
        mean_iou = self.sum_iou / n
        mean_cov = self.sum_cov / n_crops
        return PairStats(
            n_pairs=n,
            fp_rate_strict=self.n_fp_strict / n,
            fp_rate_thresholded=self.n_fp_tau / n,
            mean_pair_iou=min(1.0, max(0.0, mean_iou)),
            mean_object_coverage=min(1.0, max(0.0, mean_cov)),
            se_iou=_standard_error(self.sum_iou, self.sum_iou_sq, n),
            se_cov=_standard_error(self.sum_cov, self.sum_cov_sq, n_crops),
        )


def _standard_error(total: float, total_sq: float, n: int) -> float:
    """SE of the mean from running sums, with the n=1 case defined as 0."""
    if n < 2:
        return 0.0
    var = (total_sq - total * total / n) / (n - 1)
    return float(np.sqrt(max(0.0, var) / n))


def aggregate(pairs, object_box: Rect, tau: float = 0.05) -> PairStats:
    """Aggregate an iterable of pair samples against one object box."""
    acc = PairAccumulator(object_box, tau)
    for pair in pairs:
        acc.add(pair.crop_a, pair.crop_b)
    if acc.n_pairs == 0:
        raise EmptyStreamError("empty pair stream")
    return acc.stats()
