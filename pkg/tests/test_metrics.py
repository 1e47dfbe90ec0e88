"""Pair-metric accumulation: FP counting, IoU/coverage means, merging."""

import numpy as np
import pytest

from cropsim.config import CropConfig
from cropsim.geometry import Rect, UNIT_RECT, boxes_iou
from cropsim.metrics import (
    EmptyStreamError,
    PairAccumulator,
    PairStats,
    aggregate,
)
from cropsim.rng import rng_stream
from cropsim.sampling import random_crop_batch

OBJ = Rect(0.6, 0.6, 0.9, 0.9)
MISS = Rect(0.0, 0.0, 0.5, 0.5)  # zero intersection with OBJ
COVER = Rect(0.5, 0.5, 1.0, 1.0)  # contains OBJ entirely


class _FakePair:
    def __init__(self, a, b):
        self.crop_a = a
        self.crop_b = b


class TestPairStatsValidation:
    def test_valid(self):
        PairStats(1, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n_pairs": 0},
            {"fp_rate_strict": -0.1},
            {"fp_rate_thresholded": 1.1},
            {"mean_pair_iou": 2.0},
            {"mean_object_coverage": -0.5},
            {"se_iou": -1e-9},
        ],
    )
    def test_invalid(self, kwargs):
        base = dict(
            n_pairs=5,
            fp_rate_strict=0.2,
            fp_rate_thresholded=0.4,
            mean_pair_iou=0.5,
            mean_object_coverage=0.5,
            se_iou=0.01,
            se_cov=0.01,
        )
        base.update(kwargs)
        with pytest.raises(ValueError):
            PairStats(**base)


class TestPairAccumulator:
    def test_identical_full_image_pairs(self):
        acc = PairAccumulator(OBJ)
        for _ in range(4):
            acc.add(UNIT_RECT, UNIT_RECT)
        st = acc.stats()
        assert st.n_pairs == 4
        assert st.fp_rate_strict == 0.0
        assert st.fp_rate_thresholded == 0.0
        assert st.mean_pair_iou == 1.0
        assert st.mean_object_coverage == 1.0
        assert st.se_iou == 0.0
        assert st.se_cov == 0.0

    def test_alternating_hit_miss_pairs(self):
        # half the pairs contain a crop that misses the object entirely
        acc = PairAccumulator(OBJ)
        for i in range(10):
            if i % 2 == 0:
                acc.add(MISS, COVER)
            else:
                acc.add(COVER, COVER)
        st = acc.stats()
        assert st.fp_rate_strict == 0.5
        assert st.fp_rate_thresholded == 0.5

    def test_one_miss_in_pair_flags_the_pair(self):
        acc = PairAccumulator(OBJ)
        acc.add(COVER, MISS)
        assert acc.stats().fp_rate_strict == 1.0

    def test_thresholded_counts_partial_misses(self):
        # sliver crop covers 1/9 of the object area: strict hit but below
        # tau = 0.2
        sliver = Rect(0.5, 0.5, 0.7, 0.7)  # intersects [0.6,0.7]^2 = 0.01
        cov = 0.01 / OBJ.area()
        assert 0.0 < cov < 0.2
        acc = PairAccumulator(OBJ, tau=0.2)
        acc.add(sliver, COVER)
        st = acc.stats()
        assert st.fp_rate_strict == 0.0
        assert st.fp_rate_thresholded == 1.0

    def test_coverage_is_per_crop_mean(self):
        # one covering crop and one half-covering crop: mean = 0.75
        half = Rect(0.6, 0.6, 0.75, 0.9)
        acc = PairAccumulator(OBJ)
        acc.add(half, COVER)
        assert acc.stats().mean_object_coverage == pytest.approx(0.75, abs=1e-12)

    def test_pair_iou_of_identical_crops(self):
        acc = PairAccumulator(OBJ)
        acc.add(COVER, COVER)
        assert acc.stats().mean_pair_iou == 1.0

    def test_batch_equals_scalar_loop(self):
        crops_a = random_crop_batch(rng_stream(0, 0), CropConfig(), 200)
        crops_b = random_crop_batch(rng_stream(0, 1), CropConfig(), 200)
        batched = PairAccumulator(OBJ)
        batched.add_batch(crops_a, crops_b)
        looped = PairAccumulator(OBJ)
        for a, b in zip(crops_a, crops_b):
            looped.add(Rect(*map(float, a)), Rect(*map(float, b)))
        bs, ls = batched.stats(), looped.stats()
        assert bs.n_pairs == ls.n_pairs
        assert bs.fp_rate_strict == ls.fp_rate_strict
        assert bs.fp_rate_thresholded == ls.fp_rate_thresholded
        assert bs.mean_pair_iou == pytest.approx(ls.mean_pair_iou, abs=1e-12)
        assert bs.mean_object_coverage == pytest.approx(ls.mean_object_coverage, abs=1e-12)

    def test_merge_matches_single_pass(self):
        crops_a = random_crop_batch(rng_stream(1, 0), CropConfig(), 400)
        crops_b = random_crop_batch(rng_stream(1, 1), CropConfig(), 400)
        whole = PairAccumulator(OBJ)
        whole.add_batch(crops_a, crops_b)
        left = PairAccumulator(OBJ)
        left.add_batch(crops_a[:150], crops_b[:150])
        right = PairAccumulator(OBJ)
        right.add_batch(crops_a[150:], crops_b[150:])
        left.merge(right)
        ws, ms = whole.stats(), left.stats()
        assert ms.n_pairs == ws.n_pairs
        assert ms.fp_rate_strict == ws.fp_rate_strict
        assert ms.mean_pair_iou == pytest.approx(ws.mean_pair_iou, abs=1e-12)
        assert ms.se_iou == pytest.approx(ws.se_iou, abs=1e-12)
        assert ms.se_cov == pytest.approx(ws.se_cov, abs=1e-12)

    def test_merge_requires_same_tau(self):
        with pytest.raises(ValueError):
            PairAccumulator(OBJ, tau=0.05).merge(PairAccumulator(OBJ, tau=0.1))

    def test_empty_stream(self):
        with pytest.raises(EmptyStreamError):
            PairAccumulator(OBJ).stats()

    @pytest.mark.parametrize("tau", [-0.1, 1.5])
    def test_bad_tau(self, tau):
        with pytest.raises(ValueError):
            PairAccumulator(OBJ, tau=tau)

    def test_rejects_mismatched_batches(self):
        acc = PairAccumulator(OBJ)
        with pytest.raises(ValueError):
            acc.add_batch(np.zeros((3, 4)), np.zeros((2, 4)))

    def test_standard_error_matches_numpy(self):
        crops_a = random_crop_batch(rng_stream(2, 0), CropConfig(), 300)
        crops_b = random_crop_batch(rng_stream(2, 1), CropConfig(), 300)
        acc = PairAccumulator(OBJ)
        acc.add_batch(crops_a, crops_b)
        ious = boxes_iou(crops_a, crops_b)
        want = float(np.std(ious, ddof=1) / np.sqrt(len(ious)))
        assert acc.stats().se_iou == pytest.approx(want, rel=1e-9)

    def test_single_pair_has_zero_se(self):
        acc = PairAccumulator(OBJ)
        acc.add(COVER, COVER)
        st = acc.stats()
        assert st.se_iou == 0.0 and st.se_cov == 0.0


class TestAggregate:
    def test_matches_accumulator(self):
        pairs = [
            _FakePair(COVER, COVER),
            _FakePair(MISS, COVER),
            _FakePair(COVER, MISS),
            _FakePair(COVER, COVER),
        ]
        st = aggregate(pairs, OBJ)
        assert st.n_pairs == 4
        assert st.fp_rate_strict == 0.5

    def test_empty_iterable(self):
        with pytest.raises(EmptyStreamError):
            aggregate([], OBJ)

    def test_tau_passthrough(self):
        sliver = Rect(0.5, 0.5, 0.7, 0.7)
        st = aggregate([_FakePair(sliver, COVER)], OBJ, tau=0.2)
        assert st.fp_rate_thresholded == 1.0
        st2 = aggregate([_FakePair(sliver, COVER)], OBJ, tau=0.05)
        assert st2.fp_rate_thresholded == 0.0
