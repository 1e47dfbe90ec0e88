"""Training-time schedule: when localization boxes refresh, which sampler runs.

Epoch indices are 0-based. Refreshes happen at the start of the listed
epochs, before any pairs are drawn for that epoch, and the first refresh
also switches the run from the warm-up baseline sampler to the guided
sampler (a hard switch, not a blend).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, Optional

from .geometry import UNIT_RECT, Rect
from .heatmap import Heatmap, localize, normalize


class SamplerKind(enum.Enum):
    RANDOM = "random"
    CONTRASTIVE = "contrastive"


@dataclass(frozen=True)
class TrainPlan:
    """Length of the run and the refresh cadence as a fraction of it."""

    total_epochs: int
    update_freq: float = 0.2

    def __post_init__(self):
        if not (isinstance(self.total_epochs, int) and self.total_epochs >= 1):
            raise ValueError(f"total_epochs must be an integer >= 1, got {self.total_epochs}")
        if not (0.0 <= self.update_freq <= 0.5):
            raise ValueError(f"update_freq must be in [0, 0.5], got {self.update_freq}")


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def update_epochs(plan: TrainPlan) -> List[int]:
    """Epochs whose start triggers a box refresh.

    Marks sit at each update_freq fraction of the run: round(i * f * T)
    for i = 1 .. floor(1/f), kept only inside [1, T-1]. The mark at the
    very end of training (i * f * T = T) is therefore dropped; refreshing
    when no pairs remain would be wasted work. f = 0 disables refreshes
    entirely, leaving the baseline sampler in charge of the whole run.
    """
    f = plan.update_freq
    if f == 0.0:
        return []
    t = plan.total_epochs
    step = f * t
    inv = 1.0 / f
    i_max = None if math.isinf(inv) else math.floor(inv)
    marks = []
    # Invert the mark formula: epoch e is a mark iff some index
    # i in [1, floor(1/f)] satisfies round(i * step) == e. Scanning
    # epochs instead of indices keeps this O(T) even for tiny f,
    # where the index range is astronomically large. round(i * step)
    # is nondecreasing in i, so the indices hitting e are contiguous
    # and the candidate near (e - 0.5) / step is off by at most one.
    for e in range(1, t):
        q = (e - 0.5) / step
        if not math.isfinite(q):
            break  # no representable index reaches this epoch, nor any later one
        base = math.ceil(q)
        for i in (base - 1, base, base + 1):
            if i >= 1 and (i_max is None or i <= i_max) and _round_half_up(i * step) == e:
                marks.append(e)
                break
    return marks


def first_update_epoch(plan: TrainPlan) -> Optional[int]:
    ups = update_epochs(plan)
    return ups[0] if ups else None


def sampler_for_epoch(plan: TrainPlan, epoch: int) -> SamplerKind:
    """Baseline sampler before the first refresh, guided sampler after."""
    if not 0 <= epoch < plan.total_epochs:
        raise ValueError(f"epoch {epoch} outside [0, {plan.total_epochs})")
    first = first_update_epoch(plan)
    if first is None or epoch < first:
        return SamplerKind.RANDOM
    return SamplerKind.CONTRASTIVE


class BoxStore:
    """Per-sample localization boxes, defaulting to the whole image.

    The default means samples start with no localization prior, exactly
    matching the warm-up behavior. Callers sequence refreshes against
    reads; the store itself is a plain mapping with no locking.
    """

    def __init__(self):
        self._boxes: dict = {}

    def __len__(self) -> int:
        return len(self._boxes)

    def ids(self) -> List[str]:
        return sorted(self._boxes)

    def get(self, sample_id) -> Rect:
        return self._boxes.get(str(sample_id), UNIT_RECT)

    def set_box(self, sample_id, box: Rect) -> None:
        sid = str(sample_id)
        if not sid or any(ch.isspace() for ch in sid):
            raise ValueError(f"sample id must be non-empty without whitespace, got {sample_id!r}")
        self._boxes[sid] = box

    def refresh(self, sample_id, m: Heatmap, k: float) -> None:
        """Replace the stored box with the localization of a fresh heatmap."""
        self.set_box(sample_id, localize(normalize(m), k))

    def save(self, path) -> None:
        """Write 'id x0 y0 x1 y1' lines sorted by id."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for sid in self.ids():
                b = self._boxes[sid]
                fh.write(f"{sid} {b.x0!r} {b.y0!r} {b.x1!r} {b.y1!r}\n")

    @classmethod
    def load(cls, path) -> "BoxStore":
        """Read a snapshot; malformed lines and invalid rects are rejected."""
        store = cls()
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) != 5:
                    raise ValueError(f"line {lineno}: expected 'id x0 y0 x1 y1', got {raw!r}")
                try:
                    coords = [float(p) for p in parts[1:]]
                except ValueError:
                    raise ValueError(f"line {lineno}: non-numeric coordinate") from None
                store.set_box(parts[0], Rect(*coords))
        return store
