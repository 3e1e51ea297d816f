"""Initial segmentation: boundary merging and segment-level feature pooling.

Boundary hypotheses from several sources are pooled and chain-merged: any
group of boundaries in which consecutive members lie within the merge window
collapses to the rounded mean of the group.  The recording endpoints 0 and T
always survive as themselves.  A second pass with a 1-frame window removes
boundaries closer than 2 frames, so no segment is shorter than 2 frames
(except a degenerate 1-frame recording).
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BoundarySet:
    """Sorted frame indices delimiting segments of one recording."""

    kind = "boundaries"

    recording_id: str
    boundaries: tuple

    @staticmethod
    def from_indices(recording_id, indices):
        idx = tuple(int(b) for b in indices)
        for a, b in zip(idx, idx[1:]):
            if b <= a:
                raise ValueError(
                    f"{recording_id}: boundaries must be strictly increasing")
        if any(b < 0 for b in idx):
            raise ValueError(f"{recording_id}: negative boundary index")
        return BoundarySet(recording_id, idx)

    def to_payload(self):
        return {"recording_id": self.recording_id,
                "boundaries": list(self.boundaries)}

    @classmethod
    def from_payload(cls, payload):
        return cls.from_indices(payload["recording_id"], payload["boundaries"])


@dataclass(frozen=True)
class Segment:
    """One segment with its pooled feature vector."""

    recording_id: str
    start_frame: int
    end_frame: int
    feature: tuple

    @property
    def n_frames(self):
        return self.end_frame - self.start_frame


def round_half_down(x):
    """Round to nearest integer, halves toward negative infinity."""
    return int(math.ceil(x - 0.5))


def _chain_merge(values, window, pins):
    """Collapse transitive groups of values with consecutive gaps <= window.

    Groups containing a pinned value emit the pins unchanged; other groups
    emit the rounded mean.  ``values`` may contain repeats; repeats weight
    the mean.
    """
    if not values:
        return []
    values = sorted(values)
    out = []
    group = [values[0]]
    for v in values[1:]:
        if v - group[-1] <= window:
            group.append(v)
        else:
            out.extend(_emit(group, pins))
            group = [v]
    out.extend(_emit(group, pins))
    return sorted(set(out))


def _emit(group, pins):
    hit = [p for p in pins if p in group]
    if hit:
        return hit
    return [round_half_down(sum(group) / len(group))]


def merge_boundaries(sets, window_ms, frame_period_ms, n_frames,
                     recording_id=None):
    """Merge boundary hypothesis sets for one recording of ``n_frames``.

    All sets must refer to the same recording; the result always contains
    0 and ``n_frames`` and is idempotent under re-merging with the same
    window.  ``recording_id`` is only needed when ``sets`` is empty.
    """
    if window_ms < 0:
        raise ValueError("window_ms must be >= 0")
    rec_ids = {s.recording_id for s in sets}
    if recording_id is not None:
        rec_ids.add(recording_id)
    if len(rec_ids) > 1:
        raise ValueError(f"mixed recording ids: {sorted(rec_ids)}")
    rec = next(iter(rec_ids)) if rec_ids else ""
    window = window_ms / frame_period_ms
    pins = (0, n_frames)
    pool = [b for s in sets for b in s.boundaries if 0 <= b <= n_frames]
    pool.extend(pins)
    merged = _chain_merge(pool, window, pins)
    merged = _chain_merge(merged, 1, pins)  # enforce 2-frame minimum segment
    return BoundarySet.from_indices(rec, merged)


def pool_segments(features, bounds):
    """Average frame rows between consecutive boundaries into Segments.

    ``bounds`` must be finalized (contain 0 and T); the segments tile the
    recording exactly.
    """
    t = features.n_frames
    if not bounds.boundaries or bounds.boundaries[0] != 0 or bounds.boundaries[-1] != t:
        raise ValueError(
            f"{features.recording_id}: boundary set not finalized for "
            f"{t} frames: {bounds.boundaries}")
    if bounds.recording_id != features.recording_id:
        raise ValueError("boundary set and features disagree on recording id")
    data = features.data.astype(np.float64)
    segments = []
    for start, end in zip(bounds.boundaries, bounds.boundaries[1:]):
        feat = data[start:end].mean(axis=0)
        segments.append(Segment(features.recording_id, start, end,
                                tuple(float(v) for v in feat)))
    return segments
