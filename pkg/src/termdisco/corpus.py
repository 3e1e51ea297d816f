"""Corpus types and file formats.

Every pipeline stage reads and writes the formats defined here so stages can
run independently.  Two feature encodings are supported: CSV (one frame per
row, convenient for tests) and raw little-endian float32 with a JSON sidecar
(convenient at scale).  All derived artifacts are JSON documents carrying
``format_version`` and a ``kind`` tag; loading the bytes written by
:func:`persist` reproduces the in-memory value exactly.

Frame indices are 0-based and end-exclusive throughout.
"""

import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

FORMAT_VERSION = 1


class LoadError(ValueError):
    """Raised for malformed or inconsistent input files."""


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass
class FeatureMatrix:
    """Frame-level feature matrix for one recording (T frames x D dims)."""

    recording_id: str
    data: np.ndarray
    frame_period_ms: float = 10.0

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float32)
        if self.data.ndim != 2 or self.data.shape[0] < 1 or self.data.shape[1] < 1:
            raise LoadError(
                f"{self.recording_id}: feature matrix must be T x D with "
                f"T >= 1, D >= 1, got shape {self.data.shape}")
        if not np.all(np.isfinite(self.data)):
            t = int(np.argwhere(~np.isfinite(self.data))[0][0])
            raise LoadError(
                f"{self.recording_id}: non-finite value at frame {t}")
        if not self.frame_period_ms > 0:
            raise LoadError(f"{self.recording_id}: frame_period_ms must be > 0")

    @property
    def n_frames(self):
        return int(self.data.shape[0])

    @property
    def n_dims(self):
        return int(self.data.shape[1])

    def __eq__(self, other):
        if not isinstance(other, FeatureMatrix):
            return NotImplemented
        return (self.recording_id == other.recording_id
                and self.frame_period_ms == other.frame_period_ms
                and self.data.shape == other.data.shape
                and bool(np.all(self.data == other.data)))


@dataclass(frozen=True)
class VadTrack:
    """Per-frame voiced flags for one recording."""

    kind = "vad"

    recording_id: str
    voiced: tuple

    @staticmethod
    def from_flags(recording_id, flags):
        return VadTrack(recording_id, tuple(bool(v) for v in flags))

    def __len__(self):
        return len(self.voiced)

    def to_payload(self):
        return {"recording_id": self.recording_id,
                "voiced": [int(v) for v in self.voiced]}

    @classmethod
    def from_payload(cls, payload):
        return cls.from_flags(payload["recording_id"], payload["voiced"])


@dataclass(frozen=True)
class SpeakerTag:
    """Speaker identity of one recording."""

    kind = "speaker"

    recording_id: str
    speaker_id: str

    def to_payload(self):
        return {"recording_id": self.recording_id, "speaker_id": self.speaker_id}

    @classmethod
    def from_payload(cls, payload):
        return cls(payload["recording_id"], payload["speaker_id"])


@dataclass(frozen=True)
class ReferenceTranscript:
    """Word-level ground truth: ordered (word, start_frame, end_frame)."""

    kind = "transcript"

    recording_id: str
    words: tuple

    @staticmethod
    def from_words(recording_id, words):
        norm = tuple((str(w), int(s), int(e)) for w, s, e in words)
        prev_end = None
        for w, s, e in norm:
            if e <= s:
                raise LoadError(
                    f"{recording_id}: word '{w}' has empty interval [{s}, {e})")
            if prev_end is not None and s < prev_end:
                raise LoadError(
                    f"{recording_id}: overlapping word intervals at frame {s}")
            prev_end = e
        return ReferenceTranscript(recording_id, norm)

    def to_payload(self):
        return {"recording_id": self.recording_id,
                "words": [[w, s, e] for w, s, e in self.words]}

    @classmethod
    def from_payload(cls, payload):
        return cls.from_words(payload["recording_id"], payload["words"])


# ---------------------------------------------------------------------------
# feature encodings
# ---------------------------------------------------------------------------

def load_features(path, frame_period_ms=10.0):
    """Load a :class:`FeatureMatrix` from ``.csv`` or ``.f32`` + sidecar.

    CSV files carry no metadata: the recording id is the file stem and the
    frame period comes from the ``frame_period_ms`` argument.  Raw files use
    the JSON sidecar ``<stem>.json`` next to them.
    """
    path = os.fspath(path)
    if path.endswith(".csv"):
        return _load_features_csv(path, frame_period_ms)
    if path.endswith(".f32"):
        return _load_features_raw(path)
    raise LoadError(f"{path}: unknown feature encoding (expected .csv or .f32)")


def _load_features_csv(path, frame_period_ms):
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise LoadError(
                    f"{path}: dimension mismatch at frame {len(rows)} "
                    f"(expected {width} values, got {len(cells)})")
            try:
                row = [float(c) for c in cells]
            except ValueError as exc:
                raise LoadError(f"{path}: bad value at frame {len(rows)}: {exc}")
            for v in row:
                if not np.isfinite(v):
                    raise LoadError(
                        f"{path}: non-finite value at frame {len(rows)}")
            rows.append(row)
    if not rows:
        raise LoadError(f"{path}: no frames")
    rec = os.path.splitext(os.path.basename(path))[0]
    return FeatureMatrix(rec, np.array(rows, dtype=np.float32), frame_period_ms)


def _sidecar_path(path):
    return os.path.splitext(path)[0] + ".json"


def _load_features_raw(path):
    sidecar = _sidecar_path(path)
    if not os.path.exists(sidecar):
        raise LoadError(f"{path}: missing sidecar {sidecar}")
    with open(sidecar, "r", encoding="utf-8") as fh:
        try:
            meta = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LoadError(f"{sidecar}: malformed header: {exc}")
    for key in ("recording_id", "frames", "dims", "frame_period_ms"):
        if key not in meta:
            raise LoadError(f"{sidecar}: malformed header, missing '{key}'")
    frames, dims = int(meta["frames"]), int(meta["dims"])
    if frames < 1:
        raise LoadError(f"{path}: no frames")
    raw = np.fromfile(path, dtype="<f4")
    if raw.size != frames * dims:
        raise LoadError(
            f"{path}: dimension mismatch ({raw.size} values for "
            f"{frames} x {dims} declared)")
    data = raw.reshape(frames, dims)
    bad = np.argwhere(~np.isfinite(data))
    if bad.size:
        raise LoadError(f"{path}: non-finite value at frame {int(bad[0][0])}")
    return FeatureMatrix(meta["recording_id"], data,
                         float(meta["frame_period_ms"]))


def save_features(fm, path):
    """Write features as ``.csv`` or as ``.f32`` plus JSON sidecar."""
    path = os.fspath(path)
    if path.endswith(".csv"):
        lines = []
        for row in fm.data:
            lines.append(",".join(repr(float(v)) for v in row))
        write_text_atomic(path, "\n".join(lines) + "\n")
    elif path.endswith(".f32"):
        write_bytes_atomic(path, fm.data.astype("<f4").tobytes())
        meta = {"format_version": FORMAT_VERSION,
                "recording_id": fm.recording_id,
                "frames": fm.n_frames,
                "dims": fm.n_dims,
                "frame_period_ms": float(fm.frame_period_ms)}
        write_text_atomic(_sidecar_path(path), _dumps(meta))
    else:
        raise LoadError(f"{path}: unknown feature encoding (expected .csv or .f32)")


# ---------------------------------------------------------------------------
# annotations
# ---------------------------------------------------------------------------

def load_annotations(path, n_frames=None):
    """Load a VAD track, speaker tag, or reference transcript.

    The JSON header's ``kind`` field selects the type.  When ``n_frames`` is
    given, VAD length is validated against it.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LoadError(f"{path}: malformed header: {exc}")
    kind = payload.get("kind")
    if kind == "vad":
        track = VadTrack.from_payload(payload)
        if n_frames is not None and len(track) != n_frames:
            raise LoadError(
                f"{path}: VAD length {len(track)} does not match "
                f"{n_frames} frames")
        return track
    if kind == "speaker":
        return SpeakerTag.from_payload(payload)
    if kind == "transcript":
        return ReferenceTranscript.from_payload(payload)
    raise LoadError(f"{path}: unknown annotation kind {kind!r}")


# ---------------------------------------------------------------------------
# generic artifact persistence
# ---------------------------------------------------------------------------

_REGISTRY = {}


def _registry():
    if not _REGISTRY:
        from termdisco import asm, cluster, discovery, evaluation
        from termdisco import segmentation, topics, weighting

        classes = [
            VadTrack, SpeakerTag, ReferenceTranscript,
            segmentation.BoundarySet,
            cluster.ClusterModel, cluster.Labeling,
            asm.PseudoTranscription, asm.UnitModelSet, asm.IterationTrace,
            weighting.WeightTable,
            discovery.BagOfSequences, discovery.KeywordClusterSet,
            evaluation.EvalReport,
            topics.SessionIndex, topics.TfIdfMatrix, topics.EmbeddingTable,
        ]
        for cls in classes:
            _REGISTRY[cls.kind] = cls
    return _REGISTRY


def persist(artifact, path):
    """Write any pipeline artifact to ``path`` atomically.

    ``FeatureMatrix`` dispatches on the file suffix; everything else becomes
    a versioned JSON document.  ``load_artifact(persist(x)) == x`` holds
    field-for-field.
    """
    if isinstance(artifact, FeatureMatrix):
        save_features(artifact, path)
        return
    registry = _registry()
    kind = getattr(type(artifact), "kind", None)
    if kind not in registry:
        raise LoadError(f"cannot persist object of type {type(artifact).__name__}")
    payload = {"format_version": FORMAT_VERSION, "kind": kind}
    payload.update(artifact.to_payload())
    write_text_atomic(path, _dumps(payload))


def load_artifact(path):
    """Load any JSON artifact previously written by :func:`persist`."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LoadError(f"{path}: malformed header: {exc}")
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise LoadError(f"{path}: unsupported format_version {version!r}")
    registry = _registry()
    kind = payload.get("kind")
    if kind not in registry:
        raise LoadError(f"{path}: unknown artifact kind {kind!r}")
    return registry[kind].from_payload(payload)


def _dumps(payload):
    return json.dumps(payload, sort_keys=True, indent=1) + "\n"


def write_text_atomic(path, text):
    """Write text via a temp file + rename so readers never see partials."""
    write_bytes_atomic(path, text.encode("utf-8"))


def write_bytes_atomic(path, blob):
    path = os.fspath(path)
    dirname = os.path.dirname(path) or "."
    os.makedirs(dirname, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=dirname, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(blob)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
