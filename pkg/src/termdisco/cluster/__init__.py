"""Segment clustering: five ways to turn pooled segments into subword units.

All methods return a ``(ClusterModel, Labeling)`` pair.  Labels are total
(every segment gets a unit id below ``n_clusters``) and every method is
deterministic given its inputs and seed.
"""

from dataclasses import dataclass, field

import numpy as np

from termdisco.cluster.ahc import ahc, choose_k_by_gap
from termdisco.cluster.density import density_cluster
from termdisco.cluster.gmm import bgmm_variational, gmm_em
from termdisco.cluster.kmeans import kmeans

__all__ = [
    "ClusterModel", "Labeling", "as_matrix",
    "kmeans", "ahc", "choose_k_by_gap", "gmm_em", "bgmm_variational",
    "density_cluster", "hybrid_ahc_kmeans",
]


@dataclass
class ClusterModel:
    """Fitted clustering model: method tag, size, parameter block, trace.

    ``trace`` records the per-iteration objective (k-means inertia, EM
    log-likelihood, or variational bound) for monotonicity checks; methods
    without an iterative objective leave it empty.
    """

    kind = "cluster_model"

    method: str
    n_clusters: int
    params: dict
    trace: list = field(default_factory=list)

    def __post_init__(self):
        if self.n_clusters < 1:
            raise ValueError("n_clusters must be >= 1")
        weights = self.params.get("weights")
        if weights is not None and abs(sum(weights) - 1.0) > 1e-9:
            raise ValueError("mixture weights must sum to 1")

    def to_payload(self):
        return {"method": self.method,
                "n_clusters": self.n_clusters,
                "params": self.params,
                "trace": list(self.trace)}

    @classmethod
    def from_payload(cls, payload):
        return cls(payload["method"], payload["n_clusters"],
                   payload["params"], payload["trace"])


@dataclass(frozen=True)
class Labeling:
    """Per-segment unit ids, optionally tagged with source recordings."""

    kind = "labeling"

    labels: tuple
    n_clusters: int
    recording_ids: tuple = None

    def __post_init__(self):
        if any(l < 0 or l >= self.n_clusters for l in self.labels):
            raise ValueError("label outside [0, n_clusters)")
        if self.recording_ids is not None and \
                len(self.recording_ids) != len(self.labels):
            raise ValueError("recording_ids must parallel labels")

    def __len__(self):
        return len(self.labels)

    def with_recordings(self, segments):
        return Labeling(self.labels, self.n_clusters,
                        tuple(s.recording_id for s in segments))

    def to_payload(self):
        groups = []
        for rec, lab in zip(self.recording_ids or [""] * len(self.labels),
                            self.labels):
            if groups and groups[-1][0] == rec:
                groups[-1][1].append(int(lab))
            else:
                groups.append([rec, [int(lab)]])
        return {"n_clusters": self.n_clusters, "recordings": groups}

    @classmethod
    def from_payload(cls, payload):
        labels = []
        recs = []
        for rec, labs in payload["recordings"]:
            labels.extend(int(l) for l in labs)
            recs.extend([rec] * len(labs))
        rec_ids = None if all(r == "" for r in recs) else tuple(recs)
        return cls(tuple(labels), payload["n_clusters"], rec_ids)


def as_matrix(segments):
    """Stack segment feature vectors into an (n, D) float64 matrix."""
    if not segments:
        raise ValueError("no segments to cluster")
    return np.array([s.feature for s in segments], dtype=np.float64)


def hybrid_ahc_kmeans(segments, seed, subsample=5000, k_max=None,
                      linkage="ward"):
    """Size the inventory on a subsample, then cluster the full set.

    Hierarchical clustering is quadratic, so it runs on a uniform subsample
    to pick a cluster count (largest relative gap in the merge heights), and
    k-means does the full-set assignment with that count.
    """
    rng = np.random.default_rng(seed)
    if len(segments) > subsample:
        idx = np.sort(rng.choice(len(segments), size=subsample, replace=False))
        subset = [segments[i] for i in idx]
    else:
        subset = list(segments)
    k = choose_k_by_gap(subset, k_max=k_max, linkage=linkage)
    return kmeans(segments, k, seed)
