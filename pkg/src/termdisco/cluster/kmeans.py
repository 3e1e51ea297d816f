"""Lloyd k-means with deterministic farthest-point seeding."""

import numpy as np


def _seed_centroids(x, k, rng):
    # First centre drawn from the rng, the rest greedily farthest from the
    # chosen set; ties resolve to the lowest index.
    n = x.shape[0]
    chosen = [int(rng.integers(n))]
    mind = ((x - x[chosen[0]]) ** 2).sum(axis=1)
    while len(chosen) < k:
        nxt = int(np.argmax(mind))
        chosen.append(nxt)
        mind = np.minimum(mind, ((x - x[nxt]) ** 2).sum(axis=1))
    return x[chosen].copy()


def _sq_dist(x, centroids):
    return ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)


def kmeans(segments, k, seed, max_iter=300):
    """Cluster segment features into ``k`` units.

    Returns a ``(ClusterModel, Labeling)`` pair.  The model trace holds the
    within-cluster squared error after each assignment pass; it is
    non-increasing.  Requires ``k`` not to exceed the number of distinct
    feature vectors.
    """
    from termdisco.cluster import ClusterModel, Labeling, as_matrix

    if k < 1:
        raise ValueError("k must be >= 1")
    x = as_matrix(segments)
    n_distinct = np.unique(x, axis=0).shape[0]
    if k > n_distinct:
        raise ValueError(f"k={k} exceeds {n_distinct} distinct points")
    rng = np.random.default_rng(seed)
    centroids = _seed_centroids(x, k, rng)

    trace = []
    labels = None
    for _ in range(max_iter):
        d2 = _sq_dist(x, centroids)
        new_labels = np.argmin(d2, axis=1)
        assigned = d2[np.arange(len(x)), new_labels]
        trace.append(float(assigned.sum()))
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        counts = np.bincount(labels, minlength=k)
        for c in range(k):
            if counts[c] > 0:
                centroids[c] = x[labels == c].mean(axis=0)
        # Re-seed any emptied cluster on the farthest point; nobody was
        # assigned to it, so the objective stays monotone.
        steal = assigned.copy()
        for c in range(k):
            if counts[c] == 0:
                far = int(np.argmax(steal))
                centroids[c] = x[far]
                steal[far] = 0.0

    model = ClusterModel(
        method="kmeans",
        n_clusters=k,
        params={"centroids": [[float(v) for v in c] for c in centroids]},
        trace=trace,
    )
    labeling = Labeling(tuple(int(l) for l in labels), k).with_recordings(segments)
    return model, labeling
