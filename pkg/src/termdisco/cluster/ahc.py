"""Agglomerative hierarchical clustering via the Lance-Williams recurrence.

Supported linkages: single, complete, centroid, median, ward.  Distances for
the centroid family are maintained in squared form (the recurrence is exact
there) and reported as their square roots, so ward merge costs equal
``sqrt(2 * n_a * n_b / (n_a + n_b)) * ||mean_a - mean_b||``.

Centroid and median linkage may produce inversions (a merge cheaper than an
earlier one); that is inherent to those criteria, not an error.
"""

import numpy as np

LINKAGES = ("single", "complete", "centroid", "median", "ward")
_SQUARED = ("centroid", "median", "ward")


def _initial_distances(x, linkage):
    diff = x[:, None, :] - x[None, :, :]
    d2 = (diff ** 2).sum(axis=2)
    return d2 if linkage in _SQUARED else np.sqrt(d2)


def _lw_update(d, linkage, i, j, sizes):
    """Distance of every cluster to the merge of clusters i and j."""
    ni, nj, nk = sizes[i], sizes[j], sizes
    if linkage == "single":
        return 0.5 * d[i] + 0.5 * d[j] - 0.5 * np.abs(d[i] - d[j])
    if linkage == "complete":
        return 0.5 * d[i] + 0.5 * d[j] + 0.5 * np.abs(d[i] - d[j])
    if linkage == "centroid":
        tot = ni + nj
        return (ni / tot) * d[i] + (nj / tot) * d[j] \
            - (ni * nj / tot ** 2) * d[i, j]
    if linkage == "median":
        return 0.5 * d[i] + 0.5 * d[j] - 0.25 * d[i, j]
    if linkage == "ward":
        tot = ni + nj + nk
        return ((ni + nk) * d[i] + (nj + nk) * d[j] - nk * d[i, j]) / tot
    raise ValueError(f"unknown linkage {linkage!r} (pick one of {LINKAGES})")


def ahc(segments, k, linkage="ward", max_points=20000):
    """Cut the agglomerative dendrogram of the segments at ``k`` clusters.

    Input size is capped (quadratic memory); raise the cap knowingly or run
    on a subsample (see ``hybrid_ahc_kmeans``).
    """
    from termdisco.cluster import ClusterModel, Labeling, as_matrix

    if linkage not in LINKAGES:
        raise ValueError(f"unknown linkage {linkage!r} (pick one of {LINKAGES})")
    x = as_matrix(segments)
    n = x.shape[0]
    if n > max_points:
        raise ValueError(f"{n} segments exceed the size cap {max_points}")
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for {n} segments")

    d = _initial_distances(x, linkage)
    np.fill_diagonal(d, np.inf)
    sizes = np.ones(n)
    active = np.ones(n, dtype=bool)
    parent = np.arange(n)
    heights = []

    for _ in range(n - k):
        flat = int(np.argmin(d))
        i, j = divmod(flat, n)
        dist = d[i, j]
        heights.append(float(np.sqrt(max(dist, 0.0))) if linkage in _SQUARED
                       else float(dist))
        row = _lw_update(d, linkage, i, j, sizes)
        row = np.where(active, row, np.inf)
        d[i, :] = row
        d[:, i] = row
        d[i, i] = np.inf
        d[j, :] = np.inf
        d[:, j] = np.inf
        sizes[i] += sizes[j]
        active[j] = False
        parent[j] = i

    def find(a):
        path = []
        while parent[a] != a:
            path.append(a)
            a = parent[a]
        for p in path:
            parent[p] = a
        return a

    roots = sorted({find(a) for a in range(n)})
    relabel = {r: idx for idx, r in enumerate(roots)}
    labels = tuple(relabel[find(a)] for a in range(n))

    centroids = [x[np.array(labels) == c].mean(axis=0) for c in range(k)]
    model = ClusterModel(
        method="ahc",
        n_clusters=k,
        params={"linkage": linkage,
                "merge_heights": heights,
                "centroids": [[float(v) for v in c] for c in centroids]},
    )
    return model, Labeling(labels, k).with_recordings(segments)


def choose_k_by_gap(segments, k_max=None, linkage="ward", max_points=20000):
    """Pick a cluster count from the largest relative jump in merge heights.

    Heuristic sizing step: run a full agglomeration and return the count just
    before the merge whose height grows the most relative to the previous
    one.
    """
    model, _ = ahc(segments, 1, linkage=linkage, max_points=max_points)
    heights = model.params["merge_heights"]
    n = len(segments)
    if n < 3:
        return n
    cap = k_max if k_max is not None else max(2, int(np.sqrt(n)))
    best_k, best_gap = 2, -np.inf
    # merge m (0-based) leaves n-1-m clusters; candidate k = clusters before it
    for m in range(1, len(heights)):
        k = n - m
        if k < 2 or k > cap:
            continue
        prev = max(heights[m - 1], 1e-12)
        gap = heights[m] / prev
        if gap > best_gap:
            best_gap, best_k = gap, k
    return best_k
