"""Seeded Lloyd k-means with k-means++ style initialization.

Deliberately hand-rolled rather than delegated: the coarse quantizer and
the product-quantizer codebooks both need fully deterministic, seedable
clustering with a fixed empty-cluster policy, and the whole point of the
index is that its training is ours to control.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .errors import InsufficientVectors
from .validation import check_matrix, check_fitted


def _sq_dists_to_centers(X, centers):
    # ||x||^2 - 2 x.c + ||c||^2, clipped at 0 against rounding
    d = (
        np.einsum("ij,ij->i", X, X)[:, None]
        - 2.0 * (X @ centers.T)
        + np.einsum("ij,ij->i", centers, centers)[None, :]
    )
    return np.maximum(d, 0.0)


def _plusplus_init(X, k, rng):
    n = X.shape[0]
    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = rng.integers(n)
    closest = np.einsum("ij,ij->i", X - X[chosen[0]], X - X[chosen[0]])
    for j in range(1, k):
        total = closest.sum()
        if total > 0:
            probs = closest / total
            chosen[j] = rng.choice(n, p=probs)
        else:
            # fewer distinct points than k: fall back to unused indices
            unused = np.setdiff1d(np.arange(n), chosen[:j])
            chosen[j] = unused[0] if len(unused) else rng.integers(n)
        diff = X - X[chosen[j]]
        closest = np.minimum(closest, np.einsum("ij,ij->i", diff, diff))
    return X[chosen].copy()


class LloydKMeans(BaseEstimator, ClusterMixin):
    """Lloyd's algorithm, deterministic for a given random_state.

    Initialization samples k input vectors with squared-distance weighting,
    so duplicates of already-chosen points are never drawn while distinct
    points remain. A cluster that loses all members is re-seeded with the
    farthest point of the currently largest cluster. Iteration stops when
    the largest centroid shift drops below ``tol`` or after ``max_iter``
    rounds.

    Attributes after fit: ``cluster_centers_``, ``labels_``, ``inertia_``
    and ``inertia_history_`` (one entry per assignment pass).
    """

    def __init__(self, n_clusters=8, max_iter=25, tol=1e-6, random_state=0):
        self.n_clusters = n_clusters
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_matrix(X)
        k = self.n_clusters
        if k < 1:
            raise ValueError("n_clusters must be >= 1")
        if X.shape[0] < k:
            raise InsufficientVectors(
                f"{X.shape[0]} vectors cannot support {k} clusters"
            )
        rng = np.random.default_rng(self.random_state)
        centers = _plusplus_init(X, k, rng)
        history = []
        labels = None
        for _ in range(max(1, self.max_iter)):
            dists = _sq_dists_to_centers(X, centers)
            labels = np.argmin(dists, axis=1)
            counts = np.bincount(labels, minlength=k)
            for empty in np.flatnonzero(counts == 0):
                donor = int(np.argmax(counts))
                members = np.flatnonzero(labels == donor)
                far = members[int(np.argmax(dists[members, donor]))]
                labels[far] = empty
                counts[donor] -= 1
                counts[empty] += 1
                centers[empty] = X[far]
                dists[far, empty] = 0.0
            history.append(float(dists[np.arange(X.shape[0]), labels].sum()))
            new_centers = np.zeros_like(centers)
            np.add.at(new_centers, labels, X)
            new_centers /= counts[:, None]
            shift = np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max()
            centers = new_centers
            if shift < self.tol:
                break
        # closing pass so labels_ and inertia_ describe the returned centers
        dists = _sq_dists_to_centers(X, centers)
        labels = np.argmin(dists, axis=1)
        history.append(float(dists[np.arange(X.shape[0]), labels].sum()))
        self.cluster_centers_ = centers
        self.labels_ = labels
        self.inertia_ = history[-1]
        self.inertia_history_ = history
        return self

    def predict(self, X):
        """Index of the nearest centroid per row (ties to the smaller index)."""
        check_fitted(self, "cluster_centers_")
        X = check_matrix(X)
        return np.argmin(_sq_dists_to_centers(X, self.cluster_centers_), axis=1)

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_
