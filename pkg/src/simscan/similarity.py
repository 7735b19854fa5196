"""Scoring conventions shared by the flat scan, the IVF index and ADC.

Two metrics are supported. ``inner_product`` scores are dot products and
sort descending; ``l2`` scores are Euclidean distances and sort ascending.
All arithmetic happens in float64 regardless of how vectors are stored.
"""

import numpy as np

METRICS = ("inner_product", "l2")


def check_metric(metric):
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}, expected one of {METRICS}")
    return metric


def higher_is_better(metric):
    return check_metric(metric) == "inner_product"


def score_block(Q, X, metric):
    """Score matrix of shape (|Q|, |X|) between query rows and stored rows."""
    check_metric(metric)
    Q = np.asarray(Q, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    if metric == "inner_product":
        return Q @ X.T
    sq = (
        np.einsum("ij,ij->i", Q, Q)[:, None]
        - 2.0 * (Q @ X.T)
        + np.einsum("ij,ij->i", X, X)[None, :]
    )
    return np.sqrt(np.maximum(sq, 0.0))


def score_vector(q, X, metric):
    """Scores of one query against every row of X.

    Unlike ``score_block`` this avoids BLAS matmul: the einsum reduction
    runs in the same order for any number of rows, so scoring a subset of
    X gives bit-identical values to scoring all of X and gathering. Cell
    probing relies on that to agree with the flat scan exactly.
    """
    check_metric(metric)
    q = np.asarray(q, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    dots = np.einsum("nd,d->n", X, q)
    if metric == "inner_product":
        return dots
    sq = np.einsum("nd,nd->n", X, X) - 2.0 * dots + np.einsum("d,d->", q, q)
    return np.sqrt(np.maximum(sq, 0.0))


def rank_hits(ids, scores, metric, k):
    """Top-k (id, score) pairs under the metric's sort order, ids break ties."""
    ids = np.asarray(ids)
    scores = np.asarray(scores, dtype=np.float64)
    key = -scores if higher_is_better(metric) else scores
    order = np.lexsort((ids, key))[: int(k)]
    return [(int(ids[i]), float(scores[i])) for i in order]
