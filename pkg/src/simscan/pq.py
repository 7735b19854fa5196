"""Product quantization: segment-wise vector compression to one-byte codes.

A d-dimensional vector is cut into ``n_segments`` contiguous pieces and each
piece is snapped to the nearest entry of a per-segment codebook learned with
k-means. A stored vector then occupies ``n_segments`` bytes. Queries are
scored against codes asymmetrically: the raw query is compared to codebook
entries once, giving a lookup table, and every candidate's score is a sum of
table cells.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import BadPqShape, CodeOutOfRange, InsufficientVectors
from .kmeans import LloydKMeans
from .similarity import check_metric
from .validation import check_matrix, check_fitted


class ProductQuantizer(BaseEstimator, TransformerMixin):
    """Per-segment vector quantizer with at most 256 centroids per segment.

    Parameters
    ----------
    n_segments : int
        Number of contiguous subvectors; must divide the input dimension.
    n_centroids : int
        Codebook size per segment, capped at 256 so codes fit in a byte.
    random_state : int
        Seeds every per-segment clustering run.
    max_iter : int
        Lloyd iteration cap per segment.

    After ``fit`` the learned codebooks live in ``codebooks_`` with shape
    (n_segments, n_centroids, subvector_dim), stored as float32.
    """

    def __init__(self, n_segments=48, n_centroids=256, random_state=0, max_iter=25):
        self.n_segments = n_segments
        self.n_centroids = n_centroids
        self.random_state = random_state
        self.max_iter = max_iter

    def fit(self, X, y=None):
        X = check_matrix(X)
        m, ks = self.n_segments, self.n_centroids
        if m < 1 or X.shape[1] % m != 0:
            raise BadPqShape(
                f"{m} segments do not evenly divide dimension {X.shape[1]}"
            )
        if not 1 <= ks <= 256:
            raise BadPqShape(f"{ks} centroids per segment, limit is 256")
        if X.shape[0] < ks:
            raise InsufficientVectors(
                f"{X.shape[0]} vectors cannot support {ks} centroids per segment"
            )
        dsub = X.shape[1] // m
        codebooks = np.empty((m, ks, dsub), dtype=np.float32)
        for s in range(m):
            piece = X[:, s * dsub : (s + 1) * dsub]
            km = LloydKMeans(
                n_clusters=ks,
                max_iter=self.max_iter,
                random_state=(self.random_state, s),
            ).fit(piece)
            codebooks[s] = km.cluster_centers_.astype(np.float32)
        self.codebooks_ = codebooks
        self.subvector_dim_ = dsub
        self.dim_ = X.shape[1]
        return self

    def _segments(self, X):
        X = check_matrix(X)
        if X.shape[1] != self.dim_:
            raise BadPqShape(
                f"expected dimension {self.dim_}, got {X.shape[1]}"
            )
        return X.reshape(X.shape[0], self.n_segments, self.subvector_dim_)

    def encode(self, X):
        """Quantize rows of X to uint8 codes of shape (n, n_segments).

        Nearest centroid is by L2 within each segment; equidistant
        centroids resolve to the smaller codebook index.
        """
        check_fitted(self, "codebooks_")
        parts = self._segments(X)
        books = self.codebooks_.astype(np.float64)
        codes = np.empty((parts.shape[0], self.n_segments), dtype=np.uint8)
        for s in range(self.n_segments):
            piece = parts[:, s, :]
            # squared distance without the per-row norm, constant under argmin
            d = np.einsum("kd,kd->k", books[s], books[s])[None, :] - 2.0 * (
                piece @ books[s].T
            )
            codes[:, s] = np.argmin(d, axis=1)
        return codes

    def decode(self, codes):
        """Reconstruct float32 vectors from codes by centroid concatenation."""
        check_fitted(self, "codebooks_")
        codes = np.asarray(codes)
        if codes.ndim == 1:
            codes = codes[None, :]
        if codes.shape[1] != self.n_segments:
            raise BadPqShape(
                f"codes have {codes.shape[1]} segments, expected {self.n_segments}"
            )
        self._check_code_range(codes)
        out = np.empty((codes.shape[0], self.dim_), dtype=np.float32)
        dsub = self.subvector_dim_
        for s in range(self.n_segments):
            out[:, s * dsub : (s + 1) * dsub] = self.codebooks_[s][codes[:, s]]
        return out

    def transform(self, X):
        return self.encode(X)

    def inverse_transform(self, codes):
        return self.decode(codes)

    def adc_table(self, query, metric="inner_product"):
        """Per-segment partial scores of one query against every codebook entry.

        Shape (n_segments, n_centroids) float64. For ``inner_product`` the
        cells are dot products and sum directly to the full score; for
        ``l2`` they are squared distances and the summed total still needs a
        square root (``lookup_scores`` applies it).
        """
        check_fitted(self, "codebooks_")
        check_metric(metric)
        q = np.asarray(query, dtype=np.float64).reshape(-1)
        if q.shape[0] != self.dim_:
            raise BadPqShape(f"query has dimension {q.shape[0]}, expected {self.dim_}")
        parts = q.reshape(self.n_segments, self.subvector_dim_)
        books = self.codebooks_.astype(np.float64)
        if metric == "inner_product":
            return np.einsum("skd,sd->sk", books, parts)
        diff = books - parts[:, None, :]
        return np.einsum("skd,skd->sk", diff, diff)

    def lookup_scores(self, codes, table, metric="inner_product"):
        """Score codes against a precomputed table; float64 per row."""
        check_metric(metric)
        codes = np.asarray(codes)
        if codes.ndim == 1:
            codes = codes[None, :]
        sums = table[np.arange(self.n_segments), codes].sum(axis=1)
        if metric == "l2":
            return np.sqrt(np.maximum(sums, 0.0))
        return sums

    def _check_code_range(self, codes):
        if codes.size and (
            int(codes.min()) < 0 or int(codes.max()) >= self.n_centroids
        ):
            raise CodeOutOfRange(f"code values must lie in [0, {self.n_centroids})")

    def adc_score(self, query, codes, metric="inner_product"):
        """Asymmetric score of one query against one or many codes."""
        codes = np.asarray(codes)
        self._check_code_range(codes)
        table = self.adc_table(query, metric)
        return self.lookup_scores(codes, table, metric)

    def reconstruction_error(self, X):
        """Mean L2 norm of X minus its decoded encoding."""
        X = check_matrix(X)
        rebuilt = self.decode(self.encode(X)).astype(np.float64)
        return float(np.sqrt(((X - rebuilt) ** 2).sum(axis=1)).mean())

    def bytes_per_vector(self):
        check_fitted(self, "codebooks_")
        return int(self.n_segments)
