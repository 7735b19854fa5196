"""Vector indexes: exact flat scan and inverted-file search with optional PQ.

Stored vectors are float32; every score is computed in float64 after an
exact upcast, so results do not change across a save/load round trip.

On-disk container (little-endian throughout):

    magic "SSIX" | version u32 | metric u8 | dim u32 | nlist u32 | pq u8
    [if pq: m u32, dsub u32, ks u32, codebooks f32 m*ks*dsub]
    centroids f32 nlist*dim
    per list: length u64, then length entries of (id u64, payload)
    crc32 u32 of all preceding bytes

The payload is the full f32 vector when pq is 0, otherwise the m-byte code.
``nlist = 0`` marks a flat index: no centroids, exactly one list holding
every vector. Metric codes: 0 inner_product, 1 l2.
"""

import io
import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CorruptFile,
    EmptyIndex,
    InsufficientVectors,
    IoFailure,
)
from .kmeans import LloydKMeans
from .pq import ProductQuantizer
from .similarity import (
    check_metric,
    higher_is_better,
    rank_hits,
    score_block,
    score_vector,
)
from .validation import check_matrix, check_vector

MAGIC = b"SSIX"
FORMAT_VERSION = 1
_METRIC_CODE = {"inner_product": 0, "l2": 1}
_METRIC_NAME = {v: k for k, v in _METRIC_CODE.items()}


@dataclass
class SearchResult:
    """Ranked (id, score) pairs for one query."""

    hits: list = field(default_factory=list)
    k_requested: int = 0

    def ids(self):
        return [h[0] for h in self.hits]

    def scores(self):
        return [h[1] for h in self.hits]


def _as_ids(ids, n):
    if ids is None:
        return np.arange(n, dtype=np.int64)
    ids = np.asarray(ids, dtype=np.int64).reshape(-1)
    if ids.shape[0] != n:
        raise ValueError(f"{ids.shape[0]} ids for {n} vectors")
    if ids.size and ids.min() < 0:
        raise ValueError("ids must be nonnegative")
    return ids


class FlatIndex:
    """Exhaustive exact-scoring index."""

    def __init__(self, dim, metric="inner_product"):
        self.dim = int(dim)
        self.metric = check_metric(metric)
        self._ids = np.empty(0, dtype=np.int64)
        self._vecs = np.empty((0, self.dim), dtype=np.float32)
        self._dense64 = self._vecs.astype(np.float64)

    @property
    def count(self):
        return int(self._ids.shape[0])

    def add(self, vectors, ids=None):
        X = check_matrix(vectors).astype(np.float32)
        if X.shape[1] != self.dim:
            raise ValueError(f"vectors have dim {X.shape[1]}, index has {self.dim}")
        start = self.count
        ids = _as_ids(ids, X.shape[0]) if ids is not None else np.arange(
            start, start + X.shape[0], dtype=np.int64
        )
        self._ids = np.concatenate([self._ids, ids])
        self._vecs = np.vstack([self._vecs, X])
        self._dense64 = self._vecs.astype(np.float64)
        return self

    def search(self, query, k):
        if k < 1:
            raise ValueError("k must be >= 1")
        if self.count == 0:
            raise EmptyIndex("flat index holds no vectors")
        q = check_vector(query, dim=self.dim, name="query")
        scores = score_vector(q, self._dense64, self.metric)
        return SearchResult(
            hits=rank_hits(self._ids, scores, self.metric, k),
            k_requested=int(k),
        )

    def save(self, path):
        save_index(self, path)


class IvfIndex:
    """Inverted-file index: k-means cells, optionally PQ-compressed payloads.

    ``fit`` trains the coarse quantizer on the given vectors and stores all
    of them; ``add`` routes further vectors into the trained cells. With
    ``pq_segments`` set, payloads are one-byte-per-segment codes scored by
    table lookup instead of full vectors.
    """

    def __init__(
        self,
        n_lists=100,
        n_probe=20,
        metric="inner_product",
        pq_segments=None,
        pq_centroids=256,
        random_state=0,
        max_iter=25,
    ):
        self.n_lists = int(n_lists)
        self.n_probe = int(n_probe)
        self.metric = check_metric(metric)
        self.pq_segments = pq_segments
        self.pq_centroids = int(pq_centroids)
        self.random_state = random_state
        self.max_iter = max_iter
        self._centroids = None
        self._pq = None
        self._ids = None
        self._payload = None
        self._offsets = None

    @property
    def count(self):
        return 0 if self._ids is None else int(self._ids.shape[0])

    @property
    def dim(self):
        return None if self._centroids is None else int(self._centroids.shape[1])

    def fit(self, X, ids=None):
        X = check_matrix(X)
        if self.n_lists < 1:
            raise ValueError("n_lists must be >= 1")
        if X.shape[0] < self.n_lists:
            raise InsufficientVectors(
                f"{X.shape[0]} vectors cannot fill {self.n_lists} lists"
            )
        rng = np.random.default_rng(self.random_state)
        coarse_seed = int(rng.integers(2**31))
        pq_seed = int(rng.integers(2**31))
        km = LloydKMeans(
            n_clusters=self.n_lists,
            max_iter=self.max_iter,
            random_state=coarse_seed,
        ).fit(X)
        self._centroids = km.cluster_centers_.astype(np.float32)
        self._centroids64 = self._centroids.astype(np.float64)
        if self.pq_segments is not None:
            self._pq = ProductQuantizer(
                n_segments=int(self.pq_segments),
                n_centroids=self.pq_centroids,
                random_state=pq_seed,
                max_iter=self.max_iter,
            ).fit(X)
        self._ids = np.empty(0, dtype=np.int64)
        width = self._pq.n_segments if self._pq else X.shape[1]
        dtype = np.uint8 if self._pq else np.float32
        self._payload = np.empty((0, width), dtype=dtype)
        self._offsets = np.zeros(self.n_lists + 1, dtype=np.int64)
        return self.add(X, ids)

    def _assign(self, X64):
        scores = score_block(X64, self._centroids64, self.metric)
        if higher_is_better(self.metric):
            return np.argmax(scores, axis=1)
        return np.argmin(scores, axis=1)

    def add(self, vectors, ids=None):
        if self._centroids is None:
            raise RuntimeError("IvfIndex is not fitted; call fit() first")
        X = check_matrix(vectors)
        if X.shape[1] != self.dim:
            raise ValueError(f"vectors have dim {X.shape[1]}, index has {self.dim}")
        start = self.count
        new_ids = _as_ids(ids, X.shape[0]) if ids is not None else np.arange(
            start, start + X.shape[0], dtype=np.int64
        )
        cells = self._assign(X)
        payload = self._pq.encode(X) if self._pq else X.astype(np.float32)
        self._regroup(
            np.concatenate([self._ids, new_ids]),
            np.vstack([self._payload, payload]),
            np.concatenate([self._cells(), cells]),
        )
        return self

    def _cells(self):
        cells = np.empty(self.count, dtype=np.int64)
        for c in range(self.n_lists):
            cells[self._offsets[c] : self._offsets[c + 1]] = c
        return cells

    def _regroup(self, all_ids, all_payload, cells):
        # stable sort keeps insertion order within a cell
        order = np.argsort(cells, kind="stable")
        self._ids = all_ids[order]
        self._payload = all_payload[order]
        counts = np.bincount(cells, minlength=self.n_lists)
        self._offsets = np.concatenate(
            [[0], np.cumsum(counts)]
        ).astype(np.int64)
        if not self._pq:
            self._payload64 = self._payload.astype(np.float64)

    def search(self, query, k, n_probe=None):
        if k < 1:
            raise ValueError("k must be >= 1")
        if self.count == 0:
            raise EmptyIndex("inverted-file index holds no vectors")
        n_probe = self.n_probe if n_probe is None else int(n_probe)
        if not 1 <= n_probe <= self.n_lists:
            raise ValueError(f"n_probe must lie in [1, {self.n_lists}]")
        q = check_vector(query, dim=self.dim, name="query")
        cell_scores = score_vector(q, self._centroids64, self.metric)
        key = -cell_scores if higher_is_better(self.metric) else cell_scores
        probed = np.lexsort((np.arange(self.n_lists), key))[:n_probe]
        spans = [
            (int(self._offsets[c]), int(self._offsets[c + 1]))
            for c in probed
            if self._offsets[c] < self._offsets[c + 1]
        ]
        if not spans:
            return SearchResult(hits=[], k_requested=int(k))
        ids = np.concatenate([self._ids[a:b] for a, b in spans])
        if self._pq:
            members = np.concatenate([np.arange(a, b) for a, b in spans])
            table = self._pq.adc_table(q, self.metric)
            scores = self._pq.lookup_scores(
                self._payload[members], table, self.metric
            )
        else:
            # cells are contiguous payload runs, so probing scores slices
            # in place instead of gathering rows into a copy
            scores = np.concatenate(
                [score_vector(q, self._payload64[a:b], self.metric) for a, b in spans]
            )
        return SearchResult(
            hits=rank_hits(ids, scores, self.metric, k),
            k_requested=int(k),
        )

    def save(self, path):
        save_index(self, path)


def _write_entries(buf, ids, payload):
    n = ids.shape[0]
    buf.write(struct.pack("<Q", n))
    if not n:
        return
    id_bytes = ids.astype("<u8").reshape(n, 1).view(np.uint8)
    if payload.dtype == np.float32:
        body = payload.astype("<f4").view(np.uint8).reshape(n, -1)
    else:
        body = np.ascontiguousarray(payload).reshape(n, -1)
    buf.write(np.hstack([id_bytes, body]).tobytes())


def save_index(index, path):
    """Serialize a FlatIndex or IvfIndex into the container format."""
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<I", FORMAT_VERSION))
    buf.write(struct.pack("<B", _METRIC_CODE[index.metric]))
    if isinstance(index, FlatIndex):
        buf.write(struct.pack("<I", index.dim))
        buf.write(struct.pack("<I", 0))
        buf.write(struct.pack("<B", 0))
        _write_entries(buf, index._ids, index._vecs)
    else:
        if index._centroids is None:
            raise RuntimeError("IvfIndex is not fitted; nothing to save")
        buf.write(struct.pack("<I", index.dim))
        buf.write(struct.pack("<I", index.n_lists))
        pq = index._pq
        buf.write(struct.pack("<B", 1 if pq else 0))
        if pq:
            buf.write(
                struct.pack(
                    "<III", pq.n_segments, pq.subvector_dim_, pq.n_centroids
                )
            )
            buf.write(pq.codebooks_.astype("<f4").tobytes())
        buf.write(index._centroids.astype("<f4").tobytes())
        for c in range(index.n_lists):
            lo, hi = index._offsets[c], index._offsets[c + 1]
            _write_entries(buf, index._ids[lo:hi], index._payload[lo:hi])
    body = buf.getvalue()
    checksum = struct.pack("<I", zlib.crc32(body) & 0xFFFFFFFF)
    try:
        with open(path, "wb") as fh:
            fh.write(body)
            fh.write(checksum)
    except OSError as exc:
        raise IoFailure(f"cannot write index to {path}: {exc}") from exc


class _Cursor:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def take(self, n):
        if self.pos + n > len(self.data):
            raise CorruptFile("index file ends before its declared content")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u8(self):
        return struct.unpack("<B", self.take(1))[0]

    def u32(self):
        return struct.unpack("<I", self.take(4))[0]

    def u64(self):
        return struct.unpack("<Q", self.take(8))[0]

    def f32_array(self, count):
        raw = self.take(4 * count)
        return np.frombuffer(raw, dtype="<f4", count=count).copy()


def _read_entries(cur, payload_bytes):
    n = cur.u64()
    if n > len(cur.data):
        raise CorruptFile("list length exceeds file size")
    stride = 8 + payload_bytes
    raw = cur.take(n * stride)
    block = np.frombuffer(raw, dtype=np.uint8, count=n * stride)
    block = block.reshape(n, stride) if n else block.reshape(0, stride)
    ids = block[:, :8].copy().view("<u8").reshape(-1).astype(np.int64)
    payload = block[:, 8:].copy()
    return ids, payload


def load_index(path):
    """Read a container file back into a FlatIndex or IvfIndex."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read index from {path}: {exc}") from exc
    if len(data) < 22:
        raise CorruptFile("file too short to be an index container")
    body, stored = data[:-4], struct.unpack("<I", data[-4:])[0]
    if body[:4] != MAGIC:
        raise CorruptFile("bad magic bytes")
    if zlib.crc32(body) & 0xFFFFFFFF != stored:
        raise CorruptFile("checksum mismatch")
    cur = _Cursor(body)
    cur.take(4)
    version = cur.u32()
    if version != FORMAT_VERSION:
        raise CorruptFile(f"unsupported format version {version}")
    metric_code = cur.u8()
    if metric_code not in _METRIC_NAME:
        raise CorruptFile(f"unknown metric code {metric_code}")
    metric = _METRIC_NAME[metric_code]
    dim = cur.u32()
    nlist = cur.u32()
    has_pq = cur.u8()
    if has_pq not in (0, 1):
        raise CorruptFile(f"bad pq flag {has_pq}")
    if nlist == 0:
        if has_pq:
            raise CorruptFile("flat layout cannot carry pq codebooks")
        ids, payload = _read_entries(cur, 4 * dim)
        if cur.pos != len(body):
            raise CorruptFile("unexpected trailing bytes")
        index = FlatIndex(dim, metric=metric)
        index._ids = ids
        index._vecs = payload.view("<f4").reshape(-1, dim).copy()
        index._dense64 = index._vecs.astype(np.float64)
        return index
    pq = None
    if has_pq:
        m, dsub, ks = cur.u32(), cur.u32(), cur.u32()
        if m * dsub != dim or not 1 <= ks <= 256:
            raise CorruptFile("inconsistent pq geometry")
        books = cur.f32_array(m * ks * dsub).reshape(m, ks, dsub)
        pq = ProductQuantizer(n_segments=m, n_centroids=ks)
        pq.codebooks_ = books
        pq.subvector_dim_ = int(dsub)
        pq.dim_ = int(dim)
    centroids = cur.f32_array(nlist * dim).reshape(nlist, dim)
    payload_bytes = pq.n_segments if pq else 4 * dim
    ids_parts, payload_parts, cells = [], [], []
    for c in range(nlist):
        ids_c, payload_c = _read_entries(cur, payload_bytes)
        ids_parts.append(ids_c)
        payload_parts.append(payload_c)
        cells.append(np.full(ids_c.shape[0], c, dtype=np.int64))
    if cur.pos != len(body):
        raise CorruptFile("unexpected trailing bytes")
    index = IvfIndex(
        n_lists=nlist,
        n_probe=min(20, nlist),
        metric=metric,
        pq_segments=pq.n_segments if pq else None,
        pq_centroids=pq.n_centroids if pq else 256,
    )
    index._centroids = centroids
    index._centroids64 = centroids.astype(np.float64)
    index._pq = pq
    all_ids = np.concatenate(ids_parts)
    raw = np.vstack(payload_parts)
    if pq:
        payload = raw.reshape(-1, pq.n_segments)
    else:
        payload = raw.copy().view("<f4").reshape(-1, dim)
    index._ids = np.empty(0, dtype=np.int64)
    index._payload = payload[:0]
    index._offsets = np.zeros(nlist + 1, dtype=np.int64)
    index._regroup(all_ids, payload, np.concatenate(cells))
    return index
