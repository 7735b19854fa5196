"""Text-to-vector providers.

Two interchangeable embedders produce fixed-dimension vectors for text
segments: a deterministic feature-hashing embedder that needs no model
download, and a thin client for a remote sentence-encoder service speaking
a small JSON protocol. Both are estimator-shaped (stateless ``transform``)
so they drop into sklearn pipelines.
"""

from __future__ import annotations

import hashlib
import re
import struct
from dataclasses import dataclass

import numpy as np
import requests
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import DimensionMismatch, PartialResponse, RemoteUnavailable

MAX_TOKENS = 512
DEFAULT_DIM = 768

_WORD_RE = re.compile(r"\w+", re.UNICODE)


def tokenize(text: str, max_tokens: int = MAX_TOKENS) -> list[str]:
    """Lowercase word tokenizer.

    Splits on whitespace and punctuation boundaries, drops punctuation runs,
    and truncates to ``max_tokens``. Applying it to the space-joined output
    reproduces the output (idempotent on its own tokens).
    """
    tokens = _WORD_RE.findall(text.lower())
    return tokens[:max_tokens]


@dataclass(frozen=True)
class ProviderConfig:
    """Configuration for an embedding provider.

    kind is "hash" or "remote"; endpoint must be set exactly when
    kind is "remote".
    """

    kind: str = "hash"
    dimension: int = DEFAULT_DIM
    normalize: bool = True
    endpoint: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("hash", "remote"):
            raise ValueError(f"unknown provider kind: {self.kind!r}")
        if self.dimension <= 0:
            raise ValueError("dimension must be positive")
        if (self.endpoint is not None) != (self.kind == "remote"):
            raise ValueError("endpoint must be given iff kind is 'remote'")


def _token_bucket(token: str, seed: int, dimension: int) -> tuple[int, float]:
    # blake2b keyed by the seed: stable across processes, unlike hash()
    key = struct.pack("<q", seed)
    digest = hashlib.blake2b(token.encode("utf-8"), key=key, digest_size=9).digest()
    bucket = int.from_bytes(digest[:8], "little") % dimension
    sign = 1.0 if digest[8] & 1 else -1.0
    return bucket, sign


def hash_embed(
    tokens: list[str], dimension: int = DEFAULT_DIM, seed: int = 0
) -> np.ndarray:
    """Deterministic feature-hashed embedding of a token sequence.

    Each token occurrence adds a signed unit to its hashed bucket; each
    (predecessor, token) bigram adds a signed half. The bigram term makes
    the vector mildly order-sensitive while shared vocabulary dominates,
    so reordered text stays close in cosine. Nonzero results are
    L2-normalized; an empty token list gives the zero vector.
    """
    if dimension <= 0:
        raise ValueError("dimension must be positive")
    vec = np.zeros(dimension, dtype=np.float64)
    prev = None
    for token in tokens:
        bucket, sign = _token_bucket(token, seed, dimension)
        vec[bucket] += sign
        if prev is not None:
            bucket, sign = _token_bucket(prev + "\x1f" + token, seed, dimension)
            vec[bucket] += 0.5 * sign
        prev = token
    norm = np.linalg.norm(vec)
    if norm > 0:
        vec /= norm
    return vec


class HashEmbedder(BaseEstimator, TransformerMixin):
    """Feature-hashing text embedder, a pure function of (text, seed).

    ``normalize=False`` skips the final L2 normalization (the raw signed
    bucket counts are returned instead).
    """

    def __init__(self, dimension=DEFAULT_DIM, seed=0, normalize=True,
                 max_tokens=MAX_TOKENS):
        self.dimension = dimension
        self.seed = seed
        self.normalize = normalize
        self.max_tokens = max_tokens

    def fit(self, X=None, y=None):
        return self

    def embed(self, text: str) -> np.ndarray:
        tokens = tokenize(text, self.max_tokens)
        if self.normalize:
            return hash_embed(tokens, self.dimension, self.seed)
        vec = np.zeros(self.dimension, dtype=np.float64)
        prev = None
        for token in tokens:
            bucket, sign = _token_bucket(token, self.seed, self.dimension)
            vec[bucket] += sign
            if prev is not None:
                bucket, sign = _token_bucket(
                    prev + "\x1f" + token, self.seed, self.dimension)
                vec[bucket] += 0.5 * sign
            prev = token
        return vec

    def transform(self, texts) -> np.ndarray:
        """Embed a sequence of texts into an (n, dimension) array."""
        return np.array([self.embed(t) for t in texts], dtype=np.float64).reshape(
            len(texts), self.dimension
        )


class RemoteEmbedder(BaseEstimator, TransformerMixin):
    """Client for a remote embedding service.

    Wire format: POST ``endpoint`` with ``{"texts": [...]}``; the service
    answers 200 with ``{"vectors": [[...], ...]}``, one vector per input
    text, in order.
    """

    def __init__(self, endpoint, dimension=DEFAULT_DIM, normalize=True,
                 timeout=30.0):
        self.endpoint = endpoint
        self.dimension = dimension
        self.normalize = normalize
        self.timeout = timeout

    def fit(self, X=None, y=None):
        return self

    def embed(self, text: str) -> np.ndarray:
        return self.transform([text])[0]

    def transform(self, texts) -> np.ndarray:
        texts = list(texts)
        if not texts:
            return np.zeros((0, self.dimension), dtype=np.float64)
        try:
            resp = requests.post(
                self.endpoint, json={"texts": texts}, timeout=self.timeout
            )
            resp.raise_for_status()
            payload = resp.json()
        except (requests.RequestException, ValueError) as exc:
            raise RemoteUnavailable(
                f"embedding endpoint {self.endpoint} failed: {exc}"
            ) from exc
        vectors = payload.get("vectors")
        if vectors is None or len(vectors) != len(texts):
            got = 0 if vectors is None else len(vectors)
            raise PartialResponse(
                f"requested {len(texts)} vectors, endpoint returned {got}"
            )
        out = np.zeros((len(texts), self.dimension), dtype=np.float64)
        for i, vec in enumerate(vectors):
            if len(vec) != self.dimension:
                raise DimensionMismatch(
                    f"endpoint returned a length-{len(vec)} vector, "
                    f"expected {self.dimension}"
                )
            out[i] = vec
        if self.normalize:
            norms = np.linalg.norm(out, axis=1, keepdims=True)
            np.divide(out, norms, out=out, where=norms > 0)
        return out


def make_embedder(config: ProviderConfig):
    """Build the embedder described by a ProviderConfig."""
    if config.kind == "hash":
        return HashEmbedder(
            dimension=config.dimension, seed=config.seed,
            normalize=config.normalize,
        )
    return RemoteEmbedder(
        endpoint=config.endpoint, dimension=config.dimension,
        normalize=config.normalize,
    )


def embed_text(text: str, config: ProviderConfig) -> np.ndarray:
    """Embed one text with the provider described by ``config``."""
    return make_embedder(config).embed(text)
