"""End-to-end detection engine: embed, retrieve, classify, report.

The engine owns an embedding provider, a vector index over ingested
segments, and a trained pair classifier. A detect call embeds the query,
retrieves the top-k stored segments, and classifies each (stored, query)
pair, with the stored segment always on the original side of the pair.
"""

from __future__ import annotations

import os
import time

import numpy as np

from .config import EngineConfig, load_config, save_config
from .corpus import (
    LABEL_NAMES,
    PlagiarismLabel,
    build_dataset,
    read_corpus,
    read_dataset,
    write_corpus,
)
from .embedding import ProviderConfig, make_embedder
from .errors import EmptyIndex, EngineNotReady
from .index import FlatIndex, IvfIndex, load_index
from .mlp import PairClassifier, pair_features

CONFIG_FILE = "config.cfg"
CORPUS_FILE = "corpus.jsonl"
INDEX_FILE = "index.dat"
CLASSIFIER_FILE = "classifier.dat"


class DetectionReport:
    """Result of one detect call.

    candidates hold dicts with id, doc_id, text, score, label, label_name
    and probabilities, ordered by retrieval score. timings are wall-clock
    milliseconds for the embed, retrieve and classify stages.
    """

    def __init__(self, query_text, candidates, timings):
        self.query_text = query_text
        self.candidates = candidates
        self.timings = timings

    def to_dict(self):
        return {
            "query_text": self.query_text,
            "candidates": self.candidates,
            "timings": self.timings,
        }


def _provider_config(config: EngineConfig) -> ProviderConfig:
    return ProviderConfig(
        kind=config.provider_kind,
        dimension=config.dimension,
        normalize=config.normalize,
        endpoint=config.endpoint,
        seed=config.seed,
    )


class DetectionEngine:
    """Detection pipeline assembled from one EngineConfig.

    All seeded behavior (index training, classifier init, dataset
    assembly) derives from the single config seed.
    """

    def __init__(self, config: EngineConfig | None = None):
        self.config = config or EngineConfig()
        self.embedder = make_embedder(_provider_config(self.config))
        self.segments = {}
        self.index = None
        self.classifier = None
        self._embeddings = None  # rows align with sorted segment ids

    # -- corpus --------------------------------------------------------

    def ingest(self, segments):
        """Store segments, embed them, and rebuild the index. Returns count."""
        ordered = sorted(segments, key=lambda s: s.id)
        store = {s.id: s for s in ordered}
        if len(store) != len(ordered):
            raise ValueError("segment ids must be unique")
        if not ordered:
            self.segments = {}
            self.index = None
            self._embeddings = None
            return 0
        vectors = self.embedder.transform([s.text for s in ordered])
        ids = np.array([s.id for s in ordered], dtype=np.int64)
        index = self._build_index(vectors, ids)
        self.segments = store
        self._embeddings = vectors
        self.index = index
        return len(ordered)

    def ingest_file(self, path):
        return self.ingest(read_corpus(path))

    def _build_index(self, vectors, ids):
        cfg = self.config
        if cfg.nlist == 0:
            index = FlatIndex(dim=cfg.dimension, metric=cfg.metric)
            index.add(vectors, ids=ids)
            return index
        index = IvfIndex(
            n_lists=cfg.nlist,
            n_probe=min(cfg.nprobe, cfg.nlist),
            metric=cfg.metric,
            pq_segments=cfg.pq_segments,
            pq_centroids=cfg.pq_centroids,
            random_state=cfg.seed,
        )
        index.fit(vectors, ids=ids)
        return index

    # -- classifier ----------------------------------------------------

    def build_training_pairs(
        self, n_negative=1, n_imitation=1, n_shuffle=1, n_decoy=0
    ):
        """Labeled pairs over the ingested corpus, from the engine seed."""
        self._require_corpus()
        return build_dataset(
            sorted(self.segments.values(), key=lambda s: s.id),
            seed=self.config.seed,
            n_negative=n_negative,
            n_imitation=n_imitation,
            n_shuffle=n_shuffle,
            n_decoy=n_decoy,
        )

    def train_classifier(self, pairs):
        """Fit the pair classifier on (t1, t2, label) triples."""
        cfg = self.config
        h1 = self.embedder.transform([p.t1 for p in pairs])
        h2 = self.embedder.transform([p.t2 for p in pairs])
        X = pair_features(h1, h2)
        y = np.array([int(p.label) for p in pairs], dtype=np.int64)
        clf = PairClassifier(
            hidden_dim=cfg.hidden_dim,
            learning_rate=cfg.learning_rate,
            batch_size=cfg.batch_size,
            max_epochs=cfg.max_epochs,
            random_state=cfg.seed,
        )
        clf.fit(X, y)
        self.classifier = clf
        return clf.history_

    def train_from_file(self, path):
        return self.train_classifier(read_dataset(path))

    # -- detection -----------------------------------------------------

    def detect(self, query_text, k=None, n_probe=None):
        if self.index is None or not self.segments:
            raise EmptyIndex("no corpus has been ingested")
        if self.classifier is None:
            raise EngineNotReady("classifier has not been trained")
        k = self.config.k if k is None else int(k)
        if k < 1:
            raise ValueError("k must be >= 1")

        t0 = time.perf_counter()
        h_query = np.asarray(self.embedder.embed(query_text), dtype=np.float64)
        t1 = time.perf_counter()
        if isinstance(self.index, IvfIndex):
            if n_probe is None:
                n_probe = min(self.config.nprobe, self.index.n_lists)
            result = self.index.search(h_query, k=k, n_probe=n_probe)
        else:
            result = self.index.search(h_query, k=k)
        t2 = time.perf_counter()

        hits = list(result.hits)
        candidates = []
        if hits:
            ordered_ids = sorted(self.segments)
            rows = [ordered_ids.index(hit_id) for hit_id, _ in hits]
            h_stored = self._embeddings[rows]
            U = pair_features(h_stored, np.tile(h_query, (len(hits), 1)))
            P = self.classifier.predict_proba(U)
            labels = P.argmax(axis=1)
            for (hit_id, score), label, probs in zip(hits, labels, P):
                seg = self.segments[hit_id]
                candidates.append(
                    {
                        "id": int(hit_id),
                        "doc_id": seg.doc_id,
                        "text": seg.text,
                        "score": float(score),
                        "label": int(label),
                        "label_name": LABEL_NAMES[PlagiarismLabel(int(label))],
                        "probabilities": [float(p) for p in probs],
                    }
                )
        t3 = time.perf_counter()
        timings = {
            "embed_ms": (t1 - t0) * 1000.0,
            "retrieve_ms": (t2 - t1) * 1000.0,
            "classify_ms": (t3 - t2) * 1000.0,
        }
        return DetectionReport(query_text, candidates, timings)

    # -- persistence ---------------------------------------------------

    def save(self, directory):
        """Write config, corpus, index and classifier under one directory."""
        self._require_corpus()
        os.makedirs(directory, exist_ok=True)
        save_config(self.config, os.path.join(directory, CONFIG_FILE))
        write_corpus(
            sorted(self.segments.values(), key=lambda s: s.id),
            os.path.join(directory, CORPUS_FILE),
        )
        self.index.save(os.path.join(directory, INDEX_FILE))
        if self.classifier is not None:
            self.classifier.save(os.path.join(directory, CLASSIFIER_FILE))

    @classmethod
    def from_artifacts(cls, config, corpus_path, index_path, params_path=None):
        """Assemble an engine from separately saved pieces.

        Stored texts are re-embedded with the configured provider; for the
        hash provider this reproduces the ingested vectors bit for bit.
        """
        engine = cls(config)
        ordered = sorted(read_corpus(corpus_path), key=lambda s: s.id)
        engine.segments = {s.id: s for s in ordered}
        if ordered:
            engine._embeddings = engine.embedder.transform(
                [s.text for s in ordered]
            )
        engine.index = load_index(index_path)
        index_ids = set(int(i) for i in getattr(engine.index, "_ids", []))
        if not index_ids <= set(engine.segments):
            raise EngineNotReady(
                "index references segment ids missing from the corpus"
            )
        if params_path is not None and os.path.exists(params_path):
            engine.classifier = PairClassifier.load(params_path)
        return engine

    @classmethod
    def load(cls, directory):
        """Rebuild an engine from a directory written by save()."""
        return cls.from_artifacts(
            load_config(os.path.join(directory, CONFIG_FILE)),
            os.path.join(directory, CORPUS_FILE),
            os.path.join(directory, INDEX_FILE),
            os.path.join(directory, CLASSIFIER_FILE),
        )

    def _require_corpus(self):
        if not self.segments:
            raise EngineNotReady("no corpus has been ingested")
