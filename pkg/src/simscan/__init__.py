"""Similarity scanning toolkit: embeddings, vector search, pair classification."""

from .config import EngineConfig, load_config, save_config
from .corpus import (
    LABEL_NAMES,
    PlagiarismLabel,
    Segment,
    TextPair,
    build_dataset,
    generate_corpus,
    read_corpus,
    read_dataset,
    rule_paraphrase,
    segment_document,
    shuffle_plagiarize,
    split_dataset,
    write_corpus,
    write_dataset,
)
from .embedding import HashEmbedder, ProviderConfig, RemoteEmbedder, make_embedder
from .engine import DetectionEngine, DetectionReport
from .errors import SimscanError
from .index import FlatIndex, IvfIndex, load_index, save_index
from .metrics import (
    ConfusionMatrix,
    MetricsReport,
    evaluate_classifier,
    evaluate_retrieval,
    precision_recall_f1,
)
from .mlp import PairClassifier, pair_features
from .pq import ProductQuantizer
from .server import create_app, serve

__version__ = "0.1.0"

__all__ = [
    "ConfusionMatrix",
    "DetectionEngine",
    "DetectionReport",
    "EngineConfig",
    "FlatIndex",
    "HashEmbedder",
    "IvfIndex",
    "LABEL_NAMES",
    "MetricsReport",
    "PairClassifier",
    "PlagiarismLabel",
    "ProductQuantizer",
    "ProviderConfig",
    "RemoteEmbedder",
    "Segment",
    "SimscanError",
    "TextPair",
    "build_dataset",
    "create_app",
    "evaluate_classifier",
    "evaluate_retrieval",
    "generate_corpus",
    "load_config",
    "load_index",
    "make_embedder",
    "pair_features",
    "precision_recall_f1",
    "read_corpus",
    "read_dataset",
    "rule_paraphrase",
    "save_config",
    "save_index",
    "segment_document",
    "serve",
    "shuffle_plagiarize",
    "split_dataset",
    "write_corpus",
    "write_dataset",
    "__version__",
]
