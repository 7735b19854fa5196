"""Confusion-matrix metrics and the retrieval success-rate protocol.

Classification quality is reported one-vs-rest per class and aggregated
either support-weighted (default) or macro. Division by zero never raises:
an undefined precision or recall becomes 0 and the affected class is
flagged in the report.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyDataset, EmptyMatrix, EmptyQuerySet, LabelOutOfRange

AGGREGATIONS = ("weighted", "macro")


class ConfusionMatrix:
    """C x C counts; rows are true classes, columns are predictions."""

    def __init__(self, n_classes=3):
        if n_classes < 1:
            raise ValueError("n_classes must be >= 1")
        self.n_classes = int(n_classes)
        self.counts = np.zeros((n_classes, n_classes), dtype=np.int64)

    def _check(self, label):
        label = int(label)
        if not 0 <= label < self.n_classes:
            raise LabelOutOfRange(
                f"label {label} outside [0, {self.n_classes})"
            )
        return label

    def accumulate(self, true_label, predicted_label):
        self.counts[self._check(true_label), self._check(predicted_label)] += 1
        return self

    def accumulate_many(self, y_true, y_pred):
        y_true = np.asarray(y_true).reshape(-1)
        y_pred = np.asarray(y_pred).reshape(-1)
        if y_true.shape != y_pred.shape:
            raise ValueError("true and predicted label counts differ")
        for t, p in zip(y_true, y_pred):
            self.accumulate(t, p)
        return self

    def merge(self, other):
        """Elementwise sum, for sharded evaluation."""
        if other.n_classes != self.n_classes:
            raise ValueError("cannot merge matrices with different class counts")
        merged = ConfusionMatrix(self.n_classes)
        merged.counts = self.counts + other.counts
        return merged

    @property
    def total(self):
        return int(self.counts.sum())

    def accuracy(self):
        if self.total == 0:
            raise EmptyMatrix("no samples accumulated")
        return float(np.trace(self.counts) / self.total)


@dataclass
class MetricsReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    aggregation: str
    per_class: list = field(default_factory=list)

    def to_dict(self):
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "aggregation": self.aggregation,
            "per_class": self.per_class,
        }


def precision_recall_f1(matrix, aggregation="weighted"):
    """One-vs-rest metrics for every class plus the aggregate report."""
    if aggregation not in AGGREGATIONS:
        raise ValueError(f"aggregation must be one of {AGGREGATIONS}")
    if matrix.total == 0:
        raise EmptyMatrix("no samples accumulated")
    counts = matrix.counts
    per_class = []
    for c in range(matrix.n_classes):
        tp = int(counts[c, c])
        fp = int(counts[:, c].sum() - tp)
        fn = int(counts[c, :].sum() - tp)
        support = tp + fn
        undefined = []
        if tp + fp == 0:
            precision = 0.0
            undefined.append("precision")
        else:
            precision = tp / (tp + fp)
        if tp + fn == 0:
            recall = 0.0
            undefined.append("recall")
        else:
            recall = tp / (tp + fn)
        if precision + recall == 0:
            f1 = 0.0
        else:
            f1 = 2 * precision * recall / (precision + recall)
        per_class.append(
            {
                "label": c,
                "precision": precision,
                "recall": recall,
                "f1": f1,
                "support": support,
                "undefined": undefined,
            }
        )
    if aggregation == "weighted":
        weights = np.array([e["support"] for e in per_class], dtype=np.float64)
        weights = weights / weights.sum()
    else:
        weights = np.full(matrix.n_classes, 1.0 / matrix.n_classes)
    agg = {
        name: float(
            sum(w * e[name] for w, e in zip(weights, per_class))
        )
        for name in ("precision", "recall", "f1")
    }
    return MetricsReport(
        accuracy=matrix.accuracy(),
        precision=agg["precision"],
        recall=agg["recall"],
        f1=agg["f1"],
        aggregation=aggregation,
        per_class=per_class,
    )


def evaluate_classifier(classifier, X, y, aggregation="weighted"):
    """Predict on feature rows X, accumulate confusion, report metrics."""
    X = np.asarray(X)
    y = np.asarray(y).reshape(-1)
    if X.shape[0] == 0:
        raise EmptyDataset("evaluation requires at least one sample")
    predicted = np.asarray(classifier.predict(X)).reshape(-1)
    n_classes = getattr(classifier, "n_classes", None) or int(
        max(y.max(), predicted.max())
    ) + 1
    matrix = ConfusionMatrix(n_classes).accumulate_many(y, predicted)
    return precision_recall_f1(matrix, aggregation), matrix


@dataclass
class RetrievalEvalResult:
    strategy: str
    success_rate: float
    time_ms_per_vector: float
    dim: int
    bytes_per_vector: int = None
    subvector_dim: int = None

    def to_dict(self):
        out = {
            "strategy": self.strategy,
            "success_rate": self.success_rate,
            "time_ms_per_vector": self.time_ms_per_vector,
            "dim": self.dim,
        }
        if self.bytes_per_vector is not None:
            out["bytes_per_vector"] = self.bytes_per_vector
            out["subvector_dim"] = self.subvector_dim
        return out


def _strategy_name(index):
    from .index import FlatIndex

    if isinstance(index, FlatIndex):
        return "flat"
    return "ivf_pq" if index._pq is not None else "ivf"


WARMUP_QUERIES = 10


def evaluate_retrieval(index, expected_ids, queries, k=10, n_probe=None):
    """Fraction of queries whose expected id lands in the top-k, with timing.

    Every query is timed on a monotonic clock; the first WARMUP_QUERIES
    timings are dropped from the mean when enough queries exist. The
    success rate always covers all queries.
    """
    queries = np.asarray(queries, dtype=np.float64)
    expected_ids = np.asarray(expected_ids).reshape(-1)
    if queries.ndim != 2 or queries.shape[0] == 0:
        raise EmptyQuerySet("retrieval evaluation needs a nonempty query matrix")
    if expected_ids.shape[0] != queries.shape[0]:
        raise ValueError("one expected id is required per query")
    kwargs = {}
    if n_probe is not None:
        kwargs["n_probe"] = n_probe
    successes = 0
    timings = []
    for expected, q in zip(expected_ids, queries):
        start = time.perf_counter()
        result = index.search(q, k, **kwargs)
        timings.append(time.perf_counter() - start)
        if int(expected) in result.ids():
            successes += 1
    timed = timings[WARMUP_QUERIES:] if len(timings) > WARMUP_QUERIES else timings
    result = RetrievalEvalResult(
        strategy=_strategy_name(index),
        success_rate=successes / queries.shape[0],
        time_ms_per_vector=float(np.mean(timed) * 1000.0),
        dim=int(queries.shape[1]),
    )
    pq = getattr(index, "_pq", None)
    if pq is not None:
        result.bytes_per_vector = pq.bytes_per_vector()
        result.subvector_dim = pq.subvector_dim_
    return result
