"""Two-layer softmax classifier trained with hand-written backprop and Adam.

The network scores a pair of embeddings from their concatenation: a single
ReLU hidden layer followed by a 3-way softmax. Forward, gradients and the
optimizer are implemented directly in numpy; nothing here calls into an
autograd framework, since exercising this arithmetic is the point.

Parameter container format (little-endian): magic "SSMP", version u32,
input u32, hidden u32, classes u32, then W1, b1, W2, b2 as f32 in that
order, trailing crc32 u32 of all preceding bytes.
"""

import io
import logging
import struct
import zlib
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .errors import (
    CorruptFile,
    EmptyDataset,
    IoFailure,
    LabelOutOfRange,
    ShapeMismatch,
)
from .validation import check_matrix, check_fitted

logger = logging.getLogger("simscan.train")

PARAMS_MAGIC = b"SSMP"
PARAMS_VERSION = 1


def relu(x):
    return np.maximum(x, 0.0)


def softmax(z):
    """Row-wise softmax with max subtraction; accepts 1-D or 2-D input."""
    z = np.asarray(z, dtype=np.float64)
    single = z.ndim == 1
    if single:
        z = z[None, :]
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    p = e / e.sum(axis=1, keepdims=True)
    return p[0] if single else p


def one_hot(labels, n_classes):
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise LabelOutOfRange(f"labels must lie in [0, {n_classes})")
    out = np.zeros((labels.shape[0], n_classes), dtype=np.float64)
    out[np.arange(labels.shape[0]), labels] = 1.0
    return out


def cross_entropy(p, q):
    """Mean negative log-likelihood of one-hot targets q under p.

    Probabilities are floored at 1e-12 before the log, so a confident
    wrong answer costs about 27.6 nats instead of infinity.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.ndim == 1:
        p, q = p[None, :], q[None, :]
    per_row = -(q * np.log(np.maximum(p, 1e-12))).sum(axis=1)
    return float(per_row.mean())


@dataclass
class MlpParams:
    """Learnable weights: input -> hidden (ReLU) -> classes (softmax)."""

    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray

    @property
    def input_dim(self):
        return int(self.W1.shape[0])

    @property
    def hidden_dim(self):
        return int(self.W1.shape[1])

    @property
    def n_classes(self):
        return int(self.W2.shape[1])

    def arrays(self):
        return (self.W1, self.b1, self.W2, self.b2)

    def copy(self):
        return MlpParams(*(a.copy() for a in self.arrays()))


def init_params(input_dim, hidden_dim, n_classes, seed=0):
    """Uniform(-a, a) weights with a = sqrt(6 / (fan_in + fan_out)); zero biases."""
    rng = np.random.default_rng(seed)
    a1 = np.sqrt(6.0 / (input_dim + hidden_dim))
    a2 = np.sqrt(6.0 / (hidden_dim + n_classes))
    return MlpParams(
        W1=rng.uniform(-a1, a1, size=(input_dim, hidden_dim)),
        b1=np.zeros(hidden_dim),
        W2=rng.uniform(-a2, a2, size=(hidden_dim, n_classes)),
        b2=np.zeros(n_classes),
    )


def forward(params, U):
    """Class probabilities for feature rows U, plus intermediates for backward."""
    U = check_matrix(U, name="features")
    if U.shape[1] != params.input_dim:
        raise ShapeMismatch(
            f"features have dim {U.shape[1]}, parameters expect {params.input_dim}"
        )
    Z1 = U @ params.W1 + params.b1
    H = relu(Z1)
    logits = H @ params.W2 + params.b2
    P = softmax(logits)
    cache = {"U": U, "Z1": Z1, "H": H, "P": P}
    return P, cache


def backward(params, cache, Q):
    """Gradients of the batch-mean cross-entropy; logit gradient is P - Q."""
    U, Z1, H, P = cache["U"], cache["Z1"], cache["H"], cache["P"]
    Q = np.asarray(Q, dtype=np.float64)
    if Q.shape != P.shape:
        raise ShapeMismatch(f"targets {Q.shape} do not match predictions {P.shape}")
    n = U.shape[0]
    dZ2 = (P - Q) / n
    dW2 = H.T @ dZ2
    db2 = dZ2.sum(axis=0)
    dH = dZ2 @ params.W2.T
    dZ1 = dH * (Z1 > 0)
    dW1 = U.T @ dZ1
    db1 = dZ1.sum(axis=0)
    return MlpParams(W1=dW1, b1=db1, W2=dW2, b2=db2)


@dataclass
class TrainConfig:
    learning_rate: float = 0.001
    batch_size: int = 1024
    max_epochs: int = 20
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")


@dataclass
class AdamState:
    """First/second moment estimates per parameter tensor, plus step count."""

    m: list = field(default_factory=list)
    v: list = field(default_factory=list)
    t: int = 0

    @classmethod
    def for_params(cls, params):
        return cls(
            m=[np.zeros_like(a) for a in params.arrays()],
            v=[np.zeros_like(a) for a in params.arrays()],
            t=0,
        )


def adam_step(params, grads, state, config):
    """One bias-corrected Adam update; returns new params, mutates state."""
    state.t += 1
    b1, b2 = config.adam_beta1, config.adam_beta2
    out = []
    for i, (w, g) in enumerate(zip(params.arrays(), grads.arrays())):
        state.m[i] = b1 * state.m[i] + (1 - b1) * g
        state.v[i] = b2 * state.v[i] + (1 - b2) * g * g
        m_hat = state.m[i] / (1 - b1**state.t)
        v_hat = state.v[i] / (1 - b2**state.t)
        out.append(w - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.adam_eps))
    return MlpParams(*out)


def train(U, labels, config=None, hidden_dim=512, n_classes=3):
    """Fit parameters on feature rows U with integer labels.

    Each epoch reshuffles with a seeded generator and walks mini-batches of
    ``config.batch_size`` (the final batch may be smaller). Returns the
    parameters and a history list with one dict per epoch holding the
    sample-weighted mean loss and training accuracy.
    """
    config = config or TrainConfig()
    U = check_matrix(U, name="features")
    if U.shape[0] == 0:
        raise EmptyDataset("training requires at least one sample")
    Q = one_hot(labels, n_classes)
    if Q.shape[0] != U.shape[0]:
        raise ShapeMismatch(
            f"{Q.shape[0]} labels for {U.shape[0]} feature rows"
        )
    params = init_params(U.shape[1], hidden_dim, n_classes, seed=config.seed)
    state = AdamState.for_params(params)
    shuffler = np.random.default_rng(config.seed)
    history = []
    n = U.shape[0]
    for epoch in range(1, config.max_epochs + 1):
        order = shuffler.permutation(n)
        loss_sum = 0.0
        hit_sum = 0
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            P, cache = forward(params, U[batch])
            loss_sum += cross_entropy(P, Q[batch]) * batch.shape[0]
            hit_sum += int((np.argmax(P, axis=1) == np.argmax(Q[batch], axis=1)).sum())
            grads = backward(params, cache, Q[batch])
            params = adam_step(params, grads, state, config)
        entry = {
            "epoch": epoch,
            "loss": loss_sum / n,
            "accuracy": hit_sum / n,
        }
        history.append(entry)
        logger.info(
            "epoch %d loss %.6f accuracy %.4f",
            epoch,
            entry["loss"],
            entry["accuracy"],
        )
    # snap to the storage precision so save -> load is an exact identity
    params = MlpParams(
        *(a.astype("<f4").astype(np.float64) for a in params.arrays())
    )
    return params, history


def predict(params, U):
    """Most likely class per row, ties to the smaller index, with probabilities."""
    P, _ = forward(params, U)
    return np.argmax(P, axis=1), P


def save_params(params, path):
    buf = io.BytesIO()
    buf.write(PARAMS_MAGIC)
    buf.write(struct.pack("<I", PARAMS_VERSION))
    buf.write(
        struct.pack(
            "<III", params.input_dim, params.hidden_dim, params.n_classes
        )
    )
    for a in params.arrays():
        buf.write(a.astype("<f4").tobytes())
    body = buf.getvalue()
    try:
        with open(path, "wb") as fh:
            fh.write(body)
            fh.write(struct.pack("<I", zlib.crc32(body) & 0xFFFFFFFF))
    except OSError as exc:
        raise IoFailure(f"cannot write parameters to {path}: {exc}") from exc


def load_params(path):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read parameters from {path}: {exc}") from exc
    if len(data) < 24:
        raise CorruptFile("file too short to be a parameter container")
    body, stored = data[:-4], struct.unpack("<I", data[-4:])[0]
    if body[:4] != PARAMS_MAGIC:
        raise CorruptFile("bad magic bytes")
    if zlib.crc32(body) & 0xFFFFFFFF != stored:
        raise CorruptFile("checksum mismatch")
    version = struct.unpack("<I", body[4:8])[0]
    if version != PARAMS_VERSION:
        raise CorruptFile(f"unsupported format version {version}")
    input_dim, hidden_dim, n_classes = struct.unpack("<III", body[8:20])
    sizes = [
        input_dim * hidden_dim,
        hidden_dim,
        hidden_dim * n_classes,
        n_classes,
    ]
    if len(body) != 20 + 4 * sum(sizes):
        raise CorruptFile("parameter payload does not match declared shapes")
    arrays = []
    offset = 20
    for count in sizes:
        arrays.append(
            np.frombuffer(body, dtype="<f4", count=count, offset=offset)
            .astype(np.float64)
        )
        offset += 4 * count
    return MlpParams(
        W1=arrays[0].reshape(input_dim, hidden_dim),
        b1=arrays[1],
        W2=arrays[2].reshape(hidden_dim, n_classes),
        b2=arrays[3],
    )


class PairClassifier(BaseEstimator, ClassifierMixin):
    """Estimator wrapper over the raw training loop.

    ``fit`` expects X as pre-concatenated pair features (each row is the
    embedding of the first text followed by the embedding of the second)
    and integer labels y in [0, n_classes).
    """

    def __init__(
        self,
        hidden_dim=512,
        n_classes=3,
        learning_rate=0.001,
        batch_size=1024,
        max_epochs=20,
        random_state=0,
    ):
        self.hidden_dim = hidden_dim
        self.n_classes = n_classes
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.random_state = random_state

    def _config(self):
        return TrainConfig(
            learning_rate=self.learning_rate,
            batch_size=self.batch_size,
            max_epochs=self.max_epochs,
            seed=self.random_state,
        )

    def fit(self, X, y):
        self.params_, self.history_ = train(
            X,
            y,
            config=self._config(),
            hidden_dim=self.hidden_dim,
            n_classes=self.n_classes,
        )
        return self

    def predict(self, X):
        check_fitted(self, "params_")
        labels, _ = predict(self.params_, X)
        return labels

    def predict_proba(self, X):
        check_fitted(self, "params_")
        _, P = predict(self.params_, X)
        return P

    def save(self, path):
        check_fitted(self, "params_")
        save_params(self.params_, path)

    @classmethod
    def load(cls, path):
        params = load_params(path)
        model = cls(hidden_dim=params.hidden_dim, n_classes=params.n_classes)
        model.params_ = params
        model.history_ = []
        return model


def pair_features(h1, h2):
    """Concatenate two embedding matrices (or vectors) row-wise."""
    h1 = np.asarray(h1, dtype=np.float64)
    h2 = np.asarray(h2, dtype=np.float64)
    if h1.shape != h2.shape:
        raise ShapeMismatch(f"embedding shapes differ: {h1.shape} vs {h2.shape}")
    return np.concatenate([h1, h2], axis=-1)
