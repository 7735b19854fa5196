"""Engine configuration: defaults, key=value files, dict round-trips.

The file format is one dotted key per line with an equals sign, comments
starting with #. Values are coerced in order: int, float, booleans
true/false, quoted string, bare string. The word "none" clears an option.

    provider.kind = hash
    provider.dimension = 768
    index.nlist = 100
    classifier.learning_rate = 0.001
    seed = 0
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import CorruptFile, IoFailure

_METRICS = ("inner_product", "l2")


@dataclass
class EngineConfig:
    provider_kind: str = "hash"
    dimension: int = 768
    normalize: bool = True
    endpoint: str | None = None
    nlist: int = 100
    nprobe: int = 20
    metric: str = "inner_product"
    pq_segments: int | None = None
    pq_centroids: int = 256
    hidden_dim: int = 512
    learning_rate: float = 0.001
    batch_size: int = 1024
    max_epochs: int = 20
    k: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.provider_kind not in ("hash", "remote"):
            raise ValueError(f"unknown provider kind: {self.provider_kind!r}")
        if (self.endpoint is not None) != (self.provider_kind == "remote"):
            raise ValueError("endpoint must be set iff provider kind is remote")
        if self.dimension <= 0:
            raise ValueError("dimension must be positive")
        if self.nlist < 0:
            raise ValueError("nlist must be >= 0 (0 means exact search)")
        if self.nprobe < 1:
            raise ValueError("nprobe must be >= 1")
        if self.metric not in _METRICS:
            raise ValueError(f"unknown metric: {self.metric!r}")
        if self.pq_segments is not None and self.pq_segments < 1:
            raise ValueError("pq_segments must be >= 1 when set")
        if not 2 <= self.pq_centroids <= 256:
            raise ValueError("pq_centroids must be in [2, 256]")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.hidden_dim < 1 or self.batch_size < 1 or self.max_epochs < 1:
            raise ValueError("classifier hyperparameters must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")


# file key → dataclass field
_KEYS = {
    "provider.kind": "provider_kind",
    "provider.dimension": "dimension",
    "provider.normalize": "normalize",
    "provider.endpoint": "endpoint",
    "index.nlist": "nlist",
    "index.nprobe": "nprobe",
    "index.metric": "metric",
    "index.pq_segments": "pq_segments",
    "index.pq_centroids": "pq_centroids",
    "classifier.hidden_dim": "hidden_dim",
    "classifier.learning_rate": "learning_rate",
    "classifier.batch_size": "batch_size",
    "classifier.max_epochs": "max_epochs",
    "detect.k": "k",
    "seed": "seed",
}
_FIELDS = {v: k for k, v in _KEYS.items()}


def _coerce(raw):
    raw = raw.strip()
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
        return raw[1:-1]
    low = raw.lower()
    if low == "true":
        return True
    if low == "false":
        return False
    if low == "none":
        return None
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


def parse_config_text(text):
    """Parse key=value lines into an EngineConfig."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CorruptFile(f"config line {lineno} has no '=': {line!r}")
        key, raw = line.split("=", 1)
        key = key.strip()
        field = _KEYS.get(key)
        if field is None:
            raise CorruptFile(f"config line {lineno}: unknown key {key!r}")
        values[field] = _coerce(raw)
    try:
        return EngineConfig(**values)
    except (TypeError, ValueError) as exc:
        raise CorruptFile(f"invalid configuration: {exc}") from exc


def load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise IoFailure(f"cannot read config from {path}: {exc}") from exc


def format_config(config):
    """Render a config back to the file format, keys in a stable order."""
    lines = []
    for field in fields(EngineConfig):
        value = getattr(config, field.name)
        if value is None:
            rendered = "none"
        elif isinstance(value, bool):
            rendered = "true" if value else "false"
        else:
            rendered = repr(value) if isinstance(value, float) else str(value)
        lines.append(f"{_FIELDS[field.name]} = {rendered}")
    return "\n".join(lines) + "\n"


def save_config(config, path):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(format_config(config))
    except OSError as exc:
        raise IoFailure(f"cannot write config to {path}: {exc}") from exc


def config_to_dict(config):
    """Nested dict mirroring the file keys, for the HTTP config endpoint."""
    out = {}
    for field in fields(EngineConfig):
        key = _FIELDS[field.name]
        value = getattr(config, field.name)
        if "." in key:
            section, name = key.split(".", 1)
            out.setdefault(section, {})[name] = value
        else:
            out[key] = value
    return out
