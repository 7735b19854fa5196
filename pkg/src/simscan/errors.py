"""Exception types raised across the package.

Everything derives from SimscanError so callers can catch broadly; the
validation-flavoured ones also derive from ValueError to stay friendly to
sklearn-style code that expects ValueError on bad input.
"""


class SimscanError(Exception):
    """Base class for all simscan errors."""


class ShapeMismatch(SimscanError, ValueError):
    """An array does not have the expected shape or dimension."""


class DimensionMismatch(SimscanError, ValueError):
    """A vector's length disagrees with the configured dimension."""


class RemoteUnavailable(SimscanError):
    """A remote provider endpoint could not be reached."""


class PartialResponse(SimscanError):
    """A remote provider returned a different number of items than requested."""


class InsufficientVectors(SimscanError, ValueError):
    """Fewer training vectors than the clustering requires."""


class InsufficientDocuments(SimscanError, ValueError):
    """Too few distinct documents for cross-document sampling."""


class BadPqShape(SimscanError, ValueError):
    """Product-quantizer segmentation does not divide the vector dimension."""


class CodeOutOfRange(SimscanError, ValueError):
    """A quantizer code refers to a centroid index that does not exist."""


class EmptyIndex(SimscanError):
    """Search was attempted on an index holding no vectors."""


class EmptyDataset(SimscanError, ValueError):
    """An operation requires a nonempty dataset."""


class EmptyMatrix(SimscanError, ValueError):
    """Metrics were requested from a confusion matrix with no samples."""


class EmptyQuerySet(SimscanError, ValueError):
    """Retrieval evaluation was given no queries."""


class LabelOutOfRange(SimscanError, ValueError):
    """A class label falls outside the configured class count."""


class TooFewSamples(SimscanError, ValueError):
    """Not enough samples to perform the requested split."""


class CorruptFile(SimscanError):
    """A persisted file failed its magic, version or checksum validation."""


class IoFailure(SimscanError):
    """An underlying filesystem operation failed."""


class BindFailure(SimscanError):
    """The HTTP server could not bind its address."""


class EngineNotReady(SimscanError):
    """The detection engine is missing an ingested corpus or trained model."""
