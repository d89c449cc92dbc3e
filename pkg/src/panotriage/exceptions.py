"""Exception types raised across the triage pipeline."""


class TriageError(Exception):
    """Base class for all pipeline errors."""


class InvalidImage(TriageError):
    """Raster is empty, malformed, out of range or undecodable."""


class EmptySeries(TriageError):
    """Blur series contains no frames."""


class InvalidSeries(TriageError):
    """Blur series contains non-finite or negative variances."""


class NotComputed(TriageError):
    """Thresholds were requested before compute_thresholds ran."""


class BadListing(TriageError):
    """External keyframe listing is inconsistent with the frame set."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ParseError(TriageError):
    """Reconstruction document is not well-formed JSON."""

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class SchemaError(TriageError):
    """Document parsed but violates the expected schema."""

    def __init__(self, path, message=""):
        super().__init__(f"{path}: {message}" if message else path)
        self.path = path


class NoReconstruction(TriageError):
    """Document holds an empty reconstruction array."""


class InvalidRotation(TriageError):
    """Axis-angle vector is non-finite or malformed."""


class EmptyModel(TriageError):
    """Reconstruction has no shots to build a tour from."""


class DegenerateEdge(TriageError):
    """Bearing requested between coincident positions."""


class RangeError(TriageError):
    """Distance falls outside the styling range."""


class ConfigError(TriageError):
    """Configuration file or value is invalid."""
