"""
Exception hierarchy for the MIMO detection toolkit.

Every error raised by the library derives from DetectionError so callers
can catch the whole family at once; argument-value errors also derive
from ValueError.
"""

from typing import Optional


class DetectionError(Exception):
    """Base class for all library errors"""


class DimensionMismatch(DetectionError, ValueError):
    """Operand shapes do not agree"""


class RankDeficient(DetectionError, ValueError):
    """Channel matrix is numerically rank deficient; the draw is unusable"""


class NonFiniteInput(DetectionError, ValueError):
    """NaN or infinite value in a detector input"""


class UnsupportedOrder(DetectionError, ValueError):
    """Requested constellation order is not a square QAM"""


class InstanceTooLarge(DetectionError, ValueError):
    """Exhaustive enumeration would exceed the candidate limit"""


class SearchExhausted(DetectionError):
    """Candidate list emptied before the requested number of outputs"""


class EmptyInput(DetectionError, ValueError):
    """Aggregation over an empty collection"""


class ConfigInvalid(DetectionError, ValueError):
    """Experiment configuration is invalid"""


class ParseError(ConfigInvalid):
    """Malformed configuration text"""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class RangeError(ConfigInvalid):
    """Configuration value outside its admissible range"""


class ExportError(DetectionError, OSError):
    """Result files could not be written or read"""
