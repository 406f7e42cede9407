"""Typed errors shared across the library and CLI.

Every error carries a stable ``code`` string so callers (CLI exit-code
mapping, foreign-language bridges) can dispatch without parsing messages.
"""

from __future__ import annotations


class VarmatchError(Exception):
    """Base class for all library errors."""

    code = "error"


class ConfigError(VarmatchError):
    """Invalid configuration value or malformed config file."""

    code = "config-error"


class ImageIOError(VarmatchError):
    """File missing, unreadable, or unwritable."""

    code = "io-error"


class FormatError(VarmatchError):
    """Input raster is not an accepted 8-bit PNG."""

    code = "format-error"


class DegenerateOutputError(VarmatchError):
    """Resample target would have a zero-sized dimension."""

    code = "degenerate-output"


class MultichannelInputError(VarmatchError):
    """Operation requires a single-channel plane."""

    code = "multichannel-input"


class OverflowRiskError(VarmatchError):
    """Image too large for exact integer accumulation."""

    code = "overflow-risk"


class OutOfBoundsError(VarmatchError):
    """Rectangle not fully inside the source plane."""

    code = "out-of-bounds"


class ImageTooSmallError(VarmatchError):
    """Image smaller than the requested patch size."""

    code = "image-too-small"


class InsufficientPairsError(VarmatchError):
    """Candidate redraws exhausted before a full batch was matched."""

    code = "insufficient-pairs"

    def __init__(self, message: str, achieved: int):
        super().__init__(message)
        self.achieved = achieved


class EmptyBankError(VarmatchError):
    """No window qualified for noise extraction, or an empty bank was used."""

    code = "empty-bank"


class ShapeMismatchError(VarmatchError):
    """Operands have different dimensions or channel counts."""

    code = "shape-mismatch"


class TooSmallError(VarmatchError):
    """Image below the metric's minimum supported size."""

    code = "too-small"


class EmptyCorpusError(VarmatchError):
    """Corpus contains no images."""

    code = "empty-corpus"


class EmptyCorpusWindowsError(VarmatchError):
    """Scan configuration yields no windows over the corpus."""

    code = "empty-corpus-windows"


class ImageNotFoundError(VarmatchError):
    """Manifest references an image the corpus does not contain."""

    code = "image-not-found"


class FilenameMismatchError(VarmatchError):
    """Prediction and reference directories do not list the same files."""

    code = "filename-mismatch"

    def __init__(self, message: str, missing_in_pred: list[str], missing_in_ref: list[str]):
        super().__init__(message)
        self.missing_in_pred = missing_in_pred
        self.missing_in_ref = missing_in_ref
