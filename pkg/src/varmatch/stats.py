"""O(1) patch mean/variance over summed-area tables.

Tables accumulate exact integer sums of samples and squared samples, so the
variance S2/n - mean^2 is computed from an exact integer numerator and never
suffers cancellation, even for near-constant patches.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MultichannelInputError, OutOfBoundsError, OverflowRiskError
from .image import Image

# Largest pixel count whose total sum of squares still fits the int64
# accumulator: n * 255^2 <= 2^63 - 1.
MAX_SAMPLES = (2**63 - 1) // (255 * 255)


@dataclass(frozen=True)
class PatchStats:
    """Population mean and variance of one patch, in 8-bit sample units."""

    mean: float
    variance: float


@dataclass(frozen=True)
class IntegralTable:
    """Cumulative sums of samples and squared samples, zero-padded at the border.

    sum[i][j] holds the total over all samples strictly above-left of (j, i);
    both tables have shape (height + 1, width + 1) and dtype int64.
    """

    width: int
    height: int
    sum: np.ndarray
    sum_sq: np.ndarray


def check_accumulator(width: int, height: int) -> None:
    """Reject planes whose sum of squares could overflow the accumulator."""
    if width * height > MAX_SAMPLES:
        raise OverflowRiskError(
            f"{width}x{height} plane exceeds exact-accumulation limit of {MAX_SAMPLES} samples"
        )


def build_integral(plane: Image) -> IntegralTable:
    """Build the summed-area tables for a single-channel image."""
    if plane.channels != 1:
        raise MultichannelInputError(f"expected 1 channel, got {plane.channels}")
    h, w = plane.height, plane.width
    check_accumulator(w, h)
    data = plane.plane(0).astype(np.int64)
    table = np.zeros((h + 1, w + 1), dtype=np.int64)
    table_sq = np.zeros((h + 1, w + 1), dtype=np.int64)
    np.cumsum(np.cumsum(data, axis=0), axis=1, out=table[1:, 1:])
    np.cumsum(np.cumsum(data * data, axis=0), axis=1, out=table_sq[1:, 1:])
    table.setflags(write=False)
    table_sq.setflags(write=False)
    return IntegralTable(width=w, height=h, sum=table, sum_sq=table_sq)


def rect_sums(table: IntegralTable, x: int, y: int, w: int, h: int) -> tuple[int, int]:
    """Exact (sum, sum of squares) of the w-by-h rectangle at (x, y)."""
    if w < 1 or h < 1 or x < 0 or y < 0 or x + w > table.width or y + h > table.height:
        raise OutOfBoundsError(
            f"rectangle {w}x{h}@({x},{y}) outside {table.width}x{table.height} plane"
        )
    t, tq = table.sum, table.sum_sq
    s = int(t[y + h, x + w]) - int(t[y, x + w]) - int(t[y + h, x]) + int(t[y, x])
    s2 = int(tq[y + h, x + w]) - int(tq[y, x + w]) - int(tq[y + h, x]) + int(tq[y, x])
    return s, s2


def patch_stats(table: IntegralTable, x: int, y: int, w: int, h: int) -> PatchStats:
    """Population mean and variance of a patch via four-corner lookups.

    variance = (S2*n - S^2) / n^2 with the numerator formed in exact integer
    arithmetic (Cauchy-Schwarz keeps it nonnegative), then one float division.
    """
    s, s2 = rect_sums(table, x, y, w, h)
    n = w * h
    mean = s / n
    variance = (s2 * n - s * s) / (n * n)
    if variance < 0.0:
        variance = 0.0
    return PatchStats(mean=mean, variance=variance)
