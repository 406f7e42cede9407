"""Full-reference quality metrics and loss-composition arithmetic.

PSNR is computed over all samples and channels against the 8-bit peak; SSIM
is the standard single-scale formulation on luminance (11x11 Gaussian window,
sigma 1.5, valid positions only). L1/L2 distances are means over elements so
that values stay patch-size independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .errors import ConfigError, ShapeMismatchError, TooSmallError
from .image import Image, to_luminance

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_C1 = (0.01 * 255.0) ** 2
SSIM_C2 = (0.03 * 255.0) ** 2


@dataclass(frozen=True)
class LossWeights:
    """Nonnegative weights for the four loss components."""

    adv: float
    cyc_or_con: float
    per: float
    fea: float

    def __post_init__(self):
        for name in ("adv", "cyc_or_con", "per", "fea"):
            if getattr(self, name) < 0:
                raise ConfigError(f"loss weight {name} must be >= 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class LossComponents:
    """Component loss values supplied by an external trainer."""

    adv: float
    cyc_or_con: float
    per: float
    fea: float

    def __post_init__(self):
        for name in ("adv", "cyc_or_con", "per", "fea"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"loss component {name} must be finite")


# Reference weight settings for the SR generator (adv, cycle, perceptual,
# feature matching) and the degradation generator (adv, content, perceptual,
# feature matching).
SR_GENERATOR_WEIGHTS = LossWeights(adv=0.3, cyc_or_con=0.2, per=0.5, fea=20.0)
DEGRADER_WEIGHTS = LossWeights(adv=0.3, cyc_or_con=0.5, per=0.2, fea=20.0)


def _check_same_shape(a: Image, b: Image) -> None:
    if a.planes.shape != b.planes.shape:
        raise ShapeMismatchError(
            f"shape mismatch: {a.channels}x{a.height}x{a.width} vs {b.channels}x{b.height}x{b.width}"
        )


def psnr(a: Image, b: Image) -> float:
    """Peak signal-to-noise ratio in dB; identical images return math.inf."""
    _check_same_shape(a, b)
    diff = a.planes.astype(np.float64) - b.planes.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 * 255.0 / mse)


def _gaussian_window(size: int, sigma: float) -> np.ndarray:
    offsets = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    g = np.exp(-(offsets * offsets) / (2.0 * sigma * sigma))
    return g / g.sum()


def _valid_filter(plane: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    half = kernel.size // 2
    out = correlate1d(plane, kernel, axis=0)
    out = correlate1d(out, kernel, axis=1)
    return out[half:-half, half:-half]


def ssim(a: Image, b: Image) -> float:
    """Mean single-scale SSIM over valid window positions, on luminance."""
    _check_same_shape(a, b)
    if a.width < SSIM_WINDOW or a.height < SSIM_WINDOW:
        raise TooSmallError(f"ssim needs >= {SSIM_WINDOW}px per side, got {a.width}x{a.height}")
    x = to_luminance(a).plane(0).astype(np.float64)
    y = to_luminance(b).plane(0).astype(np.float64)
    kernel = _gaussian_window(SSIM_WINDOW, SSIM_SIGMA)
    mu_x = _valid_filter(x, kernel)
    mu_y = _valid_filter(y, kernel)
    var_x = _valid_filter(x * x, kernel) - mu_x * mu_x
    var_y = _valid_filter(y * y, kernel) - mu_y * mu_y
    cov = _valid_filter(x * y, kernel) - mu_x * mu_y
    num = (2.0 * mu_x * mu_y + SSIM_C1) * (2.0 * cov + SSIM_C2)
    den = (mu_x * mu_x + mu_y * mu_y + SSIM_C1) * (var_x + var_y + SSIM_C2)
    return float(np.mean(num / den))


def l1_distance(a, b) -> float:
    """Mean absolute difference over all elements."""
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape:
        raise ShapeMismatchError(f"shape mismatch: {x.shape} vs {y.shape}")
    return float(np.mean(np.abs(x - y)))


def l2_distance(a, b) -> float:
    """Mean squared difference over all elements."""
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape:
        raise ShapeMismatchError(f"shape mismatch: {x.shape} vs {y.shape}")
    d = x - y
    return float(np.mean(d * d))


def compose_loss(components: LossComponents, weights: LossWeights) -> float:
    """Weighted sum of the four loss components."""
    return (
        weights.adv * components.adv
        + weights.cyc_or_con * components.cyc_or_con
        + weights.per * components.per
        + weights.fea * components.fea
    )
