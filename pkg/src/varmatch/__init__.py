"""Variance-matched patch pair sampling for unpaired super-resolution data prep.

The package selects low-resolution/high-resolution training patch pairs whose
luminance variances agree within a threshold, so both sides of an unpaired
translation setup see comparable content density. Around that core sit exact
integral-table statistics, a cubic-convolution resizer, a noise-injecting
degrader for synthetic LR corpora, and PSNR/SSIM scoring.
"""

from .corpus import Corpus
from .degrade import NoiseBank, build_synthetic_corpus, degrade_image, extract_noise_patches
from .errors import (
    ConfigError,
    DegenerateOutputError,
    EmptyBankError,
    EmptyCorpusError,
    EmptyCorpusWindowsError,
    FilenameMismatchError,
    FormatError,
    ImageIOError,
    ImageNotFoundError,
    ImageTooSmallError,
    InsufficientPairsError,
    MultichannelInputError,
    OutOfBoundsError,
    OverflowRiskError,
    ShapeMismatchError,
    TooSmallError,
    VarmatchError,
)
from .image import Image, ResampleSpec, bicubic_resize, cubic_kernel, load_png, phase_weights, save_png, to_luminance
from .metrics import (
    DEGRADER_WEIGHTS,
    SR_GENERATOR_WEIGHTS,
    LossComponents,
    LossWeights,
    compose_loss,
    l1_distance,
    l2_distance,
    psnr,
    ssim,
)
from .sampler import (
    MANIFEST_FIELDS,
    PairBatch,
    PatchRef,
    SamplerConfig,
    export_manifest,
    extract_candidates,
    load_manifest,
    match_pairs,
    sample_batch,
    verify_manifest,
)
from .stats import MAX_SAMPLES, IntegralTable, PatchStats, build_integral, patch_stats, rect_sums

__version__ = "1.0.0"

__all__ = [
    "Corpus",
    "NoiseBank",
    "build_synthetic_corpus",
    "degrade_image",
    "extract_noise_patches",
    "ConfigError",
    "DegenerateOutputError",
    "EmptyBankError",
    "EmptyCorpusError",
    "EmptyCorpusWindowsError",
    "FilenameMismatchError",
    "FormatError",
    "ImageIOError",
    "ImageNotFoundError",
    "ImageTooSmallError",
    "InsufficientPairsError",
    "MultichannelInputError",
    "OutOfBoundsError",
    "OverflowRiskError",
    "ShapeMismatchError",
    "TooSmallError",
    "VarmatchError",
    "Image",
    "ResampleSpec",
    "bicubic_resize",
    "cubic_kernel",
    "load_png",
    "phase_weights",
    "save_png",
    "to_luminance",
    "DEGRADER_WEIGHTS",
    "SR_GENERATOR_WEIGHTS",
    "LossComponents",
    "LossWeights",
    "compose_loss",
    "l1_distance",
    "l2_distance",
    "psnr",
    "ssim",
    "MANIFEST_FIELDS",
    "PairBatch",
    "PatchRef",
    "SamplerConfig",
    "export_manifest",
    "extract_candidates",
    "load_manifest",
    "match_pairs",
    "sample_batch",
    "verify_manifest",
    "MAX_SAMPLES",
    "IntegralTable",
    "PatchStats",
    "build_integral",
    "patch_stats",
    "rect_sums",
    "__version__",
]
