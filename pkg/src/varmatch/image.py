"""Image representation, 8-bit PNG I/O, luminance conversion, and bicubic resampling.

The pipeline is 8-bit only. Images are stored as planar uint8 rasters
(channels, height, width) and are immutable after construction, so they can
be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from .errors import DegenerateOutputError, FormatError, ImageIOError

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


@dataclass(frozen=True)
class Image:
    """Planar 8-bit raster; 1 (luminance) or 3 (RGB) channels, no alpha.

    ``planes`` has shape (channels, height, width), dtype uint8, and is
    marked read-only.
    """

    planes: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.planes)
        if arr.ndim == 2:
            arr = arr[np.newaxis, :, :]
        if arr.ndim != 3:
            raise FormatError(f"expected a (channels, height, width) raster, got ndim={arr.ndim}")
        if arr.dtype != np.uint8:
            raise FormatError(f"samples must be uint8, got {arr.dtype}")
        c, h, w = arr.shape
        if c not in (1, 3):
            raise FormatError(f"channels must be 1 or 3, got {c}")
        if h < 1 or w < 1:
            raise FormatError(f"dimensions must be positive, got {w}x{h}")
        arr.setflags(write=False)
        object.__setattr__(self, "planes", arr)

    @property
    def channels(self) -> int:
        return self.planes.shape[0]

    @property
    def height(self) -> int:
        return self.planes.shape[1]

    @property
    def width(self) -> int:
        return self.planes.shape[2]

    def plane(self, c: int = 0) -> np.ndarray:
        return self.planes[c]

    @classmethod
    def from_interleaved(cls, arr: np.ndarray) -> "Image":
        """Build from an (H, W) or (H, W, C) uint8 array."""
        a = np.asarray(arr)
        if a.ndim == 2:
            return cls(a[np.newaxis, :, :].copy())
        return cls(np.moveaxis(a, -1, 0).copy())

    def to_interleaved(self) -> np.ndarray:
        """Return an (H, W) or (H, W, 3) uint8 copy."""
        if self.channels == 1:
            return self.planes[0].copy()
        return np.moveaxis(self.planes, 0, -1).copy()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Image)
            and self.planes.shape == other.planes.shape
            and bool(np.array_equal(self.planes, other.planes))
        )


@dataclass(frozen=True)
class ResampleSpec:
    """Resampling parameters for the cubic-convolution operator.

    scale is a rational factor (1/4 for the downsampling operator used by the
    content loss, 4 for upscaling checks). kernel_a is the cubic kernel
    parameter; edge handling is clamp-to-edge and source coordinates are
    center-aligned: output pixel i reads from (i + 0.5)/scale - 0.5.
    """

    scale: Fraction
    kernel_a: float = -0.5
    edge_mode: str = "clamp"

    def __post_init__(self):
        scale = Fraction(self.scale)
        if scale.numerator <= 0 or scale.denominator <= 0:
            raise FormatError(f"scale must be positive, got {scale}")
        if self.edge_mode != "clamp":
            raise FormatError(f"unsupported edge mode {self.edge_mode!r}")
        object.__setattr__(self, "scale", scale)


def load_png(path) -> Image:
    """Decode an 8-bit PNG (grayscale, RGB, or RGBA with alpha dropped).

    16-bit and sub-8-bit PNGs are rejected rather than truncated, as is a
    palette image that carries transparency.
    """
    path = Path(path)
    try:
        header = path.open("rb").read(26)
    except OSError as exc:
        raise ImageIOError(f"cannot read {path}: {exc}") from exc
    if len(header) < 26 or header[:8] != _PNG_SIGNATURE:
        raise FormatError(f"{path} is not a PNG file")
    bit_depth = header[24]
    if bit_depth != 8:
        raise FormatError(f"{path}: only 8-bit PNGs are supported (found bit depth {bit_depth})")
    try:
        with PILImage.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "P":
                if "transparency" in im.info:
                    raise FormatError(f"{path}: palette PNG with transparency is not supported")
                im = im.convert("RGB")
                mode = "RGB"
            arr = np.asarray(im)
    except (UnidentifiedImageError, SyntaxError, ValueError) as exc:
        raise FormatError(f"{path}: not a decodable PNG ({exc})") from exc
    except OSError as exc:
        raise ImageIOError(f"cannot read {path}: {exc}") from exc
    if mode == "L":
        return Image.from_interleaved(arr)
    if mode == "LA":
        return Image.from_interleaved(arr[:, :, 0])
    if mode == "RGB":
        return Image.from_interleaved(arr)
    if mode == "RGBA":
        return Image.from_interleaved(arr[:, :, :3])
    raise FormatError(f"{path}: unsupported PNG mode {mode!r}")


def save_png(image: Image, path) -> None:
    """Write a lossless PNG; load_png(save_png(img)) is bit-exact."""
    path = Path(path)
    pil = PILImage.fromarray(image.to_interleaved())
    try:
        pil.save(path, format="PNG")
    except (OSError, ValueError) as exc:
        raise ImageIOError(f"cannot write {path}: {exc}") from exc


def to_luminance(image: Image) -> Image:
    """Collapse to a single luminance plane (BT.601, integer rounded).

    Y = round(0.299 R + 0.587 G + 0.114 B) per pixel; single-channel input is
    returned unchanged.
    """
    if image.channels == 1:
        return image
    r = image.planes[0].astype(np.float64)
    g = image.planes[1].astype(np.float64)
    b = image.planes[2].astype(np.float64)
    y = _round_half_away(0.299 * r + 0.587 * g + 0.114 * b)
    return Image(np.clip(y, 0, 255).astype(np.uint8)[np.newaxis, :, :])


def cubic_kernel(t, a: float = -0.5) -> np.ndarray:
    """Keys cubic-convolution kernel W(t) with parameter ``a``.

    Support is |t| < 2; for every phase the four covering taps sum to 1.
    """
    at = np.abs(np.asarray(t, dtype=np.float64))
    near = ((a + 2.0) * at - (a + 3.0)) * at * at + 1.0
    far = a * (((at - 5.0) * at + 8.0) * at - 4.0)
    return np.where(at <= 1.0, near, np.where(at < 2.0, far, 0.0))


def phase_weights(phase, a: float = -0.5) -> np.ndarray:
    """Weights of the four taps covering a sampling phase t in [0, 1)."""
    t = np.asarray(phase, dtype=np.float64)
    offsets = np.stack([1.0 + t, t, 1.0 - t, 2.0 - t], axis=-1)
    return cubic_kernel(offsets, a)


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.where(x >= 0, np.floor(x + 0.5), np.ceil(x - 0.5))


def _resample_axis(arr: np.ndarray, axis: int, out_len: int, scale: Fraction, a: float) -> np.ndarray:
    n = arr.shape[axis]
    num, den = scale.numerator, scale.denominator
    src = (np.arange(out_len, dtype=np.float64) + 0.5) * den / num - 0.5
    base = np.floor(src).astype(np.int64)
    idx = base[:, None] + np.arange(-1, 3)
    weights = cubic_kernel(src[:, None] - idx, a)
    np.clip(idx, 0, n - 1, out=idx)
    moved = np.moveaxis(arr, axis, -1)
    gathered = moved[..., idx]
    out = np.einsum("...ok,ok->...o", gathered, weights)
    return np.moveaxis(out, -1, axis)


def bicubic_resize(image: Image, spec: ResampleSpec) -> Image:
    """Separable cubic-convolution resample of an 8-bit image.

    Accumulates in float64; the final samples are rounded half away from zero
    and clamped to [0, 255]. Output dimensions are floor(width * scale) by
    floor(height * scale).
    """
    num, den = spec.scale.numerator, spec.scale.denominator
    out_w = (image.width * num) // den
    out_h = (image.height * num) // den
    if out_w < 1 or out_h < 1:
        raise DegenerateOutputError(
            f"scale {spec.scale} maps {image.width}x{image.height} to {out_w}x{out_h}"
        )
    acc = image.planes.astype(np.float64)
    acc = _resample_axis(acc, 2, out_w, spec.scale, spec.kernel_a)
    acc = _resample_axis(acc, 1, out_h, spec.scale, spec.kernel_a)
    out = np.clip(_round_half_away(acc), 0, 255).astype(np.uint8)
    return Image(out)
