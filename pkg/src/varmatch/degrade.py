"""Synthetic unpaired-corpus generation: bicubic downsampling plus noise injection.

Noise is harvested from low-variance windows of real LR images: any stride
grid window whose luminance variance falls below a threshold contributes its
zero-mean residual to a bank. Degrading an HR image means bicubic
downsampling and tiling randomly chosen residual tiles over the result.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .corpus import Corpus
from .errors import ConfigError, EmptyBankError, EmptyCorpusError, ImageIOError, ImageTooSmallError
from .image import Image, ResampleSpec, bicubic_resize, load_png, save_png, _round_half_away
from .sampler import PatchRef
from .stats import patch_stats


@dataclass(frozen=True)
class NoiseBank:
    """Zero-mean residual tiles with provenance.

    tiles has shape (count, side, side), float64, each tile's mean subtracted;
    source_refs records where each tile came from and the variance that
    qualified it.
    """

    tiles: np.ndarray
    source_refs: tuple[PatchRef, ...]
    var_threshold: float

    def __post_init__(self):
        arr = np.ascontiguousarray(self.tiles, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "tiles", arr)

    def __len__(self) -> int:
        return self.tiles.shape[0]

    @property
    def side(self) -> int:
        return self.tiles.shape[1]


def extract_noise_patches(
    lr_corpus: Corpus,
    var_threshold: float,
    patch: int = 32,
    stride: int = 32,
) -> NoiseBank:
    """Scan the corpus on a stride grid and bank every low-variance residual.

    Scan order is deterministic: corpus id order, then row-major within each
    image. A window qualifies when its luminance variance is strictly below
    var_threshold; the banked tile is window minus window mean.
    """
    if stride < 1:
        raise ConfigError(f"stride must be >= 1, got {stride}")
    tiles = []
    refs = []
    for image_id in lr_corpus.ids:
        lum = lr_corpus.luminance(image_id)
        if lum.width < patch or lum.height < patch:
            raise ImageTooSmallError(
                f"image {image_id} is {lum.width}x{lum.height}, noise patch needs >= {patch}"
            )
        table = lr_corpus.table(image_id)
        plane = lum.plane(0)
        for y in range(0, lum.height - patch + 1, stride):
            for x in range(0, lum.width - patch + 1, stride):
                st = patch_stats(table, x, y, patch, patch)
                if st.variance < var_threshold:
                    window = plane[y:y + patch, x:x + patch].astype(np.float64)
                    tiles.append(window - st.mean)
                    refs.append(PatchRef(image_id=image_id, x=x, y=y, size=patch,
                                         mean=st.mean, variance=st.variance))
    if not tiles:
        raise EmptyBankError(
            f"no window with variance < {var_threshold} found in {len(lr_corpus)} image(s)"
        )
    return NoiseBank(tiles=np.stack(tiles), source_refs=tuple(refs), var_threshold=var_threshold)


def degrade_image(hr: Image, bank: NoiseBank, scale: int, rng: np.random.Generator) -> Image:
    """Bicubic-downsample an HR image and add tiled residual noise.

    Residual tiles are chosen independently per grid cell, row-major over the
    output, cropped at the right and bottom edges, and broadcast across
    channels. Output samples are rounded half away from zero and clamped to
    [0, 255]; with an all-zero bank the result equals the plain downsample.
    """
    if len(bank) == 0:
        raise EmptyBankError("noise bank is empty")
    if scale < 1:
        raise ConfigError(f"scale must be >= 1, got {scale}")
    lr = bicubic_resize(hr, ResampleSpec(scale=Fraction(1, scale)))
    acc = lr.planes.astype(np.float64)
    side = bank.side
    for y0 in range(0, lr.height, side):
        for x0 in range(0, lr.width, side):
            k = int(rng.integers(0, len(bank)))
            th = min(side, lr.height - y0)
            tw = min(side, lr.width - x0)
            acc[:, y0:y0 + th, x0:x0 + tw] += bank.tiles[k, :th, :tw]
    out = np.clip(_round_half_away(acc), 0, 255).astype(np.uint8)
    return Image(out)


def build_synthetic_corpus(hr_dir, out_dir, bank: NoiseBank, scale: int, seed: int) -> dict:
    """Degrade every PNG under hr_dir into out_dir, mirroring filenames.

    Each image gets its own generator derived as PCG64(SeedSequence([seed,
    image_index])) with image_index the position in sorted filename order, so
    per-image work is order-independent and the whole corpus is reproducible
    from the single seed. Returns the summary record, also written to
    out_dir/corpus_summary.json.
    """
    hr_dir = Path(hr_dir)
    out_dir = Path(out_dir)
    names = sorted(p.name for p in hr_dir.glob("*.png") if p.is_file())
    if not names:
        raise EmptyCorpusError(f"no PNG files in {hr_dir}")
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ImageIOError(f"cannot create {out_dir}: {exc}") from exc
    entries = []
    for index, name in enumerate(names):
        hr = load_png(hr_dir / name)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))
        lr = degrade_image(hr, bank, scale, rng)
        save_png(lr, out_dir / name)
        entries.append({
            "name": name,
            "seed_entropy": [seed, index],
            "hr_size": [hr.width, hr.height],
            "lr_size": [lr.width, lr.height],
        })
    summary = {
        "count": len(names),
        "scale": scale,
        "seed": seed,
        "bank": {
            "tiles": len(bank),
            "side": bank.side,
            "var_threshold": bank.var_threshold,
        },
        "images": entries,
    }
    try:
        (out_dir / "corpus_summary.json").write_text(
            json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise ImageIOError(f"cannot write corpus summary: {exc}") from exc
    return summary
