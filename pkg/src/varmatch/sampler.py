"""Variance-matched sampling of LR/HR patch pairs from unpaired corpora.

A pair (lr, hr) is admissible when the patch variances differ by less than a
threshold, |var_lr - var_hr| < sigma_t_sq, optionally conjoined with a mean
constraint |mean_lr - mean_hr| < mu_t. Both inequalities are strict, so
boundary pairs are excluded.

Candidate batches are drawn as n_lr x n_hr independent patches from one LR
and one HR image, all cross pairs are scored, and the admissible ones are
matched greedily without replacement. Everything is driven by a single
seeded generator with a documented stream order, so runs are reproducible
bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .corpus import Corpus
from .errors import (
    ConfigError,
    ImageNotFoundError,
    ImageTooSmallError,
    ImageIOError,
    InsufficientPairsError,
    VarmatchError,
)
from .image import Image
from .stats import IntegralTable, patch_stats

MANIFEST_FIELDS = (
    "lr_image", "lr_x", "lr_y", "lr_size", "lr_mean", "lr_var",
    "hr_image", "hr_x", "hr_y", "hr_size", "hr_mean", "hr_var",
)


@dataclass(frozen=True)
class SamplerConfig:
    """All sampling knobs.

    Defaults follow the reference setup: variance threshold 64, 32px LR and
    128px HR patches at scale 4, and 30 candidates per side, which exceeds
    the batch size so that a single draw round usually fills the batch.
    """

    sigma_t_sq: float = 64.0
    mu_t: float | None = None
    lr_patch: int = 32
    hr_patch: int = 128
    scale: int = 4
    n_lr: int = 30
    n_hr: int = 30
    batch_size: int = 16
    max_retries: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.sigma_t_sq < 0:
            raise ConfigError(f"sigma_t_sq must be nonnegative, got {self.sigma_t_sq}")
        if self.mu_t is not None and self.mu_t <= 0:
            raise ConfigError(f"mu_t must be positive when enabled, got {self.mu_t}")
        for name in ("lr_patch", "hr_patch", "scale", "n_lr", "n_hr"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if not (1 <= self.batch_size <= self.n_lr):
            raise ConfigError(
                f"batch_size must satisfy 1 <= batch_size <= n_lr, got {self.batch_size} vs n_lr={self.n_lr}"
            )
        if self.max_retries < 0:
            raise ConfigError(f"max_retries must be >= 0, got {self.max_retries}")
        if not (0 <= self.seed < 2**64):
            raise ConfigError(f"seed must fit in 64 bits, got {self.seed}")


@dataclass(frozen=True)
class PatchRef:
    """A rectangle into a named image plus its cached statistics."""

    image_id: str
    x: int
    y: int
    size: int
    mean: float
    variance: float

    def key(self) -> tuple[str, int, int, int]:
        return (self.image_id, self.x, self.y, self.size)


@dataclass(frozen=True)
class PairBatch:
    """Matched (LR, HR) patch pairs with provenance for manifest export.

    evaluated_pairs and admissible_pairs count every cross pair scored over
    all draw rounds, which is what yield reporting needs.
    """

    pairs: tuple[tuple[PatchRef, PatchRef], ...]
    config_echo: SamplerConfig
    retries_used: int
    evaluated_pairs: int
    admissible_pairs: int


def extract_candidates(
    image: Image,
    table: IntegralTable,
    n: int,
    size: int,
    rng: np.random.Generator,
    image_id: str = "",
) -> list[PatchRef]:
    """Draw n patch candidates uniformly over all valid top-left positions.

    Draws are independent (duplicates permitted). RNG consumption: one array
    of n x-coordinates, then one array of n y-coordinates.
    """
    if n < 1:
        raise ConfigError(f"candidate count must be >= 1, got {n}")
    if image.width < size or image.height < size:
        raise ImageTooSmallError(
            f"image {image_id or '<anonymous>'} is {image.width}x{image.height}, needs >= {size}x{size}"
        )
    xs = rng.integers(0, image.width - size + 1, size=n)
    ys = rng.integers(0, image.height - size + 1, size=n)
    out = []
    for x, y in zip(xs, ys):
        st = patch_stats(table, int(x), int(y), size, size)
        out.append(PatchRef(image_id=image_id, x=int(x), y=int(y), size=size,
                            mean=st.mean, variance=st.variance))
    return out


def _admissible_mask(
    lr_cands: list[PatchRef],
    hr_cands: list[PatchRef],
    sigma_t_sq: float,
    mu_t: float | None,
) -> tuple[np.ndarray, np.ndarray]:
    lv = np.array([c.variance for c in lr_cands], dtype=np.float64).reshape(-1, 1)
    hv = np.array([c.variance for c in hr_cands], dtype=np.float64).reshape(1, -1)
    gaps = np.abs(lv - hv)
    mask = gaps < sigma_t_sq
    if mu_t is not None:
        lm = np.array([c.mean for c in lr_cands], dtype=np.float64).reshape(-1, 1)
        hm = np.array([c.mean for c in hr_cands], dtype=np.float64).reshape(1, -1)
        mask &= np.abs(lm - hm) < mu_t
    return gaps, mask


def match_pairs(
    lr_cands: list[PatchRef],
    hr_cands: list[PatchRef],
    sigma_t_sq: float,
    mu_t: float | None = None,
) -> list[tuple[PatchRef, PatchRef]]:
    """Greedy without-replacement matching of admissible candidate pairs.

    All |lr| x |hr| pairs are scored. Admissible pairs are sorted ascending
    by variance gap, ties broken by (lr index, hr index), then selected
    greedily, skipping any pair that would reuse a consumed candidate. The
    rule is fixed so that any reimplementation can replay it exactly.
    """
    if not lr_cands or not hr_cands:
        return []
    gaps, mask = _admissible_mask(lr_cands, hr_cands, sigma_t_sq, mu_t)
    li, hi = np.nonzero(mask)
    if li.size == 0:
        return []
    order = np.lexsort((hi, li, gaps[li, hi]))
    used_lr: set[int] = set()
    used_hr: set[int] = set()
    result = []
    for k in order:
        i, j = int(li[k]), int(hi[k])
        if i in used_lr or j in used_hr:
            continue
        used_lr.add(i)
        used_hr.add(j)
        result.append((lr_cands[i], hr_cands[j]))
    return result


def sample_batch(
    lr_corpus: Corpus,
    hr_corpus: Corpus,
    config: SamplerConfig,
    rng: np.random.Generator,
) -> PairBatch:
    """Sample one batch of variance-matched (LR, HR) patch pairs.

    Per draw round the RNG stream is consumed in this order: LR image index,
    HR image index, LR candidate coordinates (xs then ys), HR candidate
    coordinates. A round extracts n_lr and n_hr candidates from one LR and
    one HR image and matches them; if the accumulated pairs cover batch_size
    the first batch_size pairs are returned, otherwise fresh candidates are
    drawn (new images allowed) up to max_retries redraws, accumulating pairs
    across rounds. A pair whose LR or HR rectangle already appears in the
    accumulated batch is skipped, keeping patches unique within a batch.

    Raises InsufficientPairsError, carrying the achieved count, when the
    retry budget runs out; short batches are never padded or relaxed.
    """
    accumulated: list[tuple[PatchRef, PatchRef]] = []
    used_lr_keys: set[tuple] = set()
    used_hr_keys: set[tuple] = set()
    evaluated = 0
    admissible = 0
    for round_idx in range(config.max_retries + 1):
        lr_id = lr_corpus.ids[int(rng.integers(0, len(lr_corpus)))]
        hr_id = hr_corpus.ids[int(rng.integers(0, len(hr_corpus)))]
        lr_cands = extract_candidates(
            lr_corpus.luminance(lr_id), lr_corpus.table(lr_id),
            config.n_lr, config.lr_patch, rng, image_id=lr_id,
        )
        hr_cands = extract_candidates(
            hr_corpus.luminance(hr_id), hr_corpus.table(hr_id),
            config.n_hr, config.hr_patch, rng, image_id=hr_id,
        )
        _, mask = _admissible_mask(lr_cands, hr_cands, config.sigma_t_sq, config.mu_t)
        evaluated += mask.size
        admissible += int(mask.sum())
        for lr_ref, hr_ref in match_pairs(lr_cands, hr_cands, config.sigma_t_sq, config.mu_t):
            if len(accumulated) == config.batch_size:
                break
            if lr_ref.key() in used_lr_keys or hr_ref.key() in used_hr_keys:
                continue
            used_lr_keys.add(lr_ref.key())
            used_hr_keys.add(hr_ref.key())
            accumulated.append((lr_ref, hr_ref))
        if len(accumulated) >= config.batch_size:
            return PairBatch(
                pairs=tuple(accumulated[: config.batch_size]),
                config_echo=config,
                retries_used=round_idx,
                evaluated_pairs=evaluated,
                admissible_pairs=admissible,
            )
    raise InsufficientPairsError(
        f"matched only {len(accumulated)} of {config.batch_size} pairs "
        f"after {config.max_retries} redraws",
        achieved=len(accumulated),
    )


def _f17(x: float) -> str:
    # 17 significant digits: enough for exact float64 round-trip.
    return format(float(x), ".17g")


def manifest_line(pair: tuple[PatchRef, PatchRef]) -> str:
    lr, hr = pair
    parts = []
    for prefix, ref in (("lr", lr), ("hr", hr)):
        parts.append(f'"{prefix}_image": {json.dumps(ref.image_id)}')
        parts.append(f'"{prefix}_x": {ref.x}')
        parts.append(f'"{prefix}_y": {ref.y}')
        parts.append(f'"{prefix}_size": {ref.size}')
        parts.append(f'"{prefix}_mean": {_f17(ref.mean)}')
        parts.append(f'"{prefix}_var": {_f17(ref.variance)}')
    return "{" + ", ".join(parts) + "}"


def export_manifest(batch: PairBatch, path) -> None:
    """Write one line-delimited JSON record per pair, floats at 17 digits."""
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            for pair in batch.pairs:
                fh.write(manifest_line(pair) + "\n")
    except OSError as exc:
        raise ImageIOError(f"cannot write manifest {path}: {exc}") from exc


def load_manifest(path) -> list[dict]:
    """Parse a manifest back into per-pair records."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ImageIOError(f"cannot read manifest {path}: {exc}") from exc
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise VarmatchError(f"{path}:{lineno}: malformed manifest line ({exc})") from exc
        missing = [f for f in MANIFEST_FIELDS if f not in rec]
        if missing:
            raise VarmatchError(f"{path}:{lineno}: manifest record missing fields {missing}")
        records.append(rec)
    return records


def verify_manifest(
    records: list[dict],
    lr_corpus: Corpus,
    hr_corpus: Corpus,
    sigma_t_sq: float | None = None,
    mu_t: float | None = None,
) -> None:
    """Recompute every record's statistics from the named images.

    Raises ImageNotFoundError for a record naming an absent image, and
    VarmatchError when recomputed stats differ or a thresholded constraint
    fails. Exact float equality is required: stats recomputation is
    deterministic and the manifest serializes floats losslessly.
    """
    for idx, rec in enumerate(records):
        sides = (("lr", lr_corpus), ("hr", hr_corpus))
        for prefix, corpus in sides:
            image_id = rec[f"{prefix}_image"]
            if image_id not in corpus:
                raise ImageNotFoundError(f"record {idx}: image {image_id!r} not in corpus")
            st = patch_stats(
                corpus.table(image_id),
                rec[f"{prefix}_x"], rec[f"{prefix}_y"],
                rec[f"{prefix}_size"], rec[f"{prefix}_size"],
            )
            if st.mean != rec[f"{prefix}_mean"] or st.variance != rec[f"{prefix}_var"]:
                raise VarmatchError(
                    f"record {idx}: {prefix} stats mismatch: recomputed "
                    f"({st.mean}, {st.variance}) vs recorded "
                    f"({rec[f'{prefix}_mean']}, {rec[f'{prefix}_var']})"
                )
        if sigma_t_sq is not None and not abs(rec["lr_var"] - rec["hr_var"]) < sigma_t_sq:
            raise VarmatchError(f"record {idx}: variance gap breaches threshold {sigma_t_sq}")
        if mu_t is not None and not abs(rec["lr_mean"] - rec["hr_mean"]) < mu_t:
            raise VarmatchError(f"record {idx}: mean gap breaches threshold {mu_t}")


def config_with_seed(config: SamplerConfig, seed: int) -> SamplerConfig:
    return replace(config, seed=seed)
