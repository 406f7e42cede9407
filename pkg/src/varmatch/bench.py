"""Throughput measurement: naive vs integral-table patch statistics, batch rate."""

from __future__ import annotations

import time

import numpy as np

from .corpus import Corpus
from .sampler import SamplerConfig, sample_batch
from .stats import PatchStats, build_integral, patch_stats


def naive_patch_stats(plane: np.ndarray, x: int, y: int, w: int, h: int) -> PatchStats:
    """Direct two-pass mean/variance over the window; O(w*h) per call."""
    window = plane[y:y + h, x:x + w].astype(np.float64)
    mean = float(window.mean())
    d = window - mean
    return PatchStats(mean=mean, variance=float(np.mean(d * d)))


def _draw_windows(rng, width, height, patch, count):
    xs = rng.integers(0, width - patch + 1, size=count)
    ys = rng.integers(0, height - patch + 1, size=count)
    return list(zip(xs.tolist(), ys.tolist()))


def bench_patch_stats(corpus: Corpus, patch: int, iters: int, warmup: int, seed: int) -> dict:
    """Time naive and integral-table patch stats on the first corpus image."""
    image_id = corpus.ids[0]
    lum = corpus.luminance(image_id)
    plane = lum.plane(0)
    table = corpus.table(image_id)
    rng = np.random.Generator(np.random.PCG64(seed))
    windows = _draw_windows(rng, lum.width, lum.height, patch, warmup + iters)
    for x, y in windows[:warmup]:
        naive_patch_stats(plane, x, y, patch, patch)
        patch_stats(table, x, y, patch, patch)
    timed = windows[warmup:]

    t0 = time.perf_counter()
    for x, y in timed:
        naive_patch_stats(plane, x, y, patch, patch)
    naive_s = time.perf_counter() - t0

    t0 = time.perf_counter()
    for x, y in timed:
        patch_stats(table, x, y, patch, patch)
    integral_s = time.perf_counter() - t0

    return {
        "image": image_id,
        "image_size": [lum.width, lum.height],
        "patch": patch,
        "iters": iters,
        "warmup": warmup,
        "naive_patches_per_sec": iters / naive_s if naive_s > 0 else float("inf"),
        "integral_patches_per_sec": iters / integral_s if integral_s > 0 else float("inf"),
        "speedup": naive_s / integral_s if integral_s > 0 else float("inf"),
    }


def bench_table_build(corpus: Corpus) -> dict:
    image_id = corpus.ids[0]
    lum = corpus.luminance(image_id)
    t0 = time.perf_counter()
    build_integral(lum)
    return {"image": image_id, "build_seconds": time.perf_counter() - t0}


def bench_sampling(
    lr_corpus: Corpus, hr_corpus: Corpus, config: SamplerConfig, batches: int, warmup: int
) -> dict:
    rng = np.random.Generator(np.random.PCG64(config.seed))
    for _ in range(warmup):
        sample_batch(lr_corpus, hr_corpus, config, rng)
    t0 = time.perf_counter()
    for _ in range(batches):
        sample_batch(lr_corpus, hr_corpus, config, rng)
    elapsed = time.perf_counter() - t0
    return {
        "batches": batches,
        "warmup": warmup,
        "batches_per_sec": batches / elapsed if elapsed > 0 else float("inf"),
    }
