"""Shared fixtures: deterministic synthetic corpora with heterogeneous variance.

The corpora are procedural and seeded, so every test run sees identical
bytes. Images are built from cells of bounded uniform noise around mid-gray
at several amplitudes; cell amplitude controls patch variance, giving both
flat and busy regions without any bundled binary assets.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from varmatch import Corpus, Image, save_png

# Noise amplitudes; uniform integer noise in [-A, A] has variance near
# ((2A+1)^2 - 1)/12, i.e. roughly {0, 2, 10, 24, 52, 91, 546}. Adjacent
# levels sit closer than the default threshold 64, the extremes much
# farther, so variance matching has real work to do.
CELL_AMPLITUDES = np.array([0, 2, 5, 8, 12, 16, 40])
CELL_WEIGHTS = np.array([0.05, 0.15, 0.20, 0.20, 0.20, 0.15, 0.05])

ACCEPTANCE_LINES: list[str] = []


def build_textured_corpus(directory: Path, count: int, side: int, cell: int, seed: int) -> None:
    """Write `count` RGB PNGs of `side` px, noise amplitude drawn per cell."""
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    for i in range(count):
        plane = np.full((side, side), 128, dtype=np.int64)
        for y in range(0, side, cell):
            for x in range(0, side, cell):
                amp = int(rng.choice(CELL_AMPLITUDES, p=CELL_WEIGHTS))
                if amp:
                    plane[y:y + cell, x:x + cell] += rng.integers(
                        -amp, amp + 1, size=(cell, cell))
        arr = np.clip(plane, 0, 255).astype(np.uint8)
        save_png(Image(np.stack([arr, arr, arr])), directory / f"img_{i:02d}.png")


def build_uniform_corpus(directory: Path, count: int, side: int, seed: int) -> None:
    """Write `count` full-range uniform-noise RGB PNGs (generic content)."""
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    for i in range(count):
        arr = rng.integers(0, 256, size=(3, side, side), dtype=np.int64).astype(np.uint8)
        save_png(Image(arr), directory / f"noise_{i:02d}.png")


@pytest.fixture(scope="session")
def corpus_dirs(tmp_path_factory) -> tuple[Path, Path]:
    """(lr_dir, hr_dir) of the synthetic textured corpora."""
    root = tmp_path_factory.mktemp("corpora")
    lr_dir, hr_dir = root / "lr", root / "hr"
    build_textured_corpus(lr_dir, count=4, side=96, cell=32, seed=101)
    build_textured_corpus(hr_dir, count=4, side=256, cell=128, seed=202)
    return lr_dir, hr_dir


@pytest.fixture(scope="session")
def lr_corpus(corpus_dirs) -> Corpus:
    return Corpus.from_dir(corpus_dirs[0])


@pytest.fixture(scope="session")
def hr_corpus(corpus_dirs) -> Corpus:
    return Corpus.from_dir(corpus_dirs[1])


@pytest.fixture(scope="session")
def noise_corpus_dir(tmp_path_factory) -> Path:
    directory = tmp_path_factory.mktemp("noise") / "lr"
    build_uniform_corpus(directory, count=3, side=96, seed=404)
    return directory


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
