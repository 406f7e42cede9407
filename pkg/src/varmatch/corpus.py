"""Read-only corpus handles: ordered, named images with cached statistics tables."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Mapping

from .errors import EmptyCorpusError
from .image import Image, load_png, to_luminance
from .stats import IntegralTable, build_integral


class Corpus:
    """An ordered set of named images plus lazily built integral tables.

    Images and tables are immutable once loaded, so a corpus can be shared
    across concurrent samplers. Ordering is by image id (sorted), which makes
    every id-by-index lookup deterministic.
    """

    def __init__(self, images: Mapping[str, Image] | None = None, paths: Mapping[str, Path] | None = None):
        self._paths = dict(paths or {})
        self._images: dict[str, Image] = dict(images or {})
        ids = set(self._images) | set(self._paths)
        if not ids:
            raise EmptyCorpusError("corpus contains no images")
        self._ids = tuple(sorted(ids))
        self._luminance: dict[str, Image] = {}
        self._tables: dict[str, IntegralTable] = {}

    @classmethod
    def from_dir(cls, directory) -> "Corpus":
        """Corpus over every .png directly inside ``directory``, sorted by name."""
        directory = Path(directory)
        paths = {p.name: p for p in directory.glob("*.png") if p.is_file()}
        if not paths:
            raise EmptyCorpusError(f"no PNG files in {directory}")
        return cls(paths=paths)

    @classmethod
    def from_images(cls, images: Mapping[str, Image]) -> "Corpus":
        return cls(images=images)

    @property
    def ids(self) -> tuple[str, ...]:
        return self._ids

    def __len__(self) -> int:
        return len(self._ids)

    def __contains__(self, image_id: str) -> bool:
        return image_id in self._images or image_id in self._paths

    def image(self, image_id: str) -> Image:
        if image_id not in self._images:
            self._images[image_id] = load_png(self._paths[image_id])
        return self._images[image_id]

    def luminance(self, image_id: str) -> Image:
        if image_id not in self._luminance:
            self._luminance[image_id] = to_luminance(self.image(image_id))
        return self._luminance[image_id]

    def table(self, image_id: str) -> IntegralTable:
        """Integral table of the image's luminance plane, built once."""
        if image_id not in self._tables:
            self._tables[image_id] = build_integral(self.luminance(image_id))
        return self._tables[image_id]

    def items(self) -> Iterable[tuple[str, Image]]:
        for image_id in self._ids:
            yield image_id, self.image(image_id)
