"""Toy labeled datasets for the planar experiments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import substream


@dataclass(frozen=True)
class LabeledDataset:
    """Points with integer class labels; lengths must agree."""

    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        points = np.asarray(self.points, dtype=float)
        labels = np.asarray(self.labels, dtype=int)
        if points.ndim != 2:
            raise ValueError(f"points must be an (m, n) array, got shape {points.shape}")
        if labels.shape != (points.shape[0],):
            raise ValueError(
                f"got {points.shape[0]} points but {labels.shape} labels"
            )
        if not np.isfinite(points).all():
            raise ValueError("points must have finite coordinates")
        if labels.size and labels.min() < 0:
            raise ValueError("labels must be nonnegative class indices")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.points.shape[0]


def generate_circle_dataset(
    radius: float = 5.0,
    count: int = 1250,
    seed: int = 0,
    num_rays: int = 50,
    radial_jitter: float = 0.1,
) -> LabeledDataset:
    """Two classes alternating along a circle.

    Walks `num_rays` rays from the origin around the circle; each ray
    carries roughly count/num_rays points at distance radius*(1 +/- jitter)
    and the class flips from one ray to the next, so adjacent angular
    sectors always hold opposite labels.
    """
    if count <= 0:
        raise ValueError(f"count must be positive, got {count!r}")
    if radius <= 0.0:
        raise ValueError(f"radius must be positive, got {radius!r}")
    if num_rays < 2:
        raise ValueError(f"need at least two rays, got {num_rays!r}")
    if not 0.0 <= radial_jitter < 1.0:
        raise ValueError(f"radial jitter must lie in [0, 1), got {radial_jitter!r}")
    gen = substream(seed, "circle-dataset")
    per_ray = -(-count // num_rays)
    points = np.empty((count, 2))
    labels = np.empty(count, dtype=int)
    index = 0
    for ray in range(num_rays):
        angle = 2.0 * np.pi * ray / num_rays
        direction = np.array([np.cos(angle), np.sin(angle)])
        take = min(per_ray, count - index)
        radii = radius * (1.0 + radial_jitter * gen.uniform(-1.0, 1.0, size=take))
        points[index : index + take] = radii[:, None] * direction
        labels[index : index + take] = ray % 2
        index += take
        if index == count:
            break
    return LabeledDataset(points, labels)


def generate_blob_dataset(
    count_per_class: int, separation: float = 6.0, spread: float = 1.0, seed: int = 0
) -> LabeledDataset:
    """Two linearly separable Gaussian blobs on the first axis."""
    if count_per_class <= 0:
        raise ValueError(f"count must be positive, got {count_per_class!r}")
    if separation <= 0.0 or spread <= 0.0:
        raise ValueError("separation and spread must be positive")
    gen = substream(seed, "blob-dataset")
    offset = np.array([separation / 2.0, 0.0])
    a = gen.normal(size=(count_per_class, 2)) * spread - offset
    b = gen.normal(size=(count_per_class, 2)) * spread + offset
    points = np.concatenate([a, b])
    labels = np.concatenate(
        [np.zeros(count_per_class, dtype=int), np.ones(count_per_class, dtype=int)]
    )
    return LabeledDataset(points, labels)
