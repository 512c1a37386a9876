"""Seeded Monte-Carlo engine for Brownian paths and ball sampling.

The core estimator walks discrete Brownian paths from a start point and
counts the paths that touch a membership region at any of their k+1
discrete positions (the start included). Every path draws its Gaussians
from its own counter-based substream keyed by (seed, path index), so an
estimate is bit-identical no matter how paths are batched or distributed
across workers, and two oracles probed under the same config see exactly
the same paths.

A membership oracle is any callable that takes an (m, n) array of points
and returns a boolean array of shape (m,); it must be pure and total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .rng import substream

__all__ = [
    "BrownianConfig",
    "HitEstimate",
    "MembershipOracle",
    "sample_brownian_path",
    "estimate_hitting_probability",
    "sample_uniform_ball",
    "sample_gaussian_cloud",
    "estimate_relative_volume",
]

MembershipOracle = Callable[[np.ndarray], np.ndarray]

_PATH_TAG = "brownian-path"
_BALL_TAG = "uniform-ball"
_CLOUD_TAG = "gaussian-cloud"


@dataclass(frozen=True)
class BrownianConfig:
    """Geometry and budget of a Brownian hitting experiment.

    The radius sets the time horizon through t = r^2/n, so a path that
    nothing stops will on average just reach the sphere of radius r.
    The per-coordinate step size s = r/sqrt(n*k) is derived, never
    stored. num_steps = 0 is allowed and means the path is only its
    start point.
    """

    dim: int
    radius: float
    num_paths: int = 10_000
    num_steps: int = 400
    seed: int = 0

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim!r}")
        if self.radius <= 0.0 or not math.isfinite(self.radius):
            raise ValueError(f"radius must be positive and finite, got {self.radius!r}")
        if self.num_paths < 1:
            raise ValueError(f"path count must be positive, got {self.num_paths!r}")
        if self.num_steps < 0:
            raise ValueError(f"step count must be nonnegative, got {self.num_steps!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed!r}")

    @property
    def step_size(self) -> float:
        """Per-coordinate increment standard deviation s = r/sqrt(n*k)."""
        if self.num_steps == 0:
            raise ValueError("step size is undefined for a zero-step config")
        return self.radius / math.sqrt(self.dim * self.num_steps)

    @property
    def time_horizon(self) -> float:
        """Total running time t = k*s^2 = r^2/n."""
        return self.radius * self.radius / self.dim


@dataclass(frozen=True)
class HitEstimate:
    """Monte-Carlo probability with its binomial standard error."""

    psi: float
    stderr: float
    hits: int
    trials: int

    @classmethod
    def from_counts(cls, hits: int, trials: int) -> "HitEstimate":
        if trials < 1:
            raise ValueError(f"trial count must be positive, got {trials!r}")
        if not 0 <= hits <= trials:
            raise ValueError(f"hit count {hits!r} outside [0, {trials!r}]")
        psi = hits / trials
        return cls(psi=psi, stderr=math.sqrt(psi * (1.0 - psi) / trials), hits=hits, trials=trials)


def sample_brownian_path(config: BrownianConfig, path_index: int) -> np.ndarray:
    """Return one discrete path of shape (k+1, dim), starting at the origin.

    Increments are i.i.d. centered Gaussians with per-coordinate standard
    deviation equal to the config step size; the whole path is a pure
    function of (seed, path_index).
    """
    if not 0 <= path_index < config.num_paths:
        raise ValueError(f"path index {path_index!r} outside [0, {config.num_paths!r})")
    path = np.zeros((config.num_steps + 1, config.dim))
    if config.num_steps == 0:
        return path
    gen = substream(config.seed, _PATH_TAG, path_index)
    steps = gen.standard_normal((config.num_steps, config.dim)) * config.step_size
    np.cumsum(steps, axis=0, out=path[1:])
    return path


def estimate_hitting_probability(
    oracle: MembershipOracle, start: np.ndarray, config: BrownianConfig
) -> HitEstimate:
    """Estimate the probability that a path from `start` touches the region.

    A path counts as a hit when any of its k+1 discrete positions lies in
    the region; there is no between-step correction, so this estimates
    the discrete-path hitting probability, which sits slightly below the
    continuum value for thin or distant regions.
    """
    start = np.asarray(start, dtype=float)
    if start.shape != (config.dim,):
        raise ValueError(f"start point shape {start.shape} does not match dim {config.dim}")
    hits = 0
    for index in range(config.num_paths):
        points = start + sample_brownian_path(config, index)
        if bool(np.asarray(oracle(points)).any()):
            hits += 1
    return HitEstimate.from_counts(hits, config.num_paths)


def sample_uniform_ball(center: np.ndarray, r: float, count: int, seed: int) -> np.ndarray:
    """Draw `count` points uniformly from the closed ball B(center, r).

    Uses the norm-and-radius construction: an isotropic Gaussian direction
    scaled by r*U^(1/n), which is exact in any dimension (no rejection).
    """
    center = np.asarray(center, dtype=float)
    if center.ndim != 1:
        raise ValueError(f"center must be a vector, got shape {center.shape}")
    if r < 0.0:
        raise ValueError(f"radius must be nonnegative, got {r!r}")
    if count < 0:
        raise ValueError(f"sample count must be nonnegative, got {count!r}")
    n = center.shape[0]
    gen = substream(seed, _BALL_TAG)
    directions = gen.standard_normal((count, n))
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    directions /= np.where(norms == 0.0, 1.0, norms)
    radii = r * gen.random((count, 1)) ** (1.0 / n)
    return center + radii * directions


def sample_gaussian_cloud(center: np.ndarray, r: float, count: int, seed: int) -> np.ndarray:
    """Draw i.i.d. N(center, (r/sqrt(n))^2 I) samples; RMS distance is r."""
    center = np.asarray(center, dtype=float)
    if center.ndim != 1:
        raise ValueError(f"center must be a vector, got shape {center.shape}")
    if r <= 0.0:
        raise ValueError(f"radius must be positive, got {r!r}")
    if count < 0:
        raise ValueError(f"sample count must be nonnegative, got {count!r}")
    n = center.shape[0]
    gen = substream(seed, _CLOUD_TAG)
    return center + gen.standard_normal((count, n)) * (r / math.sqrt(n))


def estimate_relative_volume(
    oracle: MembershipOracle, center: np.ndarray, r: float, count: int, seed: int
) -> HitEstimate:
    """Estimate the fraction of B(center, r) covered by the region.

    The psi field of the returned estimate carries the volume fraction.
    Samples are drawn from the same substream for a given seed, so two
    regions compared under one seed see identical sample clouds.
    """
    if r <= 0.0:
        raise ValueError(f"radius must be positive, got {r!r}")
    if count < 1:
        raise ValueError(f"sample count must be positive, got {count!r}")
    samples = sample_uniform_ball(center, r, count, seed)
    inside = np.asarray(oracle(samples), dtype=bool)
    return HitEstimate.from_counts(int(inside.sum()), count)
