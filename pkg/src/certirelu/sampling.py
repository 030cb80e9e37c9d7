"""Random direction/offset sampling on the sphere-offset domain S^(n-1) x [-R, R]."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bounds import sphere_area

__all__ = [
    "UNIT_NORM_TOL",
    "DirectionOffsetSample",
    "SamplingDensity",
    "uniform_density",
    "density_floor",
    "derived_rng",
    "sample_sphere",
    "sample_pairs",
    "stack_samples",
]

# tolerance on | ||alpha||_2 - 1 | for emitted directions
UNIT_NORM_TOL = 1e-12

CustomSampler = Callable[[int, np.random.Generator], tuple[np.ndarray, np.ndarray]]


def derived_rng(root_seed: int, *indices: int) -> np.random.Generator:
    """Independent generator for one trial.

    Mixing the trial indices into the seed material keeps sweep rows
    reproducible no matter in which order they are executed.
    """
    entropy = [int(root_seed), *(int(i) for i in indices)]
    if any(e < 0 for e in entropy):
        raise ValueError("seeds and trial indices must be non-negative")
    return np.random.default_rng(np.random.SeedSequence(entropy))


@dataclass(frozen=True)
class DirectionOffsetSample:
    """One sampled pair (alpha, t): a unit direction and a scalar offset."""

    alpha: np.ndarray
    t: float

    def __post_init__(self) -> None:
        alpha = np.array(self.alpha, dtype=float, copy=True).reshape(-1)
        if alpha.size == 0:
            raise ValueError("alpha must be a nonempty vector")
        if abs(float(np.linalg.norm(alpha)) - 1.0) > UNIT_NORM_TOL:
            raise ValueError("alpha must have unit 2-norm")
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n(self) -> int:
        return self.alpha.shape[0]


@dataclass(frozen=True)
class SamplingDensity:
    """Density on S^(n-1) x [-R, R] with a known positive floor p_min.

    kind="uniform" is the reference density, constant with value
    1 / (2 R A) where A is the sphere area for dimension n.  kind="custom"
    wraps a user sampler together with a declared floor; only the floor
    enters the error bounds, the density itself is never evaluated.
    """

    n: int
    R: float
    kind: str = "uniform"
    p_min: float | None = None
    sampler: CustomSampler | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")
        if not self.R > 0:
            raise ValueError(f"ball radius must be positive, got {self.R}")
        if self.kind == "uniform":
            floor = 1.0 / (2.0 * self.R * sphere_area(self.n))
            if self.p_min is not None and abs(self.p_min - floor) > 1e-12 * floor:
                raise ValueError(
                    f"uniform density has floor {floor}, got p_min={self.p_min}"
                )
            object.__setattr__(self, "p_min", floor)
        elif self.kind == "custom":
            if self.p_min is None or not self.p_min > 0:
                raise ValueError("custom density requires a positive declared p_min")
            if self.sampler is None:
                raise ValueError("custom density requires a sampler callable")
        else:
            raise ValueError(f"density kind must be 'uniform' or 'custom', got {self.kind!r}")


def uniform_density(n: int, R: float) -> SamplingDensity:
    """Uniform density on S^(n-1) x [-R, R]."""
    return SamplingDensity(n=n, R=R, kind="uniform")


def density_floor(density: SamplingDensity) -> float:
    """Positive lower bound of the density (the only thing the bounds consume)."""
    if density.p_min is None or not density.p_min > 0:
        raise ValueError("density floor must be positive")
    return float(density.p_min)


def sample_sphere(n: int, rng: np.random.Generator) -> np.ndarray:
    """One uniform draw from the unit sphere in R^n.

    Normalizes a vector of independent standard normals; for n = 1 the
    sphere is {-1, +1} and the draw is an exact coin flip.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if n == 1:
        return np.array([2.0 * float(rng.integers(0, 2)) - 1.0])
    while True:
        v = rng.standard_normal(n)
        norm = float(np.linalg.norm(v))
        if norm > 1e-12:
            return v / norm


def sample_pairs(
    density: SamplingDensity, m: int, rng: np.random.Generator
) -> list[DirectionOffsetSample]:
    """Draw m i.i.d. (alpha, t) pairs from the density.

    Deterministic given the generator state; offsets are independent of the
    directions for the uniform kind.
    """
    if m < 1:
        raise ValueError(f"at least one sample must be requested, got m={m}")
    if density.kind == "uniform":
        if density.n == 1:
            alphas = (2.0 * rng.integers(0, 2, size=m).astype(float) - 1.0).reshape(m, 1)
        else:
            raw = rng.standard_normal((m, density.n))
            norms = np.linalg.norm(raw, axis=1)
            while np.any(norms <= 1e-12):
                bad = norms <= 1e-12
                raw[bad] = rng.standard_normal((int(bad.sum()), density.n))
                norms = np.linalg.norm(raw, axis=1)
            alphas = raw / norms[:, None]
        ts = rng.uniform(-density.R, density.R, size=m)
    else:
        alphas, ts = density.sampler(m, rng)
        alphas = np.asarray(alphas, dtype=float).reshape(m, density.n)
        ts = np.asarray(ts, dtype=float).reshape(m)
        norms = np.linalg.norm(alphas, axis=1)
        if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
            raise ValueError("custom sampler produced non-unit directions")
        if np.any(np.abs(ts) > density.R):
            raise ValueError("custom sampler produced offsets outside [-R, R]")
    return [DirectionOffsetSample(alpha=alphas[i], t=float(ts[i])) for i in range(m)]


def stack_samples(samples: Sequence[DirectionOffsetSample]) -> tuple[np.ndarray, np.ndarray]:
    """Stack a sample sequence into (alphas, ts) arrays of shape (m, n) and (m,)."""
    if len(samples) == 0:
        raise ValueError("cannot stack an empty sample sequence")
    alphas = np.stack([s.alpha for s in samples])
    ts = np.array([s.t for s in samples], dtype=float)
    return alphas, ts
