"""Canonical Schmidt-vector representation and sampling.

A bipartite pure state is represented (up to local unitaries) by its sorted,
normalized vector of squared Schmidt coefficients.  Everything downstream
(monotones, measures, volumes) operates on this representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionShrink, NegativeCoefficient, NotNormalized

__all__ = [
    "SchmidtVector",
    "PCoordinates",
    "new_sorted",
    "to_p",
    "from_p",
    "embed",
    "maximally_entangled",
    "separable",
    "sample_uniform",
    "sample_sorted_block",
    "spawn_rngs",
]

#: construction-time invariant tolerance on the unit sum
SUM_TOL = 1e-12
#: tolerance accepted on raw input before canonicalization
INPUT_SUM_TOL = 1e-9
#: negative entries above this magnitude are rejected rather than clamped
NEG_TOL = -1e-12


@dataclass(frozen=True)
class SchmidtVector:
    """Sorted, normalized Schmidt coefficients of a d x d pure state.

    Immutable; safe to share across threads.
    """

    values: tuple[float, ...]

    def __post_init__(self):
        v = self.values
        if len(v) == 0:
            raise ValueError("empty Schmidt vector")
        if any(x < 0.0 or x > 1.0 for x in v):
            raise NegativeCoefficient(f"entries outside [0,1]: {v}")
        if any(v[i] < v[i + 1] for i in range(len(v) - 1)):
            raise ValueError(f"entries not sorted descending: {v}")
        if abs(math.fsum(v) - 1.0) > SUM_TOL:
            raise NotNormalized(f"sum deviates from 1 by {math.fsum(v) - 1.0:.3e}")

    @property
    def dim(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class PCoordinates:
    """Barycentric weights over the extreme points of the sorted simplex.

    The k-th extreme point is the maximally entangled k x k state padded with
    zeros, so ``lambda = M p`` with M upper triangular, column k constant 1/k.
    """

    p: tuple[float, ...]

    def __post_init__(self):
        if any(x < 0.0 for x in self.p):
            raise NegativeCoefficient(f"negative barycentric weight: {self.p}")
        if abs(math.fsum(self.p) - 1.0) > SUM_TOL:
            raise NotNormalized(f"weights sum deviates from 1 by {math.fsum(self.p) - 1.0:.3e}")

    @property
    def dim(self) -> int:
        return len(self.p)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.p, dtype=float)


def _renormalize_exact(arr: np.ndarray) -> np.ndarray:
    """Rescale so the float sum is exactly 1.0 (the residual goes to the largest entry)."""
    arr = arr / math.fsum(arr)
    for _ in range(4):
        r = 1.0 - math.fsum(arr)
        if r == 0.0:
            break
        arr[np.argmax(arr)] += r
    arr = -np.sort(-arr)
    return np.clip(arr, 0.0, 1.0)


def new_sorted(raw) -> SchmidtVector:
    """Canonicalize raw coefficients: clamp, sort descending, renormalize exactly.

    Raises NegativeCoefficient for entries below -1e-12 and NotNormalized when
    the input sum is off by more than 1e-9.
    """
    arr = np.asarray(raw, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("empty coefficient list")
    if np.any(arr < NEG_TOL):
        raise NegativeCoefficient(f"negative coefficient in {arr.tolist()}")
    s = math.fsum(arr)
    if abs(s - 1.0) > INPUT_SUM_TOL:
        raise NotNormalized(f"coefficients sum to {s!r}, not 1")
    arr = np.clip(arr, 0.0, 1.0)
    arr = _renormalize_exact(arr)
    return SchmidtVector(tuple(arr.tolist()))


def to_p(vec: SchmidtVector) -> PCoordinates:
    """Invert lambda = M p:  p_i = i (lambda_i - lambda_{i+1}),  p_d = d lambda_d."""
    lam = vec.values
    d = len(lam)
    p = [(i + 1) * (lam[i] - lam[i + 1]) for i in range(d - 1)]
    p.append(d * lam[d - 1])
    # differences of nearly equal floats may round a hair below zero
    p = [0.0 if -SUM_TOL < x < 0.0 else x for x in p]
    r = 1.0 - math.fsum(p)
    if r != 0.0:
        j = max(range(d), key=lambda i: p[i])
        p[j] += r
    return PCoordinates(tuple(p))


def from_p(p: PCoordinates) -> SchmidtVector:
    """Apply lambda = M p:  lambda_i = sum_{j >= i} p_j / j."""
    w = p.as_array() / np.arange(1, p.dim + 1)
    lam = np.cumsum(w[::-1])[::-1]
    lam = _renormalize_exact(lam)
    return SchmidtVector(tuple(lam.tolist()))


def embed(vec: SchmidtVector, k: int) -> SchmidtVector:
    """Pad with zeros up to dimension k (identity when k == dim)."""
    if k < vec.dim:
        raise DimensionShrink(f"cannot embed dimension {vec.dim} into {k}")
    return SchmidtVector(vec.values + (0.0,) * (k - vec.dim))


def maximally_entangled(d: int) -> SchmidtVector:
    return new_sorted([1.0 / d] * d)


def separable(d: int) -> SchmidtVector:
    return SchmidtVector((1.0,) + (0.0,) * (d - 1))


def sample_uniform(d: int, rng: np.random.Generator) -> SchmidtVector:
    """One draw from the flat (Lebesgue) distribution on the ordered simplex.

    A flat Dirichlet sample on the full simplex, sorted descending, is flat on
    the ordered simplex (the d! chambers are isometric).
    """
    if d < 2:
        raise ValueError("need d >= 2")
    x = rng.dirichlet(np.ones(d))
    x = -np.sort(-x)
    return SchmidtVector(tuple(_renormalize_exact(x).tolist()))


def sample_sorted_block(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """(n, d) array of descending-sorted flat-simplex samples.

    Bulk counterpart of :func:`sample_uniform` for Monte Carlo loops; rows are
    normalized to float precision but not exactly renormalized.
    """
    x = rng.dirichlet(np.ones(d), size=n)
    return -np.sort(-x, axis=1)


def spawn_rngs(seed: int, n_chunks: int) -> list[np.random.Generator]:
    """Independent generators for parallel chunks, determined by (seed, chunk index)."""
    ss = np.random.SeedSequence(seed)
    return [np.random.default_rng(child) for child in ss.spawn(n_chunks)]
