"""First-principles volume computation: Monte Carlo for any dimension, exact
polygon clipping for 3x3 states, and measure-map injectivity scanning.

This module is deliberately independent of the closed-form expressions in
:mod:`bent.measures`; it is the ground truth they are validated against.
"""

from __future__ import annotations

import math
import os
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .measures import MeasureId, measure_block
from .schmidt import SchmidtVector, sample_sorted_block, spawn_rngs

__all__ = [
    "VolumeEstimate",
    "Polygon2D",
    "PolygonResult",
    "CollisionPair",
    "mc_source_entanglement",
    "mc_accessible_entanglement",
    "exact_polygon_3",
    "injectivity_scan",
]

_CHUNK = 200_000


def _max_workers() -> int:
    env = os.environ.get("BENT_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


@dataclass(frozen=True)
class VolumeEstimate:
    """Monte Carlo fraction with its binomial standard error."""

    fraction: float
    std_error: float
    samples: int
    seed: int

    def as_json_dict(self) -> dict:
        return {
            "fraction": self.fraction,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class Polygon2D:
    """Convex polygon in the (lambda_1, lambda_2) plane, counterclockwise."""

    vertices: tuple[tuple[float, float], ...]

    def area(self) -> float:
        v = self.vertices
        n = len(v)
        if n < 3:
            return 0.0
        s = math.fsum(
            v[i][0] * v[(i + 1) % n][1] - v[(i + 1) % n][0] * v[i][1] for i in range(n)
        )
        return abs(s) / 2.0


@dataclass(frozen=True)
class PolygonResult:
    polygon: Polygon2D
    ratio: float  # polygon area over total ordered-simplex area


def _tail_sums(block: np.ndarray) -> np.ndarray:
    return np.cumsum(block[:, ::-1], axis=1)[:, ::-1]


def _mc_fraction(phi: SchmidtVector, n: int, seed: int, mode: str) -> VolumeEstimate:
    """Fraction of uniform ordered-simplex samples inside the source (resp.
    accessible) set of phi, chunked with per-chunk streams."""
    if n < 1:
        raise ValueError("need n >= 1 samples")
    d = phi.dim
    tphi = np.cumsum(phi.as_array()[::-1])[::-1]
    sizes = [_CHUNK] * (n // _CHUNK) + ([n % _CHUNK] if n % _CHUNK else [])
    rngs = spawn_rngs(seed, len(sizes))

    def count(args):
        size, rng = args
        tails = _tail_sums(sample_sorted_block(d, size, rng))
        if mode == "source":
            ok = np.all(tails[:, 1:] >= tphi[1:], axis=1)
        else:
            ok = np.all(tails[:, 1:] <= tphi[1:], axis=1)
        return int(np.count_nonzero(ok))

    workers = _max_workers()
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(count, zip(sizes, rngs)))
    else:
        hits = sum(count(a) for a in zip(sizes, rngs))
    frac = hits / n
    if mode == "source":
        frac = 1.0 - frac
    se = math.sqrt(frac * (1.0 - frac) / n)
    return VolumeEstimate(frac, se, n, seed)


def mc_source_entanglement(phi: SchmidtVector, n: int, seed: int) -> VolumeEstimate:
    """Estimate the source entanglement of phi as one minus the fraction of
    sampled states that can reach phi (the supremal source volume is the whole
    ordered simplex, realized by the separable state)."""
    return _mc_fraction(phi, n, seed, "source")


def mc_accessible_entanglement(phi: SchmidtVector, n: int, seed: int) -> VolumeEstimate:
    """Estimate the accessible entanglement of phi as the fraction of sampled
    states reachable from phi (the supremal accessible volume is the whole
    ordered simplex, realized by the maximally entangled state)."""
    return _mc_fraction(phi, n, seed, "accessible")


# ---------------------------------------------------------------------------
# exact polygon geometry at d = 3
#
# In (l1, l2) coordinates the ordered simplex is the triangle with vertices
# (1, 0), (1/2, 1/2), (1/3, 1/3); its area is 1/12.  The source (accessible)
# set of phi is its intersection with two half planes expressing the
# tail-sum comparisons: l1 <= (>=) l1_phi and l1 + l2 <= (>=) l1_phi + l2_phi.

_TRIANGLE = (
    (Fraction(1), Fraction(0)),
    (Fraction(1, 2), Fraction(1, 2)),
    (Fraction(1, 3), Fraction(1, 3)),
)
_TRIANGLE_AREA = Fraction(1, 12)


def _clip(poly, a, b, c):
    """Sutherland-Hodgman step: keep {a x + b y <= c}; exact rational arithmetic."""
    if not poly:
        return []
    out = []
    n = len(poly)
    for i in range(n):
        px, py = poly[i]
        qx, qy = poly[(i + 1) % n]
        pin = a * px + b * py <= c
        qin = a * qx + b * qy <= c
        if pin:
            out.append((px, py))
        if pin != qin:
            denom = a * (qx - px) + b * (qy - py)
            t = (c - a * px - b * py) / denom
            out.append((px + t * (qx - px), py + t * (qy - py)))
    return out


def _shoelace(poly) -> Fraction:
    n = len(poly)
    if n < 3:
        return Fraction(0)
    s = Fraction(0)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return abs(s) / 2


def exact_polygon_3(phi: SchmidtVector, which: str) -> PolygonResult:
    """Clip the ordered-simplex triangle against the two half planes defining
    the source or accessible set of phi; all vertex arithmetic is exact, only
    the returned floats are rounded.

    A measure-zero set comes back as a degenerate polygon with ratio 0.
    """
    if phi.dim != 3:
        raise ValueError("exact polygon geometry is specific to d = 3")
    if which not in ("source", "accessible"):
        raise ValueError("which must be 'source' or 'accessible'")
    l1 = Fraction(phi.values[0])
    l12 = Fraction(phi.values[0]) + Fraction(phi.values[1])
    poly = list(_TRIANGLE)
    if which == "source":
        # reachable-from states: E_2 >= E_2(phi), E_3 >= E_3(phi)
        poly = _clip(poly, Fraction(1), Fraction(0), l1)
        poly = _clip(poly, Fraction(1), Fraction(1), l12)
    else:
        poly = _clip(poly, Fraction(-1), Fraction(0), -l1)
        poly = _clip(poly, Fraction(-1), Fraction(-1), -l12)
    area = _shoelace(poly)
    # drop duplicate vertices produced when a clipping line passes through a corner
    cleaned = []
    for v in poly:
        if not cleaned or v != cleaned[-1]:
            cleaned.append(v)
    if len(cleaned) > 1 and cleaned[0] == cleaned[-1]:
        cleaned.pop()
    verts = tuple((float(x), float(y)) for x, y in cleaned)
    return PolygonResult(Polygon2D(verts), float(area / _TRIANGLE_AREA))


# ---------------------------------------------------------------------------
# injectivity scanning

@dataclass(frozen=True)
class CollisionPair:
    """Two sampled states whose measure tuples coincide within tolerance."""

    first: tuple[float, ...]
    second: tuple[float, ...]
    values_first: tuple[float, ...]
    values_second: tuple[float, ...]


def injectivity_scan(
    ids: list[MeasureId],
    d: int,
    n: int,
    tol: float,
    seed: int = 0,
) -> list[CollisionPair]:
    """Sample n states and report pairs that agree on every listed measure
    within tol while their sorted coefficient vectors differ by more than
    10*tol in max norm.

    Candidate pairs come from a spatial hash with cell size tol, so runtime is
    close to linear in n.
    """
    rng = spawn_rngs(seed, 1)[0]
    block = sample_sorted_block(d, n, rng)
    vals = np.column_stack([measure_block(block, mid) for mid in ids])
    m = vals.shape[1]
    keys = np.floor(vals / tol).astype(np.int64)
    cells: dict[tuple, list[int]] = defaultdict(list)
    for i in range(n):
        cells[tuple(keys[i])].append(i)
    offsets = [np.array(t) - 1 for t in np.ndindex(*([3] * m))]
    sep = 10.0 * tol
    found: list[CollisionPair] = []
    for i in range(n):
        base = keys[i]
        for off in offsets:
            for j in cells.get(tuple(base + off), ()):
                if j <= i:
                    continue
                if np.max(np.abs(vals[i] - vals[j])) <= tol and np.max(
                    np.abs(block[i] - block[j])
                ) > sep:
                    found.append(
                        CollisionPair(
                            tuple(block[i].tolist()),
                            tuple(block[j].tolist()),
                            tuple(vals[i].tolist()),
                            tuple(vals[j].tolist()),
                        )
                    )
    return found
