"""Qubit-splitting characterization of bipartite entanglement.

A d x d state embedded as a 2n-qubit state (coefficients sorted ascending by
binary index) is pinned down, up to local unitaries, by the geometric measure
of entanglement across every splitting that moves a subset of the B-side
qubits.  The inverse map peels the coefficients back out of the table by
subset-sum recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import EmptySubset, InconsistentTable
from .schmidt import SchmidtVector

__all__ = [
    "MAX_QUBITS",
    "QubitEmbedding",
    "subset_key",
    "from_schmidt",
    "splitting_geometric",
    "all_splittings",
    "reconstruct",
]

#: n <= 3 keeps 2^n within the d <= 10 toolkit cap
MAX_QUBITS = 3
#: reconstruction tolerance: tables measured from floating-point forward
#: computation must round-trip
RECON_TOL = 1e-9


def _check_n(n: int):
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"need 1 <= n <= {MAX_QUBITS} qubits per side, got {n}")


@dataclass(frozen=True)
class QubitEmbedding:
    """Coefficients of a 2n-qubit embedded state, indexed by n-bit strings.

    lam[i] is the coefficient of the computational index whose binary digits
    are the qubit values; sorted ascending so lam[0] (all zeros) is smallest
    and lam[2^n - 1] (all ones) is largest.  The identification of marginal
    eigenvalues with index-group sums below relies on this convention.
    """

    n: int
    lam: tuple[float, ...]

    def __post_init__(self):
        _check_n(self.n)
        if len(self.lam) != 2**self.n:
            raise ValueError(f"need 2^{self.n} coefficients, got {len(self.lam)}")
        if any(x < 0.0 for x in self.lam):
            raise ValueError("negative coefficient")
        if any(self.lam[i] > self.lam[i + 1] for i in range(len(self.lam) - 1)):
            raise ValueError("coefficients must ascend with the binary index")
        if abs(math.fsum(self.lam) - 1.0) > 1e-9:
            raise ValueError("coefficients must sum to 1")


def subset_key(n: int, subset) -> str:
    """Canonical table key: n-bit mask string, character j set for qubit j+1."""
    bits = ["0"] * n
    for q in subset:
        if not 1 <= q <= n:
            raise ValueError(f"qubit index {q} outside 1..{n}")
        bits[q - 1] = "1"
    return "".join(bits)


def _mask_of(n: int, subset) -> int:
    """Bitmask over array indices: qubit j owns bit (n - j) of the index."""
    m = 0
    for q in set(subset):
        if not 1 <= q <= n:
            raise ValueError(f"qubit index {q} outside 1..{n}")
        m |= 1 << (n - q)
    return m


def from_schmidt(vec: SchmidtVector) -> QubitEmbedding:
    """Embed a d x d state: pad to the next power of two, sort ascending."""
    n = max(1, math.ceil(math.log2(vec.dim)))
    _check_n(n)
    size = 2**n
    lam = sorted(vec.values) if vec.dim == size else sorted(
        list(vec.values) + [0.0] * (size - vec.dim)
    )
    return QubitEmbedding(n, tuple(lam))


def splitting_geometric(q: QubitEmbedding, subset) -> float:
    """Geometric measure across the splitting that moves the given B qubits.

    The embedded state is diagonal in the computational product basis, so the
    marginal eigenvalues are sums of lam over index groups sharing the moved
    coordinates; ascending order makes the all-ones group the largest.
    """
    subset = frozenset(subset)
    if not subset:
        raise EmptySubset("a splitting must move at least one qubit")
    mask = _mask_of(q.n, subset)
    top = math.fsum(x for i, x in enumerate(q.lam) if (i & mask) == mask)
    return 1.0 - top


def all_splittings(q: QubitEmbedding) -> dict[str, float]:
    """Geometric measure for all 2^n - 1 nonempty subsets, keyed by mask string."""
    out = {}
    for r in range(1, q.n + 1):
        for subset in combinations(range(1, q.n + 1), r):
            out[subset_key(q.n, subset)] = splitting_geometric(q, subset)
    return out


def reconstruct(n: int, table: dict[str, float]) -> QubitEmbedding:
    """Recover the coefficient vector from a complete splitting table.

    Writing m(S) = 1 - E_g(S) for the largest marginal eigenvalue, the
    coefficient at index U (as a bit set) satisfies m(S) = sum_{V >= S} lam[V],
    so lam peels off from the all-ones index downward:
    lam[U] = m(U) - sum_{V > U} lam[V].
    """
    _check_n(n)
    size = 2**n
    full = size - 1
    m = [0.0] * size
    m[0] = 1.0
    for mask in range(1, size):
        # the MSB-first bit string of an index mask is exactly the qubit key
        key = format(mask, f"0{n}b")
        if key not in table:
            raise InconsistentTable(f"missing splitting {key!r}")
        m[mask] = 1.0 - float(table[key])
    lam = [0.0] * size
    for mask in range(full, -1, -1):
        # enumerate strict supersets of `mask`
        free = full & ~mask
        sub = free
        parts = []
        while sub:
            parts.append(lam[mask | sub])
            sub = (sub - 1) & free
        lam[mask] = m[mask] - math.fsum(parts)
    arr = np.array(lam)
    if np.any(arr < -RECON_TOL):
        raise InconsistentTable(f"reconstructed coefficient below zero: {arr.min():.3e}")
    arr = np.clip(arr, 0.0, None)
    if np.any(arr[:-1] > arr[1:] + RECON_TOL):
        raise InconsistentTable("reconstructed coefficients are not ascending")
    arr = np.minimum.accumulate(arr[::-1])[::-1]  # repair sub-tolerance order noise
    return QubitEmbedding(n, tuple(arr.tolist()))
