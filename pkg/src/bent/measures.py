"""Entanglement measures on Schmidt vectors.

Three independent routes to the source entanglement are provided: the full
permutation sum, the shift-free simplified sum, and the barycentric form.
Explicit polynomial expressions are registered for 3x3 and 4x4 states (plus
the embedded generalizations) and serve as the fast path for scans; the
cross-route agreement is part of the test suite, not assumed here.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

import numpy as np

from .errors import DimensionTooLarge, UnsupportedClosedForm
from .schmidt import PCoordinates, SchmidtVector, embed, maximally_entangled, new_sorted

__all__ = [
    "MeasureId",
    "MeasurePoint",
    "DIM_CAP",
    "es_permutation",
    "es_simplified",
    "es_p_form",
    "es_generalized",
    "evaluate_closed",
    "ent_formation",
    "negativity",
    "geometric",
    "tensor_schmidt",
    "measure_value",
    "measure_block",
]

#: permutation sums have d! terms; everything is capped here
DIM_CAP = 10
#: exact normalization constants for the embedded source entanglement,
#: value of the k-dimensional source entanglement at the embedded maximally
#: entangled d-state (the supremum over d x d states, attained there because
#: the measure is an LOCC monotone and the maximally entangled state reaches
#: every other state)
EMBED_NORM = {
    (3, 4): Fraction(26, 27),
    (4, 5): Fraction(255, 256),
    (4, 6): Fraction(499, 512),
}


@dataclass(frozen=True)
class MeasureId:
    """Identifier of one measure; ``k`` only applies to the generalized source family."""

    tag: str  # one of: es, esgen, ea, ef, neg, geo
    k: int | None = None

    _TAGS = ("es", "esgen", "ea", "ef", "neg", "geo")

    def __post_init__(self):
        if self.tag not in self._TAGS:
            raise ValueError(f"unknown measure tag {self.tag!r}")
        if (self.tag == "esgen") != (self.k is not None):
            raise ValueError("k is required exactly for esgen")

    @classmethod
    def parse(cls, text: str) -> "MeasureId":
        """Parse CLI notation: 'es', 'ea', 'esgen:4' (or 'esgen4'), 'ef', 'neg', 'geo'."""
        t = text.strip().lower()
        if t.startswith("esgen"):
            rest = t[5:].lstrip(":")
            if not rest.isdigit():
                raise ValueError(f"bad generalized-measure spec {text!r}")
            return cls("esgen", int(rest))
        return cls(t)

    @property
    def label(self) -> str:
        return f"esgen{self.k}" if self.tag == "esgen" else self.tag


@dataclass(frozen=True)
class MeasurePoint:
    """Measure values of one state, keyed by measure label."""

    state: SchmidtVector
    values: dict[MeasureId, float]

    def as_json_dict(self) -> dict:
        return {
            "state": list(self.state.values),
            "values": {mid.label: v for mid, v in self.values.items()},
        }


# ---------------------------------------------------------------------------
# permutation-sum machinery

def _check_cap(d: int):
    if d > DIM_CAP:
        raise DimensionTooLarge(f"dimension {d} exceeds cap {DIM_CAP}")


@lru_cache(maxsize=None)
def _perm_tables(d: int):
    """(d!, d) permutation matrix and the d! products prod_k (s_k - s_{k+1})."""
    perms = np.array(list(permutations(range(1, d + 1))), dtype=float)
    dens = np.prod(perms[:, :-1] - perms[:, 1:], axis=1)
    return perms, dens


def _perm_sum(lam: np.ndarray, shifted: bool) -> float:
    """sum over permutations of (sigma . lambda - shift)^(d-1) / prod(diffs).

    Accumulated with exact (fsum) summation; d >= 8 evaluates the individual
    terms in extended precision since their magnitudes reach 1e5 and plain
    double would not leave 1e-9 of headroom after cancellation.
    """
    d = lam.size
    perms, dens = _perm_tables(d)
    if d >= 8:
        perms = perms.astype(np.longdouble)
        lam = lam.astype(np.longdouble)
        dens = dens.astype(np.longdouble)
    dots = perms @ lam
    if shifted:
        dots = dots - (d + 1) / 2.0
    terms = dots ** (d - 1) / dens
    if d >= 8:
        # numpy's pairwise summation in extended precision; downcasting the
        # individual terms for fsum would throw the extra bits away
        return float(terms.sum())
    return float(math.fsum(terms.tolist()))


def es_permutation(vec: SchmidtVector) -> float:
    """Source entanglement as the full symmetric-group sum over sorted coefficients."""
    _check_cap(vec.dim)
    out = 1.0 - _perm_sum(vec.as_array(), shifted=True)
    return min(max(out, 0.0), 1.0)


def es_simplified(vec: SchmidtVector) -> float:
    """Shift-free form of the permutation sum; 1 - E_s is homogeneous of degree d-1."""
    _check_cap(vec.dim)
    out = 1.0 - _perm_sum(vec.as_array(), shifted=False)
    return min(max(out, 0.0), 1.0)


def es_scaled_complement(lam, c: float) -> float:
    """1 - E_s evaluated on the unnormalized input c * lambda.

    Exposes the homogeneity of the shift-free sum for testing; `lam` need not
    sum to one.
    """
    arr = np.asarray(lam, dtype=float) * c
    _check_cap(arr.size)
    return _perm_sum(arr, shifted=False)


def _es_p_raw(p_arr: np.ndarray) -> float:
    """Barycentric form on a raw weight array; only the first d-1 entries enter."""
    d = p_arr.size
    _check_cap(d)
    perms, dens = _perm_tables(d)
    partial = np.cumsum(perms, axis=1)[:, : d - 1] / np.arange(1, d)
    dots = partial @ p_arr[: d - 1]
    return 1.0 - float(math.fsum((dots ** (d - 1) / dens).tolist()))


def es_p_form(p: PCoordinates) -> float:
    """Source entanglement in barycentric coordinates.

    E_s = 1 - sum_sigma (sum_{k<d} p_k S_k(sigma)/k)^(d-1) / prod(diffs) with
    S_k the partial sums of sigma; the last coordinate p_d drops out because
    S_d is the same constant for every permutation.
    """
    out = _es_p_raw(p.as_array())
    return min(max(out, 0.0), 1.0)


# ---------------------------------------------------------------------------
# explicit polynomial forms (3x3, 4x4, and embedded generalizations)
# All act on coefficient arrays and broadcast, so the same code serves the
# scalar API and the vectorized scan path.

def _es3(l2, l3):
    return 3 * l2**2 - 6 * l2 * l3 - 6 * (l3 - 1) * l3


def _ea3(l1, l2, l3):
    return 12 * l2 * l3 - 3 * (1 - 2 * l1) ** 2 * (l1 <= 0.5)


def _es43(l2, l3):
    # normalized: 27/13 = 2 * (27/26), the embedded sum being twice the bracket
    return (27.0 / 13.0) * (2 * l2**3 + 6 * l2**2 * l3 + 3 * (3 - 4 * l2) * l3**2 - 10 * l3**3)


def _es4(l2, l3, l4):
    return (
        4 * l2**3 + 12 * l2**2 * l3 - 24 * l2**2 * l4 - 24 * l2 * l3**2
        + 24 * l2 * l3 * l4 + 12 * l2 * l4**2 - 20 * l3**3 + 12 * l3**2 * l4
        + 18 * l3**2 + 48 * l3 * l4**2 - 36 * l3 * l4 + 20 * l4**3
        - 30 * l4**2 + 12 * l4
    )


def _ea4_branches(l1, l2, l3, l4):
    """The eight accessible-volume polynomials for 4x4 states (no region logic)."""
    b1 = 24 * l4 * (6 * l2 * l3 + l4 * (-3 * l3 + l4))
    b2 = 12 * (-((l2 - l3) ** 3) - 3 * (l2 + l3) * l4**2 + 3 * l4**3 + 3 * (l2 + l3) ** 2 * l4)
    b3 = 2 * (
        -36 * l1**3 - 18 * l1 * ((1 - 2 * l2) ** 2 - 2 * l4**2 + 4 * l2 * l4)
        - 36 * l1**2 * (l2 - 1)
        + 12 * (-3 * l2 * (l4 - 1) ** 2 - 6 * l2**2 * (l4 - 1) - 4 * l2**3 + l4**2 * (4 * l4 - 3))
        + 5
    )
    b4 = 4 * (
        -30 * l1**3
        + 6 * (-3 * l2 * (l4 - 1) ** 2 - 6 * l2**2 * (l4 - 1) - 4 * l2**3 + 2 * l4**3)
        - 18 * l1 * ((l4 - 1) ** 2 + 2 * l2 * (l4 - 1) + 2 * l2**2)
        - 9 * l4 - 18 * l1**2 * (l2 + 2 * l4 - 2) + 4
    )
    b5 = 6 * (
        6 * l1**3 + 12 * (-2 * l2**2 + l4**2 - 2 * l2 * (l4 - 1)) * l1
        - 6 * l1**2 * (2 * l2 + 1)
        + 4 * (-3 * l2 * (l4 - 1) ** 2 - 6 * l2**2 * (l4 - 1) - 4 * l2**3 + l4**2 * (4 * l4 - 3))
        + 1
    )
    b6 = 12 * (
        -((l1 + 2 * l2 - 1) ** 3) - 6 * (l1 + l2) * l4**2 + 4 * l4**3
        - 3 * ((1 - 2 * l2) ** 2 + 4 * l1**2 + 4 * l1 * (l2 - 1)) * l4
    )
    b7 = 6 * (
        (2 * l1 - 1) ** 3 + 16 * l4**3 + 12 * l4**2 * (l1 - l2 - 1)
        - 24 * l2 * (l1 + l2 - 1) * l4
    )
    b8 = 12 * l4 * (
        -12 * (l1**2 + l2**2 + l1 * (l2 - 1)) + 4 * l4**2 + 12 * l2
        - 6 * (l1 + l2) * l4 - 3
    )
    return b1, b2, b3, b4, b5, b6, b7, b8


#: inclusive slack when selecting a piecewise region
REGION_SLACK = 1e-12
#: adjacent branches must agree this well on a region boundary
BRANCH_AGREE_TOL = 1e-8


def _ea4_region_conditions(l1, l2, l4):
    ge_half = l1 >= 0.5 - REGION_SLACK
    le_third = l1 <= 1.0 / 3.0 + REGION_SLACK
    mid = ~ge_half & ~le_third
    a = l1 >= 0.5 - l4 - REGION_SLACK  # otherwise l1 <= 1/2 - l4
    b = l1 <= 1 - 2 * l2 + REGION_SLACK  # otherwise l1 >= 1 - 2 l2
    return (
        ge_half & ~b,
        ge_half & b,
        le_third & a,
        le_third & ~a,
        mid & a & b,
        mid & ~a & b,
        mid & a & ~b,
        mid & ~a & ~b,
    )


def _ea4_vec(l1, l2, l3, l4):
    branches = _ea4_branches(l1, l2, l3, l4)
    conds = _ea4_region_conditions(l1, l2, l4)
    return np.select(list(conds), list(branches))


def _ea4_scalar(l1, l2, l3, l4) -> float:
    branches = _ea4_branches(l1, l2, l3, l4)
    conds = _ea4_region_conditions(np.float64(l1), np.float64(l2), np.float64(l4))
    hits = [i for i, c in enumerate(conds) if c]
    vals = [branches[i] for i in hits]
    # the polynomials are continuous across region boundaries; with the
    # inclusive slack a boundary point selects several branches, which must agree
    assert hits, "region conditions failed to cover the simplex"
    if max(vals) - min(vals) > BRANCH_AGREE_TOL:
        raise AssertionError(f"adjacent accessible-volume branches disagree: {vals}")
    return float(vals[0])


def _es54_normalized(l2, l3, l4):
    raw = -5 * (
        -(l2**4) - 21 * l4**4 + l3**3 * (9 * l3 - 8) + 4 * l4**3 * (8 - 15 * l3)
        - 6 * l4**2 * (l3 * (3 * l3 - 8) + 2) + 12 * l3**2 * (3 * l3 - 2) * l4
        - 4 * l2**3 * (l3 + l4) - 6 * l2**2 * (l3**2 - 5 * l4**2 + 2 * l3 * l4)
        + 12 * l2 * (l3 - l4) * (l3**2 + l4**2 + 4 * l3 * l4)
    )
    return raw * (256.0 / 255.0)


def _es64_normalized(l2, l3, l4):
    raw = (
        6 * l2**5 - 84 * l3**5 + 15 * l3**4 * (5 - 8 * l2)
        + 60 * l2**2 * (l3**3 - 9 * l4**3 + 3 * l4**2 * l3 + 3 * l3**2 * l4)
        + 60 * (l2**3 * (l3 + l4) ** 2 + l4 * (-7 * l3**4 + 6 * l3**2 * l4**2
                                               + l3**3 * (-8 * l2 - 14 * l4 + 5)))
        + 3 * l4**3 * (60 * l3 * (4 * l2 + 6 * l4 - 5) + 7 * l4 * (16 * l4 - 25))
        + 10 * (20 * l4**3 + 9 * l3**2 * l4**2 * (5 - 8 * l2)
                + 3 * (6 * l4**4 * l2 + l2**4 * (l3 + l4)))
    )
    return raw * (512.0 / 499.0)


def evaluate_closed(vec: SchmidtVector, mid: MeasureId) -> float:
    """Evaluate the registered explicit polynomial expression for a measure.

    These are separate transcriptions, not derived from the permutation sum;
    agreement between the two routes is asserted by the test suite.
    """
    d = vec.dim
    lam = vec.values
    if mid.tag == "es" and d == 3:
        return float(_es3(lam[1], lam[2]))
    if mid.tag == "es" and d == 4:
        return float(_es4(lam[1], lam[2], lam[3]))
    if mid.tag == "ea" and d == 3:
        return float(_ea3(lam[0], lam[1], lam[2]))
    if mid.tag == "ea" and d == 4:
        return _ea4_scalar(*lam)
    if mid.tag == "esgen" and (d, mid.k) == (3, 4):
        return float(_es43(lam[1], lam[2]))
    if mid.tag == "esgen" and (d, mid.k) == (4, 5):
        return float(_es54_normalized(lam[1], lam[2], lam[3]))
    if mid.tag == "esgen" and (d, mid.k) == (4, 6):
        return float(_es64_normalized(lam[1], lam[2], lam[3]))
    raise UnsupportedClosedForm(f"no closed form for {mid.label} at dimension {d}")


# ---------------------------------------------------------------------------
# generalized source entanglement (embed, renormalize)

_norm_lock = threading.Lock()
_norm_cache: dict[tuple[int, int], float] = {}


def _embed_norm(d: int, k: int) -> float:
    """Normalization constant: embedded source entanglement of the maximally
    entangled d-state, computed once per (d, k)."""
    key = (d, k)
    with _norm_lock:
        cached = _norm_cache.get(key)
    if cached is not None:
        return cached
    if key in EMBED_NORM:
        val = float(EMBED_NORM[key])
    else:
        val = es_permutation(embed(maximally_entangled(d), k))
    with _norm_lock:
        _norm_cache[key] = val
    return val


def es_generalized(vec: SchmidtVector, k: int) -> float:
    """Source entanglement of the zero-padded state, normalized to 1 at the
    maximally entangled d-state (degenerate to es_permutation when k == dim)."""
    d = vec.dim
    if k < d:
        raise ValueError(f"generalization index k={k} below dimension {d}")
    _check_cap(k)
    if k == d:
        return es_permutation(vec)
    raw = es_permutation(embed(vec, k))
    return min(max(raw / _embed_norm(d, k), 0.0), 1.0)


# ---------------------------------------------------------------------------
# comparison measures

def ent_formation(vec: SchmidtVector) -> float:
    """Entropy of the reduced state, -sum lambda log2 lambda (zeros contribute 0)."""
    return float(math.fsum(-x * math.log2(x) for x in vec.values if x > 0.0))


def negativity(vec: SchmidtVector) -> float:
    """2/(d-1) sum_{i<j} sqrt(lambda_i lambda_j) = ((sum sqrt(lambda))^2 - 1)/(d-1)."""
    s = math.fsum(math.sqrt(x) for x in vec.values)
    return max(s * s - 1.0, 0.0) / (vec.dim - 1)


def geometric(vec: SchmidtVector) -> float:
    """One minus the squared overlap with the nearest product state: 1 - lambda_1."""
    return 1.0 - vec.values[0]


def tensor_schmidt(a: SchmidtVector, b: SchmidtVector) -> SchmidtVector:
    """Schmidt vector of the tensor product: all pairwise products, sorted."""
    d = a.dim * b.dim
    _check_cap(d)
    prod = np.outer(a.as_array(), b.as_array()).ravel()
    return new_sorted(prod)


# ---------------------------------------------------------------------------
# dispatch (scalar and vectorized block paths)

def measure_value(vec: SchmidtVector, mid: MeasureId) -> float:
    """Evaluate one measure; polynomial fast paths where registered."""
    d = vec.dim
    if mid.tag == "es":
        if d in (3, 4):
            return evaluate_closed(vec, mid)
        return es_permutation(vec)
    if mid.tag == "esgen":
        if (d, mid.k) in EMBED_NORM:
            return evaluate_closed(vec, mid)
        return es_generalized(vec, mid.k)
    if mid.tag == "ea":
        if d == 2:
            # the accessible set of (l1, l2) is the segment above l1, of
            # relative length 2 l2
            return 2.0 * vec.values[1]
        return evaluate_closed(vec, mid)
    if mid.tag == "ef":
        return ent_formation(vec)
    if mid.tag == "neg":
        return negativity(vec)
    if mid.tag == "geo":
        return geometric(vec)
    raise UnsupportedClosedForm(f"unknown measure {mid.label}")


def measure_block(block: np.ndarray, mid: MeasureId) -> np.ndarray:
    """Vectorized measure evaluation on an (n, d) array of sorted coefficients."""
    d = block.shape[1]
    cols = [block[:, i] for i in range(d)]
    if mid.tag == "es" and d == 3:
        return _es3(cols[1], cols[2])
    if mid.tag == "es" and d == 4:
        return _es4(cols[1], cols[2], cols[3])
    if mid.tag == "ea" and d == 2:
        return 2.0 * cols[1]
    if mid.tag == "ea" and d == 3:
        return _ea3(cols[0], cols[1], cols[2])
    if mid.tag == "ea" and d == 4:
        return _ea4_vec(cols[0], cols[1], cols[2], cols[3])
    if mid.tag == "esgen" and (d, mid.k) == (3, 4):
        return _es43(cols[1], cols[2])
    if mid.tag == "esgen" and (d, mid.k) == (4, 5):
        return _es54_normalized(cols[1], cols[2], cols[3])
    if mid.tag == "esgen" and (d, mid.k) == (4, 6):
        return _es64_normalized(cols[1], cols[2], cols[3])
    if mid.tag == "ef":
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.where(block > 0.0, np.log2(np.where(block > 0.0, block, 1.0)), 0.0)
        return -np.sum(block * logs, axis=1)
    if mid.tag == "neg":
        s = np.sum(np.sqrt(block), axis=1)
        return np.maximum(s * s - 1.0, 0.0) / (d - 1)
    if mid.tag == "geo":
        return 1.0 - cols[0]
    # generic fallback, one state at a time
    return np.array([measure_value(SchmidtVector(tuple(row)), mid) for row in block.tolist()])


def measure_point(vec: SchmidtVector, ids) -> MeasurePoint:
    return MeasurePoint(vec, {mid: measure_value(vec, mid) for mid in ids})
