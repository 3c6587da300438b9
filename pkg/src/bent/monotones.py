"""LOCC convertibility: tail-sum monotones, majorization tests, conversion probability."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BadProbabilities, DimensionMismatch, NotOptimalProtocol
from .schmidt import SchmidtVector

__all__ = [
    "MonotoneVector",
    "EnsembleBranch",
    "ConversionProbability",
    "vidal_monotones",
    "can_reach",
    "success_probability",
    "ensemble_feasible",
    "check_optimal_residuals",
]

#: tolerance for single tail-sum comparisons
CMP_TOL = 1e-12
#: tolerance where sums over ensemble branches accumulate roundoff
ENSEMBLE_TOL = 1e-10


@dataclass(frozen=True)
class MonotoneVector:
    """Tail sums e_k = sum_{i>=k} lambda_i for k = 1..d (a complete monotone family)."""

    e: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.e)

    def __getitem__(self, k: int) -> float:
        """1-based access matching the usual E_k index convention."""
        return self.e[k - 1]


@dataclass(frozen=True)
class EnsembleBranch:
    probability: float
    target: SchmidtVector

    def __post_init__(self):
        if not (0.0 <= self.probability <= 1.0 + CMP_TOL):
            raise BadProbabilities(f"branch probability {self.probability} outside [0,1]")


class ConversionProbability(NamedTuple):
    p: float
    k0: int


def vidal_monotones(vec: SchmidtVector) -> MonotoneVector:
    lam = vec.as_array()
    tails = np.cumsum(lam[::-1])[::-1]
    tails[0] = 1.0  # exact by normalization
    return MonotoneVector(tuple(tails.tolist()))


def _check_dims(psi: SchmidtVector, phi: SchmidtVector):
    if psi.dim != phi.dim:
        raise DimensionMismatch(f"dims {psi.dim} != {phi.dim}; embed first")


def can_reach(psi: SchmidtVector, phi: SchmidtVector) -> bool:
    """True iff psi converts to phi deterministically under LOCC.

    Nielsen's criterion: every tail sum of psi dominates the one of phi.
    """
    _check_dims(psi, phi)
    ep = vidal_monotones(psi).e
    ef = vidal_monotones(phi).e
    return all(a >= b - CMP_TOL for a, b in zip(ep, ef))


def success_probability(psi: SchmidtVector, phi: SchmidtVector) -> ConversionProbability:
    """Optimal probability of converting psi into phi, with the minimizing index.

    p = min_k E_k(psi) / E_k(phi) over indices with E_k(phi) > 0; indices with
    vanishing E_k(phi) impose no constraint (rank-deficient targets are then
    governed by the remaining indices).  Ties resolve to the smallest k.
    """
    _check_dims(psi, phi)
    ep = vidal_monotones(psi).e
    ef = vidal_monotones(phi).e
    best = math.inf
    k0 = 1
    for k, (a, b) in enumerate(zip(ep, ef), start=1):
        if b <= 0.0:
            continue
        r = a / b
        if r < best - CMP_TOL:
            best = r
            k0 = k
    return ConversionProbability(min(max(best, 0.0), 1.0), k0)


def _validate_ensemble(psi: SchmidtVector, branches: Sequence[EnsembleBranch]):
    if not branches:
        raise BadProbabilities("empty ensemble")
    for br in branches:
        _check_dims(psi, br.target)
    tot = math.fsum(br.probability for br in branches)
    if abs(tot - 1.0) > ENSEMBLE_TOL:
        raise BadProbabilities(f"branch probabilities sum to {tot!r}")


def ensemble_feasible(psi: SchmidtVector, branches: Sequence[EnsembleBranch]) -> bool:
    """Can psi be converted by LOCC into the given pure-state ensemble?

    Required and sufficient: E_k(psi) >= sum_j p_j E_k(phi_j) for every k.
    """
    _validate_ensemble(psi, branches)
    ep = vidal_monotones(psi).e
    for k in range(psi.dim):
        avg = math.fsum(br.probability * vidal_monotones(br.target).e[k] for br in branches)
        if ep[k] < avg - ENSEMBLE_TOL:
            return False
    return True


def check_optimal_residuals(
    psi: SchmidtVector, phi: SchmidtVector, branches: Sequence[EnsembleBranch]
) -> bool:
    """Check the residual-branch structure of an optimal conversion protocol.

    branches[0] must be (p, phi) with p the optimal conversion probability;
    returns True iff every other branch has vanishing E_{k0}, k0 being the
    minimizing index of the conversion probability.  In an optimal protocol
    the residual branches cannot retain any weight on the bottom d - k0 + 1
    coefficients, otherwise the ensemble would be infeasible.
    """
    _validate_ensemble(psi, branches)
    p, k0 = success_probability(psi, phi)
    lead = branches[0]
    same_target = lead.target.dim == phi.dim and all(
        abs(a - b) <= CMP_TOL for a, b in zip(lead.target, phi)
    )
    if not same_target or abs(lead.probability - p) > ENSEMBLE_TOL:
        raise NotOptimalProtocol(
            f"leading branch probability {lead.probability} != optimal {p}"
        )
    for br in branches[1:]:
        if vidal_monotones(br.target)[k0] > ENSEMBLE_TOL:
            return False
    return True
