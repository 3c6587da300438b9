import math

import numpy as np
import pytest

from bent.errors import BadProbabilities, DimensionMismatch, NotOptimalProtocol
from bent.monotones import (
    EnsembleBranch,
    can_reach,
    check_optimal_residuals,
    ensemble_feasible,
    success_probability,
    vidal_monotones,
)
from bent.schmidt import SchmidtVector, maximally_entangled, new_sorted, sample_sorted_block


def s(*vals):
    return new_sorted(vals)


def test_vidal_monotones_values():
    assert vidal_monotones(s(0.6, 0.3, 0.1)).e == pytest.approx((1.0, 0.4, 0.1), abs=1e-15)
    assert vidal_monotones(s(1, 0, 0)).e == (1.0, 0.0, 0.0)
    assert vidal_monotones(maximally_entangled(3)).e == pytest.approx((1.0, 2 / 3, 1 / 3), abs=1e-15)


def test_monotone_vector_invariants():
    e = vidal_monotones(s(0.5, 0.25, 0.15, 0.1)).e
    assert e[0] == 1.0
    assert all(e[i] >= e[i + 1] for i in range(len(e) - 1))


def test_can_reach_examples():
    # the stated tail sums (1, 0.4, 0.13) >= (1, 0.3, 0.1)
    assert can_reach(s(0.6, 0.27, 0.13), s(0.7, 0.2, 0.1))
    assert can_reach(s(0.5, 0.37, 0.13), s(0.7, 0.2, 0.1))
    lam = s(0.44, 0.31, 0.25)
    assert can_reach(lam, lam)
    assert not can_reach(s(0.5, 0.5, 0.0), s(0.6, 0.2, 0.2))  # bottom tail fails


def test_can_reach_dim_mismatch():
    with pytest.raises(DimensionMismatch):
        can_reach(s(0.5, 0.5), s(0.5, 0.3, 0.2))


def _psucc_grid_oracle(psi, phi, steps=100_000):
    """Largest p on a grid such that p-scaled tails of phi stay below psi's."""
    ep = vidal_monotones(psi).e
    ef = vidal_monotones(phi).e
    best = 0.0
    for i in range(steps + 1):
        p = i / steps
        if all(p * b <= a + 1e-12 for a, b in zip(ep, ef)):
            best = p
    return best


def test_success_probability_paper_point():
    p, k0 = success_probability(s(0.52, 0.28, 0.2), maximally_entangled(3))
    assert p == pytest.approx(0.6, abs=1e-12)
    assert k0 == 3


def test_success_probability_identity():
    lam = s(0.4, 0.35, 0.25)
    p, _ = success_probability(lam, lam)
    assert p == 1.0


def test_success_probability_two_qubit_grid_oracle():
    psi, phi = s(0.8, 0.2), s(0.5, 0.5)
    assert _psucc_grid_oracle(psi, phi) == pytest.approx(0.4, abs=1e-5)
    p, k0 = success_probability(psi, phi)
    assert p == pytest.approx(0.4, abs=1e-12)
    assert k0 == 2


def test_success_probability_rank_deficient_target():
    # vanishing tails of the target impose no constraint
    p, k0 = success_probability(s(0.7, 0.2, 0.1), s(0.6, 0.4, 0.0))
    assert p == pytest.approx(min(1.0, 0.3 / 0.4), abs=1e-12)
    assert k0 == 2


def test_can_reach_iff_unit_probability():
    rng = np.random.default_rng(41)
    block = sample_sorted_block(3, 400, rng)
    pairs = [(SchmidtVector(tuple(a)), SchmidtVector(tuple(b)))
             for a, b in zip(block[:200], block[200:])]
    # add constructed reachable pairs: mixing towards the separable state
    for a in block[:200]:
        t = rng.uniform(0, 1)
        psi = SchmidtVector(tuple(a))
        target = tuple((1 - t) * x + t * y for x, y in zip(a, (1.0, 0.0, 0.0)))
        pairs.append((psi, new_sorted(target)))
    for psi, phi in pairs:
        p, _ = success_probability(psi, phi)
        assert can_reach(psi, phi) == (p >= 1.0 - 1e-12)


def test_can_reach_reflexive_transitive():
    rng = np.random.default_rng(42)
    block = sample_sorted_block(4, 10_000, rng)
    maxent = np.full(4, 0.25)
    for row in block:
        a = SchmidtVector(tuple(row))
        assert can_reach(a, a)
        # chain: c -> b -> a by mixing towards the maximally entangled state
        t1, t2 = rng.uniform(0.1, 0.9, size=2)
        b = new_sorted((1 - t1) * row + t1 * maxent)
        c = new_sorted((1 - t2) * np.array(b.values) + t2 * maxent)
        assert can_reach(b, a) and can_reach(c, b)
        assert can_reach(c, a)


def test_ensemble_feasible_examples():
    psi = s(0.6, 0.3, 0.1)
    ens = [
        EnsembleBranch(0.5, s(0.55, 0.35, 0.1)),
        EnsembleBranch(0.5, s(0.65, 0.25, 0.1)),
    ]
    assert ensemble_feasible(psi, ens)
    assert ensemble_feasible(psi, [EnsembleBranch(1.0, psi)])
    assert not ensemble_feasible(psi, [EnsembleBranch(1.0, s(0.5, 0.3, 0.2))])


def test_ensemble_feasible_e1_balance_exact():
    psi = s(0.5, 0.3, 0.2)
    branches = [EnsembleBranch(0.25, s(0.7, 0.2, 0.1))] + [
        EnsembleBranch(0.75, s(0.55, 0.35, 0.1))
    ]
    assert math.fsum(b.probability for b in branches) == 1.0
    assert vidal_monotones(psi).e[0] == 1.0


def test_ensemble_bad_probabilities():
    psi = s(0.6, 0.4)
    with pytest.raises(BadProbabilities):
        ensemble_feasible(psi, [EnsembleBranch(0.7, psi), EnsembleBranch(0.7, psi)])
    with pytest.raises(BadProbabilities):
        ensemble_feasible(psi, [])


def test_check_optimal_residuals_example():
    psi, phi = s(0.6, 0.3, 0.1), maximally_entangled(3)
    p, k0 = success_probability(psi, phi)
    assert (p, k0) == (pytest.approx(0.3, abs=1e-12), 3)
    residual = s(0.7143, 0.2857, 0.0)
    ens = [EnsembleBranch(p, phi), EnsembleBranch(1 - p, residual)]
    assert ensemble_feasible(psi, ens)
    assert check_optimal_residuals(psi, phi, ens)
    bad = [EnsembleBranch(p, phi), EnsembleBranch(1 - p, s(0.6, 0.3, 0.1))]
    assert not check_optimal_residuals(psi, phi, bad)


def test_check_optimal_residuals_identity():
    lam = s(0.5, 0.3, 0.2)
    assert check_optimal_residuals(lam, lam, [EnsembleBranch(1.0, lam)])


def test_check_optimal_residuals_rejects_wrong_probability():
    psi, phi = s(0.6, 0.3, 0.1), maximally_entangled(3)
    ens = [EnsembleBranch(0.5, phi), EnsembleBranch(0.5, s(0.9, 0.1, 0.0))]
    with pytest.raises(NotOptimalProtocol):
        check_optimal_residuals(psi, phi, ens)


def test_optimal_protocol_residual_structure_forced():
    """Branches carrying weight on the minimizing tail break feasibility."""
    rng = np.random.default_rng(7)
    tried = 0
    for row in sample_sorted_block(3, 400, rng):
        psi = SchmidtVector(tuple(row))
        phi = maximally_entangled(3)
        p, k0 = success_probability(psi, phi)
        if p >= 1.0 - 1e-9:
            continue
        tried += 1
        # any residual with nonzero minimizing tail must be infeasible
        bad = new_sorted(rng.dirichlet(np.ones(3)))
        if vidal_monotones(bad)[k0] <= 1e-6:
            continue
        ens = [EnsembleBranch(p, phi), EnsembleBranch(1 - p, bad)]
        assert not ensemble_feasible(psi, ens)
    assert tried > 100


def test_success_probability_bounds_random():
    rng = np.random.default_rng(3)
    block = sample_sorted_block(4, 2000, rng)
    for a, b in zip(block[::2], block[1::2]):
        psi, phi = SchmidtVector(tuple(a)), SchmidtVector(tuple(b))
        p, k0 = success_probability(psi, phi)
        assert 0.0 <= p <= 1.0
        assert 1 <= k0 <= 4
        # the probability-p scaled tails of the target never exceed the source's
        ep, ef = vidal_monotones(psi).e, vidal_monotones(phi).e
        assert all(p * f <= e + 1e-9 for e, f in zip(ep, ef))
