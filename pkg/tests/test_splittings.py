import numpy as np
import pytest

from bent.errors import EmptySubset, InconsistentTable
from bent.schmidt import new_sorted
from bent.splittings import (
    QubitEmbedding,
    all_splittings,
    from_schmidt,
    reconstruct,
    splitting_geometric,
    subset_key,
)


def test_worked_two_qubit_example():
    q = QubitEmbedding(2, (0.1, 0.2, 0.3, 0.4))
    assert splitting_geometric(q, {2}) == pytest.approx(0.4, abs=1e-15)
    assert splitting_geometric(q, {1, 2}) == pytest.approx(0.6, abs=1e-15)
    assert splitting_geometric(q, {1}) == pytest.approx(0.3, abs=1e-15)


def test_product_state_all_splittings_vanish():
    q = QubitEmbedding(2, (0.0, 0.0, 0.0, 1.0))
    for key, val in all_splittings(q).items():
        assert val == 0.0, key


def test_empty_subset_rejected():
    q = QubitEmbedding(1, (0.4, 0.6))
    with pytest.raises(EmptySubset):
        splitting_geometric(q, set())


def test_subset_key_convention():
    assert subset_key(3, {2}) == "010"
    assert subset_key(3, {1, 3}) == "101"


def test_reconstruct_worked_example():
    q = QubitEmbedding(2, (0.1, 0.2, 0.3, 0.4))
    back = reconstruct(2, all_splittings(q))
    assert back.lam == pytest.approx((0.1, 0.2, 0.3, 0.4), abs=1e-12)


def test_reconstruct_single_qubit():
    assert reconstruct(1, {"1": 0.4}).lam == pytest.approx((0.4, 0.6), abs=1e-15)


def test_reconstruct_separable_table():
    # a vanishing full-splitting measure forces the top coefficient to one
    table = {"1": 0.0}
    assert reconstruct(1, table).lam == (0.0, 1.0)
    q = QubitEmbedding(2, (0.0, 0.0, 0.0, 1.0))
    assert reconstruct(2, all_splittings(q)).lam == pytest.approx((0, 0, 0, 1.0), abs=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_round_trip_random(n):
    rng = np.random.default_rng(60 + n)
    worst = 0.0
    for _ in range(1000):
        lam = np.sort(rng.dirichlet(np.ones(2**n)))
        q = QubitEmbedding(n, tuple(lam.tolist()))
        back = reconstruct(n, all_splittings(q))
        worst = max(worst, float(np.max(np.abs(np.array(back.lam) - lam))))
    assert worst <= 1e-12


def test_embedding_invariance_under_padding():
    # a 3x3 state processed as a 2-qubit-per-side state pads one zero slot
    v = new_sorted([0.6, 0.3, 0.1])
    q = from_schmidt(v)
    assert q.n == 2
    assert q.lam == (0.0, 0.1, 0.3, 0.6)
    table = all_splittings(q)
    assert reconstruct(2, table).lam == pytest.approx(q.lam, abs=1e-12)


def test_missing_subset_raises():
    with pytest.raises(InconsistentTable):
        reconstruct(2, {"11": 0.5})


def test_inconsistent_table_raises():
    q = QubitEmbedding(2, (0.1, 0.2, 0.3, 0.4))
    table = all_splittings(q)
    table["01"] = 0.9  # incompatible with the rest
    with pytest.raises(InconsistentTable):
        reconstruct(2, table)


def test_qubit_cap():
    with pytest.raises(ValueError):
        QubitEmbedding(4, tuple([1 / 16] * 16))
    assert from_schmidt(new_sorted([0.2] * 5)).n == 3  # padded into 2^3 slots
    with pytest.raises(ValueError):
        from_schmidt(new_sorted([1.0 / 9] * 9))  # would need n = 4
