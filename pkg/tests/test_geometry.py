import math

import numpy as np
import pytest

from bent.geometry import (
    Polygon2D,
    exact_polygon_3,
    injectivity_scan,
    mc_accessible_entanglement,
    mc_source_entanglement,
)
from bent.measures import MeasureId, evaluate_closed
from bent.schmidt import SchmidtVector, maximally_entangled, new_sorted, sample_sorted_block, separable

ES, EA = MeasureId("es"), MeasureId("ea")


def test_volume_estimate_stderr_invariant():
    est = mc_source_entanglement(new_sorted([0.6, 0.3, 0.1]), 5000, seed=0)
    assert est.std_error == pytest.approx(
        math.sqrt(est.fraction * (1 - est.fraction) / est.samples), abs=1e-15
    )
    assert est.samples == 5000 and est.seed == 0


def test_mc_source_separable_is_exact_zero():
    # every sampled state reaches the separable state, so its source volume is full
    est = mc_source_entanglement(separable(3), 2000, seed=1)
    assert est.fraction == 0.0


def test_mc_source_maximally_entangled_is_one():
    est = mc_source_entanglement(maximally_entangled(3), 2000, seed=1)
    assert est.fraction == 1.0


def test_mc_accessible_maximally_entangled():
    est = mc_accessible_entanglement(maximally_entangled(3), 2000, seed=2)
    assert est.fraction == 1.0


def test_mc_matches_closed_forms_quick():
    phi = new_sorted([0.6, 0.3, 0.1])
    est = mc_source_entanglement(phi, 200_000, seed=3)
    assert abs(est.fraction - 0.63) <= 3 * est.std_error
    est = mc_accessible_entanglement(phi, 200_000, seed=3)
    assert abs(est.fraction - 0.36) <= 3 * est.std_error


def test_mc_determinism():
    phi = new_sorted([0.5, 0.3, 0.2])
    a = mc_source_entanglement(phi, 50_000, seed=9)
    b = mc_source_entanglement(phi, 50_000, seed=9)
    assert a.fraction == b.fraction


def test_exact_polygon_reference_state():
    phi = new_sorted([0.5, 0.37, 0.13])
    res = exact_polygon_3(phi, "accessible")
    assert res.ratio == pytest.approx(12 * 0.37 * 0.13, abs=1e-12)
    assert len(res.polygon.vertices) == 4


def test_exact_polygon_separable_source():
    res = exact_polygon_3(separable(3), "source")
    assert res.ratio == pytest.approx(1.0, abs=1e-15)


def test_exact_polygon_degenerate_accessible():
    # nothing (of positive measure) is reachable from the separable state
    res = exact_polygon_3(separable(3), "accessible")
    assert res.ratio == 0.0


def test_polygon_area_rotation_invariant():
    verts = ((1.0, 0.0), (0.5, 0.5), (0.5, 0.37), (0.74, 0.13))
    areas = {Polygon2D(verts[i:] + verts[:i]).area() for i in range(4)}
    assert max(areas) - min(areas) < 1e-15
    assert Polygon2D(verts[:2]).area() == 0.0


@pytest.mark.parametrize("which", ["source", "accessible"])
def test_exact_polygon_matches_closed_forms(which):
    rng = np.random.default_rng(31)
    block = sample_sorted_block(3, 1000, rng)
    for row in block:
        phi = SchmidtVector(tuple(row))
        res = exact_polygon_3(phi, which)
        if which == "source":
            assert 1.0 - res.ratio == pytest.approx(evaluate_closed(phi, ES), abs=1e-12)
        else:
            assert res.ratio == pytest.approx(evaluate_closed(phi, EA), abs=1e-12)


def test_exact_polygon_rejects_other_dims():
    with pytest.raises(ValueError):
        exact_polygon_3(new_sorted([0.5, 0.5]), "source")
    with pytest.raises(ValueError):
        exact_polygon_3(new_sorted([0.5, 0.3, 0.2]), "everything")


def test_injectivity_unique_pair_finds_nothing():
    cols = injectivity_scan([ES, MeasureId("esgen", 4)], 3, 30_000, 1e-6, seed=0)
    assert cols == []


def test_injectivity_degenerate_pair_finds_collisions():
    cols = injectivity_scan([ES, EA], 3, 100_000, 1e-6, seed=11)
    assert len(cols) >= 1
    for c in cols:
        assert max(abs(a - b) for a, b in zip(c.values_first, c.values_second)) <= 1e-6
        assert max(abs(a - b) for a, b in zip(c.first, c.second)) > 1e-5
