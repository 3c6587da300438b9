"""Operational bipartite entanglement toolkit.

Schmidt-vector representation, LOCC convertibility and conversion
probabilities, volume-based entanglement measures with independent Monte
Carlo / exact-geometry validation, qubit-splitting state reconstruction, and
sum-of-squares infeasibility certificates for measure-value combinations.
"""

from .schmidt import (
    PCoordinates,
    SchmidtVector,
    embed,
    from_p,
    maximally_entangled,
    new_sorted,
    sample_uniform,
    separable,
    to_p,
)
from .monotones import (
    EnsembleBranch,
    MonotoneVector,
    can_reach,
    check_optimal_residuals,
    ensemble_feasible,
    success_probability,
    vidal_monotones,
)
from .measures import (
    MeasureId,
    MeasurePoint,
    ent_formation,
    es_generalized,
    es_p_form,
    es_permutation,
    es_simplified,
    evaluate_closed,
    geometric,
    measure_value,
    negativity,
    tensor_schmidt,
)
from .geometry import (
    CollisionPair,
    Polygon2D,
    VolumeEstimate,
    exact_polygon_3,
    injectivity_scan,
    mc_accessible_entanglement,
    mc_source_entanglement,
)
from .splittings import QubitEmbedding, all_splittings, from_schmidt, reconstruct, splitting_geometric
from .polynomials import SparsePolynomial
from .certify import (
    Certificate,
    DualWitness,
    NotFoundAtDegree,
    build_certificate_problem,
    certificate_system,
    solve_feasibility,
    sos_decompose,
    verify_certificate,
)

__version__ = "0.1.0"
