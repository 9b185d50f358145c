"""Point-sphere incidences and pseudo-random graphs over finite fields and rings."""

from .algebra import (
    DivisorStats,
    FieldCtx,
    RingCtx,
    additive_character,
    divisor_stats,
    fe_pow,
    field_make,
    ring_make,
    trace,
)
from .errors import CapExceeded, InvalidInput, NonConvergence
from .geometry import (
    DiagonalForm,
    QSphere,
    SphereSet,
    all_points,
    all_spheres,
    count_incidences,
    count_incidences_ring,
    distance_histogram,
    evaluate_form,
    on_sphere,
    pinned_distance_set,
    zero_distance_pairs,
)
from .spectral import (
    AlgebraicGraph,
    SpectralCert,
    build_graph,
    cayley_spectrum,
    certify,
    edge_count,
    eigvec_residual,
    mixing_check,
    symmetric_spectrum,
)
from .experiments import (
    count_singular_4subsets,
    deletion_ddsubset,
    greedy_ddsubset,
    incidence_bound_report,
    is_distinct_distance_subset,
    isosceles_report,
    pinned_distance_report,
    random_incidence_trials,
    ring_incidence_bound_report,
    sp_encoding_check,
    t2_report,
)

__version__ = "0.1.0"
