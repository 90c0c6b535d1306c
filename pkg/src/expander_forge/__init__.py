"""Hypergraph expanders from Cayley graphs over GF(2)^t.

Build r-uniform hypergraphs whose order-k walk graphs inherit spectral
expansion from a base Cayley graph, materialize every derived graph, and
machine-check the exact identities and counting arguments underpinning the
construction at desk scale.
"""

from .budgets import Budgets, DEFAULT_BUDGETS
from .construction import (
    GroupedTuple,
    Hypergraph,
    IndexFamily,
    build_hypergraph,
    build_index_family,
    edge_tuple,
    facet_degree,
    grouped_seed_tuples,
    hyperedge_count,
    k_edge_degree,
    prefix_projection,
    punctured_class_size,
    seed_tuples,
    swap_first_two,
)
from .discrepancy import (
    MultisetFamily,
    SetPartition,
    bound_check,
    edge_count_between,
    enumerate_partitions,
    moebius_identity_check,
    template_count,
)
from .errors import (
    BoundViolated,
    CertificationExhausted,
    DegreeMismatch,
    DimensionMismatch,
    ExpanderForgeError,
    IsomorphismFailure,
    MultiplicityViolation,
    NoDecomposition,
    NoDisjointIntermediate,
    NonRegular,
    ResourceLimit,
)
from .gf2 import (
    Certification,
    GeneratorMultiset,
    GeneratorSet,
    cayley_spectrum_exact,
    check_sum_distinctness,
    gf2_add,
    read_generator_file,
    sample_generators,
    sumset,
    walsh_hadamard_transform,
    write_generator_file,
)
from .graphs import (
    IncidenceMatrix,
    SparseGraph,
    auxiliary_graph,
    cayley_graph,
    dual_edge_graph,
    incidence_matrix,
    walk_graph,
)
from .lemmas import (
    WalkWitness,
    cayley_step_walks,
    full_bubble_walks,
    single_bubble_walks,
    validate_witness,
    verify_degree,
    verify_degree_lower,
    verify_distinct,
    verify_duality,
    verify_isomorphism,
    verify_sumset_moebius,
    verify_symmetry,
)
from .mixing import MixingCurve, mixing_curve
from .rng import SplitMix64
from .spectral import SpectralReport, certify_epsilon, dual_spectra_check, lambda_max_nontrivial

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
