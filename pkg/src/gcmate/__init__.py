"""Exact tools for generalized graph spectra.

Classify a graph by the Smith normal form of its walk matrix, decide whether
family members are determined by their generalized spectrum, construct the
unique generalized cospectral mate when one exists, and certify the result.
"""

from .factor import Factorization, factorize, is_prime
from .graphs import (
    Graph,
    complement,
    is_isomorphic,
    parse_adjacency_text,
    parse_graph6,
    random_graph,
    read_graphs,
    write_graph6,
)
from .linalg import (
    BigMatrix,
    ModVector,
    SnfDecomposition,
    char_poly,
    det_bareiss,
    nullspace_mod_p,
    rank_mod_p,
    smith_normal_form,
)
from .matefinder import (
    MateResult,
    MateVerdict,
    PerfectRep,
    PrimitiveMatrix,
    ShortestRep,
    assemble_primitive,
    brute_force_perfect_reps,
    enumerate_perfect_reps,
    find_mate,
    kernel_vector,
    shortest_p_representative,
    strip_zeros,
)
from .verify import (
    CospectralCertificate,
    certify_mate,
    certify_pair,
    generalized_cospectral,
    recover_q,
    xi_invariant,
)
from .walkmatrix import (
    FamilyClassification,
    Verdict,
    WalkMatrixBundle,
    build_walk_matrix,
    classify,
)

__version__ = "0.1.0"
