"""Exterior algebraic shifting of uniform hypergraphs and simplicial complexes.

The package computes exterior shifts with respect to arbitrary invertible
matrices over a prime field or the rationals, including the partial shifts
obtained from generic representatives of Bruhat cells, the classical
combinatorial shifts, shift graphs and their contractions, and Betti
numbers of shifted and near-cone complexes.  Two interchangeable backends
are provided: exact symbolic elimination over a multivariate polynomial
ring, and seeded randomized evaluation with an explicit error bound.
"""

from .errors import (
    InputFormatError,
    InternalError,
    InvalidCharacteristicError,
    MathPreconditionError,
    MatrixNotInvertibleError,
    NotClosedError,
    ShiftlabError,
)
from .combstruct import (
    FVector,
    KSubset,
    SimplicialComplex,
    UniformHypergraph,
    complex_from_json,
    complex_from_layers,
    complex_from_text,
    complex_to_json,
    dominates,
    faces_to_text,
    hypergraph_from_json,
    hypergraph_from_text,
    hypergraph_lex_compare,
    hypergraph_to_json,
    is_near_cone,
    is_shifted,
    k_subsets,
    lex_compare,
    subset_rank,
    subset_unrank,
)
from .symgroup import (
    Permutation,
    all_permutations,
    inversions_of_product,
    parse_permutation,
    weak_order_geq,
)
from .field import (
    Backend,
    Characteristic,
    DEFAULT_EPSILON,
    DeterministicStream,
    EvalPoint,
    FieldContext,
    IntegerRing,
    MultiPoly,
    PolynomialRing,
    PrimeField,
    ZZ,
    gf_extension,
    is_prime,
    make_field_context,
    matrix_rank,
    rank_profile,
    sample_eval_point,
)
from .shiftcore import (
    CompoundSubmatrix,
    GenericMatrix,
    bruhat_cell,
    cell_representative,
    cell_unipotent,
    combinatorial_shift,
    combinatorial_shift_matrix,
    compound_rows,
    coset_normalize,
    evaluate_matrix,
    exterior_shift,
    exterior_shift_profile,
    full_shift,
    generic_matrix,
    generic_unipotent,
    identity_matrix,
    matrix_difference,
    matrix_from_entries,
    matrix_product,
    partial_shift,
    partial_shift_profile,
    permutation_matrix,
    product_defect,
    twist,
    vandermonde_matrix,
)
from .shiftgraph import (
    ContractedShiftGraph,
    ShiftGraph,
    build_shift_graph,
    build_shift_graph_from,
    contract,
    export_dot,
    export_json,
    is_acyclic,
    parse_graph_json,
    sinks,
)
from .topology import (
    BettiVector,
    ScanReport,
    betti_numbers,
    betti_via_full_shift,
    conjecture_scan,
    near_cone_betti,
    preserves_betti_certificate,
    random_complexes,
    shift_complex,
    shift_complex_by_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "BettiVector",
    "Characteristic",
    "CompoundSubmatrix",
    "ContractedShiftGraph",
    "DEFAULT_EPSILON",
    "DeterministicStream",
    "EvalPoint",
    "FVector",
    "FieldContext",
    "GenericMatrix",
    "InputFormatError",
    "IntegerRing",
    "InternalError",
    "InvalidCharacteristicError",
    "KSubset",
    "MathPreconditionError",
    "MatrixNotInvertibleError",
    "MultiPoly",
    "NotClosedError",
    "Permutation",
    "PolynomialRing",
    "PrimeField",
    "ScanReport",
    "ShiftGraph",
    "ShiftlabError",
    "SimplicialComplex",
    "UniformHypergraph",
    "ZZ",
    "all_permutations",
    "betti_numbers",
    "betti_via_full_shift",
    "bruhat_cell",
    "build_shift_graph",
    "build_shift_graph_from",
    "cell_representative",
    "cell_unipotent",
    "combinatorial_shift",
    "combinatorial_shift_matrix",
    "complex_from_json",
    "complex_from_layers",
    "complex_from_text",
    "complex_to_json",
    "compound_rows",
    "conjecture_scan",
    "contract",
    "coset_normalize",
    "dominates",
    "evaluate_matrix",
    "export_dot",
    "export_json",
    "exterior_shift",
    "exterior_shift_profile",
    "faces_to_text",
    "full_shift",
    "generic_matrix",
    "generic_unipotent",
    "gf_extension",
    "hypergraph_from_json",
    "hypergraph_from_text",
    "hypergraph_lex_compare",
    "hypergraph_to_json",
    "identity_matrix",
    "inversions_of_product",
    "is_acyclic",
    "is_near_cone",
    "is_prime",
    "is_shifted",
    "k_subsets",
    "lex_compare",
    "make_field_context",
    "matrix_difference",
    "matrix_from_entries",
    "matrix_product",
    "matrix_rank",
    "near_cone_betti",
    "parse_graph_json",
    "parse_permutation",
    "partial_shift",
    "partial_shift_profile",
    "permutation_matrix",
    "preserves_betti_certificate",
    "product_defect",
    "random_complexes",
    "rank_profile",
    "sample_eval_point",
    "shift_complex",
    "shift_complex_by_matrix",
    "sinks",
    "subset_rank",
    "subset_unrank",
    "twist",
    "vandermonde_matrix",
    "weak_order_geq",
]
