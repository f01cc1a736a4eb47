"""Exact truth-value colorings of rays, projections, and POVMs.

The library decides trueness of rays and projection matrices through 3-adic
valuations of exact rational data, colors POVM elements through the sqrt(2)
component of their (1,1) entry, constructs exactly-verified suitable frames
and decompositions arbitrarily close to arbitrary targets, and demonstrates
both the Kochen-Specker contradiction on classic ray sets and its dissolution
under finite-precision perturbation.
"""

from .coloring import (
    ColoredRay,
    ProjectionRep,
    TruthValue,
    certifying_rescalings,
    classify_decomposition,
    classify_in_frame,
    classify_projection_matrix,
    classify_ray,
    nonorthogonality_certificate,
    truth_sum,
    witness_shift,
)
from .density import ApproxResult, false_ray_near, nearest_true_ray, suitable_frame_near
from .errors import (
    DegenerateInputError,
    InvalidInputError,
    KscolorError,
    NotApplicableError,
    ResourceLimitError,
)
from .fields import (
    GaussianRational,
    QuadComplex,
    QuadRational,
    adjust_denominator,
    rational,
    rationalize,
    v3,
)
from .kscheck import (
    NullificationReport,
    OrthGraph,
    RaySet,
    brute_force_coloring,
    build_graph,
    dump_rayset,
    find_ks_coloring,
    is_valid_coloring,
    load_builtin,
    load_rayset,
    load_rayset_file,
    perturb_to_suitable,
)
from .linalg import (
    Frame,
    GMatrix,
    GVector,
    QuadHermitian,
    cayley_unitary,
    frob_dist2,
    gram_schmidt,
    inner_product,
    matrix_inverse,
    norm2,
    projector_of,
    psd_check,
    ray_dist2,
    same_ray,
)
from .povm import (
    PovmDecomposition,
    PovmElement,
    classify_element,
    classify_with_witness,
    is_suitable,
    make_suitable_near,
    sqrt2_balance,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxResult",
    "ColoredRay",
    "DegenerateInputError",
    "Frame",
    "GMatrix",
    "GVector",
    "GaussianRational",
    "InvalidInputError",
    "KscolorError",
    "NotApplicableError",
    "NullificationReport",
    "OrthGraph",
    "PovmDecomposition",
    "PovmElement",
    "ProjectionRep",
    "QuadComplex",
    "QuadHermitian",
    "QuadRational",
    "RaySet",
    "ResourceLimitError",
    "TruthValue",
    "adjust_denominator",
    "brute_force_coloring",
    "build_graph",
    "cayley_unitary",
    "certifying_rescalings",
    "classify_decomposition",
    "classify_element",
    "classify_in_frame",
    "classify_projection_matrix",
    "classify_ray",
    "classify_with_witness",
    "dump_rayset",
    "false_ray_near",
    "find_ks_coloring",
    "frob_dist2",
    "gram_schmidt",
    "inner_product",
    "is_suitable",
    "is_valid_coloring",
    "load_builtin",
    "load_rayset",
    "load_rayset_file",
    "make_suitable_near",
    "matrix_inverse",
    "nearest_true_ray",
    "nonorthogonality_certificate",
    "norm2",
    "perturb_to_suitable",
    "projector_of",
    "psd_check",
    "rational",
    "rationalize",
    "ray_dist2",
    "same_ray",
    "sqrt2_balance",
    "suitable_frame_near",
    "truth_sum",
    "v3",
    "witness_shift",
]
