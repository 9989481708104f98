"""posmaps: positive-map families, entanglement witnesses, and PPT search.

Construct the reduction / extended-reduction / one-sided-sum / dimension-3
map families in coefficient pair form, convert them to block witnesses,
certify indecomposability from the coefficient spectrum plus the vectorized
subspace test, and run the convex searches (witness splitting, PPT
violation) that detect bound entanglement numerically.
"""

from ._backend import available_backends, backend_name, use_backend
from .criterion import (Antisymmetric, Generic, IndecomposabilityCertificate,
                        MapSubspace, PianiSum, Verdict, build_subspace,
                        certify, find_positive_expectation)
from .linalg import (DEFAULT_TOL, BipartiteShape, ToleranceConfig, devectorize,
                     hermitian_eig, kron, orthonormal_complement, partial_trace,
                     partial_transpose, psd_project, vectorize)
from .maps import (HermitianBasis, KrausPairMap, Witness, antisymmetric_unitary,
                   apply, choi_map, compose_transpose, extended_reduction_map,
                   gellmann_basis, jamiolkowski_witness, min_output_eigenvalue,
                   piani_map, reduction_map, witness_to_map)
from .optim import (DecompositionReport, ViolationSearchReport,
                    decompose_witness, ppt_violation_search, verify_detection)

__version__ = "0.1.0"

__all__ = [
    "available_backends", "backend_name", "use_backend",
    "Antisymmetric", "Generic", "IndecomposabilityCertificate", "MapSubspace",
    "PianiSum", "Verdict", "build_subspace", "certify",
    "find_positive_expectation",
    "DEFAULT_TOL", "BipartiteShape", "ToleranceConfig", "devectorize",
    "hermitian_eig", "kron", "orthonormal_complement", "partial_trace",
    "partial_transpose", "psd_project", "vectorize",
    "HermitianBasis", "KrausPairMap", "Witness", "antisymmetric_unitary",
    "apply", "choi_map", "compose_transpose", "extended_reduction_map",
    "gellmann_basis", "jamiolkowski_witness", "min_output_eigenvalue",
    "piani_map", "reduction_map", "witness_to_map",
    "DecompositionReport", "ViolationSearchReport", "decompose_witness",
    "ppt_violation_search", "verify_detection",
    "__version__",
]
