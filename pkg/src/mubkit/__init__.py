"""mubkit: mutually unbiased bases for N qudits of prime dimension.

Constructs complete MUB sets from maximal commuting classes of generalized
Pauli operators, classifies each basis by its factorization across
particles, censuses the structure signatures of all MUB partitions, and
verifies the certainty trade-off relations between local and nonlocal
measurements both analytically and by numerical extremization.
"""

from .basis import (
    Basis,
    CompositeDims,
    MubSet,
    build_complete_mub,
    certify_unbiased,
    default_pairing,
    eigenbasis_of_class,
    mub_from_partition,
    tensor_mub,
)
from .certainty import (
    CertaintyReport,
    PureState,
    certainty,
    certainty_report,
    check_full_invariant,
    check_pair,
    check_sum,
    haar_states,
    probabilities,
    sweep_margins,
)
from .extremize import (
    ExtremizationProblem,
    ExtremizationResult,
    certainty_region_scan,
    extremize,
    objective_and_gradient,
)
from .search import (
    Census,
    MubPartition,
    enumerate_partitions,
    find_first_partition,
    sampled_search,
    validate_partition,
)
from .separability import (
    FactorizationClass,
    ParticlePartition,
    StructureSignature,
    finest_factorization,
    separable_across,
    structure_signature,
)
from .weyl import (
    CommutingClass,
    PrimeDim,
    WeylLabel,
    commutes,
    enumerate_lagrangians,
    symplectic_form,
    weyl_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "Census",
    "CertaintyReport",
    "CommutingClass",
    "CompositeDims",
    "ExtremizationProblem",
    "ExtremizationResult",
    "FactorizationClass",
    "MubPartition",
    "MubSet",
    "ParticlePartition",
    "PrimeDim",
    "PureState",
    "StructureSignature",
    "WeylLabel",
    "build_complete_mub",
    "certainty",
    "certainty_region_scan",
    "certainty_report",
    "certify_unbiased",
    "check_full_invariant",
    "check_pair",
    "check_sum",
    "commutes",
    "default_pairing",
    "eigenbasis_of_class",
    "enumerate_lagrangians",
    "enumerate_partitions",
    "extremize",
    "find_first_partition",
    "finest_factorization",
    "haar_states",
    "mub_from_partition",
    "objective_and_gradient",
    "probabilities",
    "sampled_search",
    "separable_across",
    "structure_signature",
    "sweep_margins",
    "tensor_mub",
    "validate_partition",
    "weyl_matrix",
]
