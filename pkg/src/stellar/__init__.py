"""Exact computation with stellar sequences of weighted simplicial complexes."""

from .complexes import (DeleteMaximal, Identity, InvalidStep, Subdivide, WeightedComplex,
                        apply_step, is_isomorphic, isomorphisms, validate)
from .exactgeom import RationalSimplex, den, is_regular, mediant
from .regular import (RegularComplex, Realization, Verdict, blow_up, blow_up_edge,
                      canonical_realization, complex_contains, delta_transform, skeleton,
                      support_contains, unit_cube)
from .zhomeo import PLMap, Unknown, invert, linearize, transport
from .mcnfun import PLFunc, dominance_witness, ideal_member, parse_term, term_to_plfunc, zeroset
from .sequences import (ConstantW, EffrosShen, FiniteSteps, LexZ2, SimplicialWeights,
                        SkeletonConstant, StellarSequence, confluent, family_sequence, orbit)
from .classify import check_equivalence, classify, strong_equivalence

__version__ = "0.1.0"

__all__ = [
    "apply_step",
    "blow_up",
    "blow_up_edge",
    "canonical_realization",
    "check_equivalence",
    "classify",
    "complex_contains",
    "confluent",
    "ConstantW",
    "DeleteMaximal",
    "delta_transform",
    "den",
    "dominance_witness",
    "EffrosShen",
    "family_sequence",
    "FiniteSteps",
    "ideal_member",
    "Identity",
    "InvalidStep",
    "invert",
    "is_isomorphic",
    "is_regular",
    "isomorphisms",
    "LexZ2",
    "linearize",
    "mediant",
    "orbit",
    "parse_term",
    "PLFunc",
    "PLMap",
    "RationalSimplex",
    "Realization",
    "RegularComplex",
    "SimplicialWeights",
    "skeleton",
    "SkeletonConstant",
    "StellarSequence",
    "strong_equivalence",
    "Subdivide",
    "support_contains",
    "term_to_plfunc",
    "transport",
    "unit_cube",
    "Unknown",
    "validate",
    "Verdict",
    "WeightedComplex",
    "zeroset",
]
