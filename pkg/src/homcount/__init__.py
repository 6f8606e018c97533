"""Count homomorphisms into finite groups, by enumeration and by character sums."""

from .groups import (ConjugacyClass, FiniteGroup, GroupSpec, build_group, conjugacy_classes,
                     power_class_map)
from .homs import (ClassConstraint, HomSet, OrbitDecomposition, TorsorReport, enumerate_constrained,
                   enumerate_homs, orbit_decomposition, twisted_fixed_subset, verify_torsor)
from .presentations import (AbelianizationInfo, AutomorphismData, Presentation, Word, abelianization,
                            evaluate_word, exponent_matrix, parse_presentation, parse_word,
                            semidirect_presentation, surface_presentation)

__version__ = "0.1.0"

__all__ = [
    "AbelianizationInfo", "AutomorphismData", "ClassConstraint", "ConjugacyClass", "FiniteGroup",
    "GroupSpec", "HomSet", "OrbitDecomposition", "Presentation", "TorsorReport", "Word",
    "abelianization", "build_group", "conjugacy_classes", "enumerate_constrained", "enumerate_homs",
    "evaluate_word", "exponent_matrix", "orbit_decomposition", "parse_presentation", "parse_word",
    "power_class_map", "semidirect_presentation", "surface_presentation", "twisted_fixed_subset",
    "verify_torsor",
]
