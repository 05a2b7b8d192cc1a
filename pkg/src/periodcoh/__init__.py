"""Exact homological algebra for two-periodized cohomology on small explicit models."""

from .exactla import Matrix, SmithDecomposition, smith_normal_form, solve_integer
from .modcat import QQ, QZ, ZZ, CoefficientRing, ModuleClass, ModuleMap, Zmod, cokernel, image, kernel
from .complexes import (
    ChainMap,
    CochainComplex,
    Homotopy,
    cohomology,
    find_homotopy,
    mapping_cone,
    shift,
    verify_chain_map,
    verify_homotopy,
)
from .towers import Tower, TowerLimitReport, mittag_leffler_classify, symbolic_limit, truncated_lim_lim1
from .periodic import (
    PeriodizationInstance,
    build_one_minus_Dhat,
    lim1_sequence_check,
    periodize,
    verify_periodicity,
    z_instance,
)

__all__ = [
    "Matrix", "SmithDecomposition", "smith_normal_form", "solve_integer",
    "QQ", "QZ", "ZZ", "CoefficientRing", "ModuleClass", "ModuleMap", "Zmod", "cokernel", "image", "kernel",
    "ChainMap", "CochainComplex", "Homotopy", "cohomology", "find_homotopy", "mapping_cone", "shift",
    "verify_chain_map", "verify_homotopy",
    "Tower", "TowerLimitReport", "mittag_leffler_classify", "symbolic_limit", "truncated_lim_lim1",
    "PeriodizationInstance", "build_one_minus_Dhat", "lim1_sequence_check", "periodize",
    "verify_periodicity", "z_instance",
]

__version__ = "0.1.0"
