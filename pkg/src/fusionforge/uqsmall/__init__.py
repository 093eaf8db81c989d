"""Explicit modules over the small quantum group u_q(sl2) at an odd root of unity."""

from .decompose import (
    Summand,
    are_isomorphic,
    build_projective,
    decompose_module,
    endomorphism_data,
    injective_hull,
    is_negligible_module,
    negligible_by_traces,
    socle_multiplicities,
    split_module,
)
from .fuzz import FuzzReport, coker_negligible_fuzz, hull_cokernel_fuzz, negligible_pool
from .linalg import KMatrix
from .modules import (
    ExplicitModule,
    HomSpace,
    ModuleError,
    ModuleMap,
    build_c_module,
    build_costandard,
    build_e_extension,
    build_simple,
    build_standard,
    c_module_inclusion,
    casimir_blocks,
    cokernel,
    composition_factors,
    direct_sum,
    hom_space,
    image,
    kernel,
    quantum_dim_module,
    submodule,
    tau_dual,
    tensor_modules,
    trivial_module,
)
from .verlinde import QuotientRing, UnsupportedEll, VrBarRing, r_u_quotient, vr_bar_ring

__all__ = [
    "KMatrix",
    "ExplicitModule",
    "ModuleMap",
    "HomSpace",
    "ModuleError",
    "build_standard",
    "build_costandard",
    "build_simple",
    "build_c_module",
    "c_module_inclusion",
    "build_e_extension",
    "build_projective",
    "trivial_module",
    "tau_dual",
    "tensor_modules",
    "direct_sum",
    "hom_space",
    "kernel",
    "image",
    "cokernel",
    "submodule",
    "casimir_blocks",
    "composition_factors",
    "quantum_dim_module",
    "Summand",
    "endomorphism_data",
    "split_module",
    "decompose_module",
    "are_isomorphic",
    "is_negligible_module",
    "negligible_by_traces",
    "socle_multiplicities",
    "injective_hull",
    "QuotientRing",
    "VrBarRing",
    "UnsupportedEll",
    "vr_bar_ring",
    "r_u_quotient",
    "FuzzReport",
    "negligible_pool",
    "coker_negligible_fuzz",
    "hull_cokernel_fuzz",
]
