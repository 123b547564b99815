"""Frobenius-twisted module calculus over F_q[x1..xd]: Artin-Schreier
solvers, Cartier-linear structures and their two-step presentations, mapping
cones, Ext computations with truncation certificates, and a scenario CLI."""

from .field import GF
from .poly import MultiPoly, PolyRing, PolySpace, ring_over
from .linalg import (
    FpLinearMap,
    StructureError,
    artin_schreier_map,
    kernel_basis,
    matrix_of_map,
    solve,
    solve_with_certificate,
)
from .artinian import ArtinianAlgebra, EElem, ELevelSpace, ERing
from .rational import BoundedRationalSpace, RationalBase, RationalFn, is_squarefree
from .skew import (
    FreeCartierCarrier,
    FreeSkewElem,
    SeqWindow,
    check_two_step_exact,
    flatten_two_step,
    h_apply,
    h_dual_apply,
    in_image_hdual,
    residue_trace,
    skew_mul,
    two_step_maps,
    two_step_witness,
)
from .cartier import (
    ArtinianCartierModule,
    ArtinianTarget,
    ConeComplex,
    FreeTarget,
    KoszulCartierLift,
    coker_formula,
    cone_acyclicity_report,
    ext_dims_artinian,
    ext_r_dims,
    ext_rf,
    ext_split_check,
    random_module,
    scaled_module,
    standard_module,
    unitalize_report,
    zero_structure_module,
)
from .fmodules import (
    DirectSum,
    ExtensionDatum,
    ShiftElem,
    ShiftRInf,
    StdE,
    StdR,
    as_solve,
    as_solve_elem,
    build_extension,
    ext1_class,
    hom_fr,
    rational_class_distinct,
    shift_ses_check,
)

__all__ = [
    "GF",
    "MultiPoly",
    "PolyRing",
    "PolySpace",
    "ring_over",
    "FpLinearMap",
    "StructureError",
    "artin_schreier_map",
    "kernel_basis",
    "matrix_of_map",
    "solve",
    "solve_with_certificate",
    "ArtinianAlgebra",
    "EElem",
    "ELevelSpace",
    "ERing",
    "BoundedRationalSpace",
    "RationalBase",
    "RationalFn",
    "is_squarefree",
    "FreeCartierCarrier",
    "FreeSkewElem",
    "SeqWindow",
    "check_two_step_exact",
    "flatten_two_step",
    "h_apply",
    "h_dual_apply",
    "in_image_hdual",
    "residue_trace",
    "skew_mul",
    "two_step_maps",
    "two_step_witness",
    "ArtinianCartierModule",
    "ArtinianTarget",
    "ConeComplex",
    "FreeTarget",
    "KoszulCartierLift",
    "coker_formula",
    "cone_acyclicity_report",
    "ext_dims_artinian",
    "ext_r_dims",
    "ext_rf",
    "ext_split_check",
    "random_module",
    "scaled_module",
    "standard_module",
    "unitalize_report",
    "zero_structure_module",
    "DirectSum",
    "ExtensionDatum",
    "ShiftElem",
    "ShiftRInf",
    "StdE",
    "StdR",
    "as_solve",
    "as_solve_elem",
    "build_extension",
    "ext1_class",
    "hom_fr",
    "rational_class_distinct",
    "shift_ses_check",
]
