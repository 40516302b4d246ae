"""Exact local algebra for finite determinacy of polynomial map germs."""

from .decision import CriterionReport, Decision, Hypothesis, Verdict
from .ring_core import (
    QQ,
    Derivation,
    FieldDesc,
    IdealHandle,
    ParseError,
    Poly,
    PreconditionError,
    StructuralError,
    compose,
    ift_solve,
    parse_poly,
    substitute,
)
from .std_basis import (
    ModuleElement,
    colon,
    ideal_colon,
    module_contains,
    normal_form,
    quotient_dimension,
    radical_contains,
    saturation,
    std_basis,
)
from .tangent import MapGerm, mixed_containment, t_A_jet, t_K, t_R
from .annihilator import ann_A_jet, ann_K, ann_R, k_finite, milnor_tjurina
from .determinacy import (
    a_ift_check,
    determinacy_order,
    filtration_criterion,
    k_ift_check,
    morse_split,
    r_ift_check,
)
from .expjet import (
    AutoJet,
    FreeLieElement,
    bch_integrality,
    bch_truncated,
    exp_derivation,
    lift_exists,
    log_automorphism,
    thom_levine_check,
)

__all__ = [
    "QQ",
    "Derivation",
    "FieldDesc",
    "IdealHandle",
    "ParseError",
    "Poly",
    "PreconditionError",
    "StructuralError",
    "compose",
    "ift_solve",
    "parse_poly",
    "substitute",
    "ModuleElement",
    "colon",
    "ideal_colon",
    "module_contains",
    "normal_form",
    "quotient_dimension",
    "radical_contains",
    "saturation",
    "std_basis",
    "a_ift_check",
    "determinacy_order",
    "filtration_criterion",
    "k_ift_check",
    "morse_split",
    "r_ift_check",
    "AutoJet",
    "FreeLieElement",
    "bch_integrality",
    "bch_truncated",
    "exp_derivation",
    "lift_exists",
    "log_automorphism",
    "thom_levine_check",
    "CriterionReport",
    "Decision",
    "Hypothesis",
    "Verdict",
    "MapGerm",
    "mixed_containment",
    "t_A_jet",
    "t_K",
    "t_R",
    "ann_A_jet",
    "ann_K",
    "ann_R",
    "k_finite",
    "milnor_tjurina",
]
