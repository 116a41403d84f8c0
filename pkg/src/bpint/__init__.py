"""Integrals of products of Bessel functions: closed forms, quadrature, phase-space oracles."""

from .bloch import (
    HoneycombModel,
    HypercubicLattice,
    conductivity_jj,
    dos_hypercubic,
    dos_square_closed,
    honeycomb_dispersion,
    kink_scan,
    s_functions,
    umklapp_f,
    umklapp_rate,
)
from .closed_form import LauricellaParams, eval_exton, lauricella_fc
from .constraints import (
    ConstraintReport,
    IntegralSpec,
    Polygonal,
    check_charge_neutrality,
    check_convergence,
    check_polygonal,
    predict_vanishing,
)
from .delta_oracle import (
    OracleBudget,
    ScatterSpec,
    ThresholdFit,
    eval_2d_angular,
    eval_3d_angular,
    threshold_scan,
    trig_expansion_3d,
)
from .quadrature import Estimate, TrigBesselSpec, eval_bessel_product, eval_trig_bessel
from .specfun import DomainError, SingularityError

__version__ = "0.1.0"

__all__ = [
    "check_charge_neutrality",
    "check_convergence",
    "check_polygonal",
    "conductivity_jj",
    "ConstraintReport",
    "DomainError",
    "dos_hypercubic",
    "dos_square_closed",
    "Estimate",
    "eval_2d_angular",
    "eval_3d_angular",
    "eval_bessel_product",
    "eval_exton",
    "eval_trig_bessel",
    "honeycomb_dispersion",
    "HoneycombModel",
    "HypercubicLattice",
    "IntegralSpec",
    "kink_scan",
    "lauricella_fc",
    "LauricellaParams",
    "OracleBudget",
    "Polygonal",
    "predict_vanishing",
    "s_functions",
    "ScatterSpec",
    "SingularityError",
    "threshold_scan",
    "ThresholdFit",
    "trig_expansion_3d",
    "TrigBesselSpec",
    "umklapp_f",
    "umklapp_rate",
]
