"""Branched generalized numbers, the sharp, Fermat and omega topologies,
generalized smooth functions and the Fermat-Reyes incremental ratio."""

from .config import DEFAULT, Config
from .errors import (
    ColombeauError,
    DomainError,
    NotInvertible,
    NotNearStandard,
    NumericError,
    ParseError,
    Undecided,
    UnknownSign,
)
from .fermat import LittleOhPoly, fr_decompose, fr_equal, fr_extend, fr_is_first_order, fr_leq, fr_normalize, fr_ring_op
from .fermat_reyes import (
    Thickening,
    ThickeningQuery,
    incremental_ratio,
    incremental_ratio_numeric,
    near_std_thickening,
    thickening_contains,
    verify_fr,
)
from .genfun import (
    Exhausted,
    GenFunExpr,
    ProbeBudget,
    Witness,
    gf_derivative,
    gf_eval_gen,
    gf_eval_real,
    gf_oracle_error,
    gf_probe_nonzero,
    gf_seminorm,
    gf_valuation_estimate,
)
from .gennum import (
    CompareVerdict,
    DistInterval,
    GenNum,
    Relation,
    gn_abs,
    gn_abs_e,
    gn_abs_min_max,
    gn_interval_contains,
    gn_in_monad,
    gn_invert,
    gn_metric,
    gn_near_standard_decompose,
    gn_norm,
    gn_order_compare,
    gn_ring_op,
    gn_sharp_dist,
    gn_valuation,
    is_invertible,
    is_near_standard,
    standard_part,
    valuation_bound,
)
from .literals import format_gennum, format_series, parse_literal
from .opensets import OpenSet1D
from .report import VerdictReport
from .series import EpsSeries
from .topology import (
    BallCertificate,
    BallSpec,
    SequenceSpec,
    ball_contains,
    ball_convert,
    classify_sequence,
    real_trace_of_gabs_ball,
    sphere_openness_witness,
)

__version__ = "0.1.0"

__all__ = [
    "BallCertificate",
    "BallSpec",
    "ColombeauError",
    "CompareVerdict",
    "Config",
    "DEFAULT",
    "DistInterval",
    "DomainError",
    "EpsSeries",
    "Exhausted",
    "GenFunExpr",
    "GenNum",
    "LittleOhPoly",
    "NotInvertible",
    "NotNearStandard",
    "NumericError",
    "OpenSet1D",
    "ParseError",
    "ProbeBudget",
    "Relation",
    "SequenceSpec",
    "Thickening",
    "ThickeningQuery",
    "Undecided",
    "UnknownSign",
    "VerdictReport",
    "Witness",
    "ball_contains",
    "ball_convert",
    "classify_sequence",
    "format_gennum",
    "format_series",
    "fr_decompose",
    "fr_equal",
    "fr_extend",
    "fr_is_first_order",
    "fr_leq",
    "fr_normalize",
    "fr_ring_op",
    "gf_derivative",
    "gf_eval_gen",
    "gf_eval_real",
    "gf_oracle_error",
    "gf_probe_nonzero",
    "gf_seminorm",
    "gf_valuation_estimate",
    "gn_abs",
    "gn_abs_e",
    "gn_abs_min_max",
    "gn_in_monad",
    "gn_interval_contains",
    "gn_invert",
    "gn_metric",
    "gn_near_standard_decompose",
    "gn_norm",
    "gn_order_compare",
    "gn_ring_op",
    "gn_sharp_dist",
    "gn_valuation",
    "incremental_ratio",
    "incremental_ratio_numeric",
    "is_invertible",
    "is_near_standard",
    "near_std_thickening",
    "parse_literal",
    "real_trace_of_gabs_ball",
    "sphere_openness_witness",
    "standard_part",
    "thickening_contains",
    "valuation_bound",
    "verify_fr",
]
