"""Pseudorandom sequences from endomorphisms of ordinary elliptic curves over finite fields."""

from .analysis import (
    AnalysisReport,
    BoundParams,
    bound_corollary1,
    bound_corollary2,
    bound_theorem1,
    bound_theorem2,
    bound_theorem3,
    curve_char_sum,
    discrepancy,
    exp_sum,
    linear_complexity,
    subgroup_char_sum,
)
from .cm_order import CMOrder, IdealHNF, OrderElement
from .curve import Curve, Point, WeierstrassGroup
from .endo import EndRing, Endomorphism, determine_end_ring
from .errors import *  # noqa: F403
from .field import GF, FieldElement, standard_field
from .generator import POLE, GeneratorState, Monomial, Observable, X, Y
from .lemmas import verify_lemma

__version__ = "0.1.0"
