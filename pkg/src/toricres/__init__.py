"""Exact toric resolution of binomial varieties, value semigroups and valuations by rewriting."""

__version__ = "0.1.0"

from .abyssal_rewrite import RewriteSystem, exzar_coefficients, exzar_system, normal_form, valuate
from .binomial_ideals import (Binomial, BinomialIdeal, jacobian_certificate, singular_locus,
                              verify_presentation)
from .cones_fans import (Cone, Fan, UnimodularChart, build_RES_fan, locate_weight, regularize,
                         weight_cone)
from .errors import ComputationError, InputError, ToricError
from .ordered_groups import (CFReal, GroupElement, LexZ, RationalLine, ValueSemigroup,
                             WeightedLine, exzar_semigroup, minimal_generators, minimal_relation)
from .perron import perron_run, presentation_stream
from .polynomial import SparsePoly
from .resolution import (DeformedEquation, principalize_monomials, resolve,
                         resolve_monomial_curve, strict_transform_binomial,
                         strict_transform_deformed)

__all__ = [
    "Binomial", "BinomialIdeal", "CFReal", "ComputationError", "Cone", "DeformedEquation", "Fan",
    "GroupElement", "InputError", "LexZ", "RationalLine", "RewriteSystem", "SparsePoly",
    "ToricError", "UnimodularChart", "ValueSemigroup", "WeightedLine", "build_RES_fan",
    "exzar_coefficients", "exzar_semigroup", "exzar_system", "jacobian_certificate",
    "locate_weight", "minimal_generators", "minimal_relation", "normal_form", "perron_run",
    "presentation_stream", "principalize_monomials", "regularize", "resolve",
    "resolve_monomial_curve", "singular_locus", "strict_transform_binomial",
    "strict_transform_deformed", "valuate", "verify_presentation", "weight_cone",
]
