"""Tropical configuration fans: scaffolds, stacky Chow quotients and boundary strata, in exact arithmetic."""

from .chow import ConfigurationFan, certify_configuration, check_terminality, configuration_fan
from .cones import Cone
from .estimator import ConfigurationSpace
from .expansions import locate, stratum_report
from .fans import Fan, check_complete, check_fan, common_refinement, fans_equal
from .linalg import LatticeBasis
from .reference import bipermutahedral_fan, bisequence_of, permutahedral_fan, square_fan
from .scaffolds import Scaffold, lambda0, lambda_biperm, lambda_square, sqrt_stack_scaffold
from .stacky import StackyFan, check_weakly_semistable, isotropy

__version__ = "0.1.0"

__all__ = [
    "ConfigurationFan",
    "ConfigurationSpace",
    "Cone",
    "Fan",
    "LatticeBasis",
    "Scaffold",
    "StackyFan",
    "bipermutahedral_fan",
    "bisequence_of",
    "certify_configuration",
    "check_complete",
    "check_fan",
    "check_terminality",
    "check_weakly_semistable",
    "common_refinement",
    "configuration_fan",
    "fans_equal",
    "isotropy",
    "lambda0",
    "lambda_biperm",
    "lambda_square",
    "locate",
    "permutahedral_fan",
    "sqrt_stack_scaffold",
    "square_fan",
    "stratum_report",
]
