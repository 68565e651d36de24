"""p-adic tools for two-dimensional crystabelline representations: Gauss sums,
locally analytic distributions and their Amice transforms, the intertwining
operator on elementary functions, filtered phi-modules and refinements."""

from .errors import (ContractError, DegreeError, DivergenceError, DomainError, HypothesisError,
                     LevelError, PadicError, PrecisionError, SupportError)
from .padic import AtLeast, PadicScalar, get_precision, set_precision, working_precision
from .cyclo import CycloElement
from .characters import (CharacterPair, ContinuousCharacter, SmoothCharacter, gauss_sum,
                         gauss_sum_std, intertwining_constant, norm_character, ur, x_power)
from .series import TruncatedSeries, frobenius_phi, gamma_act, psi
from .distributions import LocalDistribution, LocalFunction, amice, integrate
from .intertwine import ElementaryFunction, intertwine_closed, intertwine_oracle
from .modcris import build_D, dual_twist, weakly_admissible_irreducible
from .refinements import exponent_sweep, refinements_of, sigma, verify_emerton

__version__ = "0.1.0"

__all__ = [
    "AtLeast", "CharacterPair", "ContinuousCharacter", "ContractError", "CycloElement",
    "DegreeError", "DivergenceError", "DomainError", "ElementaryFunction", "HypothesisError",
    "LevelError", "LocalDistribution", "LocalFunction", "PadicError", "PadicScalar",
    "PrecisionError", "SmoothCharacter", "SupportError", "TruncatedSeries", "amice", "build_D",
    "dual_twist", "exponent_sweep", "frobenius_phi", "gamma_act", "gauss_sum", "gauss_sum_std", "get_precision",
    "integrate", "intertwine_closed", "intertwine_oracle", "intertwining_constant",
    "norm_character", "psi", "refinements_of", "set_precision", "sigma", "ur", "verify_emerton",
    "weakly_admissible_irreducible", "working_precision", "x_power",
]
