"""Central values of Dirichlet L-functions over cosets of the character group
mod a prime, and the resonance lower bound for their maximum."""
from .chargroup import Character, Coset, Subgroup, kernel
from .errors import (
    BudgetError,
    ConfigurationError,
    CosetResonanceError,
    DomainError,
    InvalidInputError,
    InvariantViolation,
    ModulusError,
    UnitRequiredError,
)
from .kernels import BACKEND
from .lcentral import AfeParams, l_star, l_star_sweep, l_value
from .modarith import PrimeContext, get_context
from .moments import ExperimentParams, coset_scan, lemma5_check, scan_prime, theorem_bound
from .resonator import Resonator, ResonatorSpec, build_resonator, optimize_bruteforce

__version__ = "0.1.0"

__all__ = [
    "AfeParams", "BACKEND", "BudgetError", "Character", "ConfigurationError", "Coset",
    "CosetResonanceError", "DomainError", "ExperimentParams", "InvalidInputError",
    "InvariantViolation", "ModulusError", "PrimeContext", "Resonator", "ResonatorSpec",
    "Subgroup", "UnitRequiredError", "build_resonator", "coset_scan", "get_context", "kernel",
    "l_star", "l_star_sweep", "l_value", "lemma5_check", "optimize_bruteforce", "scan_prime",
    "theorem_bound",
]
