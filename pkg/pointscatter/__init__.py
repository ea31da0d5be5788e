"""Spectral and scattering analysis of two Dirac point interactions."""

from .config import DEFAULT_TOLERANCES, RunConfig, ScanSpec, SeedSpec, Tolerances, load_config
from .errors import NumericalError, PointScatterError, ValidationError
from .physics.lambda_algebra import Arrangement, LambdaParams, PhysicalStrengths
from .physics.spectra import find_bound_states
from .physics.resonance import find_resonances
from .physics.special_cases import SpecialCaseId, instantiate

__all__ = [
    "DEFAULT_TOLERANCES",
    "RunConfig",
    "ScanSpec",
    "SeedSpec",
    "Tolerances",
    "load_config",
    "NumericalError",
    "PointScatterError",
    "ValidationError",
    "Arrangement",
    "LambdaParams",
    "PhysicalStrengths",
    "find_bound_states",
    "find_resonances",
    "SpecialCaseId",
    "instantiate",
]
