"""Open-system thermodynamics of a three-branch interferometer."""

from .bath import CODATA, BathSpec, RateSet, asymptotic_rates, temperature_from_log_ratio
from .coherence import distillable_coherence, ergotropy
from .config import RunConfig, load_config
from .dynamics import LindbladGenerator, evolve
from .interferometer import InterferometerConfig, closed_form_state, interference_pattern
from .thermo import clausius_function, violation_crossover

__all__ = [
    "CODATA",
    "BathSpec",
    "RateSet",
    "InterferometerConfig",
    "LindbladGenerator",
    "RunConfig",
    "asymptotic_rates",
    "clausius_function",
    "closed_form_state",
    "distillable_coherence",
    "ergotropy",
    "evolve",
    "interference_pattern",
    "load_config",
    "temperature_from_log_ratio",
    "violation_crossover",
]

__version__ = "0.1.0"
