"""One-sided direct event location for ODEs via energy-conserving Poisson integrators."""

from .ephbvm import MethodParams, StepResult, step
from .errors import (
    DegenerateGradient,
    EventLocError,
    GradientMismatch,
    NoConvergence,
    NonNegativeStart,
    TransversalityViolation,
    UnknownProblem,
    UnsupportedDimension,
)
from .legendre import build_tables, eval_basis, eval_basis_integral, gauss_rule
from .locator import EventResult, convergence_study, locate, reference_event
from .poisson import AugmentedState, PoissonSystem, lift
from .problems import EventProblem, builtin, load_file, resolve, transversality, validate

__version__ = "0.1.0"
