"""Integer factorisation as Diophantine minimisation, solved classically and by a
simulated adiabatic quantum computation on two truncated bosonic modes."""
from .diophantine import (
    FactorPair,
    FactorisationResult,
    ObjectiveKind,
    brute_force_min,
    divisor_min,
    eval_objective,
    factorise_fully,
)
from .errors import (
    AqcError,
    ClaimViolation,
    ConvergenceError,
    DegenerateBoundError,
    DomainError,
    NormError,
    NumericalError,
    TruncationError,
)
from .fock import FockSpace
from .hamiltonian import ProblemSpec, Schedule, linear_schedule
from .evolve import EvolutionResult, evolve, success_probability, sweep_T
from .spectra import SpectralFlow, min_gap, spectral_flow
from .bounds import BoundReport, bound_report, energy_cost, energy_spread, t_perp

__version__ = "0.1.0"
