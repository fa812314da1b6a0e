"""rabicav: vacuum Rabi oscillations in lossy cavities under two field
quantizations, with collapse/revival forecasting and threshold fitting."""

from .aggregate import (BinomialWeights, ProbabilityTrace, binomial_log_weights,
                        difference_curve, energy_irr, energy_total, pg_limit,
                        pg_total, pg_total_effective)
from .dressed import (BlockIndex, DressedBlock, analytic_eigensystem,
                      numeric_eigensystem, omega_matrix)
from .integrate import IntegrationError, solve_rk45
from .kernels import backend_name
from .lindblad import (DampingBasisElement, DecayRates, DegenerateRatesError,
                       LindbladGenerator, build_generator, damping_basis,
                       evolve_closed_form, evolve_ode, initial_state,
                       jump_operators, pg_conditional, pg_irreducible)
from .params import (ParameterError, PhysicalParams, VacuumSpectrum,
                     bare_from_physical, params_from_config, renormalize,
                     vacuum_energy)
from .repcheck import (MicroRep, annihilate_by_creators_check, binomial_average,
                       build_micro_rep, micro_dressed_spectrum,
                       run_verification_suites, weak_law_norm)
from .revival import (InfeasibleFitError, RevivalForecast, ThresholdResult,
                      forecast, gamma_from_epsilon,
                      most_probable_rabi_frequency, revival_amplitude,
                      revival_time, varsigma_threshold)

__version__ = "0.1.0"

__all__ = [
    "BinomialWeights", "BlockIndex", "DampingBasisElement", "DecayRates",
    "DegenerateRatesError", "DressedBlock", "InfeasibleFitError",
    "IntegrationError", "LindbladGenerator", "MicroRep", "ParameterError",
    "PhysicalParams", "ProbabilityTrace", "RevivalForecast", "ThresholdResult",
    "VacuumSpectrum", "analytic_eigensystem", "annihilate_by_creators_check",
    "backend_name", "bare_from_physical", "binomial_average",
    "binomial_log_weights", "build_generator", "build_micro_rep",
    "damping_basis", "difference_curve", "energy_irr", "energy_total",
    "evolve_closed_form", "evolve_ode", "forecast", "gamma_from_epsilon",
    "initial_state", "jump_operators", "micro_dressed_spectrum",
    "most_probable_rabi_frequency", "numeric_eigensystem", "omega_matrix",
    "params_from_config", "pg_conditional", "pg_irreducible", "pg_limit",
    "pg_total", "pg_total_effective", "renormalize", "revival_amplitude",
    "revival_time", "run_verification_suites", "solve_rk45", "vacuum_energy",
    "varsigma_threshold", "weak_law_norm",
]
