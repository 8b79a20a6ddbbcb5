"""Coherence of multipartite bosonic GHZ/W states in noninertial frames.

Sparse truncated-Fock simulation of the Unruh (two-mode-squeezed)
substitution, brute-force l1-norm coherence, and the matching closed-form
series, freezing limits, and coherence-distribution identities.
"""

from .analysis import (CoherenceReport, MonotonicityTable,
                       WDistributionResiduals, build_report,
                       check_ghz_globality, check_w_distribution, closed_total,
                       monotonicity_sweep, pair_closed_coherence,
                       subsystem_coherence_map)
from .coherence import (CoherenceValue, FREEZING_F, Method, PairKind,
                        SeriesTolerance, bipartite_w_coherence,
                        closed_ghz_coherence, closed_w_coherence,
                        freezing_limit, l1_coherence, series_f, series_f_info)
from .errors import (ConfigurationError, ContractViolation, ConvergenceError,
                     ResourceBudgetError, TruncationCapWarning,
                     UnruhCoherenceError, UnsupportedInputError)
from .fock import (DensityOperator, ModeLabel, PureState, Region, outer,
                   partial_trace, reduce_over_environment, tensor_product,
                   trace)
from .kernels import backend as kernel_backend
from .rindler import (AccelerationParameter, PhysicalAcceleration,
                      TruncationPolicy, acceleration_parameter,
                      one_particle_tail, rindler_pair_names, transform_mode,
                      truncation_level, unruh_one_particle, unruh_vacuum,
                      vacuum_tail)
from .states import (DEFAULT_MAX_DIMENSION, Family, Observer, ScenarioConfig,
                     ghz_state, initial_state, region_i_dimension,
                     scenario_density, w_state)

__version__ = "0.1.0"

__all__ = [
    "AccelerationParameter", "CoherenceReport", "CoherenceValue",
    "ConfigurationError", "ContractViolation", "ConvergenceError",
    "DEFAULT_MAX_DIMENSION", "DensityOperator", "FREEZING_F", "Family",
    "Method", "ModeLabel", "MonotonicityTable", "Observer", "PairKind",
    "PhysicalAcceleration", "PureState", "Region", "ResourceBudgetError",
    "ScenarioConfig", "SeriesTolerance", "TruncationCapWarning",
    "TruncationPolicy", "UnruhCoherenceError", "UnsupportedInputError",
    "WDistributionResiduals", "acceleration_parameter",
    "bipartite_w_coherence", "build_report", "check_ghz_globality",
    "check_w_distribution", "closed_ghz_coherence", "closed_total",
    "closed_w_coherence", "freezing_limit", "ghz_state", "initial_state",
    "kernel_backend", "l1_coherence", "monotonicity_sweep",
    "one_particle_tail", "outer", "pair_closed_coherence", "partial_trace",
    "reduce_over_environment", "region_i_dimension", "rindler_pair_names",
    "scenario_density", "series_f", "series_f_info", "subsystem_coherence_map",
    "tensor_product", "trace", "transform_mode", "truncation_level",
    "unruh_one_particle", "unruh_vacuum", "vacuum_tail", "w_state",
]
