"""Subsystem coherence maps and the distribution/globality checks.

GHZ coherence is genuinely global: every proper subsystem of the region-I
density operator is diagonal, so its l1 coherence vanishes. W coherence is
bipartite: the total equals the sum over all unordered mode pairs of the
bipartite coherences, for any accelerations. These facts become residual
checks here; brute-force residuals quantify truncation instead of asserting
exact equality.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

from .coherence import (CoherenceValue, DEFAULT_SERIES_TOL, PairKind,
                        SeriesTolerance, bipartite_w_coherence,
                        closed_ghz_coherence, closed_w_coherence, l1_coherence,
                        series_f_info)
from .errors import ResourceBudgetError
from .fock import DensityOperator, partial_trace
from .rindler import truncation_level
from .states import (DEFAULT_MAX_DIMENSION, Family, ScenarioConfig,
                     scenario_density)


def subsystem_coherence_map(rho: DensityOperator, upto: int
                            ) -> Dict[Tuple[str, ...], CoherenceValue]:
    """Brute-force l1 coherence of every mode subset of size <= upto.

    Keys are name tuples; iteration order is by subset size, then
    lexicographic by mode name.
    """
    names = rho.mode_names()
    if not 1 <= upto <= len(names):
        raise ValueError(f"upto must lie in [1, {len(names)}], got {upto}")
    result: Dict[Tuple[str, ...], CoherenceValue] = {}
    for size in range(1, upto + 1):
        for subset in itertools.combinations(sorted(names), size):
            result[subset] = l1_coherence(partial_trace(rho, subset))
    return result


def check_ghz_globality(cfg: ScenarioConfig, upto: int = 2,
                        max_dimension: int = DEFAULT_MAX_DIMENSION) -> float:
    """Max l1 coherence over proper subsystems of the GHZ scenario (brute force)."""
    if cfg.family is not Family.GHZ:
        raise ValueError("globality check applies to GHZ scenarios")
    rho = scenario_density(cfg, max_dimension=max_dimension)
    upto = min(upto, len(rho.modes) - 1)
    sub = subsystem_coherence_map(rho, upto)
    return max(cv.value for cv in sub.values())


@dataclass(frozen=True)
class WDistributionResiduals:
    """Residuals of the W distribution identity (sum of pairs == total).

    ``brute_force`` is None when the dimension guard refuses the brute-force
    route (large s); the closed-form residual is parameter-independent.
    """

    closed_form: float
    brute_force: Optional[float]


def pair_closed_coherence(cfg: ScenarioConfig, name_i: str, name_j: str,
                          tol: SeriesTolerance = DEFAULT_SERIES_TOL) -> CoherenceValue:
    """Closed-form bipartite W coherence for two named observers."""
    by_name = {o.name: o for o in cfg.observers}
    obs_i, obs_j = by_name[name_i], by_name[name_j]
    if obs_i.accelerated and obs_j.accelerated:
        return bipartite_w_coherence(PairKind.ACC_ACC, cfg.N, obs_i.s, obs_j.s, tol)
    if obs_i.accelerated or obs_j.accelerated:
        acc = obs_i if obs_i.accelerated else obs_j
        return bipartite_w_coherence(PairKind.ACC_INERTIAL, cfg.N, acc.s, tol=tol)
    return bipartite_w_coherence(PairKind.INERTIAL_INERTIAL, cfg.N, tol=tol)


def closed_total(cfg: ScenarioConfig,
                 tol: SeriesTolerance = DEFAULT_SERIES_TOL) -> CoherenceValue:
    """Closed-form total coherence of the scenario's region-I state."""
    params = tuple(o.s for o in cfg.accelerated)
    if cfg.family is Family.GHZ:
        return closed_ghz_coherence(params, tol)
    return closed_w_coherence(cfg.N, params, tol)


def check_w_distribution(cfg: ScenarioConfig,
                         tol: SeriesTolerance = DEFAULT_SERIES_TOL,
                         max_dimension: int = DEFAULT_MAX_DIMENSION,
                         include_brute: bool = True,
                         rho: Optional[DensityOperator] = None
                         ) -> WDistributionResiduals:
    """Residuals |sum of bipartite coherences - total| for a W scenario.

    ``rho`` may pass in a precomputed region-I operator for the scenario;
    otherwise one is built when the dimension guard admits it.
    """
    if cfg.family is not Family.W:
        raise ValueError("distribution check applies to W scenarios")

    names = [o.name for o in cfg.observers]
    pair_sum = sum(pair_closed_coherence(cfg, a, b, tol).value
                   for a, b in itertools.combinations(names, 2))
    closed_residual = abs(pair_sum - closed_total(cfg, tol).value)

    if rho is None and include_brute:
        try:
            rho = scenario_density(cfg, max_dimension=max_dimension)
        except ResourceBudgetError:
            rho = None
    brute_residual: Optional[float] = None
    if rho is not None:
        total = l1_coherence(rho).value
        region_names = rho.mode_names()
        pair_total = sum(
            l1_coherence(partial_trace(rho, pair)).value
            for pair in itertools.combinations(region_names, 2))
        brute_residual = abs(pair_total - total)
    return WDistributionResiduals(closed_residual, brute_residual)


@dataclass(frozen=True)
class MonotonicityTable:
    """Closed-form coherence along a grid of equal acceleration parameters."""

    grid: Tuple[float, ...]
    values: Tuple[float, ...]
    strictly_decreasing: bool


def monotonicity_sweep(cfg: ScenarioConfig, grid: Sequence[float],
                       tol: SeriesTolerance = DEFAULT_SERIES_TOL) -> MonotonicityTable:
    """Evaluate the closed form on an ascending grid, all accelerated equal."""
    grid = tuple(float(s) for s in grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be sorted strictly ascending")
    values = tuple(closed_total(cfg.with_equal_s(s), tol).value for s in grid)
    decreasing = all(b < a for a, b in zip(values, values[1:]))
    return MonotonicityTable(grid, values, decreasing)


@dataclass(frozen=True)
class CoherenceReport:
    """Everything the CLI tables and verification need for one scenario."""

    scenario: ScenarioConfig
    total: CoherenceValue
    total_brute: Optional[CoherenceValue]
    subsystems: Dict[Tuple[str, ...], CoherenceValue] = field(default_factory=dict)
    residuals: Dict[str, float] = field(default_factory=dict)
    diagnostics: Dict[str, object] = field(default_factory=dict)


def build_report(cfg: ScenarioConfig,
                 tol: SeriesTolerance = DEFAULT_SERIES_TOL,
                 upto: int = 2,
                 include_brute: bool = True,
                 max_dimension: int = DEFAULT_MAX_DIMENSION) -> CoherenceReport:
    """Assemble totals, subsystem map, identity residuals, and diagnostics."""
    total = closed_total(cfg, tol)

    rho = None
    if include_brute:
        try:
            rho = scenario_density(cfg, max_dimension=max_dimension)
        except ResourceBudgetError:
            rho = None
    total_brute = l1_coherence(rho) if rho is not None else None

    subsystems: Dict[Tuple[str, ...], CoherenceValue] = {}
    if rho is not None:
        upto_eff = min(upto, len(rho.modes) - 1)
        if upto_eff >= 1:
            subsystems = subsystem_coherence_map(rho, upto_eff)

    residuals: Dict[str, float] = {}
    if cfg.family is Family.GHZ:
        if rho is not None:
            values = [cv.value for cv in subsystems.values()]
            residuals["ghz_globality"] = max(values) if values else 0.0
    else:
        dist = check_w_distribution(cfg, tol, max_dimension=max_dimension,
                                    include_brute=include_brute)
        residuals["w_distribution_closed"] = dist.closed_form
        if dist.brute_force is not None:
            residuals["w_distribution_brute"] = dist.brute_force

    diagnostics: Dict[str, object] = {
        "truncation_levels": {
            o.name: truncation_level(o.s, cfg.policy) for o in cfg.accelerated},
        "series_terms": {
            o.name: series_f_info(o.s, tol).terms for o in cfg.accelerated},
    }
    if rho is not None:
        diagnostics["trace_deficit"] = max(0.0, 1.0 - rho.trace())
        diagnostics["density_nnz"] = len(rho)
    return CoherenceReport(cfg, total, total_brute, subsystems, residuals,
                           diagnostics)
