"""l1-norm coherence: brute force, closed-form series, and freezing limits.

The preferred basis is the Fock (occupation) basis throughout. The closed
forms are built from one recurring factor per accelerated observer,

    f(s) = sech^3(s) * sum_{m>=0} sqrt(m+1) tanh^{2m}(s),

which decreases from f(0)=1 to sqrt(pi)/2 as s -> infinity. Infinite-
acceleration values come only from ``freezing_limit`` (analytic), never from
evaluating the series at huge s.
"""

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import ContractViolation, ConvergenceError
from .fock import DensityOperator, Region
from .states import Family

#: asymptotic value of f(s): sqrt(pi)/2 = sqrt(pi/4)
FREEZING_F = math.sqrt(math.pi) / 2.0

# A truncated accelerated mode loses at most cosh(s) * (dropped probability)
# of l1 mass, and brute force is dimensionally infeasible beyond s ~ 3 where
# cosh(3) ~ 10.07; 10.1 * trace deficit therefore bounds the truncation error
# of every brute-force coherence this package can actually compute.
BRUTE_TAIL_FACTOR = 10.1


@dataclass(frozen=True)
class SeriesTolerance:
    """Stopping control for the sqrt-geometric series summation."""

    rel_tol: float = 1e-10
    max_terms: int = 5_000_000_000

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_SERIES_TOL = SeriesTolerance()


class Method(enum.Enum):
    BRUTE_FORCE = "brute_force"
    CLOSED_FORM = "closed_form"
    LIMIT = "limit"


@dataclass(frozen=True)
class CoherenceValue:
    value: float
    method: Method
    error_budget: float = 0.0

    def __post_init__(self):
        if self.value < 0.0:
            raise ValueError(f"coherence must be >= 0, got {self.value}")
        if self.error_budget < 0.0:
            raise ValueError(f"error budget must be >= 0, got {self.error_budget}")


def l1_coherence(rho: DensityOperator) -> CoherenceValue:
    """Sum of |off-diagonal| entries of rho in the occupation basis."""
    for mode in rho.modes:
        if mode.region is Region.RINDLER_II:
            raise ContractViolation(
                f"mode {mode.name!r} lives in Rindler wedge II; trace it out "
                "before computing coherence")
    off = ~(rho.bras == rho.kets).all(axis=1)
    value = float(np.abs(rho.vals[off]).sum())
    deficit = max(0.0, 1.0 - rho.trace())
    return CoherenceValue(value, Method.BRUTE_FORCE, BRUTE_TAIL_FACTOR * deficit)


class SeriesInfo(NamedTuple):
    value: float
    tail_bound: float
    terms: int


def _s_value(s) -> float:
    return float(getattr(s, "s", s))


@lru_cache(maxsize=128)
def _series_cached(s: float, rel_tol: float, max_terms: int) -> SeriesInfo:
    q = math.tanh(s) ** 2
    total, bound, terms, converged = kernels.sqrt_geometric_series(
        q, rel_tol, max_terms)
    scale = 1.0 / math.cosh(s) ** 3
    if not converged:
        raise ConvergenceError(
            f"series at s={s:g} not converged within {max_terms} terms "
            f"(achieved tail bound {bound * scale:.3e})",
            achieved_bound=bound * scale, terms=terms)
    return SeriesInfo(total * scale, bound * scale, terms)


def series_f_info(s, tol: SeriesTolerance = DEFAULT_SERIES_TOL) -> SeriesInfo:
    """f(s) together with its proven tail bound and the term count."""
    return _series_cached(_s_value(s), tol.rel_tol, tol.max_terms)


def series_f(s, tol: SeriesTolerance = DEFAULT_SERIES_TOL) -> float:
    """The per-observer attenuation factor f(s) in (sqrt(pi)/2, 1]."""
    return series_f_info(s, tol).value


def closed_ghz_coherence(params: Sequence,
                         tol: SeriesTolerance = DEFAULT_SERIES_TOL) -> CoherenceValue:
    """Closed-form GHZ coherence: product of f over accelerated observers.

    The empty product covers the all-inertial case (coherence 1).
    """
    value = 1.0
    rel_budget = 0.0
    for s in params:
        info = series_f_info(s, tol)
        value *= info.value
        rel_budget += info.tail_bound / info.value
    return CoherenceValue(value, Method.CLOSED_FORM, value * rel_budget)


def closed_w_coherence(N: int, params: Sequence,
                       tol: SeriesTolerance = DEFAULT_SERIES_TOL) -> CoherenceValue:
    """Closed-form W coherence for N parties, len(params) of them accelerated.

    (2/N) [ sum_{i<j} f_i f_j + (N-n) sum_i f_i + (N-n)(N-n-1)/2 ]
    with the pair sum over unordered pairs of accelerated observers.
    """
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    n = len(params)
    if n > N:
        raise ValueError(f"more accelerated parameters ({n}) than parties ({N})")
    infos = [series_f_info(s, tol) for s in params]
    f = [info.value for info in infos]

    pair_sum = sum(f[i] * f[j] for i in range(n) for j in range(i + 1, n))
    single_sum = sum(f)
    inert_pairs = (N - n) * (N - n - 1) / 2.0
    value = (2.0 / N) * (pair_sum + (N - n) * single_sum + inert_pairs)

    # first-order propagation of the per-factor tail bounds
    budget = 0.0
    for i, info in enumerate(infos):
        sensitivity = (2.0 / N) * (sum(f[j] for j in range(n) if j != i) + (N - n))
        budget += sensitivity * info.tail_bound
    return CoherenceValue(value, Method.CLOSED_FORM, budget)


class PairKind(enum.Enum):
    ACC_ACC = "acc_acc"
    ACC_INERTIAL = "acc_inertial"
    INERTIAL_INERTIAL = "inertial_inertial"


def bipartite_w_coherence(kind: PairKind, N: int,
                          s_i=None, s_j=None,
                          tol: SeriesTolerance = DEFAULT_SERIES_TOL) -> CoherenceValue:
    """Closed-form coherence of one bipartite reduction of the N-party W state."""
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    if kind is PairKind.ACC_ACC:
        if s_i is None or s_j is None:
            raise ValueError("ACC_ACC needs both acceleration parameters")
        info_i = series_f_info(s_i, tol)
        info_j = series_f_info(s_j, tol)
        value = (2.0 / N) * info_i.value * info_j.value
        budget = (2.0 / N) * (info_i.tail_bound * info_j.value
                              + info_j.tail_bound * info_i.value)
    elif kind is PairKind.ACC_INERTIAL:
        if s_i is None:
            raise ValueError("ACC_INERTIAL needs the accelerated parameter")
        info = series_f_info(s_i, tol)
        value = (2.0 / N) * info.value
        budget = (2.0 / N) * info.tail_bound
    elif kind is PairKind.INERTIAL_INERTIAL:
        value = 2.0 / N
        budget = 0.0
    else:
        raise ValueError(f"unknown pair kind: {kind!r}")
    return CoherenceValue(value, Method.CLOSED_FORM, budget)


def freezing_limit(family: Family, N: int, n: int) -> float:
    """Infinite-acceleration coherence with n of N observers accelerated.

    Obtained by substituting f -> sqrt(pi)/2 into the closed forms:
    GHZ -> (sqrt(pi)/2)^n, independent of N;
    W   -> (2/N) [ C(n,2) pi/4 + (N-n) n sqrt(pi)/2 + (N-n)(N-n-1)/2 ].
    """
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={N}")
    if family is Family.GHZ:
        return FREEZING_F ** n
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    pair_term = n * (n - 1) / 2.0 * FREEZING_F ** 2
    cross_term = (N - n) * n * FREEZING_F
    inert_term = (N - n) * (N - n - 1) / 2.0
    return (2.0 / N) * (pair_term + cross_term + inert_term)
