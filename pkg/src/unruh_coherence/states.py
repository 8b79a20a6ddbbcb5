"""Canonical initial states and the scenario pipeline.

A scenario fixes the state family (GHZ or W), the observers (each inertial
or accelerated with its own squeezing parameter), and the truncation policy.
``scenario_density`` runs the full pipeline: build the initial state, apply
the Unruh substitution per accelerated observer, trace out the inaccessible
wedge-II modes, and return the region-I density operator.
"""

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .errors import ResourceBudgetError
from .fock import (KET_DTYPE, ModeLabel, PureState, Region, outer,
                   reduce_over_environment)
from .rindler import (AccelerationParameter, TruncationPolicy,
                      rindler_pair_names, transform_mode, truncation_level)

#: default cap on the estimated region-I dimension for brute-force builds
DEFAULT_MAX_DIMENSION = 20_000_000


class Family(enum.Enum):
    GHZ = "ghz"
    W = "w"


@dataclass(frozen=True)
class Observer:
    """One party: a mode name plus its motion (s=None means inertial)."""

    name: str
    s: Optional[AccelerationParameter] = None

    @property
    def accelerated(self) -> bool:
        return self.s is not None


@dataclass(frozen=True)
class ScenarioConfig:
    family: Family
    N: int
    observers: tuple
    policy: TruncationPolicy = TruncationPolicy()

    def __post_init__(self):
        object.__setattr__(self, "observers", tuple(self.observers))
        if self.N < 2:
            raise ValueError(f"need at least 2 parties, got N={self.N}")
        if len(self.observers) != self.N:
            raise ValueError(
                f"observer list has {len(self.observers)} entries, expected N={self.N}")
        names = [o.name for o in self.observers]
        if len(set(names)) != len(names):
            raise ValueError(f"observer names must be unique: {names}")

    @property
    def accelerated(self) -> tuple:
        return tuple(o for o in self.observers if o.accelerated)

    @property
    def n_accelerated(self) -> int:
        return len(self.accelerated)

    def with_equal_s(self, s: float) -> "ScenarioConfig":
        """Copy with every accelerated observer set to the same parameter."""
        param = AccelerationParameter(s)
        observers = tuple(replace(o, s=param) if o.accelerated else o
                          for o in self.observers)
        return replace(self, observers=observers)

    def region_i_names(self) -> tuple:
        """Mode names of the region-I density operator, in pipeline order."""
        return tuple(rindler_pair_names(o.name)[0] if o.accelerated else o.name
                     for o in self.observers)


def _default_names(N: int) -> tuple:
    return tuple(f"o{i + 1}" for i in range(N))


def ghz_state(N: int, names: Optional[Sequence[str]] = None) -> PureState:
    """(|0...0> + |1...1>)/sqrt(2) on N Minkowski modes."""
    if N < 2:
        raise ValueError(f"GHZ state needs N >= 2, got {N}")
    names = _default_names(N) if names is None else tuple(names)
    modes = tuple(ModeLabel(n, Region.MINKOWSKI) for n in names)
    kets = np.zeros((2, N), dtype=KET_DTYPE)
    kets[1, :] = 1
    amps = np.full(2, 1.0 / math.sqrt(2.0))
    return PureState(modes, kets, amps)


def w_state(N: int, names: Optional[Sequence[str]] = None) -> PureState:
    """(1/sqrt(N)) sum_k |0...1_k...0> on N Minkowski modes."""
    if N < 2:
        raise ValueError(f"W state needs N >= 2, got {N}")
    names = _default_names(N) if names is None else tuple(names)
    modes = tuple(ModeLabel(n, Region.MINKOWSKI) for n in names)
    kets = np.eye(N, dtype=KET_DTYPE)
    amps = np.full(N, 1.0 / math.sqrt(N))
    return PureState(modes, kets, amps)


def initial_state(cfg: ScenarioConfig) -> PureState:
    names = tuple(o.name for o in cfg.observers)
    if cfg.family is Family.GHZ:
        return ghz_state(cfg.N, names)
    return w_state(cfg.N, names)


def region_i_dimension(cfg: ScenarioConfig) -> int:
    """Estimated region-I Hilbert dimension: 2^(N-n) * prod(n_max_i + 2)."""
    dim = 2 ** (cfg.N - cfg.n_accelerated)
    for obs in cfg.accelerated:
        dim *= truncation_level(obs.s, cfg.policy) + 2
    return dim


def scenario_density(cfg: ScenarioConfig,
                     max_dimension: int = DEFAULT_MAX_DIMENSION):
    """Region-I density operator of the configured scenario.

    Raises ResourceBudgetError before building anything if the estimated
    region-I dimension exceeds ``max_dimension``.
    """
    dim = region_i_dimension(cfg)
    if dim > max_dimension:
        raise ResourceBudgetError(
            f"estimated region-I dimension {dim} exceeds the budget "
            f"{max_dimension} (N={cfg.N}, n={cfg.n_accelerated})",
            dimension=dim)

    psi = initial_state(cfg)
    env = []
    for obs in cfg.accelerated:
        psi = transform_mode(psi, obs.name, obs.s, cfg.policy)
        env.append(rindler_pair_names(obs.name)[1])
    if not env:
        return outer(psi)
    return reduce_over_environment(psi, env)
