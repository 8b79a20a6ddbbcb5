"""The Unruh substitution for accelerated observers.

A Minkowski qubit mode (|0>/|1> superpositions) is replaced by its two-mode
expansion over the Rindler wedges:

    |0>_M -> sech(s) * sum_n tanh^n(s) |n>_I |n>_II
    |1>_M -> sech^2(s) * sum_n tanh^n(s) sqrt(n+1) |n+1>_I |n>_II

with sinh(s) = (e^{2 pi omega / a} - 1)^{-1/2} relating the squeezing
parameter s to the proper acceleration a and mode frequency omega. The
infinite sums are truncated at the smallest Fock level whose discarded
probability (of the heavier-tailed |1> expansion) drops below the policy's
epsilon_trunc.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, TruncationCapWarning, UnsupportedInputError
from .fock import KET_DTYPE, ModeLabel, PureState, Region


@dataclass(frozen=True)
class AccelerationParameter:
    """Dimensionless squeezing parameter s >= 0 (s=0 means inertial motion).

    ``underflowed`` marks values that collapsed to 0 because the defining
    exponential overflowed; it is informational only.
    """

    s: float
    underflowed: bool = False

    def __post_init__(self):
        if not (self.s >= 0.0 and math.isfinite(self.s)):
            raise ValueError(f"acceleration parameter must be finite and >= 0, got {self.s}")


@dataclass(frozen=True)
class PhysicalAcceleration:
    """Proper acceleration and mode angular frequency, natural units (c=1)."""

    a: float
    omega: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"acceleration must be positive, got {self.a}")
        if not self.omega > 0:
            raise ValueError(f"mode frequency must be positive, got {self.omega}")


@dataclass(frozen=True)
class TruncationPolicy:
    """Admitted tail probability per accelerated mode, plus a hard Fock cap."""

    epsilon_trunc: float = 1e-10
    hard_cap: int = 4096

    def __post_init__(self):
        if not 0.0 < self.epsilon_trunc < 1.0:
            raise ValueError(f"epsilon_trunc must lie in (0, 1), got {self.epsilon_trunc}")
        if self.hard_cap < 1:
            raise ValueError(f"hard_cap must be >= 1, got {self.hard_cap}")


def acceleration_parameter(phys: PhysicalAcceleration) -> AccelerationParameter:
    """s = asinh((e^{2 pi omega / a} - 1)^{-1/2}); monotone increasing in a."""
    x = 2.0 * math.pi * phys.omega / phys.a
    try:
        sinh_s = 1.0 / math.sqrt(math.expm1(x))
    except OverflowError:
        sinh_s = 0.0
    if sinh_s == 0.0:
        return AccelerationParameter(0.0, underflowed=True)
    return AccelerationParameter(math.asinh(sinh_s))


def vacuum_tail(s: float, n_max: int) -> float:
    """Probability discarded by truncating the |0> expansion at n_max."""
    return math.tanh(s) ** (2 * (n_max + 1))


def one_particle_tail(s: float, n_max: int) -> float:
    """Probability discarded by truncating the |1> expansion at n_max.

    Closed form of sum_{n>n_max} (n+1) tanh^{2n}(s) / cosh^4(s).
    """
    q = math.tanh(s) ** 2
    if q == 0.0:
        return 0.0
    return (q ** (n_max + 1) * ((n_max + 2) + q / (1.0 - q))
            / ((1.0 - q) * math.cosh(s) ** 4))


def truncation_level(s: AccelerationParameter, policy: TruncationPolicy) -> int:
    """Smallest n_max whose one-particle tail is <= policy.epsilon_trunc.

    Capped at policy.hard_cap; a TruncationCapWarning is issued when the cap
    binds (non-fatal, per-mode accuracy then degrades).
    """
    eps = policy.epsilon_trunc
    if one_particle_tail(s.s, 0) <= eps:
        return 0
    if one_particle_tail(s.s, policy.hard_cap) > eps:
        warnings.warn(
            f"hard cap {policy.hard_cap} binds at s={s.s:g}: tail "
            f"{one_particle_tail(s.s, policy.hard_cap):.3e} > {eps:.3e}",
            TruncationCapWarning,
        )
        return policy.hard_cap
    lo, hi = 0, policy.hard_cap  # tail(lo) > eps >= tail(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if one_particle_tail(s.s, mid) > eps:
            lo = mid
        else:
            hi = mid
    return hi


def _check_pair_regions(mode_I: ModeLabel, mode_II: ModeLabel) -> None:
    if mode_I.region is not Region.RINDLER_I:
        raise ConfigurationError(f"mode {mode_I.name!r} must be tagged RINDLER_I")
    if mode_II.region is not Region.RINDLER_II:
        raise ConfigurationError(f"mode {mode_II.name!r} must be tagged RINDLER_II")


def unruh_vacuum(s: AccelerationParameter, policy: TruncationPolicy,
                 mode_I: ModeLabel, mode_II: ModeLabel) -> PureState:
    """Two-mode squeezed expansion of the Minkowski vacuum, truncated."""
    _check_pair_regions(mode_I, mode_II)
    n_max = truncation_level(s, policy)
    n = np.arange(n_max + 1)
    amps = np.tanh(s.s) ** n / math.cosh(s.s)
    kets = np.stack([n, n], axis=1).astype(KET_DTYPE)
    return PureState((mode_I, mode_II), kets, amps, trunc=policy, validate=False)


def unruh_one_particle(s: AccelerationParameter, policy: TruncationPolicy,
                       mode_I: ModeLabel, mode_II: ModeLabel) -> PureState:
    """Expansion of the Minkowski one-particle state, truncated."""
    _check_pair_regions(mode_I, mode_II)
    n_max = truncation_level(s, policy)
    n = np.arange(n_max + 1)
    amps = np.tanh(s.s) ** n * np.sqrt(n + 1.0) / math.cosh(s.s) ** 2
    kets = np.stack([n + 1, n], axis=1).astype(KET_DTYPE)
    return PureState((mode_I, mode_II), kets, amps, trunc=policy, validate=False)


def rindler_pair_names(name: str) -> tuple:
    """Deterministic names of the wedge-I/II modes replacing a Minkowski mode."""
    return name + "_I", name + "_II"


def transform_mode(psi: PureState, mode: str, s: AccelerationParameter,
                   policy: TruncationPolicy) -> PureState:
    """Substitute the named Minkowski qubit mode by its Rindler pair.

    The wedge-I mode takes the original mode's position; the wedge-II mode is
    appended after the existing modes. Only occupations 0 and 1 are defined
    for the substituted mode.
    """
    names = psi.mode_names()
    if mode not in names:
        raise ValueError(f"unknown mode name: {mode!r}")
    p = names.index(mode)
    if psi.modes[p].region is not Region.MINKOWSKI:
        raise ConfigurationError(f"mode {mode!r} is not Minkowski-tagged")
    occ = psi.kets[:, p]
    if occ.max(initial=0) > 1:
        raise UnsupportedInputError(
            f"mode {mode!r} holds occupation {int(occ.max())}; the Unruh "
            "substitution is defined only for occupations 0 and 1")

    n_max = truncation_level(s, policy)
    j = np.arange(n_max + 1)
    tanh_pow = np.tanh(s.s) ** j
    c_vac = tanh_pow / math.cosh(s.s)
    c_one = tanh_pow * np.sqrt(j + 1.0) / math.cosh(s.s) ** 2

    name_i, name_ii = rindler_pair_names(mode)
    new_modes = (psi.modes[:p]
                 + (ModeLabel(name_i, Region.RINDLER_I),)
                 + psi.modes[p + 1:]
                 + (ModeLabel(name_ii, Region.RINDLER_II),))

    blocks = []
    for value, occ_i, coeff in ((0, j, c_vac), (1, j + 1, c_one)):
        rows = np.flatnonzero(occ == value)
        if not len(rows):
            continue
        reps = len(j)
        kets = np.repeat(psi.kets[rows], reps, axis=0)
        kets = np.hstack([kets, np.tile(j, len(rows))[:, None].astype(KET_DTYPE)])
        kets[:, p] = np.tile(occ_i, len(rows))
        amps = np.repeat(psi.amps[rows], reps) * np.tile(coeff, len(rows))
        blocks.append((kets, amps))

    kets = np.concatenate([b[0] for b in blocks])
    amps = np.concatenate([b[1] for b in blocks])
    return PureState(new_modes, kets, amps, trunc=policy, validate=False)
