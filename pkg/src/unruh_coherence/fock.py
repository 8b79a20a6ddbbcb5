"""Sparse Fock-basis state algebra.

States and density operators are stored as arrays of occupation rows plus
values, canonically sorted (lexicographic by occupation vector), which makes
iteration order and all derived CSV output deterministic. Everything is
immutable after construction; operations are pure functions.

Amplitudes and matrix entries are real: every state handled here has
nonnegative real coefficients, so density matrices are real symmetric.
"""

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import kernels
from .errors import ConfigurationError, ResourceBudgetError

KET_DTYPE = np.int32

# occupation ket = plain tuple of nonnegative ints, one per mode
OccupationKet = tuple


class Region(enum.Enum):
    MINKOWSKI = "minkowski"
    RINDLER_I = "rindler_I"
    RINDLER_II = "rindler_II"


@dataclass(frozen=True)
class ModeLabel:
    name: str
    region: Region = Region.MINKOWSKI


def _check_unique_names(modes: Sequence[ModeLabel]) -> None:
    names = [m.name for m in modes]
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise ConfigurationError(f"duplicate mode names: {dupes}")


def _lexsort_rows(*column_blocks: np.ndarray) -> np.ndarray:
    """Order sorting rows of hstacked blocks lexicographically, left primary."""
    cols = [blk[:, j] for blk in column_blocks for j in range(blk.shape[1])]
    return np.lexsort(tuple(reversed(cols)))


def _radices(*arrays: np.ndarray) -> np.ndarray:
    """Per-column mixed radix covering all given occupation arrays."""
    high = np.zeros(arrays[0].shape[1], dtype=np.int64)
    for arr in arrays:
        if len(arr):
            np.maximum(high, arr.max(axis=0), out=high)
    return high + 1


def _encode(kets: np.ndarray, radices: np.ndarray) -> np.ndarray:
    """Mixed-radix encode occupation rows to int64 scalars (first col primary)."""
    weights = np.empty(len(radices), dtype=np.int64)
    w = 1
    for j in range(len(radices) - 1, -1, -1):
        weights[j] = w
        w *= int(radices[j])
        if w > 2**62:
            raise ResourceBudgetError(
                f"occupation-code range {w} overflows int64 packing", dimension=w
            )
    return kets.astype(np.int64) @ weights


def _decode(codes: np.ndarray, radices: np.ndarray) -> np.ndarray:
    out = np.empty((len(codes), len(radices)), dtype=KET_DTYPE)
    rest = codes.copy()
    for j in range(len(radices) - 1, -1, -1):
        out[:, j] = rest % radices[j]
        rest //= radices[j]
    return out


class PureState:
    """Sparse real-amplitude superposition over occupation kets."""

    __slots__ = ("modes", "kets", "amps", "trunc")

    def __init__(self, modes, kets, amps, trunc=None, *, validate=True):
        modes = tuple(modes)
        _check_unique_names(modes)
        kets = np.asarray(kets, dtype=KET_DTYPE)
        amps = np.asarray(amps, dtype=np.float64)
        if kets.ndim != 2 or kets.shape[1] != len(modes):
            raise ValueError(
                f"ket array shape {kets.shape} does not match {len(modes)} modes"
            )
        if len(amps) != len(kets):
            raise ValueError("amplitude count does not match ket count")

        order = _lexsort_rows(kets)
        kets = np.ascontiguousarray(kets[order])
        amps = np.ascontiguousarray(amps[order])

        if validate:
            if len(kets) and kets.min() < 0:
                raise ValueError("negative occupation numbers")
            if np.any(amps == 0.0):
                raise ValueError("zero amplitudes must not be stored")
            if len(kets) > 1 and not np.any(kets[1:] != kets[:-1], axis=1).all():
                raise ValueError("duplicate kets in amplitude map")

        kets.setflags(write=False)
        amps.setflags(write=False)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "kets", kets)
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, name, value):
        raise AttributeError("PureState is immutable")

    @classmethod
    def from_amplitudes(cls, modes, amplitudes: Mapping[OccupationKet, float],
                        trunc=None) -> "PureState":
        modes = tuple(modes)
        kets = np.array(list(amplitudes.keys()), dtype=KET_DTYPE).reshape(
            len(amplitudes), len(modes))
        amps = np.array(list(amplitudes.values()), dtype=np.float64)
        return cls(modes, kets, amps, trunc=trunc)

    def __len__(self) -> int:
        return len(self.amps)

    def mode_names(self) -> tuple:
        return tuple(m.name for m in self.modes)

    def norm_squared(self) -> float:
        return float(self.amps @ self.amps)

    def amplitude(self, ket: Iterable[int]) -> float:
        row = np.asarray(tuple(ket), dtype=KET_DTYPE)
        hit = np.flatnonzero((self.kets == row).all(axis=1))
        return float(self.amps[hit[0]]) if len(hit) else 0.0

    def items(self) -> Iterator[tuple]:
        for row, a in zip(self.kets, self.amps):
            yield tuple(int(x) for x in row), float(a)

    def __repr__(self) -> str:
        return (f"PureState(modes={self.mode_names()}, nnz={len(self)}, "
                f"norm2={self.norm_squared():.12g})")


class DensityOperator:
    """Sparse real symmetric operator over occupation kets."""

    __slots__ = ("modes", "bras", "kets", "vals", "trunc", "_trace")

    def __init__(self, modes, bras, kets, vals, trunc=None, *, validate=True):
        modes = tuple(modes)
        _check_unique_names(modes)
        bras = np.asarray(bras, dtype=KET_DTYPE)
        kets = np.asarray(kets, dtype=KET_DTYPE)
        vals = np.asarray(vals, dtype=np.float64)
        k = len(modes)
        if bras.ndim != 2 or bras.shape[1] != k or kets.shape != bras.shape:
            raise ValueError("bra/ket arrays do not match the mode count")
        if len(vals) != len(bras):
            raise ValueError("value count does not match entry count")

        order = _lexsort_rows(bras, kets)
        bras = np.ascontiguousarray(bras[order])
        kets = np.ascontiguousarray(kets[order])
        vals = np.ascontiguousarray(vals[order])

        if validate:
            self._validate_entries(bras, kets, vals)

        for arr in (bras, kets, vals):
            arr.setflags(write=False)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "bras", bras)
        object.__setattr__(self, "kets", kets)
        object.__setattr__(self, "vals", vals)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "_trace", None)

    def __setattr__(self, name, value):
        raise AttributeError("DensityOperator is immutable")

    @staticmethod
    def _validate_entries(bras, kets, vals):
        if len(bras) and min(bras.min(), kets.min()) < 0:
            raise ValueError("negative occupation numbers")
        diag = (bras == kets).all(axis=1)
        if np.any(vals[diag] < 0.0):
            raise ValueError("negative diagonal entries")
        # symmetry: the transposed entry list must be identical
        radices = _radices(bras, kets)
        b_codes = _encode(bras, radices)
        k_codes = _encode(kets, radices)
        fwd = np.lexsort((k_codes, b_codes))
        rev = np.lexsort((b_codes, k_codes))
        if (not np.array_equal(b_codes[fwd], k_codes[rev])
                or not np.array_equal(k_codes[fwd], b_codes[rev])
                or not np.allclose(vals[fwd], vals[rev], rtol=0, atol=1e-12)):
            raise ValueError("entry map is not symmetric")

    @classmethod
    def from_entries(cls, modes,
                     entries: Mapping[tuple, float],
                     trunc=None, *, validate=True) -> "DensityOperator":
        """Build from a {(bra_tuple, ket_tuple): value} mapping."""
        modes = tuple(modes)
        k = len(modes)
        n = len(entries)
        bras = np.empty((n, k), dtype=KET_DTYPE)
        kets = np.empty((n, k), dtype=KET_DTYPE)
        vals = np.empty(n, dtype=np.float64)
        for i, ((b, kt), v) in enumerate(entries.items()):
            bras[i] = b
            kets[i] = kt
            vals[i] = v
        return cls(modes, bras, kets, vals, trunc=trunc, validate=validate)

    def __len__(self) -> int:
        return len(self.vals)

    def mode_names(self) -> tuple:
        return tuple(m.name for m in self.modes)

    def trace(self) -> float:
        if self._trace is None:
            diag = (self.bras == self.kets).all(axis=1)
            object.__setattr__(self, "_trace", float(self.vals[diag].sum()))
        return self._trace

    def entry(self, bra: Iterable[int], ket: Iterable[int]) -> float:
        b = np.asarray(tuple(bra), dtype=KET_DTYPE)
        k = np.asarray(tuple(ket), dtype=KET_DTYPE)
        hit = np.flatnonzero((self.bras == b).all(axis=1) & (self.kets == k).all(axis=1))
        return float(self.vals[hit[0]]) if len(hit) else 0.0

    def items(self) -> Iterator[tuple]:
        for b, k, v in zip(self.bras, self.kets, self.vals):
            yield (tuple(int(x) for x in b), tuple(int(x) for x in k)), float(v)

    def to_dense(self, max_dim: int = 4096):
        """(basis kets, dense matrix) for small operators; tests only."""
        radices = _radices(self.bras, self.kets)
        b_codes = _encode(self.bras, radices)
        k_codes = _encode(self.kets, radices)
        basis_codes = np.unique(np.concatenate([b_codes, k_codes]))
        dim = len(basis_codes)
        if dim > max_dim:
            raise ResourceBudgetError(
                f"dense projection dimension {dim} exceeds {max_dim}", dimension=dim)
        mat = np.zeros((dim, dim))
        bi = np.searchsorted(basis_codes, b_codes)
        ki = np.searchsorted(basis_codes, k_codes)
        mat[bi, ki] = self.vals
        basis = [tuple(int(x) for x in row) for row in _decode(basis_codes, radices)]
        return basis, mat

    def __repr__(self) -> str:
        return (f"DensityOperator(modes={self.mode_names()}, nnz={len(self)}, "
                f"trace={self.trace():.12g})")


def tensor_product(a: PureState, b: PureState) -> PureState:
    """Tensor product; mode list is the concatenation, amplitudes multiply."""
    overlap = set(a.mode_names()) & set(b.mode_names())
    if overlap:
        raise ConfigurationError(f"duplicate mode names in tensor product: {sorted(overlap)}")
    na, nb = len(a), len(b)
    kets = np.hstack([np.repeat(a.kets, nb, axis=0), np.tile(b.kets, (na, 1))])
    amps = np.multiply.outer(a.amps, b.amps).ravel()
    trunc = a.trunc if a.trunc is not None else b.trunc
    return PureState(a.modes + b.modes, kets, amps, trunc=trunc, validate=False)


def outer(psi: PureState, max_entries: int = 10_000_000) -> DensityOperator:
    """Explicit projector |psi><psi|; quadratic in the state's support."""
    n = len(psi)
    if n * n > max_entries:
        raise ResourceBudgetError(
            f"projector would hold {n * n} entries (> {max_entries})",
            dimension=n * n)
    bras = np.repeat(psi.kets, n, axis=0)
    kets = np.tile(psi.kets, (n, 1))
    vals = np.multiply.outer(psi.amps, psi.amps).ravel()
    return DensityOperator(psi.modes, bras, kets, vals, trunc=psi.trunc,
                           validate=False)


def _split_columns(modes: Sequence[ModeLabel], names: Iterable[str]):
    names = set(names)
    unknown = names - {m.name for m in modes}
    if unknown:
        raise ValueError(f"unknown mode names: {sorted(unknown)}")
    picked = [i for i, m in enumerate(modes) if m.name in names]
    rest = [i for i, m in enumerate(modes) if m.name not in names]
    return picked, rest


def partial_trace(rho: DensityOperator, keep: Iterable[str]) -> DensityOperator:
    """Trace out every mode not named in ``keep`` (original order retained)."""
    keep = set(keep)
    if not keep:
        raise ValueError("keep set must be nonempty")
    keep_idx, env_idx = _split_columns(rho.modes, keep)
    if not env_idx:
        return rho

    match = (rho.bras[:, env_idx] == rho.kets[:, env_idx]).all(axis=1)
    sub_b = rho.bras[match][:, keep_idx]
    sub_k = rho.kets[match][:, keep_idx]
    sub_v = rho.vals[match]

    radices = _radices(sub_b, sub_k)
    b_codes, k_codes, vals = kernels.coalesce_pairs(
        _encode(sub_b, radices), _encode(sub_k, radices), sub_v)
    new_modes = tuple(rho.modes[i] for i in keep_idx)
    return DensityOperator(new_modes, _decode(b_codes, radices),
                           _decode(k_codes, radices), vals,
                           trunc=rho.trunc, validate=False)


def reduce_over_environment(psi: PureState, env: Iterable[str]) -> DensityOperator:
    """Density operator of psi with the named environment modes traced out.

    Groups amplitudes by environment sub-ket and accumulates the outer
    product of each group's system sub-vector with itself; never forms the
    full |psi><psi| projector.
    """
    env = set(env)
    if not env:
        raise ValueError("environment set must be nonempty")
    env_idx, sys_idx = _split_columns(psi.modes, env)
    if not sys_idx:
        raise ValueError("environment must leave at least one system mode")

    env_cols = psi.kets[:, env_idx]
    sys_cols = psi.kets[:, sys_idx]
    env_codes = _encode(env_cols, _radices(env_cols))
    sys_radices = _radices(sys_cols)
    sys_codes = _encode(sys_cols, sys_radices)

    order = np.lexsort((sys_codes, env_codes))
    env_sorted = env_codes[order]
    boundaries = np.flatnonzero(env_sorted[1:] != env_sorted[:-1]) + 1
    group_ptr = np.concatenate(
        [[0], boundaries, [len(env_sorted)]]).astype(np.int64)

    pair_b, pair_k, pair_v = kernels.block_outer(
        sys_codes[order], psi.amps[order], group_ptr)
    b_codes, k_codes, vals = kernels.coalesce_pairs(pair_b, pair_k, pair_v)

    new_modes = tuple(psi.modes[i] for i in sys_idx)
    return DensityOperator(new_modes, _decode(b_codes, sys_radices),
                           _decode(k_codes, sys_radices), vals,
                           trunc=psi.trunc, validate=False)


def trace(rho: DensityOperator) -> float:
    """Sum of diagonal entries."""
    return rho.trace()
