"""Pure-numpy implementations of the hot kernels.

Same contract as the compiled ``_kernels`` extension; selected at import
time by :mod:`unruh_coherence.kernels` when the extension is unavailable
(or forced via ``UNRUH_COHERENCE_KERNELS=python``).
"""

import math

import numpy as np

# Convergence of the series kernel is checked every CHUNK terms; both kernel
# backends use the same cadence so they truncate at identical term counts.
CHUNK = 65536


def block_outer(codes, amps, group_ptr):
    """All pairwise products within contiguous groups of a coded state.

    ``codes``/``amps`` hold the system part of a pure state sorted so that
    rows sharing an environment ket are contiguous; ``group_ptr`` bounds the
    groups. Returns (bra_codes, ket_codes, values) of length sum(b_g^2).
    """
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    amps = np.ascontiguousarray(amps, dtype=np.float64)
    group_ptr = np.ascontiguousarray(group_ptr, dtype=np.int64)
    starts = group_ptr[:-1]
    sizes = np.diff(group_ptr)

    bra_parts, ket_parts, val_parts = [], [], []
    # vectorize per distinct block size (block sizes are tiny: <= number of
    # superposition branches), emitting all groups of one size at once;
    # emission order is unspecified -- callers coalesce the result
    for b in np.unique(sizes):
        if b == 0:
            continue
        sel = starts[sizes == b]
        members = sel[:, None] + np.arange(b, dtype=np.int64)  # (m, b)
        i_idx = np.repeat(members, b, axis=1)                  # (m, b*b)
        j_idx = np.tile(members, (1, b))
        bra_parts.append(codes[i_idx].ravel())
        ket_parts.append(codes[j_idx].ravel())
        val_parts.append((amps[i_idx] * amps[j_idx]).ravel())

    if not bra_parts:
        empty_i = np.empty(0, dtype=np.int64)
        return empty_i, empty_i.copy(), np.empty(0, dtype=np.float64)

    return (np.concatenate(bra_parts), np.concatenate(ket_parts),
            np.concatenate(val_parts))


def coalesce_pairs(bra, ket, vals):
    """Sort (bra, ket) pairs lexicographically, sum duplicates, drop zeros."""
    bra = np.asarray(bra, dtype=np.int64)
    ket = np.asarray(ket, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    if len(vals) == 0:
        return bra.copy(), ket.copy(), vals.copy()

    order = np.lexsort((ket, bra))
    bra = bra[order]
    ket = ket[order]
    vals = vals[order]

    new_group = np.empty(len(vals), dtype=bool)
    new_group[0] = True
    np.logical_or(bra[1:] != bra[:-1], ket[1:] != ket[:-1], out=new_group[1:])
    starts = np.flatnonzero(new_group)
    summed = np.add.reduceat(vals, starts)

    keep = summed != 0.0
    return bra[starts][keep], ket[starts][keep], summed[keep]


def sqrt_geometric_series(q, rel_tol, max_terms):
    """Sum_{m=0}^{M} sqrt(m+1) q^m with the geometric-majorant stopping rule.

    M is the smallest chunk boundary at which
    term(M+1) / (1 - q*sqrt((M+2)/(M+1))) <= rel_tol * partial_sum.
    Returns (total, tail_bound, terms, converged) with terms = M+1; the bound
    is on the discarded tail of the infinite sum.
    """
    if not 0.0 <= q < 1.0:
        raise ValueError(f"series ratio must lie in [0, 1), got {q}")
    total = 1.0  # m = 0 term
    terms = 1
    bound = _tail_bound(q, terms, total * rel_tol)
    if bound is not None:
        return total, bound, terms, True

    idx = np.arange(CHUNK, dtype=np.float64)
    q_pow = q ** idx
    while terms < max_terms:
        step = min(CHUNK, max_terms - terms)
        lead = q ** float(terms)
        if lead == 0.0:
            bound = 0.0
            return total, bound, terms, True
        chunk = np.sqrt(idx[:step] + (terms + 1)) * q_pow[:step]
        total += lead * float(chunk.sum())
        terms += step
        bound = _tail_bound(q, terms, total * rel_tol)
        if bound is not None:
            return total, bound, terms, True
    # cap hit: report the bound we can prove, converged or not
    bound = _tail_bound(q, terms, math.inf)
    return total, (bound if bound is not None else math.inf), terms, False


def _tail_bound(q, terms, target):
    """Tail bound after summing ``terms`` terms, or None while above target.

    The term ratio sqrt((m+2)/(m+1)) * q is decreasing in m, so the tail after
    term M = terms-1 is dominated by the geometric series with ratio
    q_maj = q * sqrt((M+2)/(M+1)) whenever q_maj < 1.
    """
    m_next = terms  # index of the first discarded term
    q_maj = q * math.sqrt((m_next + 1) / m_next)
    if q_maj >= 1.0:
        return None
    term_next = math.sqrt(m_next + 1) * q ** m_next
    bound = term_next / (1.0 - q_maj)
    return bound if bound <= target else None
