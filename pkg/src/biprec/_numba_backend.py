"""Numba-compiled kernels over the graph's CSR arrays.

Default backend when numba is importable. Function contracts match
``_numpy_backend``; see that module for parameter docs. Per-pair work is
sequential in sorted-key order, so results are reproducible and the batch
evaluator may fan pairs out across threads without changing any output.
"""
from __future__ import annotations

import warnings

import numpy as np
from numba import njit, prange
from numba.core.errors import NumbaWarning

from ._numpy_backend import _deviation_similarity

# Older TBB runtimes make numba emit a threading-layer notice at first
# parallel call; it falls back to another layer, so keep stderr quiet.
warnings.filterwarnings("ignore", message=".*TBB threading layer.*",
                        category=NumbaWarning)

_dev_sim = njit(cache=True, inline="always")(_deviation_similarity)


@njit(cache=True)
def pair_similarity_csr(b_indptr, b_cols, b_wts, top_avg, i, j):
    ia, ea = b_indptr[i], b_indptr[i + 1]
    ib, eb = b_indptr[j], b_indptr[j + 1]
    total = 0.0
    count = 0
    while ia < ea and ib < eb:
        ca = b_cols[ia]
        cb = b_cols[ib]
        if ca == cb:
            avg = top_avg[ca]
            total += _dev_sim(b_wts[ia] - avg, b_wts[ib] - avg, avg)
            count += 1
            ia += 1
            ib += 1
        elif ca < cb:
            ia += 1
        else:
            ib += 1
    if count == 0:
        return np.nan, 0
    return total / count, count


@njit(cache=True)
def _common_count(b_cols, sa, ea, sb, eb):
    i = sa
    j = sb
    count = 0
    while i < ea and j < eb:
        ca = b_cols[i]
        cb = b_cols[j]
        if ca == cb:
            count += 1
            i += 1
            j += 1
        elif ca < cb:
            i += 1
        else:
            j += 1
    return count


@njit(cache=True)
def screen_csr(b_indptr, b_cols, t_indptr, t_rows, b_idx, t_idx, min_common):
    if b_idx >= 0:
        sb, eb = b_indptr[b_idx], b_indptr[b_idx + 1]
    else:
        sb, eb = 0, 0
    raters = 0
    overlapping = 0
    total = 0
    mn = 0
    first = True
    for q in range(t_indptr[t_idx], t_indptr[t_idx + 1]):
        other = t_rows[q]
        if other == b_idx:
            continue
        raters += 1
        c = _common_count(b_cols, sb, eb, b_indptr[other], b_indptr[other + 1])
        if c >= min_common:
            overlapping += 1
        total += c
        if first or c < mn:
            mn = c
            first = False
    return raters, overlapping, total, mn


@njit(cache=True)
def predict_csr(b_indptr, b_cols, b_wts, t_indptr, t_rows, t_wts, top_avg,
                b_idx, t_idx, min_common, sim_floor, low, high):
    s_sum = 0.0
    sr_sum = 0.0
    last_rating = 0.0
    k = 0
    for q in range(t_indptr[t_idx], t_indptr[t_idx + 1]):
        other = t_rows[q]
        if other == b_idx:
            continue
        sim, count = pair_similarity_csr(b_indptr, b_cols, b_wts, top_avg,
                                         b_idx, other)
        if count >= min_common and sim > sim_floor:
            s_sum += sim
            sr_sum += sim * t_wts[q]
            last_rating = t_wts[q]
            k += 1
    if k == 0 or s_sum <= 0.0:
        return np.nan, 0
    # A single contributor collapses to its rating exactly.
    p = last_rating if k == 1 else sr_sum / s_sum
    if p < low:
        p = low
    if p > high:
        p = high
    return p, k


@njit(cache=True, parallel=True)
def evaluate_pairs_csr(b_indptr, b_cols, b_wts, t_indptr, t_rows, t_wts,
                       top_avg, pair_b, pair_t, min_common, threshold,
                       guard_required, guard_per_pair, sim_floor, low, high):
    n = pair_b.size
    codes = np.empty(n, np.int8)
    preds = np.full(n, np.nan)
    for idx in prange(n):
        b = pair_b[idx]
        t = pair_t[idx]
        if t < 0:
            codes[idx] = 1
            continue
        if b < 0:
            codes[idx] = 3
            continue
        raters, overlapping, total, mn = screen_csr(
            b_indptr, b_cols, t_indptr, t_rows, b, t, min_common)
        if raters == 0:
            codes[idx] = 1
            continue
        ratio = overlapping / raters
        if guard_per_pair:
            guard_ok = mn >= guard_required
        else:
            guard_ok = total >= guard_required
        if ratio < threshold or not guard_ok:
            codes[idx] = 1
            continue
        p, k = predict_csr(b_indptr, b_cols, b_wts, t_indptr, t_rows, t_wts,
                           top_avg, b, t, min_common, sim_floor, low, high)
        if k == 0:
            codes[idx] = 2
        else:
            codes[idx] = 0
            preds[idx] = p
    return codes, preds
