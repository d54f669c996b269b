"""Pure-numpy kernels over the graph's CSR arrays.

This is the fallback path selected with ``BIPREC_BACKEND=numpy``. It exposes
the same four functions as the numba backend and computes identical results;
the only permitted difference is last-ulp float noise from numpy's pairwise
summation on long reductions.

All kernels take dense node indices; ``-1`` marks a bottom that is absent
from the graph.
"""
from __future__ import annotations

import numpy as np


def _deviation_similarity(dev_a, dev_b, average):
    # Scalar formula shared with the numba backend (which jit-compiles it):
    # score two rating deviations by closeness, halved when signs disagree.
    base = 1.0 - abs(dev_a - dev_b) / average
    if base < 0.0:
        base = 0.0
    if dev_a * dev_b < 0.0:
        return base * 0.5
    return base


def pair_similarity_csr(b_indptr, b_cols, b_wts, top_avg, i, j):
    """Mean deviation similarity of bottoms i and j over their common tops.

    Returns (similarity, common_count); similarity is nan when the bottoms
    share no top.
    """
    sa, ea = b_indptr[i], b_indptr[i + 1]
    sb, eb = b_indptr[j], b_indptr[j + 1]
    common, ia, ib = np.intersect1d(b_cols[sa:ea], b_cols[sb:eb],
                                    assume_unique=True, return_indices=True)
    if common.size == 0:
        return np.nan, 0
    avg = top_avg[common]
    dev_a = b_wts[sa:ea][ia] - avg
    dev_b = b_wts[sb:eb][ib] - avg
    base = 1.0 - np.abs(dev_a - dev_b) / avg
    np.maximum(base, 0.0, out=base)
    sims = np.where(dev_a * dev_b < 0.0, base * 0.5, base)
    return float(np.sum(sims) / common.size), int(common.size)


def screen_csr(b_indptr, b_cols, t_indptr, t_rows, b_idx, t_idx, min_common):
    """Common-neighbor tallies for a candidate (bottom, top) pair.

    Returns (raters, overlapping, total_common, min_common_over_raters)
    where raters excludes the candidate bottom itself.
    """
    ts, te = t_indptr[t_idx], t_indptr[t_idx + 1]
    others = t_rows[ts:te]
    others = others[others != b_idx]
    raters = int(others.size)
    if raters == 0:
        return 0, 0, 0, 0
    if b_idx < 0:
        return raters, 0, 0, 0

    mask = np.zeros(t_indptr.size - 1, dtype=bool)
    mask[b_cols[b_indptr[b_idx]:b_indptr[b_idx + 1]]] = True

    starts = b_indptr[others]
    lengths = b_indptr[others + 1] - starts
    seg_starts = np.cumsum(lengths) - lengths
    flat = np.arange(int(lengths.sum())) + np.repeat(starts - seg_starts, lengths)
    hits = mask[b_cols[flat]].astype(np.int64)
    commons = np.add.reduceat(hits, seg_starts)

    overlapping = int(np.count_nonzero(commons >= min_common))
    return raters, overlapping, int(commons.sum()), int(commons.min())


def predict_csr(b_indptr, b_cols, b_wts, t_indptr, t_rows, t_wts, top_avg,
                b_idx, t_idx, min_common, sim_floor, low, high):
    """Similarity-weighted rating for a screened pair.

    Returns (prediction, contributor_count); prediction is nan and the count
    0 when no rater clears both the common-top minimum and the similarity
    floor. Contributor terms accumulate sequentially in sorted bottom order.
    """
    ts, te = t_indptr[t_idx], t_indptr[t_idx + 1]
    s_sum = 0.0
    sr_sum = 0.0
    last_rating = 0.0
    k = 0
    for q in range(ts, te):
        other = int(t_rows[q])
        if other == b_idx:
            continue
        sim, count = pair_similarity_csr(b_indptr, b_cols, b_wts, top_avg,
                                         b_idx, other)
        if count >= min_common and sim > sim_floor:
            s_sum += sim
            sr_sum += sim * float(t_wts[q])
            last_rating = float(t_wts[q])
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


def evaluate_pairs_csr(b_indptr, b_cols, b_wts, t_indptr, t_rows, t_wts,
                       top_avg, pair_b, pair_t, min_common, threshold,
                       guard_required, guard_per_pair, sim_floor, low, high):
    """Screen and predict a batch of candidate pairs.

    Outcome codes: 0 predicted, 1 insufficient data, 2 no confidence,
    3 cold start (bottom absent). A negative top index is insufficient data.
    """
    n = pair_b.size
    codes = np.empty(n, np.int8)
    preds = np.full(n, np.nan)
    for idx in range(n):
        b = int(pair_b[idx])
        t = int(pair_t[idx])
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
