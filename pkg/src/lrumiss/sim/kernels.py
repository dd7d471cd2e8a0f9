"""Per-access distance kernels and the LRU simulator.

Each kernel has a numba version (``*_nb``) and a numpy version (``*_np``).
The public names dispatch on :data:`lrumiss.sim._accel.BACKEND`; both sets
stay importable so they can be benchmarked and cross-checked.

Conventions: ``ids`` are integers in ``[1, n_ids]``; ``prev[t]`` is the
index of the previous access to ``ids[t]`` or ``-1`` for a cold access.
"""
from __future__ import annotations

from collections import OrderedDict

import numpy as np

from ._accel import BACKEND, njit

COLD = -1


# --- previous occurrence ---------------------------------------------------

@njit
def previous_occurrence_nb(ids, n_ids):
    last = np.full(n_ids + 1, -1, np.int64)
    prev = np.empty(ids.shape[0], np.int64)
    for t in range(ids.shape[0]):
        x = ids[t]
        prev[t] = last[x]
        last[x] = t
    return prev


def previous_occurrence_np(ids, n_ids=None):
    ids = np.asarray(ids)
    order = np.argsort(ids, kind="stable")
    prev = np.full(ids.shape[0], COLD, np.int64)
    if ids.shape[0] > 1:
        same = ids[order[1:]] == ids[order[:-1]]
        prev[order[1:][same]] = order[:-1][same]
    return prev


# --- stack distances ---------------------------------------------------------

@njit
def stack_distances_nb(prev):
    # Fenwick tree over positions; a 1 marks the latest access of some id.
    L = prev.shape[0]
    tree = np.zeros(L + 1, np.int32)
    out = np.full(L, -1, np.int64)
    for t in range(L):
        p = prev[t]
        if p >= 0:
            s = 0
            i = t
            while i > 0:
                s += tree[i]
                i -= i & -i
            i = p + 1
            while i > 0:
                s -= tree[i]
                i -= i & -i
            out[t] = s
            i = p + 1
            while i <= L:
                tree[i] -= 1
                i += i & -i
        i = t + 1
        while i <= L:
            tree[i] += 1
            i += i & -i
    return out


def _earlier_smaller_np(keys):
    """``#{u < t : keys[u] < keys[t]}`` for every ``t``; keys must be distinct.

    Bottom-up over the bits of each key's rank: at level ``k`` a pair is
    counted when ranks first differ at bit ``k``.
    """
    L = keys.shape[0]
    rank = np.empty(L, np.int64)
    rank[np.argsort(keys, kind="stable")] = np.arange(L)
    counts = np.zeros(L, np.int64)
    for k in range(max(1, int(L - 1).bit_length())):
        group = rank >> (k + 1)
        order = np.argsort(group, kind="stable")
        g = group[order]
        zero = ((rank[order] >> k) & 1) == 0
        seen = np.concatenate(([0], np.cumsum(zero)))
        start = np.searchsorted(g, g, side="left")
        ones = ~zero
        counts[order[ones]] += (seen[:-1] - seen[start])[ones]
    return counts


def stack_distances_np(prev):
    # distinct ids strictly between p = prev[t] and t are the accesses u in
    # (p, t) with prev[u] < p, i.e. #{u < t : prev[u] < p} - (p + 1)
    prev = np.asarray(prev, np.int64)
    L = prev.shape[0]
    cold = prev < 0
    keys = prev.copy()
    keys[cold] = -1 - np.arange(L)[cold]
    out = _earlier_smaller_np(keys) - (prev + 1)
    out[cold] = COLD
    return out


# --- LRU simulation ----------------------------------------------------------

@njit
def lru_misses_nb(ids, n_ids, D, start=0):
    nxt = np.full(n_ids + 1, -1, np.int64)
    prv = np.full(n_ids + 1, -1, np.int64)
    inside = np.zeros(n_ids + 1, np.bool_)
    head = -1
    tail = -1
    size = 0
    misses = 0
    for t in range(ids.shape[0]):
        x = ids[t]
        if inside[x]:
            if x == head:
                continue
            # unlink, then fall through to the push-front below
            a = prv[x]
            b = nxt[x]
            nxt[a] = b
            if b >= 0:
                prv[b] = a
            else:
                tail = a
        else:
            if t >= start:
                misses += 1
            if size == D:
                old = tail
                tail = prv[old]
                if tail >= 0:
                    nxt[tail] = -1
                else:
                    head = -1
                inside[old] = False
                size -= 1
            inside[x] = True
            size += 1
        prv[x] = -1
        nxt[x] = head
        if head >= 0:
            prv[head] = x
        head = x
        if tail < 0:
            tail = x
    return misses


def lru_misses_np(ids, n_ids, D, start=0):
    cache: OrderedDict = OrderedDict()
    misses = 0
    for t, x in enumerate(np.asarray(ids).tolist()):
        if x in cache:
            cache.move_to_end(x)
            continue
        misses += t >= start
        if len(cache) == D:
            cache.popitem(last=False)
        cache[x] = None
    return misses


# --- sliding-window working set ---------------------------------------------

def _capped_sums(sorted_vals, prefix, D):
    """``sum(min(v, D))`` for each D, given sorted values and their prefix sums."""
    below = np.searchsorted(sorted_vals, D, side="left")
    return prefix[below] + D * (sorted_vals.shape[0] - below)


def window_distinct_totals(prev, D):
    """Sum over all length-``D`` windows of the number of distinct ids.

    Access ``u`` is the first occurrence of its id in ``min(u - prev[u], D)``
    window starts, less those starts that would run past the end.
    """
    prev = np.asarray(prev, np.int64)
    D = np.asarray(D, np.int64)
    L = prev.shape[0]
    pos = np.arange(L, dtype=np.int64)
    gaps = np.sort(pos - prev)
    # h_r = L - prev[L - r] for r = 1..L
    tail = np.sort(L - prev[::-1])
    g_pre = np.concatenate(([0], np.cumsum(gaps)))
    h_pre = np.concatenate(([0], np.cumsum(tail)))
    full = _capped_sums(gaps, g_pre, D)
    edge = _capped_sums(tail, h_pre, D) - D * (L - (D - 1)) - D * (D - 1) // 2
    return full - edge


def _backend(nb, np_):
    return nb if BACKEND == "numba" else np_


previous_occurrence = _backend(previous_occurrence_nb, previous_occurrence_np)
stack_distances = _backend(stack_distances_nb, stack_distances_np)
lru_misses = _backend(lru_misses_nb, lru_misses_np)
