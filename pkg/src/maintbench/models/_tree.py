"""Compiled kernels for regression-tree growth and prediction.

The splitter does an exhaustive search over midpoints of sorted unique
values, maximizing the reduction in sum of squared errors. Ties are broken
toward the lowest feature index and lowest threshold by iterating features
ascending and thresholds ascending with a strictly-greater comparison.

Per-node feature subsampling reads pre-drawn uniforms from ``rand_pool``
indexed by node id, so results do not depend on thread scheduling.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Relative tolerance below which a node's target variance counts as zero.
_SSE_REL_TOL = 1e-12


@njit(cache=True, nogil=True)
def grow_tree(X, y, rows, min_leaf, max_depth, mtry, rand_pool):  # pragma: no cover
    n = rows.shape[0]
    p = X.shape[1]
    max_nodes = 2 * n
    feature = np.full(max_nodes, -1, np.int64)
    threshold = np.zeros(max_nodes)
    left = np.full(max_nodes, -1, np.int64)
    right = np.full(max_nodes, -1, np.int64)
    value = np.zeros(max_nodes)

    idx = rows.copy()
    stack_lo = np.empty(max_nodes, np.int64)
    stack_hi = np.empty(max_nodes, np.int64)
    stack_depth = np.empty(max_nodes, np.int64)
    stack_node = np.empty(max_nodes, np.int64)
    stack_lo[0] = 0
    stack_hi[0] = n
    stack_depth[0] = 0
    stack_node[0] = 0
    sp = 1
    node_count = 1

    perm = np.empty(p, np.int64)
    feats = np.empty(p, np.int64)
    xs = np.empty(n)
    tmp_left = np.empty(n, np.int64)
    tmp_right = np.empty(n, np.int64)

    while sp > 0:
        sp -= 1
        lo = stack_lo[sp]
        hi = stack_hi[sp]
        depth = stack_depth[sp]
        node = stack_node[sp]
        m = hi - lo

        sy = 0.0
        syy = 0.0
        for t in range(lo, hi):
            v = y[idx[t]]
            sy += v
            syy += v * v
        value[node] = sy / m
        parent_sse = syy - sy * sy / m
        if (
            depth >= max_depth
            or m < 2 * min_leaf
            or parent_sse <= _SSE_REL_TOL * max(syy, 1e-30)
        ):
            continue

        if mtry >= p:
            n_feats = p
            for t in range(p):
                feats[t] = t
        else:
            n_feats = mtry
            for j in range(p):
                perm[j] = j
            for t in range(mtry):
                pick = t + int(rand_pool[node, t] * (p - t))
                if pick >= p:
                    pick = p - 1
                swap = perm[t]
                perm[t] = perm[pick]
                perm[pick] = swap
            for t in range(mtry):
                feats[t] = perm[t]
            # insertion sort: ascending feature order keeps tie-breaking stable
            for a in range(1, n_feats):
                key = feats[a]
                b = a - 1
                while b >= 0 and feats[b] > key:
                    feats[b + 1] = feats[b]
                    b -= 1
                feats[b + 1] = key

        best_f = -1
        best_thr = 0.0
        best_gain = 0.0
        for fi in range(n_feats):
            j = feats[fi]
            for t in range(m):
                xs[t] = X[idx[lo + t], j]
            order = np.argsort(xs[:m], kind="mergesort")
            cl = 0.0
            cll = 0.0
            for pos in range(m - 1):
                o = order[pos]
                v = y[idx[lo + o]]
                cl += v
                cll += v * v
                x_here = xs[o]
                x_next = xs[order[pos + 1]]
                if x_next <= x_here:
                    continue
                nl = pos + 1
                nr = m - nl
                if nl < min_leaf or nr < min_leaf:
                    continue
                sse_l = cll - cl * cl / nl
                sy_r = sy - cl
                sse_r = (syy - cll) - sy_r * sy_r / nr
                gain = parent_sse - sse_l - sse_r
                if gain > best_gain:
                    best_gain = gain
                    best_f = j
                    best_thr = 0.5 * (x_here + x_next)
        if best_f < 0:
            continue

        nl_count = 0
        nr_count = 0
        for t in range(lo, hi):
            r = idx[t]
            if X[r, best_f] <= best_thr:
                tmp_left[nl_count] = r
                nl_count += 1
            else:
                tmp_right[nr_count] = r
                nr_count += 1
        for t in range(nl_count):
            idx[lo + t] = tmp_left[t]
        for t in range(nr_count):
            idx[lo + nl_count + t] = tmp_right[t]

        left_id = node_count
        right_id = node_count + 1
        node_count += 2
        feature[node] = best_f
        threshold[node] = best_thr
        left[node] = left_id
        right[node] = right_id

        stack_lo[sp] = lo
        stack_hi[sp] = lo + nl_count
        stack_depth[sp] = depth + 1
        stack_node[sp] = left_id
        sp += 1
        stack_lo[sp] = lo + nl_count
        stack_hi[sp] = hi
        stack_depth[sp] = depth + 1
        stack_node[sp] = right_id
        sp += 1

    return (
        feature[:node_count],
        threshold[:node_count],
        left[:node_count],
        right[:node_count],
        value[:node_count],
    )


@njit(cache=True, nogil=True)
def predict_tree(feature, threshold, left, right, value, X, out):  # pragma: no cover
    for r in range(X.shape[0]):
        node = 0
        while feature[node] >= 0:
            if X[r, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[r] = value[node]
