# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled hot kernels; semantics mirror :mod:`cpbribe._pykernels` exactly."""

from libcpp.vector cimport vector
from libcpp.queue cimport priority_queue
from libcpp.pair cimport pair

from cpbribe._pykernels import NegativeCycleError

ctypedef long long i64
ctypedef unsigned long long u64

cdef i64 INF = 1LL << 61


def k_smallest_masks(sizes, Py_ssize_t K):
    cdef Py_ssize_t m = len(sizes)
    if m > 63:
        raise OverflowError("compiled kernel supports at most 63 elements")
    cdef vector[u64] a_masks, b_masks, c_masks
    cdef vector[i64] a_sums, b_sums, c_sums
    cdef Py_ssize_t i, j, ia, ib, na, nb, steps
    cdef u64 bit
    cdef i64 s
    a_masks.push_back(0)
    a_sums.push_back(0)
    for i in range(min(m, K)):
        bit = (<u64>1) << i
        s = sizes[i]
        na = a_masks.size()
        b_masks.resize(na)
        b_sums.resize(na)
        for j in range(na):
            b_masks[j] = a_masks[j] | bit
            b_sums[j] = a_sums[j] + s
        nb = na
        steps = min(K, na + nb)
        c_masks.clear()
        c_sums.clear()
        ia = 0
        ib = 0
        for j in range(steps):
            if ia < na and (ib >= nb or a_sums[ia] < b_sums[ib]):
                c_masks.push_back(a_masks[ia])
                c_sums.push_back(a_sums[ia])
                ia += 1
            else:
                c_masks.push_back(b_masks[ib])
                c_sums.push_back(b_sums[ib])
                ib += 1
        a_masks.swap(c_masks)
        a_sums.swap(c_sums)
    return [a_masks[j] for j in range(a_masks.size())], [a_sums[j] for j in range(a_sums.size())]


def knapsack_keep(weights, costs, i64 capacity):
    cdef Py_ssize_t n = len(weights)
    cdef Py_ssize_t total = 0
    cdef Py_ssize_t i, j, width
    cdef vector[i64] w, c
    for i in range(n):
        w.push_back(weights[i])
        c.push_back(costs[i])
        total += costs[i]
    width = total + 1
    cdef vector[i64] table
    table.assign((n + 1) * width, INF)
    table[0] = 0
    cdef i64 best, alt
    for i in range(1, n + 1):
        for j in range(width):
            best = table[(i - 1) * width + j]
            if j >= c[i - 1]:
                alt = table[(i - 1) * width + j - c[i - 1]] + w[i - 1]
                if alt < best:
                    best = alt
            table[i * width + j] = best
    j = total
    while j > 0 and table[n * width + j] > capacity:
        j -= 1
    cdef Py_ssize_t kept_cost = j
    kept = []
    for i in range(n, 0, -1):
        if table[i * width + j] != table[(i - 1) * width + j]:
            kept.append(i - 1)
            j -= c[i - 1]
    kept.reverse()
    return kept, kept_cost


def min_cost_flow(Py_ssize_t n_nodes, tails, heads, caps, costs, Py_ssize_t source, Py_ssize_t sink):
    cdef Py_ssize_t n_arcs = len(tails)
    cdef vector[int] to, start, order, tail_of
    cdef vector[i64] res, cost, cap0
    cdef Py_ssize_t e, u, v, k
    to.resize(2 * n_arcs)
    res.resize(2 * n_arcs)
    cost.resize(2 * n_arcs)
    cap0.resize(n_arcs)
    tail_of.resize(2 * n_arcs)
    cdef bint has_negative = False
    for e in range(n_arcs):
        u = tails[e]
        v = heads[e]
        to[2 * e] = v
        tail_of[2 * e] = u
        res[2 * e] = caps[e]
        cap0[e] = caps[e]
        cost[2 * e] = costs[e]
        to[2 * e + 1] = u
        tail_of[2 * e + 1] = v
        res[2 * e + 1] = 0
        cost[2 * e + 1] = -cost[2 * e]
        if cost[2 * e] < 0:
            has_negative = True
    # adjacency in the same order as the Python kernel: forward edges by
    # insertion, then backward edges by insertion
    cdef vector[int] deg
    deg.assign(n_nodes + 1, 0)
    for e in range(n_arcs):
        deg[tails[e] + 1] += 1
    for e in range(n_arcs):
        deg[heads[e] + 1] += 1
    start.assign(n_nodes + 1, 0)
    for u in range(n_nodes):
        start[u + 1] = start[u] + deg[u + 1]
    cdef vector[int] fill
    fill.assign(n_nodes, 0)
    order.resize(2 * n_arcs)
    for e in range(n_arcs):
        u = tails[e]
        order[start[u] + fill[u]] = 2 * e
        fill[u] += 1
    for e in range(n_arcs):
        u = heads[e]
        order[start[u] + fill[u]] = 2 * e + 1
        fill[u] += 1

    cdef vector[i64] pot, dist
    cdef vector[int] prev
    pot.assign(n_nodes, 0)
    dist.assign(n_nodes, INF)
    cdef bint changed
    cdef Py_ssize_t it
    if has_negative:
        dist[source] = 0
        changed = True
        for it in range(n_nodes):
            changed = False
            for e in range(n_arcs):
                u = tail_of[2 * e]
                v = to[2 * e]
                if cap0[e] > 0 and dist[u] != INF and dist[u] + cost[2 * e] < dist[v]:
                    dist[v] = dist[u] + cost[2 * e]
                    changed = True
            if not changed:
                break
        if changed:
            raise NegativeCycleError("negative-cost cycle reachable from source")
        for u in range(n_nodes):
            pot[u] = dist[u] if dist[u] != INF else 0

    cdef i64 flow = 0, total = 0, d, nd, push
    cdef priority_queue[pair[i64, i64]] heap
    cdef pair[i64, i64] top
    prev.resize(n_nodes)
    while True:
        for u in range(n_nodes):
            dist[u] = INF
            prev[u] = -1
        dist[source] = 0
        heap.push(pair[i64, i64](0, -source))
        while not heap.empty():
            top = heap.top()
            heap.pop()
            d = -top.first
            u = -top.second
            if d > dist[u]:
                continue
            for k in range(start[u], start[u + 1]):
                e = order[k]
                if res[e] > 0:
                    v = to[e]
                    nd = d + cost[e] + pot[u] - pot[v]
                    if nd < dist[v]:
                        dist[v] = nd
                        prev[v] = e
                        heap.push(pair[i64, i64](-nd, -v))
        if dist[sink] == INF:
            break
        for v in range(n_nodes):
            if dist[v] != INF:
                pot[v] += dist[v]
        push = INF
        v = sink
        while v != source:
            e = prev[v]
            if res[e] < push:
                push = res[e]
            v = to[e ^ 1]
        v = sink
        while v != source:
            e = prev[v]
            res[e] -= push
            res[e ^ 1] += push
            total += push * cost[e]
            v = to[e ^ 1]
        flow += push
    arc_flows = [cap0[e] - res[2 * e] for e in range(n_arcs)]
    return flow, total, arc_flows
