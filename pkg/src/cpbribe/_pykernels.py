"""Pure-Python hot kernels.

Reference implementations of the three inner loops that the compiled
``_speedups`` module accelerates. Both backends must return identical
results for identical inputs, including tie-breaking.
"""

import heapq

INF = float("inf")


def k_smallest_masks(sizes, K, on_iteration=None):
    """Two-way-merge enumeration of the ``K`` cheapest subsets.

    ``sizes`` must already be sorted ascending. Returns ``(masks, sums)``,
    both ascending by sum; bit ``i`` of a mask selects ``sizes[i]``.
    ``on_iteration(i, masks, sums)`` is called after each outer iteration.
    """
    masks = [0]
    sums = [0]
    for i in range(min(len(sizes), K)):
        bit = 1 << i
        s = sizes[i]
        b_masks = [mask | bit for mask in masks]
        b_sums = [total + s for total in sums]
        na = len(masks)
        nb = len(b_masks)
        ia = ib = 0
        c_masks = []
        c_sums = []
        for _ in range(min(K, na + nb)):
            # left side wins only on a strict comparison
            if ia < na and (ib >= nb or sums[ia] < b_sums[ib]):
                c_masks.append(masks[ia])
                c_sums.append(sums[ia])
                ia += 1
            else:
                c_masks.append(b_masks[ib])
                c_sums.append(b_sums[ib])
                ib += 1
        masks, sums = c_masks, c_sums
        if on_iteration is not None:
            on_iteration(i + 1, masks, sums)
    return masks, sums


def knapsack_keep(weights, costs, capacity):
    """Max-cost subset with total weight <= capacity.

    Dynamic program over the cost axis: ``d[i][j]`` is the minimum weight
    of a subset of the first ``i`` items with cost exactly ``j``.
    Returns ``(kept_indices, kept_cost)``.
    """
    n = len(weights)
    total = sum(costs)
    table = [[INF] * (total + 1) for _ in range(n + 1)]
    table[0][0] = 0
    for i in range(1, n + 1):
        w = weights[i - 1]
        c = costs[i - 1]
        prev = table[i - 1]
        row = table[i]
        for j in range(total + 1):
            best = prev[j]
            if j >= c:
                alt = prev[j - c] + w
                if alt < best:
                    best = alt
            row[j] = best
    last = table[n]
    j = total
    while j > 0 and last[j] > capacity:
        j -= 1
    kept_cost = j
    kept = []
    for i in range(n, 0, -1):
        if table[i][j] != table[i - 1][j]:
            kept.append(i - 1)
            j -= costs[i - 1]
    kept.reverse()
    return kept, kept_cost


class NegativeCycleError(ValueError):
    pass


def min_cost_flow(n_nodes, tails, heads, caps, costs, source, sink):
    """Successive shortest augmenting paths with node potentials.

    Returns ``(flow_value, total_cost, arc_flows)``. Initial potentials come
    from Bellman-Ford so negative arc costs are admitted as long as no
    negative cycle is reachable from ``source``.
    """
    n_arcs = len(tails)
    # residual edges: 2e forward, 2e+1 backward
    to = [0] * (2 * n_arcs)
    res = [0] * (2 * n_arcs)
    cost = [0] * (2 * n_arcs)
    adj = [[] for _ in range(n_nodes)]
    for e in range(n_arcs):
        u, v = tails[e], heads[e]
        to[2 * e] = v
        res[2 * e] = caps[e]
        cost[2 * e] = costs[e]
        to[2 * e + 1] = u
        cost[2 * e + 1] = -costs[e]
        adj[u].append(2 * e)
    for e in range(n_arcs):
        adj[heads[e]].append(2 * e + 1)

    pot = [0] * n_nodes
    if any(c < 0 for c in costs):
        dist = [INF] * n_nodes
        dist[source] = 0
        for _ in range(n_nodes):
            changed = False
            for e in range(n_arcs):
                u = tails[e]
                if caps[e] > 0 and dist[u] != INF and dist[u] + costs[e] < dist[heads[e]]:
                    dist[heads[e]] = dist[u] + costs[e]
                    changed = True
            if not changed:
                break
        else:
            raise NegativeCycleError("negative-cost cycle reachable from source")
        pot = [d if d != INF else 0 for d in dist]

    flow = 0
    total = 0
    while True:
        dist = [INF] * n_nodes
        prev = [-1] * n_nodes
        dist[source] = 0
        heap = [(0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            pu = pot[u]
            for e in adj[u]:
                if res[e] > 0:
                    v = to[e]
                    nd = d + cost[e] + pu - pot[v]
                    if nd < dist[v]:
                        dist[v] = nd
                        prev[v] = e
                        heapq.heappush(heap, (nd, v))
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
    arc_flows = [caps[e] - res[2 * e] for e in range(n_arcs)]
    return flow, total, arc_flows
