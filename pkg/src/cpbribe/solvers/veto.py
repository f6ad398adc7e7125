"""Veto (OV) bribery.

With fewer voters than candidates somebody stays un-vetoed, so ``p`` only
has to shed its own vetoes. Otherwise a flow network counts approvals:
each voter hands out ``2**m - 1`` approval units and may move its veto by
routing one approval onto the node of its current veto.
"""

from __future__ import annotations

from itertools import product

from cpbribe import cpnet
from cpbribe.bribery import BriberyQuery, BriberySolution, finish, infeasible
from cpbribe.costs import Mode, cheapest_targets, cost_to_veto, flips_to_veto
from cpbribe.cpnet import Profile
from cpbribe.flow import FlowNetwork, solve_min_cost_max_flow


def _few_voters(profile, query):
    p = tuple(query.preferred)
    flips = [[] for _ in range(profile.n)]
    cost = 0
    for i, voter in enumerate(profile.voters):
        if cpnet.veto_candidate(voter.net) != p:
            continue
        if query.negative:
            return infeasible("ov-direct", reason=f"voter {i} vetoes p")
        alternatives = cheapest_targets(voter, 2, query.scheme, query.action, Mode.VETO)
        if len(alternatives) < 2:
            return infeasible("ov-direct", reason=f"voter {i} cannot move its veto")
        target, price = alternatives[1]
        flips[i] = flips_to_veto(voter, target, i)
        cost += price
    return finish(profile, query, flips, cost, "ov-direct")


def build_ov_network(profile: Profile, query: BriberyQuery, r: int) -> FlowNetwork:
    """Approval network for target approval count ``r`` of ``p``.

    Labels: ``("bribe", i, c)`` marks the arc moving voter ``i``'s veto onto
    ``c``; ``("cap", c)`` and ``("gadget",)`` carry the r-dependent capacities.
    """
    m, n = profile.m, profile.n
    delta = (1 << m) - 1
    if not 1 <= r <= n * delta:
        raise ValueError(f"r={r} outside 1..{n * delta}")
    p = tuple(query.preferred)
    candidates = list(product((0, 1), repeat=m))
    net = FlowNetwork()
    collect = {c: net.add_node(("c*", c)) for c in candidates}
    for i, voter in enumerate(profile.voters):
        veto = cpnet.veto_candidate(voter.net)
        frozen = query.negative and veto == p
        v = net.add_node(("v", i))
        net.add_arc(net.source, v, delta)
        bnode = {}
        for c in candidates:
            if frozen and c == p:
                continue
            bnode[c] = net.add_node(("c", i, c))
            net.add_arc(bnode[c], collect[c], 1)
        for c in candidates:
            if c == veto:
                continue
            a = net.add_node(("a", i, c))
            net.add_arc(v, a, 1)
            net.add_arc(a, bnode[c], 1)
            if veto in bnode:
                price = cost_to_veto(voter, c, query.scheme, query.action)
                if price is not None:
                    net.add_arc(a, bnode[veto], 1, price, ("bribe", i, c))
    g = net.add_node("g")
    for c, node in collect.items():
        net.add_arc(node, net.sink if c == p else g, r, 0, ("cap", c))
    net.add_arc(g, net.sink, n * delta - r, 0, ("gadget",))
    return net


def solve_ov_flow(profile: Profile, query: BriberyQuery) -> BriberySolution:
    if query.rule.name != "OV":
        raise ValueError("solve_ov_flow needs rule OV")
    m, n = profile.m, profile.n
    if n < (1 << m):
        return _few_voters(profile, query)
    total = n * ((1 << m) - 1)
    net = build_ov_network(profile, query, 1)
    best = None
    for r in range(1, total + 1):
        for e, label in enumerate(net.arc_labels):
            if label and label[0] == "cap":
                net.caps[e] = r
            elif label == ("gadget",):
                net.caps[e] = total - r
        result = solve_min_cost_max_flow(net)
        if result.value == total and (best is None or result.cost < best[1].cost):
            best = (r, result)
    if best is None:
        return infeasible("ov-flow", reason="no approval count r admits a full flow")
    r, result = best
    flips = [[] for _ in range(n)]
    for e, label in enumerate(net.arc_labels):
        if label and label[0] == "bribe" and result.flows[e]:
            i, c = label[1], label[2]
            flips[i] = flips_to_veto(profile.voters[i], c, i)
    return finish(profile, query, flips, result.cost, "ov-flow", r=r)
