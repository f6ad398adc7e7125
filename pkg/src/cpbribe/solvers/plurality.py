"""Plurality (OP) and truncated k-approval (OK*) bribery by min-cost flow.

For each target score ``r`` of ``p`` one network is solved: every voter
sends one unit to the top it is bribed into, ``p`` collects exactly ``r``
units and every other candidate at most ``r``. Only the ``n`` cheapest tops
per voter (plus ``p``) need to be offered; the rest can never be required.
"""

from __future__ import annotations

from dataclasses import dataclass

from cpbribe import cpnet
from cpbribe.bribery import BriberyQuery, BriberySolution, finish, infeasible, pricing_voter
from cpbribe.costs import CostScheme, Mode, cheapest_targets, cost_to_top, flips_to_top
from cpbribe.cpnet import Profile
from cpbribe.flow import FlowNetwork, solve_min_cost_max_flow


@dataclass(frozen=True)
class Target:
    key: tuple        # candidate, or its package under OK*
    candidate: tuple  # full top the voter is bribed into
    cost: int


def _lift(net, key, kept):
    """Cheapest full top inside a package: kept issues fixed, the rest preferred."""
    c = [0] * net.m
    fixed = dict(zip(kept, key))
    for j in net.order:
        c[j] = fixed[j] if j in fixed else net.preferred(j, c)
    return tuple(c)


def voter_targets(profile: Profile, query: BriberyQuery, i: int, width=None) -> list:
    """The B-set of voter ``i``: cheap reachable tops plus ``p`` when allowed."""
    rule = query.rule
    voter = pricing_voter(profile, rule, profile.voters[i])
    if rule.name == "OKSTAR":
        kept, j = cpnet.okstar_issues(profile, rule), rule.j
    else:
        kept, j = tuple(range(profile.m)), 0
    p_key = cpnet.project(query.preferred, kept)
    top_key = cpnet.project(cpnet.top_candidate(voter.net), kept)
    n = profile.n
    if width is None:
        # negative mode may have to discard p from the list, so keep spares
        width = n + (2 if query.scheme is CostScheme.EQUAL else 1) if query.negative else n
    allow_p = not query.negative or top_key == p_key
    out = []
    for c, cost in cheapest_targets(voter, width, query.scheme, query.action, Mode.TOP, truncate=j):
        key = cpnet.project(c, kept)
        if key != p_key or allow_p:
            out.append(Target(key, c, cost))
    if allow_p and all(t.key != p_key for t in out):
        lifted = _lift(voter.net, p_key, kept)
        cost = cost_to_top(voter, lifted, query.scheme, query.action)
        if cost is not None:
            out.append(Target(p_key, lifted, cost))
    return out


def build_op_network(profile: Profile, query: BriberyQuery, r: int, *, width=None, targets=None) -> FlowNetwork:
    """Network for target score ``r``.

    Arc labels: ``("bribe", i, target)`` on voter-to-B arcs, ``("cap", key)``
    on the r-capacity collection arcs and ``("gadget",)`` on the g-t arc.
    """
    n = profile.n
    if not 1 <= r <= max(n, 1):
        raise ValueError(f"r={r} outside 1..{n}")
    if targets is None:
        targets = [voter_targets(profile, query, i, width) for i in range(n)]
    kept = (cpnet.okstar_issues(profile, query.rule) if query.rule.name == "OKSTAR"
            else tuple(range(profile.m)))
    p_key = cpnet.project(query.preferred, kept)

    net = FlowNetwork()
    collect = {}
    for i, options in enumerate(targets):
        v = net.add_node(("v", i))
        net.add_arc(net.source, v, 1)
        for tgt in options:
            b = net.add_node(("c", i, tgt.key))
            net.add_arc(v, b, 1, tgt.cost, ("bribe", i, tgt))
            if tgt.key not in collect:
                collect[tgt.key] = net.add_node(("c*", tgt.key))
            net.add_arc(b, collect[tgt.key], 1)
    g = net.add_node("g")
    for key, node in collect.items():
        head = net.sink if key == p_key else g
        net.add_arc(node, head, r, 0, ("cap", key))
    net.add_arc(g, net.sink, n - r, 0, ("gadget",))
    return net


def _set_r(net, r, total):
    for e, label in enumerate(net.arc_labels):
        if label and label[0] == "cap":
            net.caps[e] = r
        elif label == ("gadget",):
            net.caps[e] = total - r


def solve_op_flow(profile: Profile, query: BriberyQuery) -> BriberySolution:
    """Optimal OP (or OK*) bribery for unweighted profiles."""
    if query.rule.name not in ("OP", "OKSTAR"):
        raise ValueError("solve_op_flow handles OP and OK* only")
    n = profile.n
    method = "flow"
    if n == 0:
        return finish(profile, query, [], 0, method)
    targets = [voter_targets(profile, query, i) for i in range(n)]
    net = build_op_network(profile, query, 1, targets=targets)
    best = None
    for r in range(1, n + 1):
        _set_r(net, r, n)
        result = solve_min_cost_max_flow(net)
        if result.value == n and (best is None or result.cost < best[1].cost):
            best = (r, result)
    if best is None:
        return infeasible(method, reason="no score r admits a full flow")
    r, result = best
    pricing = [pricing_voter(profile, query.rule, v) for v in profile.voters]
    flips = [[] for _ in range(n)]
    for e, label in enumerate(net.arc_labels):
        if label and label[0] == "bribe" and result.flows[e]:
            i, tgt = label[1], label[2]
            flips[i] = flips_to_top(pricing[i], tgt.candidate, i)
    return finish(profile, query, flips, result.cost, method, r=r)


def solve_ok_star(profile: Profile, query: BriberyQuery) -> BriberySolution:
    """OK* with ``k = 2**j``: plurality over the packages of the kept issues."""
    if query.rule.name != "OKSTAR":
        raise ValueError("solve_ok_star needs rule OKSTAR")
    cpnet.okstar_issues(profile, query.rule)  # order and O-legality checks
    return solve_op_flow(profile, query)
