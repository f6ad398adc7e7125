"""Sequential majority (SM) bribery.

When ``p`` wins every issue, each issue is decided in ``p``'s context, so a
voter's ballot reduces to one statement per issue: the preferred value of
that issue given ``p``'s parent values. Issues then decouple.
"""

from __future__ import annotations

from dataclasses import dataclass

from cpbribe import cpnet, kernels
from cpbribe.bribery import BriberyQuery, BriberySolution, finish, infeasible
from cpbribe.costs import CostScheme, StatementFlip, flip_prices
from cpbribe.cpnet import Profile
from cpbribe.flow import FlowNetwork, solve_min_cost_max_flow


@dataclass
class _Ballots:
    p: tuple
    votes: list       # votes[i][X]: voter i's value for X in p's context
    ctx: list         # ctx[i][X]: p's parent values for X in voter i's net
    flippable: list   # flippable[i][X]
    price: list       # price[i][X]: flip price times q
    need: list        # need[X]: good weight p's value requires on X
    weights: list

    def flip(self, i, x, towards_p=True):
        value = self.p[x] if towards_p else 1 - self.p[x]
        return StatementFlip(i, x, self.ctx[i][x], value)


def _ballots(profile: Profile, query: BriberyQuery, priced=True) -> _Ballots:
    if query.rule.name != "SM":
        raise ValueError("SM solver called for another rule")
    order = cpnet.require_order(profile)
    p = tuple(query.preferred)
    votes, ctx, flippable, price = [], [], [], []
    for voter in profile.voters:
        net = voter.net
        votes.append([net.preferred(x, p) for x in range(profile.m)])
        ctx.append([net.context(x, p) for x in range(profile.m)])
        flippable.append([query.action.permits(net, x) for x in range(profile.m)])
        if priced:
            price.append([c * voter.q for c in flip_prices(voter, query.scheme)])
    weights = [v.weight for v in profile.voters]
    total = sum(weights)
    need = [0] * profile.m
    for x in order:
        need[x] = (total + 1) // 2 if p[x] == query.tie_winner else total // 2 + 1
    return _Ballots(p, votes, ctx, flippable, price, need, weights)


def _require_per_flip(query):
    if not query.scheme.per_flip:
        raise ValueError(f"{query.scheme.name} is not priced per flip; use the oracle")


def _greedy_flips(profile, query, ballots):
    """Cheapest opponents per issue; ``None`` if some issue cannot be won."""
    flips = [[] for _ in range(profile.n)]
    cost = 0
    for x in range(profile.m):
        good = sum(1 for i in range(profile.n) if ballots.votes[i][x] == ballots.p[x])
        deficit = ballots.need[x] - good
        if deficit <= 0:
            continue
        opponents = sorted(
            (ballots.price[i][x], i) for i in range(profile.n)
            if ballots.votes[i][x] != ballots.p[x] and ballots.flippable[i][x]
        )
        if len(opponents) < deficit:
            return None, None
        for price, i in opponents[:deficit]:
            flips[i].append(ballots.flip(i, x))
            cost += price
    return flips, cost


def _unweighted(profile):
    return all(v.weight == 1 for v in profile.voters)


def solve_sm_greedy(profile: Profile, query: BriberyQuery) -> BriberySolution:
    _require_per_flip(query)
    if not _unweighted(profile):
        raise ValueError("greedy SM bribery needs unit weights")
    ballots = _ballots(profile, query)
    flips, cost = _greedy_flips(profile, query, ballots)
    if flips is None:
        return infeasible("greedy", reason="too few flippable opponents")
    return finish(profile, query, flips, cost, "greedy")


def solve_sm_weighted_dp(profile: Profile, query: BriberyQuery) -> BriberySolution:
    """Weighted SM under C_flip or C_level with unit cost factors.

    Per issue, the opponents left unbribed must weigh at most the
    threshold bound; keeping the costliest such set is a knapsack over
    the (small, integral) flip prices.
    """
    if query.scheme not in (CostScheme.FLIP, CostScheme.LEVEL):
        raise ValueError("the SM knapsack needs C_flip or C_level")
    if any(v.q != 1 for v in profile.voters):
        raise ValueError("the SM knapsack needs every cost factor q = 1")
    ballots = _ballots(profile, query)
    total = sum(ballots.weights)
    flips = [[] for _ in range(profile.n)]
    cost = 0
    for x in range(profile.m):
        bound = total // 2 if ballots.p[x] == query.tie_winner else (total + 1) // 2 - 1
        bad = [i for i in range(profile.n) if ballots.votes[i][x] != ballots.p[x]]
        locked = [i for i in bad if not ballots.flippable[i][x]]
        free = [i for i in bad if ballots.flippable[i][x]]
        capacity = bound - sum(ballots.weights[i] for i in locked)
        if capacity < 0:
            return infeasible("dp", reason=f"unflippable opposition wins issue {x}")
        kept, _ = kernels.knapsack_keep(
            [ballots.weights[i] for i in free], [ballots.price[i][x] for i in free], capacity)
        kept = {free[k] for k in kept}
        for i in free:
            if i not in kept:
                flips[i].append(ballots.flip(i, x))
                cost += ballots.price[i][x]
    return finish(profile, query, flips, cost, "dp")


# -- negative mode --------------------------------------------------------------


def _voting_for_p(ballots, i, flipped):
    return all((ballots.votes[i][x] == ballots.p[x]) != (x in flipped) for x in range(len(ballots.p)))


def build_sm_repair_network(profile: Profile, query: BriberyQuery, step1) -> FlowNetwork:
    """Network that moves every step-1 voter off ``p`` at least cost.

    ``step1[i]`` is the set of issues voter ``i`` was bribed on. Each such
    voter now at ``p`` sends one unit: either into a free issue (an issue
    with surplus good votes) or, via an exchange node, to an opponent who
    takes over the lost good vote. Opponents keep at least one mismatch.
    Arc labels: ``("free", i, x)`` and ``("swap", i, j, x)``.
    """
    ballots = _ballots(profile, query)
    m, n = profile.m, profile.n
    p = ballots.p
    after = [[(ballots.votes[i][x] == p[x]) != (x in step1[i]) for x in range(m)] for i in range(n)]
    offenders = [i for i in range(n) if step1[i] and all(after[i])]
    donors = [j for j in range(n) if not all(after[j])]
    good = [sum(after[i][x] for i in range(n)) for x in range(m)]

    def unflip_cost(i, x):
        # undoing a step-1 bribe refunds it; a fresh flip costs extra
        return -ballots.price[i][x] if x in step1[i] else ballots.price[i][x]

    def can_leave(i, x):
        return x in step1[i] or ballots.flippable[i][x]

    net = FlowNetwork()
    pnode = {}
    for i in offenders:
        pnode[i] = net.add_node(("P", i))
        net.add_arc(net.source, pnode[i], 1)
    for x in range(m):
        surplus = good[x] - ballots.need[x]
        if surplus > 0:
            f = net.add_node(("F", x))
            net.add_arc(f, net.sink, surplus)
            for i in offenders:
                if can_leave(i, x):
                    net.add_arc(pnode[i], f, 1, unflip_cost(i, x), ("free", i, x))
    for j in donors:
        d = sum(1 for x in range(m) if not after[j][x])
        dnode = net.add_node(("D", j))
        net.add_arc(dnode, net.sink, d - 1)
        for x in range(m):
            if after[j][x] or not ballots.flippable[j][x]:
                continue
            e = net.add_node(("E", j, x))
            net.add_arc(e, dnode, 1)
            for i in offenders:
                if can_leave(i, x):
                    net.add_arc(pnode[i], e, 1, ballots.price[j][x] + unflip_cost(i, x), ("swap", i, j, x))
    return net


def _repair(profile, query, ballots, step1):
    net = build_sm_repair_network(profile, query, step1)
    offenders = sum(1 for label in net.labels if isinstance(label, tuple) and label[0] == "P")
    result = solve_min_cost_max_flow(net)
    if result.value < offenders:
        return None
    toggled = [set(s) for s in step1]
    for e, label in enumerate(net.arc_labels):
        if not label or not result.flows[e]:
            continue
        if label[0] == "free":
            _, i, x = label
            toggled[i] ^= {x}
        elif label[0] == "swap":
            _, i, j, x = label
            toggled[i] ^= {x}
            toggled[j] ^= {x}
    return toggled


def build_sm_negative_network(profile: Profile, query: BriberyQuery):
    """Single flow problem for negative SM bribery from the sincere ballots.

    Issue nodes balance good votes: a surplus issue may lend up to its
    slack, a deficit issue must receive its shortfall. A voter with ``d``
    mismatches can fix at most ``d - 1`` of them, one more for each issue
    it is paid to abandon (at most one), so no bribed voter lands on ``p``.
    Returns ``(net, required_flow)``; labels ``("fix", i, x)`` and
    ``("break", i, x)``.
    """
    ballots = _ballots(profile, query)
    m, n = profile.m, profile.n
    p = ballots.p
    match = [[ballots.votes[i][x] == p[x] for x in range(m)] for i in range(n)]
    good = [sum(match[i][x] for i in range(n)) for x in range(m)]
    net = FlowNetwork()
    issue = [net.add_node(("X", x)) for x in range(m)]
    required = 0
    for x in range(m):
        gap = ballots.need[x] - good[x]
        if gap > 0:
            net.add_arc(issue[x], net.sink, gap)
            required += gap
        elif gap < 0:
            net.add_arc(net.source, issue[x], -gap)
    for i in range(n):
        d = m - sum(match[i])
        if d == 0:
            continue
        v = net.add_node(("v", i))
        if d > 1:
            net.add_arc(net.source, v, d - 1)
        for x in range(m):
            if not match[i][x] and ballots.flippable[i][x]:
                net.add_arc(v, issue[x], 1, ballots.price[i][x], ("fix", i, x))
        breakers = [x for x in range(m) if match[i][x] and ballots.flippable[i][x]]
        if breakers:
            b = net.add_node(("b", i))
            net.add_arc(b, v, 1)
            for x in breakers:
                net.add_arc(issue[x], b, 1, ballots.price[i][x], ("break", i, x))
    return net, required


def _exact_negative(profile, query, ballots):
    net, required = build_sm_negative_network(profile, query)
    result = solve_min_cost_max_flow(net)
    if result.value < required:
        return None
    flips = [[] for _ in range(profile.n)]
    for e, label in enumerate(net.arc_labels):
        if label and result.flows[e]:
            kind, i, x = label
            flips[i].append(ballots.flip(i, x, towards_p=kind == "fix"))
    return flips


def solve_sm_negative(profile: Profile, query: BriberyQuery, *, repair: str = "exact") -> BriberySolution:
    """Negative SM bribery: greedy first, then repair voters bribed onto ``p``.

    ``repair="network"`` patches the greedy solution with
    :func:`build_sm_repair_network`; ``repair="exact"`` (the default)
    re-solves with :func:`build_sm_negative_network`, which also covers
    repairs that need a chain of exchanges.
    """
    _require_per_flip(query)
    if not _unweighted(profile):
        raise ValueError("negative SM repair needs unit weights")
    ballots = _ballots(profile, query)
    flips, cost = _greedy_flips(profile, query, ballots)
    if flips is None:
        return infeasible("greedy+repair", reason="too few flippable opponents")
    step1 = [{f.issue for f in fs} for fs in flips]
    if not any(step1[i] and _voting_for_p(ballots, i, step1[i]) for i in range(profile.n)):
        return finish(profile, query, flips, cost, "greedy")
    if repair == "network":
        toggled = _repair(profile, query, ballots, step1)
        if toggled is None:
            return infeasible("greedy+repair", reason="repair flow incomplete")
        flips = [
            [ballots.flip(i, x, towards_p=ballots.votes[i][x] != ballots.p[x]) for x in sorted(issues)]
            for i, issues in enumerate(toggled)
        ]
    elif repair == "exact":
        flips = _exact_negative(profile, query, ballots)
        if flips is None:
            return infeasible("greedy+repair", reason="no negative-compatible bribery")
    else:
        raise ValueError(f"unknown repair {repair!r}")
    cost = sum(ballots.price[i][f.issue] for i, fs in enumerate(flips) for f in fs)
    return finish(profile, query, flips, cost, "greedy+repair")
