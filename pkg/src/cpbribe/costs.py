"""Pricing of cp-statement flips.

A voter is bribed by reversing at most one cp-statement per issue. Making
candidate ``c`` the new top means flipping, for every issue where ``c``
takes the dispreferred value in its own context, the statement of that
context; the flipped positions are exactly the 1-bits of ``c``'s
linearization vector. Making ``c`` the new veto flips the 0-bits instead.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from cpbribe import cpnet
from cpbribe.cpnet import CPNet, Voter
from cpbribe.subsets import k_smallest_subsets

INFEASIBLE = None


class BriberyAction(enum.Enum):
    IV = "iv"
    DV = "dv"
    IV_DV = "ivdv"

    def permits(self, net: CPNet, issue: int) -> bool:
        if self is BriberyAction.IV_DV:
            return True
        independent = net.is_independent(issue)
        return independent if self is BriberyAction.IV else not independent


class CostScheme(enum.Enum):
    EQUAL = "equal"
    FLIP = "flip"
    LEVEL = "level"
    ANY = "any"
    DIST = "dist"

    @property
    def per_flip(self) -> bool:
        return self in (CostScheme.FLIP, CostScheme.LEVEL, CostScheme.ANY)


class Mode(enum.Enum):
    TOP = "top"
    VETO = "veto"


@dataclass(frozen=True, order=True)
class StatementFlip:
    voter: int
    issue: int
    ctx: tuple
    new_pref: int


def levels(net: CPNet) -> list:
    out = [0] * net.m
    for j in net.order:
        par = net.parents[j]
        out[j] = 1 + max((out[p] for p in par), default=0)
    return out


def level(net: CPNet, issue: int) -> int:
    return levels(net)[issue]


def depth(net: CPNet) -> int:
    """Number of levels ``k`` of the net."""
    return max(levels(net), default=0)


def flip_cost(voter: Voter, issue: int, scheme: CostScheme) -> int:
    """Price of one statement flip on ``issue`` before the voter factor ``q``."""
    if scheme is CostScheme.FLIP:
        return 1
    if scheme is CostScheme.LEVEL:
        lv = levels(voter.net)
        return max(lv) + 1 - lv[issue]
    if scheme is CostScheme.ANY:
        if voter.flip_costs is None:
            raise ValueError(f"voter {voter.name!r} has no flip costs for C_any")
        return voter.flip_costs[issue]
    raise ValueError(f"{scheme.name} is priced per target, not per flip")


def flip_prices(voter: Voter, scheme: CostScheme) -> list:
    """``flip_cost`` for every issue, computed once."""
    if scheme is CostScheme.LEVEL:
        lv = levels(voter.net)
        k = max(lv, default=0)
        return [k + 1 - x for x in lv]
    return [flip_cost(voter, j, scheme) for j in range(voter.net.m)]


def flips_to_top(voter: Voter, c, voter_index: int = 0) -> list:
    net = voter.net
    out = []
    for j in net.order:
        ctx = net.context(j, c)
        if net.cpt[j][ctx] != c[j]:
            out.append(StatementFlip(voter_index, j, ctx, c[j]))
    return out


def flips_to_veto(voter: Voter, c, voter_index: int = 0) -> list:
    net = voter.net
    out = []
    for j in net.order:
        ctx = net.context(j, c)
        if net.cpt[j][ctx] == c[j]:
            out.append(StatementFlip(voter_index, j, ctx, 1 - c[j]))
    return out


def permitted(voter: Voter, flips, action: BriberyAction) -> bool:
    return all(action.permits(voter.net, f.issue) for f in flips)


def _cost_of(voter, flips, scheme, dist_value):
    if scheme is CostScheme.EQUAL:
        base = 1 if flips else 0
    elif scheme is CostScheme.DIST:
        base = dist_value
    else:
        prices = flip_prices(voter, scheme)
        base = sum(prices[f.issue] for f in flips)
    return base * voter.q


def cost_to_top(voter: Voter, c, scheme: CostScheme, action: BriberyAction) -> Optional[int]:
    flips = flips_to_top(voter, c)
    if not permitted(voter, flips, action):
        return INFEASIBLE
    dist = cpnet.rank(voter.net, c) if scheme is CostScheme.DIST else 0
    return _cost_of(voter, flips, scheme, dist)


def cost_to_veto(voter: Voter, c, scheme: CostScheme, action: BriberyAction) -> Optional[int]:
    flips = flips_to_veto(voter, c)
    if not permitted(voter, flips, action):
        return INFEASIBLE
    dist = 0
    if scheme is CostScheme.DIST:
        dist = (1 << voter.net.m) - 1 - cpnet.rank(voter.net, c)
    return _cost_of(voter, flips, scheme, dist)


def _open_positions(voter, action, truncate):
    net = voter.net
    return [pos for pos, j in enumerate(net.order[: net.m - truncate]) if action.permits(net, j)]


def _deposit(i, positions, m):
    """Spread the bits of ``i`` over ``positions`` (LSB onto the last one)."""
    r = 0
    for b, pos in enumerate(reversed(positions)):
        if i >> b & 1:
            r |= 1 << (m - 1 - pos)
    return r


def cheapest_targets(voter: Voter, K: int, scheme: CostScheme, action: BriberyAction,
                     mode: Mode = Mode.TOP, truncate: int = 0) -> list:
    """Up to ``K`` reachable targets ``(candidate, cost)``, ascending by cost.

    With ``truncate=j`` only the first ``m - j`` positions of the voter's
    order may be flipped (the truncated space of OK*).
    """
    if K < 1:
        return []
    net = voter.net
    m = net.m
    if mode is Mode.VETO and truncate:
        raise ValueError("veto targets are never truncated")
    positions = _open_positions(voter, action, truncate)
    full = (1 << m) - 1

    def vector(flip_mask):
        return flip_mask if mode is Mode.TOP else full ^ flip_mask

    if scheme.per_flip:
        prices = flip_prices(voter, scheme)
        sizes = [prices[net.order[pos]] for pos in positions]
        out = []
        for idx, size in k_smallest_subsets(sizes, K, allow_zero=True):
            mask = 0
            for i in idx:
                mask |= 1 << (m - 1 - positions[i])
            out.append((cpnet.unrank(net, vector(mask)), size * voter.q))
        return out

    count = min(K, 1 << len(positions))
    out = []
    for i in range(count):
        mask = _deposit(i, positions, m)
        if scheme is CostScheme.DIST:
            cost = mask * voter.q
        else:
            cost = (1 if i else 0) * voter.q
        out.append((cpnet.unrank(net, vector(mask)), cost))
    return out


def price_flips(voter: Voter, flips, scheme: CostScheme, mode: Mode = Mode.TOP) -> int:
    """Recompute what a set of flips costs, from the bribed net itself.

    DIST is read off the original linearization of the new top (or the
    new veto), so this is independent of how the flips were chosen.
    """
    if scheme is not CostScheme.DIST:
        return _cost_of(voter, flips, scheme, 0)
    bribed = apply_flips(voter.net, flips)
    if mode is Mode.TOP:
        dist = cpnet.rank(voter.net, cpnet.top_candidate(bribed))
    else:
        dist = (1 << voter.net.m) - 1 - cpnet.rank(voter.net, cpnet.veto_candidate(bribed))
    return dist * voter.q


def apply_flips(net: CPNet, flips) -> CPNet:
    """Toggle the statement named by each flip (toggling is an involution)."""
    for f in flips:
        net = net.flipped(f.issue, f.ctx)
    return net
