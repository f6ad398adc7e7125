"""Exhaustive bribery solver for small instances.

Every voter gets a finite list of options (a post-bribery ballot, its price,
and the flips that realize it). The Cartesian product of the option lists
is scanned in chunks with numpy; the first cheapest combination in
mixed-radix order wins, which is the lexicographically smallest option
vector among the optimal ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import prod

import numpy as np

from cpbribe import cpnet
from cpbribe.bribery import (
    BriberyQuery, BriberySolution, finish, infeasible, pricing_voter, votes_for_p,
)
from cpbribe.costs import (
    CostScheme, Mode, StatementFlip, apply_flips, cost_to_top, cost_to_veto,
    flips_to_top, flips_to_veto, price_flips,
)
from cpbribe.cpnet import Profile

CHUNK = 1 << 15


class OracleLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleLimits:
    max_combinations: int = 10 ** 7
    max_m: int = 6
    max_n: int = 8

    def __post_init__(self):
        if min(self.max_combinations, self.max_m, self.max_n) < 1:
            raise ValueError("oracle limits must be positive")


@dataclass(frozen=True)
class Option:
    cost: int
    flips: tuple
    column: tuple  # indices of the score columns this ballot feeds


def _all_candidates(m):
    return list(product((0, 1), repeat=m))


def _index(c):
    r = 0
    for b in c:
        r = (r << 1) | b
    return r


def _top_options(profile, query, i, kept):
    """Reachable tops grouped by (truncated) key, cheapest first per key."""
    voter = pricing_voter(profile, query.rule, profile.voters[i])
    best = {}
    for c in _all_candidates(profile.m):
        cost = cost_to_top(voter, c, query.scheme, query.action)
        if cost is None:
            continue
        key = cpnet.project(c, kept)
        # on price ties the ballot needing fewer flips wins, so the
        # unbribed top always represents its own package
        rank = (cost, cpnet.rank(voter.net, c).bit_count())
        if key not in best or rank < best[key][0]:
            best[key] = (rank, c)
    out = []
    for key in sorted(best):
        (cost, _), c = best[key]
        out.append(Option(cost, tuple(flips_to_top(voter, c, i)), (_index(key),)))
    return out


def _veto_options(profile, query, i):
    voter = profile.voters[i]
    out = []
    for c in _all_candidates(profile.m):
        cost = cost_to_veto(voter, c, query.scheme, query.action)
        if cost is not None:
            out.append(Option(cost, tuple(flips_to_veto(voter, c, i)), (_index(c),)))
    return out


def _sm_options(profile, query, i):
    """Subsets of the flippable statements read in ``p``'s context."""
    voter = profile.voters[i]
    net = voter.net
    p = query.preferred
    statements = [
        StatementFlip(i, j, net.context(j, p), 1 - net.preferred(j, p))
        for j in range(profile.m) if query.action.permits(net, j)
    ]
    out = []
    for mask in range(1 << len(statements)):
        chosen = tuple(s for b, s in enumerate(statements) if mask >> b & 1)
        bribed = apply_flips(net, chosen)
        good = tuple(j for j in range(profile.m) if bribed.preferred(j, p) == p[j])
        cost = price_flips(voter, chosen, query.scheme, Mode.TOP)
        out.append(Option(cost, chosen, good))
    return out


def _ok_options(profile, query, i):
    """At most one flipped statement per issue, in any context."""
    if query.scheme is CostScheme.DIST:
        raise ValueError("C_dist is undefined for OK with general k")
    voter = profile.voters[i]
    net = voter.net
    per_issue = []
    for j in range(profile.m):
        choices = [None]
        if query.action.permits(net, j):
            choices += [StatementFlip(i, j, ctx, 1 - pref) for ctx, pref in sorted(net.cpt[j].items())]
        per_issue.append(choices)
    best = {}
    for combo in product(*per_issue):
        chosen = tuple(f for f in combo if f is not None)
        approved = tuple(sorted(_index(c) for c in cpnet.top_k(apply_flips(net, chosen), query.rule.k)))
        cost = price_flips(voter, chosen, query.scheme, Mode.TOP)
        if approved not in best or cost < best[approved].cost:
            best[approved] = Option(cost, chosen, approved)
    return [best[key] for key in sorted(best)]


def voter_options(profile: Profile, query: BriberyQuery, i: int) -> list:
    """Option list of voter ``i`` after the negative-mode filter."""
    rule = query.rule
    if rule.name == "OP":
        opts = _top_options(profile, query, i, tuple(range(profile.m)))
    elif rule.name == "OKSTAR":
        opts = _top_options(profile, query, i, cpnet.okstar_issues(profile, rule))
    elif rule.name == "OV":
        opts = _veto_options(profile, query, i)
    elif rule.name == "SM":
        opts = _sm_options(profile, query, i)
    else:
        opts = _ok_options(profile, query, i)
    if query.negative:
        net = profile.voters[i].net
        p = query.preferred
        before = votes_for_p(profile, rule, net, p)
        strict = rule.name in ("OP", "OKSTAR", "SM")
        kept_opts = []
        for opt in opts:
            if opt.flips:
                after = votes_for_p(profile, rule, apply_flips(net, opt.flips), p)
                if after and (strict or not before):
                    continue
            kept_opts.append(opt)
        opts = kept_opts
    return opts


def _width(profile, rule):
    if rule.name == "SM":
        return profile.m
    if rule.name == "OKSTAR":
        return 1 << len(cpnet.okstar_issues(profile, rule))
    return 1 << profile.m


def _contribution_matrix(profile, query, i, opts):
    rows = np.zeros((len(opts), _width(profile, query.rule)), dtype=np.int64)
    for r, opt in enumerate(opts):
        rows[r, list(opt.column)] = profile.voters[i].weight
    return rows


def _winning(profile, query, scores):
    """Boolean mask over chunk rows: is ``p`` a co-winner?"""
    rule = query.rule
    p = query.preferred
    if rule.name == "SM":
        total = sum(v.weight for v in profile.voters)
        need = np.array([
            (total + 1) // 2 if p[j] == query.tie_winner else total // 2 + 1
            for j in range(profile.m)
        ])
        return np.all(scores >= need, axis=1)
    if rule.name == "OKSTAR":
        col = _index(cpnet.project(p, cpnet.okstar_issues(profile, rule)))
    else:
        col = _index(p)
    if rule.name == "OV":
        return scores[:, col] == scores.min(axis=1)
    return scores[:, col] == scores.max(axis=1)


def oracle_solve(profile: Profile, query: BriberyQuery, limits: OracleLimits = OracleLimits()) -> BriberySolution:
    if profile.m > limits.max_m:
        raise OracleLimitError(f"m={profile.m} exceeds oracle limit {limits.max_m}")
    if profile.n > limits.max_n:
        raise OracleLimitError(f"n={profile.n} exceeds oracle limit {limits.max_n}")
    options = [voter_options(profile, query, i) for i in range(profile.n)]
    if any(not opts for opts in options):
        return infeasible("oracle", reason="a voter has no admissible option")
    total = prod(len(o) for o in options)
    if total > limits.max_combinations:
        raise OracleLimitError(f"{total} option combinations exceed oracle limit {limits.max_combinations}")

    bases = np.array([len(o) for o in options], dtype=np.int64)
    strides = np.ones(profile.n, dtype=np.int64)
    for i in range(profile.n - 2, -1, -1):
        strides[i] = strides[i + 1] * bases[i + 1]
    contrib = [_contribution_matrix(profile, query, i, o) for i, o in enumerate(options)]
    prices = [np.array([opt.cost for opt in o], dtype=np.int64) for o in options]
    width = _width(profile, query.rule)

    best_cost, best_index = None, None
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        scores = np.zeros((len(idx), width), dtype=np.int64)
        cost = np.zeros(len(idx), dtype=np.int64)
        for i in range(profile.n):
            digit = (idx // strides[i]) % bases[i]
            scores += contrib[i][digit]
            cost += prices[i][digit]
        ok = _winning(profile, query, scores)
        if not ok.any():
            continue
        cost = np.where(ok, cost, np.iinfo(np.int64).max)
        at = int(np.argmin(cost))
        if best_cost is None or cost[at] < best_cost:
            best_cost, best_index = int(cost[at]), int(idx[at])
    if best_cost is None:
        return infeasible("oracle", combinations=total)

    flips = []
    for i in range(profile.n):
        digit = (best_index // int(strides[i])) % int(bases[i])
        flips.append(options[i][digit].flips)
    return finish(profile, query, flips, best_cost, "oracle", combinations=total)
