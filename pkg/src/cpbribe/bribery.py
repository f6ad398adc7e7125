"""Bribery queries, solutions, and the soundness check every solver runs."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from cpbribe import cpnet
from cpbribe.costs import BriberyAction, CostScheme, Mode, StatementFlip, apply_flips, price_flips
from cpbribe.cpnet import Profile, Rule, Voter, Winners


class Method(enum.Enum):
    AUTO = "auto"
    FLOW = "flow"
    GREEDY = "greedy"
    DP = "dp"
    ORACLE = "oracle"


class SoundnessError(AssertionError):
    """A solver produced a solution that fails re-verification."""


@dataclass(frozen=True)
class BriberyQuery:
    rule: Rule
    action: BriberyAction
    scheme: CostScheme
    budget: int
    preferred: tuple
    negative: bool = False
    method: Method = Method.AUTO
    tie_winner: int = cpnet.TIE_WINNER

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        if self.tie_winner not in (0, 1):
            raise ValueError("tie_winner must be 0 or 1")


@dataclass(frozen=True)
class BriberySolution:
    """Optimal bribery, or the proof that none fits.

    ``cost`` is the optimum over all successful briberies (``None`` if no
    bribery makes ``p`` win at any price); ``feasible`` additionally
    requires ``cost <= budget``. ``flips[i]`` lists the statement flips
    paid to voter ``i``.
    """

    feasible: bool
    cost: Optional[int]
    flips: tuple = ()
    winners: Optional[Winners] = None
    method: str = ""
    details: dict = field(default_factory=dict, compare=False)

    @property
    def bribed(self) -> list:
        return [i for i, fs in enumerate(self.flips) if fs]


def infeasible(method: str, **details) -> BriberySolution:
    return BriberySolution(False, None, (), None, method, details)


def apply_bribery(profile: Profile, flips) -> Profile:
    """Profile with every flip applied.

    Accepts a solution, per-voter flip lists, or a flat sequence of
    :class:`StatementFlip` (grouped by their ``voter`` index).
    """
    if isinstance(flips, BriberySolution):
        flips = flips.flips
    if not flips:
        return profile
    if all(isinstance(f, StatementFlip) for f in flips):
        grouped = [[] for _ in profile.voters]
        for f in flips:
            grouped[f.voter].append(f)
        flips = grouped
    voters = []
    for i, voter in enumerate(profile.voters):
        own = flips[i] if i < len(flips) else ()
        voters.append(_replace_net(voter, apply_flips(voter.net, own)) if own else voter)
    return profile.replace_voters(voters)


def _replace_net(voter: Voter, net) -> Voter:
    return Voter(voter.name, net, voter.weight, voter.q, voter.flip_costs)


def pricing_voter(profile: Profile, rule: Rule, voter: Voter) -> Voter:
    """OK* prices every voter along the common order."""
    if rule.name == "OKSTAR":
        return _replace_net(voter, voter.net.with_order(profile.global_order))
    return voter


def pricing_mode(rule: Rule) -> Mode:
    return Mode.VETO if rule.name == "OV" else Mode.TOP


def votes_for_p(profile: Profile, rule: Rule, net, p) -> bool:
    """Whether a single ballot counts as a vote for ``p``.

    OP and SM: ``p`` is the top. OK*: the truncated top is ``p``'s
    package. OV and OK: ``p`` is approved.
    """
    if rule.name in ("OP", "SM"):
        return cpnet.top_candidate(net) == tuple(p)
    if rule.name == "OKSTAR":
        kept = cpnet.okstar_issues(profile, rule)
        return cpnet.project(cpnet.top_candidate(net), kept) == cpnet.project(p, kept)
    if rule.name == "OV":
        return cpnet.veto_candidate(net) != tuple(p)
    return tuple(p) in cpnet.top_k(net, rule.k)


def total_price(profile: Profile, query: BriberyQuery, flips) -> int:
    mode = pricing_mode(query.rule)
    total = 0
    for voter, own in zip(profile.voters, flips):
        if own:
            total += price_flips(pricing_voter(profile, query.rule, voter), own, query.scheme, mode)
    return total


def verify(profile: Profile, query: BriberyQuery, flips, cost: int) -> Winners:
    """Re-check a candidate solution from scratch; returns the new winners.

    Raises :class:`SoundnessError` on any failure: illegal or duplicate
    flips, ``p`` not a co-winner after bribery, a cost that does not
    reprice to ``cost``, or a negative-mode voter gaining a vote for ``p``.
    """
    flips = tuple(tuple(fs) for fs in flips)
    if len(flips) != profile.n:
        raise SoundnessError(f"{len(flips)} flip lists for {profile.n} voters")
    for i, (voter, own) in enumerate(zip(profile.voters, flips)):
        seen = set()
        for f in own:
            if f.voter != i:
                raise SoundnessError(f"flip {f} filed under voter {i}")
            if f.issue in seen:
                raise SoundnessError(f"voter {i} flips issue {f.issue} twice")
            seen.add(f.issue)
            if not query.action.permits(voter.net, f.issue):
                raise SoundnessError(f"flip {f} violates {query.action.name}")
            if voter.net.cpt[f.issue].get(f.ctx) is None or voter.net.cpt[f.issue][f.ctx] == f.new_pref:
                raise SoundnessError(f"flip {f} does not reverse an existing statement")
    bribed = apply_bribery(profile, flips)
    winners = cpnet.co_winners(bribed, query.rule, query.tie_winner)
    if tuple(query.preferred) not in winners:
        raise SoundnessError("preferred candidate is not a co-winner after bribery")
    repriced = total_price(profile, query, flips)
    if repriced != cost:
        raise SoundnessError(f"reported cost {cost}, flips reprice to {repriced}")
    if query.negative:
        p = query.preferred
        for i, own in enumerate(flips):
            if not own:
                continue
            before = votes_for_p(profile, query.rule, profile.voters[i].net, p)
            after = votes_for_p(profile, query.rule, bribed.voters[i].net, p)
            if after and (not before or query.rule.name in ("OP", "OKSTAR", "SM")):
                raise SoundnessError(f"negative mode: voter {i} was bribed into voting for p")
    return winners


def finish(profile: Profile, query: BriberyQuery, flips, cost: int, method: str, **details) -> BriberySolution:
    flips = tuple(tuple(sorted(fs, key=lambda f: f.issue)) for fs in flips)
    winners = verify(profile, query, flips, cost)
    return BriberySolution(cost <= query.budget, cost, flips, winners, method, details)
