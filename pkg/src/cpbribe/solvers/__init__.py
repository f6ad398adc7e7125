"""Exact bribery solvers and the dispatcher that picks one."""

from __future__ import annotations

from cpbribe import cpnet
from cpbribe.bribery import (
    BriberyQuery, BriberySolution, Method, SoundnessError, apply_bribery, verify,
)
from cpbribe.costs import CostScheme
from cpbribe.cpnet import Profile
from cpbribe.oracle import OracleLimitError, OracleLimits, oracle_solve
from cpbribe.solvers.plurality import build_op_network, solve_ok_star, solve_op_flow
from cpbribe.solvers.sequential import (
    build_sm_negative_network, build_sm_repair_network, solve_sm_greedy,
    solve_sm_negative, solve_sm_weighted_dp,
)
from cpbribe.solvers.veto import build_ov_network, solve_ov_flow

__all__ = [
    "BriberyQuery", "BriberySolution", "Method", "OracleLimitError", "OracleLimits",
    "SoundnessError", "apply_bribery", "build_op_network", "build_ov_network",
    "build_sm_negative_network", "build_sm_repair_network", "route", "solve",
    "solve_ok_star", "solve_op_flow", "solve_ov_flow", "solve_sm_greedy",
    "solve_sm_negative", "solve_sm_weighted_dp", "verify",
]


def _weighted(profile):
    return any(v.weight != 1 for v in profile.voters)


def route(profile: Profile, query: BriberyQuery) -> Method:
    """The method AUTO would pick, or the forced one if it applies."""
    rule, scheme = query.rule, query.scheme
    weighted = _weighted(profile)
    applicable = {Method.ORACLE}
    if not weighted and rule.name in ("OP", "OKSTAR", "OV"):
        applicable.add(Method.FLOW)
    if rule.name == "SM":
        if not weighted and scheme.per_flip:
            applicable.add(Method.GREEDY)
        if (not query.negative and scheme in (CostScheme.FLIP, CostScheme.LEVEL)
                and all(v.q == 1 for v in profile.voters)):
            applicable.add(Method.DP)
    if query.method is not Method.AUTO:
        if query.method not in applicable:
            raise ValueError(f"method {query.method.value} does not apply to this instance")
        return query.method
    for method in (Method.FLOW, Method.GREEDY, Method.DP):
        if method in applicable:
            return method
    return Method.ORACLE


def solve(profile: Profile, query: BriberyQuery, limits: OracleLimits = OracleLimits()) -> BriberySolution:
    """Minimum-cost bribery making ``query.preferred`` a co-winner.

    The polynomial algorithms cover unweighted OP, OK* and OV under every
    scheme, unweighted SM under per-flip schemes (negative included) and
    weighted SM under C_flip/C_level with unit cost factors. Everything else
    goes to the exhaustive oracle, which raises :class:`OracleLimitError`
    past its size guard. Every returned solution has been re-verified.
    """
    if query.rule.name in ("SM", "OKSTAR"):
        cpnet.require_order(profile)
    if len(query.preferred) != profile.m or any(b not in (0, 1) for b in query.preferred):
        raise ValueError("preferred candidate does not match the issues")
    method = route(profile, query)
    rule = query.rule.name
    if method is Method.FLOW:
        if rule == "OV":
            return solve_ov_flow(profile, query)
        if rule == "OKSTAR":
            return solve_ok_star(profile, query)
        return solve_op_flow(profile, query)
    if method is Method.GREEDY:
        if query.negative:
            return solve_sm_negative(profile, query)
        return solve_sm_greedy(profile, query)
    if method is Method.DP:
        return solve_sm_weighted_dp(profile, query)
    return oracle_solve(profile, query, limits)
