"""Bribery in elections over acyclic binary CP-nets."""

from cpbribe.costs import BriberyAction, CostScheme, StatementFlip
from cpbribe.cpnet import CPNet, Issue, Profile, Rule, Voter, co_winners, validate
from cpbribe.solvers import BriberyQuery, BriberySolution, Method, apply_bribery, solve

__version__ = "0.1.0"

__all__ = [
    "BriberyAction", "BriberyQuery", "BriberySolution", "CPNet", "CostScheme", "Issue",
    "Method", "Profile", "Rule", "StatementFlip", "Voter", "apply_bribery", "co_winners",
    "solve", "validate",
]
