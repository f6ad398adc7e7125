"""Instance generators for the hardness reductions, plus brute-force checkers.

Values are encoded with index 0 for the plain value (x, y, z) and index 1
for the barred one; the preferred candidate is always the all-zero one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations, product

from cpbribe.bribery import BriberyQuery
from cpbribe.costs import BriberyAction, CostScheme, flip_prices
from cpbribe.cpnet import OP, OV, SM, CPNet, Issue, Profile, Voter

PARTITION_MAX = 20
LOBBYING_MAX = 4


class Variant(enum.Enum):
    OP_POS = "op"
    OV_DV_POS = "ov"
    OV_NEG = "ov-neg"
    SM_NEG = "sm-neg"


SUPPORTED_ACTIONS = {
    Variant.OP_POS: (BriberyAction.DV, BriberyAction.IV),
    Variant.OV_DV_POS: (BriberyAction.DV,),
    Variant.OV_NEG: (BriberyAction.IV, BriberyAction.IV_DV),
    Variant.SM_NEG: (BriberyAction.DV, BriberyAction.IV, BriberyAction.IV_DV),
}


@dataclass(frozen=True)
class PartitionInstance:
    items: tuple

    def __post_init__(self):
        if any(int(a) != a or a < 1 for a in self.items):
            raise ValueError("partition items must be positive integers")
        if sum(self.items) % 2:
            raise ValueError(f"items sum to {sum(self.items)}, which is odd")

    @property
    def half(self) -> int:
        return sum(self.items) // 2


@dataclass(frozen=True)
class LobbyingInstance:
    """``E`` is a tuple of rows; each row is one agent's 0/1 inclinations."""

    E: tuple
    k: int
    x: tuple
    negative: bool = False

    def __post_init__(self):
        width = len(self.x)
        if any(len(row) != width for row in self.E):
            raise ValueError("every row of E needs len(x) entries")
        if any(b not in (0, 1) for row in self.E for b in row) or any(b not in (0, 1) for b in self.x):
            raise ValueError("E and x must be 0/1")
        if not 0 <= self.k <= len(self.E):
            raise ValueError(f"k={self.k} outside 0..{len(self.E)}")

    @property
    def n(self) -> int:
        return len(self.E)


def nol_from_ol(ol: LobbyingInstance) -> LobbyingInstance:
    """Append an identity block to ``E`` and as many zeros to ``x``."""
    if ol.negative:
        raise ValueError("input must be a (positive) optimal lobbying instance")
    n = ol.n
    E = tuple(tuple(row) + tuple(int(i == j) for j in range(n)) for i, row in enumerate(ol.E))
    return LobbyingInstance(E, ol.k, tuple(ol.x) + (0,) * n, True)


def majority(E, column: int) -> int:
    """Column outcome: 1 on a strict majority of ones, otherwise 0."""
    ones = sum(row[column] for row in E)
    return int(2 * ones > len(E))


def _lobby_wins(E, x):
    return all(majority(E, j) == x[j] for j in range(len(x)))


def solve_lobbying_bruteforce(inst: LobbyingInstance) -> bool:
    """Can at most ``k`` rows be rewritten so every column's majority is ``x``?

    Negative instances forbid rewriting a row into ``x`` itself.
    """
    n, m = inst.n, len(inst.x)
    if n > LOBBYING_MAX or m > 2 * LOBBYING_MAX:
        raise ValueError(f"lobbying brute force limited to {LOBBYING_MAX} rows")
    rows = [r for r in product((0, 1), repeat=m) if not (inst.negative and r == tuple(inst.x))]
    for size in range(inst.k + 1):
        for chosen in combinations(range(n), size):
            for edits in product(rows, repeat=size):
                E = list(inst.E)
                for i, row in zip(chosen, edits):
                    E[i] = row
                if _lobby_wins(E, inst.x):
                    return True
    return False


def solve_partition_bruteforce(items) -> bool:
    items = list(items)
    if len(items) > PARTITION_MAX:
        raise ValueError(f"partition brute force limited to {PARTITION_MAX} items")
    total = sum(items)
    if total % 2:
        return False
    reachable = {0}
    for a in items:
        reachable |= {s + a for s in reachable}
    return total // 2 in reachable


# -- weighted bribery instances -------------------------------------------------


def _independent(prefs, m):
    return CPNet(tuple(() for _ in range(m)), tuple({(): v} for v in prefs), tuple(range(m)))


def _x_rooted(x_pref, children):
    """Net over X plus children that each depend on X only.

    ``children`` maps each child to its preferred value under ``x`` and
    under ``x̄``.
    """
    m = 1 + len(children)
    parents = ((),) + tuple((0,) for _ in children)
    cpt = ({(): x_pref},) + tuple({(0,): a, (1,): b} for a, b in children)
    return CPNet(parents, cpt, tuple(range(m)))


def _voter(name, net, weight, m):
    return Voter(name, net, weight, 1, {j: 1 for j in range(m)})


def _budget(profile, scheme):
    total = 0
    for v in profile.voters:
        if scheme.per_flip:
            total += v.q * sum(flip_prices(v, scheme))
        elif scheme is CostScheme.DIST:
            total += v.q * ((1 << profile.m) - 1)
        else:
            total += v.q
    return total


def weighted_bribery_from_partition(items, variant: Variant, action=None,
                                    scheme: CostScheme = CostScheme.FLIP):
    """Weighted bribery instance that is solvable iff ``items`` splits evenly.

    Returns ``(profile, query)``. ``action`` defaults to the first entry of
    ``SUPPORTED_ACTIONS[variant]``. The budget covers every conceivable
    bribe, so only feasibility matters.
    """
    inst = PartitionInstance(tuple(items))
    variant = Variant(variant)
    action = SUPPORTED_ACTIONS[variant][0] if action is None else BriberyAction(action)
    if action not in SUPPORTED_ACTIONS[variant]:
        raise ValueError(f"{variant.name} is defined for {[a.name for a in SUPPORTED_ACTIONS[variant]]}")
    psi = inst.half
    xy = (Issue(0, "X", ("x", "~x")), Issue(1, "Y", ("y", "~y")))
    voters = []
    if variant is Variant.OP_POS:
        rule, negative, issues = OP, False, xy
        voters.append(_voter("v1", _independent((0, 0), 2), psi, 2))
        element = _x_rooted(1, [(1, 0)])  # top ~x y; IV moves it to x ~y, DV to ~x ~y
    elif variant is Variant.OV_DV_POS:
        rule, negative, issues = OV, False, xy
        voters.append(_voter("v1", _independent((1, 1), 2), psi, 2))  # vetoes x y
        voters.append(_voter("v2", _independent((1, 0), 2), psi, 2))  # vetoes x ~y
        element = _x_rooted(0, [(0, 1)])  # top x y, vetoes ~x y
    elif variant is Variant.OV_NEG:
        rule, negative, issues = OV, True, xy
        voters.append(_voter("v1", _independent((1, 1), 2), psi, 2))  # vetoes x y
        voters.append(_voter("v2", _independent((0, 0), 2), psi, 2))  # vetoes ~x ~y
        element = _x_rooted(0, [(0, 1)])  # vetoes ~x y; IV moves it to x ~y
    else:
        rule, negative = SM, True
        if action is BriberyAction.DV:
            issues = xy + (Issue(2, "Z", ("z", "~z")),)
            voters.append(_voter("v1", _independent((0, 0, 0), 3), 1, 3))
            element = _x_rooted(0, [(1, 1), (1, 1)])  # top x ~y ~z
        else:
            issues = (Issue(0, "Y", ("y", "~y")), Issue(1, "Z", ("z", "~z")))
            voters.append(_voter("v1", _independent((0, 0), 2), 1, 2))
            element = _independent((1, 1), 2)
    m = len(issues)
    for i, a in enumerate(inst.items):
        voters.append(_voter(f"a{i + 1}", element, a, m))
    order = tuple(range(m))
    profile = Profile(tuple(issues), tuple(voters), order)
    query = BriberyQuery(rule, action, scheme, _budget(profile, scheme), (0,) * m, negative)
    return profile, query
