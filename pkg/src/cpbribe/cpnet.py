"""Acyclic binary CP-nets, profiles, and winner determination.

Candidates are tuples of value indices over the global issue indices
(``c[j]`` is 0 or 1 for issue ``j``). A voter's linearization vector is
never stored; :func:`rank` computes it on demand from the candidate.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

Candidate = tuple  # tuple[int, ...]

COMPACTNESS_BOUND = 5
TIE_WINNER = 0


@dataclass(frozen=True)
class Issue:
    index: int
    name: str
    values: tuple = ("0", "1")


@dataclass(frozen=True)
class CPNet:
    """One voter's dependency graph, preference tables, and linearization.

    ``parents[j]`` lists the parents of issue ``j``; ``cpt[j]`` maps a
    context (tuple of parent value indices, aligned with ``parents[j]``) to
    the preferred value index of issue ``j``.
    """

    parents: tuple
    cpt: tuple
    order: tuple

    @property
    def m(self) -> int:
        return len(self.parents)

    def context(self, issue: int, candidate: Sequence[int]) -> tuple:
        return tuple(candidate[p] for p in self.parents[issue])

    def preferred(self, issue: int, candidate: Sequence[int]) -> int:
        return self.cpt[issue][self.context(issue, candidate)]

    def with_order(self, order: Sequence[int]) -> "CPNet":
        return dataclasses.replace(self, order=tuple(order))

    def flipped(self, issue: int, ctx: tuple) -> "CPNet":
        """Copy with the cp-statement of ``issue`` in context ``ctx`` reversed."""
        table = dict(self.cpt[issue])
        if ctx not in table:
            raise KeyError(f"issue {issue} has no context {ctx}")
        table[ctx] = 1 - table[ctx]
        cpt = list(self.cpt)
        cpt[issue] = table
        return dataclasses.replace(self, cpt=tuple(cpt))

    def is_independent(self, issue: int) -> bool:
        return not self.parents[issue]


@dataclass(frozen=True)
class Voter:
    name: str
    net: CPNet
    weight: int = 1
    q: int = 1
    flip_costs: Optional[Mapping[int, int]] = None


@dataclass(frozen=True)
class Profile:
    issues: tuple
    voters: tuple
    global_order: Optional[tuple] = None

    @property
    def m(self) -> int:
        return len(self.issues)

    @property
    def n(self) -> int:
        return len(self.voters)

    def replace_voters(self, voters) -> "Profile":
        return dataclasses.replace(self, voters=tuple(voters))

    def issue_index(self, name: str) -> int:
        for issue in self.issues:
            if issue.name == name:
                return issue.index
        raise KeyError(name)

    def label(self, candidate: Sequence[int], issues: Optional[Sequence[int]] = None) -> str:
        """Comma-joined value labels, e.g. ``"Italy,summer,hiking"``."""
        if issues is None:
            issues = range(len(candidate))
            return ",".join(self.issues[j].values[candidate[j]] for j in issues)
        return ",".join(self.issues[j].values[v] for j, v in zip(issues, candidate))

    def parse_candidate(self, text: str) -> Candidate:
        labels = [part.strip() for part in text.split(",")]
        if len(labels) != self.m:
            raise ValueError(f"candidate {text!r} needs {self.m} values")
        bits = []
        for issue, label in zip(self.issues, labels):
            if label not in issue.values:
                raise ValueError(f"{label!r} is not a value of issue {issue.name!r}")
            bits.append(issue.values.index(label))
        return tuple(bits)


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    voter: Optional[str]
    issue: Optional[str]
    rule: str
    message: str
    severity: str = "error"

    def __str__(self):
        where = "/".join(x for x in (self.voter, self.issue) if x)
        return f"[{self.severity}] {self.rule}: {where}: {self.message}"


def _find_cycle(parents) -> Optional[list]:
    state = [0] * len(parents)  # 0 new, 1 on stack, 2 done
    stack = []

    def visit(j):
        state[j] = 1
        stack.append(j)
        for p in parents[j]:
            if not 0 <= p < len(parents):
                continue
            if state[p] == 1:
                return stack[stack.index(p):] + [p]
            if state[p] == 0:
                found = visit(p)
                if found:
                    return found
        stack.pop()
        state[j] = 2
        return None

    for j in range(len(parents)):
        if state[j] == 0:
            found = visit(j)
            if found:
                return found
    return None


def validate(profile: Profile, compactness_bound: int = COMPACTNESS_BOUND) -> list:
    """Return the list of invariant violations; empty means valid.

    Exceeding the compactness bound is reported with severity ``warning``.
    """
    report = []
    m = profile.m
    names = [issue.name for issue in profile.issues]
    for j, issue in enumerate(profile.issues):
        if issue.index != j:
            report.append(Violation(None, issue.name, "issue index", f"index {issue.index} at position {j}"))
        if len(issue.values) != 2 or issue.values[0] == issue.values[1]:
            report.append(Violation(None, issue.name, "binary domain", "needs two distinct values"))
    if len(set(names)) != len(names):
        report.append(Violation(None, None, "issue names", "duplicate issue names"))
    if profile.global_order is not None and sorted(profile.global_order) != list(range(m)):
        report.append(Violation(None, None, "global order", "not a permutation of the issues"))

    for voter in profile.voters:
        net = voter.net
        vname = voter.name
        if voter.weight < 1:
            report.append(Violation(vname, None, "weight", f"weight {voter.weight} < 1"))
        if voter.q < 1:
            report.append(Violation(vname, None, "cost factor", f"q {voter.q} < 1"))
        if net.m != m or len(net.cpt) != m:
            report.append(Violation(vname, None, "issue universe", f"net covers {net.m} issues, profile has {m}"))
            continue
        structural = False
        for j in range(m):
            par = net.parents[j]
            iname = names[j]
            if len(set(par)) != len(par):
                report.append(Violation(vname, iname, "duplicate parent", f"parents {par}"))
                structural = True
            if j in par:
                report.append(Violation(vname, iname, "self parent", "issue lists itself as parent"))
                structural = True
            if any(not 0 <= p < m for p in par):
                report.append(Violation(vname, iname, "unknown parent", f"parents {par}"))
                structural = True
            if len(par) > compactness_bound:
                report.append(Violation(vname, iname, "compactness", f"{len(par)} parents > {compactness_bound}", "warning"))
            table = net.cpt[j]
            expected = 1 << len(par)
            good_rows = [
                ctx for ctx in table
                if isinstance(ctx, tuple) and len(ctx) == len(par) and all(b in (0, 1) for b in ctx)
            ]
            if len(table) != expected or len(good_rows) != expected:
                report.append(Violation(
                    vname, iname, "incomplete table",
                    f"{len(table)} rows, {expected} contexts required"))
            if any(v not in (0, 1) for v in table.values()):
                report.append(Violation(vname, iname, "preferred value", "preferred value must be 0 or 1"))
        if structural:
            continue
        cycle = _find_cycle(net.parents)
        if cycle:
            path = " -> ".join(names[c] for c in reversed(cycle))
            report.append(Violation(vname, None, "cycle", f"dependency cycle {path}"))
        if sorted(net.order) != list(range(m)):
            report.append(Violation(vname, None, "order", "linearization order is not a permutation"))
        elif not cycle:
            pos = {j: i for i, j in enumerate(net.order)}
            for j in range(m):
                for p in net.parents[j]:
                    if pos[p] > pos[j]:
                        report.append(Violation(
                            vname, names[j], "order",
                            f"parent {names[p]} follows it in the linearization order"))
        if voter.flip_costs is not None:
            missing = [names[j] for j in range(m) if j not in voter.flip_costs]
            if missing:
                report.append(Violation(vname, None, "flip costs", f"missing issues {missing}"))
            if any(c < 0 for c in voter.flip_costs.values()):
                report.append(Violation(vname, None, "flip costs", "negative flip price"))
    return report


def errors(report) -> list:
    return [v for v in report if v.severity == "error"]


# -- single-net operations ----------------------------------------------------


def top_candidate(net: CPNet) -> Candidate:
    c = [0] * net.m
    for j in net.order:
        c[j] = net.preferred(j, c)
    return tuple(c)


def linearization_bits(net: CPNet, c: Sequence[int]) -> list:
    """Per position of ``net.order``: 0 if ``c`` takes the preferred value."""
    return [0 if c[j] == net.preferred(j, c) else 1 for j in net.order]


def rank(net: CPNet, c: Sequence[int]) -> int:
    r = 0
    for bit in linearization_bits(net, c):
        r = (r << 1) | bit
    return r


def unrank(net: CPNet, r: int) -> Candidate:
    m = net.m
    if not 0 <= r < (1 << m):
        raise ValueError(f"rank {r} outside [0, {1 << m})")
    c = [0] * m
    for pos, j in enumerate(net.order):
        bit = (r >> (m - 1 - pos)) & 1
        pref = net.preferred(j, c)
        c[j] = pref ^ bit
    return tuple(c)


def veto_candidate(net: CPNet) -> Candidate:
    return unrank(net, (1 << net.m) - 1)


def top_k(net: CPNet, k: int) -> list:
    return [unrank(net, r) for r in range(min(k, 1 << net.m))]


# -- profile-level operations -------------------------------------------------


def is_o_legal(profile: Profile, order: Sequence[int]) -> bool:
    pos = {j: i for i, j in enumerate(order)}
    if len(pos) != profile.m or set(pos) != set(range(profile.m)):
        return False
    for voter in profile.voters:
        for j, par in enumerate(voter.net.parents):
            if any(pos[p] > pos[j] for p in par):
                return False
    return True


class RuleError(ValueError):
    """Rule preconditions (global order, O-legality, k) not met."""


def require_order(profile: Profile) -> tuple:
    if profile.global_order is None:
        raise RuleError("rule needs a global issue order")
    if not is_o_legal(profile, profile.global_order):
        raise RuleError("profile is not O-legal for the global order")
    return profile.global_order


def sm_outcome(profile: Profile, tie_winner: int = TIE_WINNER) -> Candidate:
    """Sequential majority along the global order; even splits go to ``tie_winner``."""
    order = require_order(profile)
    c = [0] * profile.m
    for j in order:
        mass = [0, 0]
        for voter in profile.voters:
            mass[voter.net.preferred(j, c)] += voter.weight
        if mass[0] == mass[1]:
            c[j] = tie_winner
        else:
            c[j] = 0 if mass[0] > mass[1] else 1
    return tuple(c)


@dataclass(frozen=True)
class Rule:
    """Voting rule: ``SM``, ``OP``, ``OV``, ``OKSTAR`` (k a power of 2) or ``OK``."""

    name: str
    k: int = 1

    def __post_init__(self):
        if self.name not in ("SM", "OP", "OV", "OKSTAR", "OK"):
            raise RuleError(f"unknown rule {self.name!r}")
        if self.name in ("OKSTAR", "OK") and self.k < 1:
            raise RuleError("k must be positive")
        if self.name == "OKSTAR" and self.k & (self.k - 1):
            raise RuleError(f"OK* needs k a power of 2, got {self.k}")

    @property
    def j(self) -> int:
        """Number of trailing issues ignored by OK*."""
        return self.k.bit_length() - 1

    def __str__(self):
        return f"{self.name}({self.k})" if self.name in ("OKSTAR", "OK") else self.name


SM = Rule("SM")
OP = Rule("OP")
OV = Rule("OV")


def okstar_issues(profile: Profile, rule: Rule) -> tuple:
    """Issues kept by OK*: the first ``m - j`` issues of the global order."""
    order = require_order(profile)
    if rule.j > profile.m:
        raise RuleError(f"k={rule.k} exceeds 2^m")
    return tuple(order[: profile.m - rule.j])


def project(c: Sequence[int], issues: Sequence[int]) -> tuple:
    return tuple(c[j] for j in issues)


def score_tally(profile: Profile, rule: Rule) -> dict:
    """Sparse weight tally.

    OP: tops. OV: vetoes. OK*: truncated tops, keyed over
    :func:`okstar_issues`, each worth ``weight`` (the package holds ``k``
    candidates). OK: each of the top ``k`` candidates.
    """
    tally: dict = {}
    if rule.name == "OP":
        for v in profile.voters:
            key = top_candidate(v.net)
            tally[key] = tally.get(key, 0) + v.weight
    elif rule.name == "OV":
        for v in profile.voters:
            key = veto_candidate(v.net)
            tally[key] = tally.get(key, 0) + v.weight
    elif rule.name == "OKSTAR":
        kept = okstar_issues(profile, rule)
        for v in profile.voters:
            key = project(top_candidate(v.net.with_order(profile.global_order)), kept)
            tally[key] = tally.get(key, 0) + v.weight
    elif rule.name == "OK":
        for v in profile.voters:
            for key in top_k(v.net, rule.k):
                tally[key] = tally.get(key, 0) + v.weight
    else:
        raise RuleError("SM has no score tally")
    return tally


@dataclass(frozen=True)
class Winners:
    """Co-winner set, possibly symbolic.

    ``members`` are explicit winners, keyed over ``issues``. If
    ``complement`` is set, every key outside the tally support also wins
    (OV with un-vetoed candidates, or an empty electorate).
    """

    rule: Rule
    issues: tuple
    tally: dict = field(default_factory=dict)
    members: frozenset = frozenset()
    complement: bool = False

    def __contains__(self, candidate) -> bool:
        """Membership of a full candidate."""
        return self.has_key(project(candidate, self.issues))

    def has_key(self, key) -> bool:
        if key in self.members:
            return True
        return self.complement and key not in self.tally


def co_winners(profile: Profile, rule: Rule, tie_winner: int = TIE_WINNER) -> Winners:
    all_issues = tuple(range(profile.m))
    if rule.name == "SM":
        return Winners(rule, all_issues, {}, frozenset([sm_outcome(profile, tie_winner)]))
    tally = score_tally(profile, rule)
    issues = okstar_issues(profile, rule) if rule.name == "OKSTAR" else all_issues
    space = 1 << len(issues)
    if not tally:
        return Winners(rule, issues, tally, frozenset(), True)
    if rule.name == "OV":
        if len(tally) < space:
            return Winners(rule, issues, tally, frozenset(), True)
        low = min(tally.values())
        return Winners(rule, issues, tally, frozenset(c for c, s in tally.items() if s == low))
    high = max(tally.values())
    members = frozenset(c for c, s in tally.items() if s == high)
    return Winners(rule, issues, tally, members)
