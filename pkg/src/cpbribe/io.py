"""JSON profile documents.

A document names everything by label::

    {
      "issues": [{"name": "When", "values": ["summer", "winter"], "parents": []}, ...],
      "order": ["When", "Where", "What"],
      "voters": [{
        "name": "Alice", "weight": 1, "q": 1,
        "order": ["When", "Where", "What"],
        "parents": {"Where": ["When"]},
        "cpt": [{"issue": "Where", "ctx": {"When": "summer"}, "pref": "Italy"}, ...],
        "flipcost": {"When": 2, "Where": 1, "What": 1}
      }],
      "query": {"rule": "op", "action": "dv", "scheme": "flip", "budget": 10,
                "preferred": "x,y", "negative": false}
    }

Issue-level ``parents`` are the default dependency graph; a voter's own
``parents`` map overrides it per issue. ``order``, ``weight``, ``q``,
``parents``, ``flipcost`` and ``query`` are optional. Unknown keys are
rejected.
"""

from __future__ import annotations

import json
from itertools import product

from cpbribe import cpnet
from cpbribe.cpnet import CPNet, Issue, Profile, Voter

DOC_KEYS = {"issues", "order", "voters", "query"}
ISSUE_KEYS = {"name", "values", "parents"}
VOTER_KEYS = {"name", "weight", "q", "order", "parents", "cpt", "flipcost"}
ROW_KEYS = {"issue", "ctx", "pref"}
QUERY_KEYS = {"rule", "k", "action", "scheme", "budget", "preferred", "negative", "tie"}


class DocumentError(ValueError):
    """Malformed document, or one describing an invalid profile."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


def _keys(obj, allowed, where, required=()):
    if not isinstance(obj, dict):
        raise DocumentError(f"{where}: expected an object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise DocumentError(f"{where}: unknown keys {unknown}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise DocumentError(f"{where}: missing keys {missing}")


def _int(value, where, low=0):
    if isinstance(value, bool) or not isinstance(value, int) or value < low:
        raise DocumentError(f"{where}: expected an integer >= {low}, got {value!r}")
    return value


def _topological(parents, m):
    placed, order = set(), []
    while len(order) < m:
        ready = [j for j in range(m) if j not in placed and set(parents[j]) <= placed]
        if not ready:
            return tuple(range(m))  # cyclic; validate() reports it
        order.append(ready[0])
        placed.add(ready[0])
    return tuple(order)


def parse_profile(doc) -> Profile:
    """Profile from a decoded document; raises :class:`DocumentError`."""
    _keys(doc, DOC_KEYS, "document", ("issues", "voters"))
    if not isinstance(doc["issues"], list) or not doc["issues"]:
        raise DocumentError("issues: expected a non-empty list")
    issues, default_parents = [], []
    for j, item in enumerate(doc["issues"]):
        _keys(item, ISSUE_KEYS, f"issues[{j}]", ("name", "values"))
        values = item["values"]
        if not isinstance(values, list) or len(values) != 2 or not all(isinstance(v, str) for v in values):
            raise DocumentError(f"issue {item['name']!r}: values must be two strings")
        issues.append(Issue(j, str(item["name"]), tuple(values)))
        default_parents.append(item.get("parents", []))
    names = [i.name for i in issues]

    def index(name, where):
        try:
            return names.index(name)
        except ValueError:
            raise DocumentError(f"{where}: unknown issue {name!r}") from None

    def value(issue, label, where):
        if label not in issues[issue].values:
            raise DocumentError(f"{where}: {label!r} is not a value of {names[issue]!r}")
        return issues[issue].values.index(label)

    def order_of(seq, where):
        if not isinstance(seq, list):
            raise DocumentError(f"{where}: expected a list of issue names")
        return tuple(index(n, where) for n in seq)

    m = len(issues)
    global_order = order_of(doc["order"], "order") if "order" in doc else None
    voters = []
    if not isinstance(doc["voters"], list):
        raise DocumentError("voters: expected a list")
    for vi, item in enumerate(doc["voters"]):
        where = f"voters[{vi}]"
        _keys(item, VOTER_KEYS, where, ("name", "cpt"))
        vname = str(item["name"])
        override = item.get("parents", {})
        if not isinstance(override, dict):
            raise DocumentError(f"{where}.parents: expected an object")
        parents = []
        for j in range(m):
            listed = override.get(names[j], default_parents[j])
            if not isinstance(listed, list):
                raise DocumentError(f"{where}: parents of {names[j]!r} must be a list")
            parents.append(tuple(index(p, where) for p in listed))
        for key in override:
            index(key, f"{where}.parents")
        cpt = [dict() for _ in range(m)]
        if not isinstance(item["cpt"], list):
            raise DocumentError(f"{where}.cpt: expected a list")
        for ri, row in enumerate(item["cpt"]):
            rwhere = f"{where}.cpt[{ri}]"
            _keys(row, ROW_KEYS, rwhere, ("issue", "pref"))
            j = index(row["issue"], rwhere)
            ctx_doc = row.get("ctx", {})
            if not isinstance(ctx_doc, dict):
                raise DocumentError(f"{rwhere}.ctx: expected an object")
            if set(ctx_doc) != {names[p] for p in parents[j]}:
                raise DocumentError(f"{rwhere}: ctx must assign exactly the parents of {names[j]!r}")
            ctx = tuple(value(p, ctx_doc[names[p]], rwhere) for p in parents[j])
            if ctx in cpt[j]:
                raise DocumentError(f"{rwhere}: duplicate row for {names[j]!r}")
            cpt[j][ctx] = value(j, row["pref"], rwhere)
        order = order_of(item["order"], f"{where}.order") if "order" in item else (
            global_order if global_order is not None else _topological(parents, m))
        flip_costs = None
        if "flipcost" in item:
            fc = item["flipcost"]
            if not isinstance(fc, dict):
                raise DocumentError(f"{where}.flipcost: expected an object")
            flip_costs = {index(k, f"{where}.flipcost"): _int(v, f"{where}.flipcost") for k, v in fc.items()}
        net = CPNet(tuple(parents), tuple(cpt), order)
        voters.append(Voter(vname, net, _int(item.get("weight", 1), f"{where}.weight", 1),
                            _int(item.get("q", 1), f"{where}.q", 1), flip_costs))
    profile = Profile(tuple(issues), tuple(voters), global_order)
    problems = cpnet.errors(cpnet.validate(profile))
    if problems:
        raise DocumentError("; ".join(str(v) for v in problems), problems)
    return profile


def load_profile(path) -> tuple:
    """``(profile, query_section)`` from a JSON file (``-`` reads stdin)."""
    import sys
    try:
        if str(path) == "-":
            doc = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: not valid JSON ({exc})") from exc
    profile = parse_profile(doc)
    query = doc.get("query", {}) if isinstance(doc, dict) else {}
    _keys(query, QUERY_KEYS, "query")
    return profile, query


def dump_profile(profile: Profile, query: dict = None) -> dict:
    """Inverse of :func:`parse_profile` (modulo key order)."""
    names = [i.name for i in profile.issues]
    shared = None
    if profile.voters and all(v.net.parents == profile.voters[0].net.parents for v in profile.voters):
        shared = profile.voters[0].net.parents
    doc = {"issues": [
        {"name": i.name, "values": list(i.values),
         "parents": [names[p] for p in shared[i.index]] if shared else []}
        for i in profile.issues
    ]}
    if profile.global_order is not None:
        doc["order"] = [names[j] for j in profile.global_order]
    voters = []
    for v in profile.voters:
        net = v.net
        item = {"name": v.name, "weight": v.weight, "q": v.q, "order": [names[j] for j in net.order]}
        if shared is None:
            own = {names[j]: [names[p] for p in net.parents[j]] for j in range(profile.m) if net.parents[j]}
            if own:
                item["parents"] = own
        rows = []
        for j in range(profile.m):
            par = net.parents[j]
            for ctx in product((0, 1), repeat=len(par)):
                if ctx not in net.cpt[j]:
                    continue
                rows.append({
                    "issue": names[j],
                    "ctx": {names[p]: profile.issues[p].values[b] for p, b in zip(par, ctx)},
                    "pref": profile.issues[j].values[net.cpt[j][ctx]],
                })
        item["cpt"] = rows
        if v.flip_costs is not None:
            item["flipcost"] = {names[j]: v.flip_costs[j] for j in sorted(v.flip_costs)}
        voters.append(item)
    doc["voters"] = voters
    if query:
        doc["query"] = query
    return doc
