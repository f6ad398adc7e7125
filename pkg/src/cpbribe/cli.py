"""Command-line front end.

Every command prints one JSON document on stdout. Exit codes: 0 success
(or a feasible bribery), 2 bad input, 3 infeasible bribery, 4 oracle size
guard hit, 1 if a re-verification disagrees.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from itertools import product

from cpbribe import cpnet, generate, reductions
from cpbribe.bribery import BriberyQuery, Method, apply_bribery
from cpbribe.costs import BriberyAction, CostScheme, StatementFlip
from cpbribe.cpnet import Rule
from cpbribe.io import DocumentError, dump_profile, load_profile
from cpbribe.oracle import OracleLimitError, OracleLimits, oracle_solve
from cpbribe.solvers import solve
from cpbribe.subsets import k_smallest_subsets

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_LIMIT = 0, 1, 2, 3, 4
EXPAND_LIMIT = 16  # complement winner sets are listed up to 2^16 keys

RULES = ("sm", "op", "ov", "okstar", "ok")


class UsageError(ValueError):
    pass


def _emit(doc):
    sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")


def _bits(key):
    return "".join(str(b) for b in key)


def _candidate(profile, key, issues):
    return {"candidate": profile.label(key, issues), "bits": _bits(key)}


def _rule(name, k):
    name = name.lower()
    if name not in RULES:
        raise UsageError(f"unknown rule {name!r}; pick one of {', '.join(RULES)}")
    if name in ("okstar", "ok"):
        if k is None:
            raise UsageError(f"--rule {name} needs --k")
        return Rule(name.upper(), int(k))
    return Rule(name.upper())


def render_winners(profile, winners):
    issues = winners.issues
    if winners.complement:
        if len(issues) > EXPAND_LIMIT:
            raise UsageError("winner set too large to list")
        keys = [key for key in product((0, 1), repeat=len(issues)) if key not in winners.tally]
        keys += sorted(winners.members)
    else:
        keys = sorted(winners.members)
    tally = sorted(winners.tally.items(), key=lambda kv: (-kv[1], kv[0]))
    doc = {
        "rule": str(winners.rule),
        "issues": [profile.issues[j].name for j in issues],
        "winners": [_candidate(profile, key, issues) for key in sorted(set(keys))],
    }
    if winners.rule.name != "SM":
        doc["tally"] = [dict(_candidate(profile, key, issues), score=score) for key, score in tally]
    return doc


def render_flip(profile, flip):
    voter = profile.voters[flip.voter]
    parents = voter.net.parents[flip.issue]
    return {
        "voter": voter.name,
        "issue": profile.issues[flip.issue].name,
        "ctx": {profile.issues[p].name: profile.issues[p].values[b] for p, b in zip(parents, flip.ctx)},
        "new_pref": profile.issues[flip.issue].values[flip.new_pref],
    }


def parse_flip(profile, item) -> StatementFlip:
    names = [v.name for v in profile.voters]
    try:
        i = names.index(item["voter"])
        x = profile.issue_index(item["issue"])
        net = profile.voters[i].net
        ctx = tuple(profile.issues[p].values.index(item["ctx"][profile.issues[p].name]) for p in net.parents[x])
        new = profile.issues[x].values.index(item["new_pref"])
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"cannot read flip {item!r}: {exc}") from None
    return StatementFlip(i, x, ctx, new)


def _query(args, profile, section):
    def pick(flag, key):
        value = getattr(args, flag, None)
        return section.get(key) if value is None else value

    rule = pick("rule", "rule")
    if rule is None:
        raise UsageError("missing --rule")
    missing = [f"--{k}" for k in ("action", "scheme", "budget", "preferred") if pick(k, k) is None]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")
    scheme = CostScheme(str(pick("scheme", "scheme")).lower())
    if scheme is CostScheme.ANY and any(v.flip_costs is None for v in profile.voters):
        raise UsageError("--scheme any needs a flipcost map for every voter")
    tie = pick("tie", "tie")
    return BriberyQuery(
        _rule(rule, pick("k", "k")),
        BriberyAction(str(pick("action", "action")).lower()),
        scheme,
        int(pick("budget", "budget")),
        profile.parse_candidate(pick("preferred", "preferred")),
        bool(args.negative or section.get("negative", False)),
        Method(args.method) if getattr(args, "method", None) else Method.AUTO,
        cpnet.TIE_WINNER if tie is None else int(tie),
    )


def _winners_after(profile, query, flips):
    bribed = apply_bribery(profile, flips)
    return render_winners(bribed, cpnet.co_winners(bribed, query.rule, query.tie_winner))


def _solution_doc(profile, query, solution):
    flips = [f for fs in solution.flips for f in fs]
    return {
        "rule": str(query.rule),
        "preferred": _candidate(profile, query.preferred, range(profile.m)),
        "method": solution.method,
        "feasible": solution.feasible,
        "cost": solution.cost,
        "budget": query.budget,
        "negative": query.negative,
        "flips": [render_flip(profile, f) for f in flips],
        "winners_after": (_winners_after(profile, query, flips)["winners"]
                          if solution.cost is not None else None),
    }


def _check_replay(profile, query, result):
    """Re-apply a result document's flips; does ``winners_after`` match?"""
    if not isinstance(result, dict) or "flips" not in result:
        raise UsageError("verify input is not a bribe result")
    if result.get("winners_after") is None:
        return True
    flips = [parse_flip(profile, item) for item in result["flips"]]
    return _winners_after(profile, query, flips)["winners"] == result["winners_after"]


def _run_bribe(args, use_oracle):
    profile, section = load_profile(args.file)
    query = _query(args, profile, section)
    if isinstance(args.verify, str):
        with open(args.verify, encoding="utf-8") as fh:
            result = json.load(fh)
        ok = _check_replay(profile, query, result)
        _emit({"verified": ok})
        return EXIT_OK if ok else EXIT_MISMATCH
    if use_oracle:
        limits = OracleLimits(args.max_combinations, args.max_m, args.max_n)
        solution = oracle_solve(profile, query, limits)
    else:
        solution = solve(profile, query)
    doc = _solution_doc(profile, query, solution)
    if args.verify:
        # round-trip through JSON so the check sees exactly what was printed
        doc["verified"] = _check_replay(profile, query, json.loads(json.dumps(doc)))
        if not doc["verified"]:
            _emit(doc)
            return EXIT_MISMATCH
    _emit(doc)
    return EXIT_OK if solution.feasible else EXIT_INFEASIBLE


def cmd_winners(args):
    profile, section = load_profile(args.file)
    rule = _rule(args.rule or section.get("rule") or "", args.k if args.k is not None else section.get("k"))
    tie = args.tie if args.tie is not None else section.get("tie", cpnet.TIE_WINNER)
    _emit(render_winners(profile, cpnet.co_winners(profile, rule, int(tie))))
    return EXIT_OK


def cmd_bribe(args):
    return _run_bribe(args, use_oracle=False)


def cmd_oracle(args):
    return _run_bribe(args, use_oracle=True)


def _csv_ints(text, flag):
    parts = [p.strip() for p in str(text).split(",") if p.strip()]
    if not parts:
        raise UsageError(f"{flag} is empty")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"{flag} must be comma-separated integers") from None


def cmd_ksubsets(args):
    sizes = _csv_ints(args.sizes, "--sizes")
    found = k_smallest_subsets(sizes, args.k, allow_zero=True)
    _emit({
        "sizes": sizes,
        "k": args.k,
        "subsets": [{"indices": list(idx), "sizes": [sizes[i] for i in idx], "total": total}
                    for idx, total in found],
    })
    return EXIT_OK


def _matrix(text):
    rows = [r for r in str(text).split(";") if r.strip()]
    if not rows:
        raise UsageError("--matrix is empty")
    return tuple(tuple(_csv_ints(r, "--matrix")) for r in rows)


def cmd_gen(args):
    kind = args.reduction
    if kind == "nol":
        if args.matrix is None or args.x is None or args.k is None:
            raise UsageError("--reduction nol needs --matrix, --x and --k")
        ol = reductions.LobbyingInstance(_matrix(args.matrix), args.k, tuple(_csv_ints(args.x, "--x")))
        nol = reductions.nol_from_ol(ol)
        _emit({"E": [list(r) for r in nol.E], "k": nol.k, "x": list(nol.x), "negative": nol.negative})
        return EXIT_OK
    if kind == "random":
        if args.m is None or args.n is None:
            raise UsageError("--reduction random needs --m and --n")
        rng = random.Random(args.seed)
        profile = generate.random_profile(rng, args.m, args.n, max_weight=args.max_weight,
                                          max_flip_cost=args.max_flip_cost)
        _emit(dump_profile(profile))
        return EXIT_OK
    if args.partition is None:
        raise UsageError(f"--reduction {kind} needs --partition")
    profile, query = reductions.weighted_bribery_from_partition(
        _csv_ints(args.partition, "--partition"), reductions.Variant(kind),
        BriberyAction(args.action) if args.action else None, CostScheme(args.scheme))
    _emit(dump_profile(profile, {
        "rule": query.rule.name.lower(),
        "action": query.action.value,
        "scheme": query.scheme.value,
        "budget": query.budget,
        "preferred": profile.label(query.preferred),
        "negative": query.negative,
    }))
    return EXIT_OK


def _solver_flags(p):
    p.add_argument("file", help="profile document (JSON), or - for stdin")
    p.add_argument("--rule", choices=RULES)
    p.add_argument("--k", type=int, help="approval count for okstar/ok")
    p.add_argument("--tie", type=int, choices=(0, 1), help="SM tie-break value index")
    p.add_argument("--action", choices=[a.value for a in BriberyAction])
    p.add_argument("--scheme", choices=[s.value for s in CostScheme])
    p.add_argument("--budget", type=int)
    p.add_argument("--preferred", help="comma-joined value labels")
    p.add_argument("--negative", action="store_true")
    p.add_argument("--verify", nargs="?", const=True, default=False, metavar="RESULT",
                   help="re-apply the flips and compare winners; with RESULT, check that file instead")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpbribe", description="Bribery over CP-net profiles.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("winners", help="co-winners and tallies")
    p.add_argument("file")
    p.add_argument("--rule", choices=RULES)
    p.add_argument("--k", type=int)
    p.add_argument("--tie", type=int, choices=(0, 1))
    p.set_defaults(func=cmd_winners)

    p = sub.add_parser("bribe", help="minimum-cost bribery")
    _solver_flags(p)
    p.add_argument("--method", choices=[m.value for m in Method])
    p.set_defaults(func=cmd_bribe)

    p = sub.add_parser("oracle", help="exhaustive bribery search")
    _solver_flags(p)
    defaults = OracleLimits()
    p.add_argument("--max-combinations", type=int, default=defaults.max_combinations)
    p.add_argument("--max-m", type=int, default=defaults.max_m)
    p.add_argument("--max-n", type=int, default=defaults.max_n)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("ksubsets", help="K cheapest subsets")
    p.add_argument("--sizes", required=True, help="comma-separated sizes")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_ksubsets)

    p = sub.add_parser("gen", help="reduction or random instances")
    p.add_argument("--reduction", required=True,
                   choices=[v.value for v in reductions.Variant] + ["nol", "random"])
    p.add_argument("--partition", help="comma-separated multiset")
    p.add_argument("--action", choices=[a.value for a in BriberyAction])
    p.add_argument("--scheme", default="flip", choices=[s.value for s in CostScheme])
    p.add_argument("--matrix", help="rows separated by ';', entries by ','")
    p.add_argument("--x", help="target vector for lobbying")
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-weight", type=int, default=1)
    p.add_argument("--max-flip-cost", type=int)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OracleLimitError as exc:
        print(f"cpbribe: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (DocumentError, UsageError, ValueError, KeyError, OSError) as exc:
        print(f"cpbribe: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
