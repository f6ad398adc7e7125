"""Random valid profiles for tests, benchmarks, and the CLI."""

from __future__ import annotations

import random
from typing import Optional

from cpbribe.cpnet import CPNet, Issue, Profile, Voter

DEFAULT_NAMES = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def issues(m: int) -> tuple:
    return tuple(Issue(j, DEFAULT_NAMES[j] if j < 26 else f"X{j}") for j in range(m))


def random_net(rng: random.Random, m: int, order, max_parents: int = 2,
               density: float = 0.5) -> CPNet:
    """Acyclic net whose parents all precede their child in ``order``."""
    order = tuple(order)
    parents = [()] * m
    for pos, j in enumerate(order):
        earlier = list(order[:pos])
        rng.shuffle(earlier)
        chosen = [x for x in earlier[:max_parents] if rng.random() < density]
        parents[j] = tuple(sorted(chosen))
    cpt = []
    for j in range(m):
        k = len(parents[j])
        rows = {}
        for code in range(1 << k):
            ctx = tuple((code >> (k - 1 - b)) & 1 for b in range(k))
            rows[ctx] = rng.randrange(2)
        cpt.append(rows)
    return CPNet(tuple(parents), tuple(cpt), order)


def _topological_shuffle(rng, parents, m):
    """A random order in which every issue follows its parents."""
    placed, order = set(), []
    while len(order) < m:
        ready = [j for j in range(m) if j not in placed and set(parents[j]) <= placed]
        j = rng.choice(ready)
        order.append(j)
        placed.add(j)
    return tuple(order)


def random_profile(rng: random.Random, m: int, n: int, *, o_legal: bool = True,
                   max_parents: int = 2, max_weight: int = 1, max_q: int = 1,
                   max_flip_cost: Optional[int] = None, density: float = 0.5) -> Profile:
    """Profile with ``n`` random voters over ``m`` binary issues.

    With ``o_legal`` all nets respect one shared random order, which is
    stored as the global order; voters may still linearize along any of
    their own topological orders. ``max_flip_cost`` attaches per-issue
    flip prices in ``0..max_flip_cost``.
    """
    global_order = list(range(m))
    rng.shuffle(global_order)
    voters = []
    for i in range(n):
        base = global_order if o_legal else rng.sample(range(m), m)
        net = random_net(rng, m, base, max_parents, density)
        net = net.with_order(_topological_shuffle(rng, net.parents, m))
        flip_costs = None
        if max_flip_cost is not None:
            flip_costs = {j: rng.randint(0, max_flip_cost) for j in range(m)}
        voters.append(Voter(f"v{i + 1}", net, rng.randint(1, max_weight), rng.randint(1, max_q), flip_costs))
    return Profile(issues(m), tuple(voters), tuple(global_order) if o_legal else None)


def random_candidate(rng: random.Random, m: int) -> tuple:
    return tuple(rng.randrange(2) for _ in range(m))
