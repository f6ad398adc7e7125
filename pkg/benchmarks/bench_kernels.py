"""Compiled vs pure-Python kernels, plus an end-to-end plurality solve.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json]
"""

import argparse
import json
import random
import time

from cpbribe import kernels
from cpbribe.bribery import BriberyQuery
from cpbribe.costs import BriberyAction, CostScheme
from cpbribe.cpnet import OP, SM
from cpbribe.generate import random_candidate, random_profile
from cpbribe.solvers import solve, solve_sm_weighted_dp


def workloads(seed=0):
    rng = random.Random(seed)
    sizes = sorted(rng.randint(1, 1000) for _ in range(40))
    weights = [rng.randint(1, 1 << 16) for _ in range(120)]
    costs = [rng.randint(1, 6) for _ in range(120)]
    op_cases = []
    for _ in range(3):
        profile = random_profile(rng, 4, 24, max_flip_cost=9)
        op_cases.append((profile, BriberyQuery(OP, BriberyAction.IV_DV, CostScheme.ANY, 10 ** 6,
                                               random_candidate(rng, 4))))
    sm_profile = random_profile(rng, 5, 200, max_weight=1 << 16)
    sm_query = BriberyQuery(SM, BriberyAction.IV_DV, CostScheme.LEVEL, 10 ** 9, random_candidate(rng, 5))
    return {
        "k_smallest (m=40, K=2000)": lambda: kernels.k_smallest_masks(sizes, 2000),
        "knapsack (120 items)": lambda: kernels.knapsack_keep(weights, costs, sum(weights) // 2),
        "OP flow solve (n=24, m=4)": lambda: [solve(p, q) for p, q in op_cases],
        "SM weighted DP (n=200, m=5)": lambda: solve_sm_weighted_dp(sm_profile, sm_query),
    }


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", action="store_true", help="print machine-readable results")
    args = parser.parse_args()

    backends = sorted(kernels.BACKENDS)
    rows = {}
    for name in backends:
        previous = kernels.use_backend(name)
        try:
            for label, fn in workloads().items():
                rows.setdefault(label, {})[name] = best_of(fn, args.repeat)
        finally:
            kernels.use_backend(previous)

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    if "compiled" not in backends:
        print("compiled extension not built; showing the Python backend only")
    header = f"{'workload':<30}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, times in rows.items():
        line = f"{label:<30}" + "".join(f"{times[b] * 1e3:>10.2f}ms" for b in backends)
        if len(backends) == 2:
            line += f"{times['python'] / times['compiled']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
