"""K cheapest subsets of a sized ground set.

The ground set is sorted ascending by size; the working array of the
``K`` smallest subsets of the first ``i`` elements is extended by adjoining
element ``i + 1`` to every member and merging the two sorted arrays.
Only the first ``min(K, m)`` elements can appear in an answer.
"""

from __future__ import annotations

from itertools import combinations

from cpbribe import kernels
from cpbribe._pykernels import k_smallest_masks as _py_k_smallest_masks

ORACLE_MAX_M = 20


def _check(sizes, K, allow_zero):
    if K < 1:
        raise ValueError("K must be at least 1")
    floor = 0 if allow_zero else 1
    for s in sizes:
        if int(s) != s or s < floor:
            raise ValueError(f"sizes must be integers >= {floor}, got {s!r}")


def _sorted_ground(sizes):
    perm = sorted(range(len(sizes)), key=lambda i: (sizes[i], i))
    return perm, [sizes[i] for i in perm]


def _decode(mask, perm):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(perm[i])
        mask >>= 1
        i += 1
    return tuple(sorted(out))


def k_smallest_subsets(sizes, K, *, allow_zero=False, debug=False):
    """Return ``min(K, 2**m)`` pairs ``(indices, size)`` ascending by size.

    ``indices`` refer to positions in ``sizes``. The empty set always comes
    first. Equal-size subsets appear in merge order (left array first only
    on strict comparisons). ``allow_zero`` admits zero sizes; those
    elements are split off so that the empty set still leads. With
    ``debug`` the loop invariant is checked against exhaustive enumeration
    after every iteration.
    """
    sizes = list(sizes)
    _check(sizes, K, allow_zero)
    zeros = [i for i, s in enumerate(sizes) if s == 0]
    if zeros:
        return _with_free_elements(sizes, zeros, K, debug)
    m = len(sizes)
    K = min(K, 1 << m) if m < 63 else K
    perm, ground = _sorted_ground(sizes)
    if debug:
        def check_invariant(i, masks, sums):
            prefix = ground[:i]
            expected = sorted(_all_sums(prefix))[: min(K, 1 << i)]
            if sums != expected or sums != sorted(sums):
                raise AssertionError(f"invariant broken after iteration {i}: {sums} vs {expected}")
            for mask, total in zip(masks, sums):
                if sum(ground[b] for b in range(i) if mask >> b & 1) != total:
                    raise AssertionError("stored running sum out of date")

        masks, sums = _py_k_smallest_masks(ground, K, check_invariant)
    else:
        masks, sums = kernels.k_smallest_masks(ground, K)
    return [(_decode(mask, perm), total) for mask, total in zip(masks, sums)]


def _with_free_elements(sizes, zeros, K, debug):
    """Zero-size elements multiply every answer without changing its size.

    Solving the positive part alone and expanding each of its subsets by
    all subsets of the free elements keeps the empty set first.
    """
    rest = [i for i in range(len(sizes)) if sizes[i] != 0]
    z = len(zeros)
    per = 1 << z if z < 63 else K
    base = k_smallest_subsets([sizes[i] for i in rest], -(-K // per), debug=debug) if rest else [((), 0)]
    out = []
    for idx, total in base:
        chosen = [rest[i] for i in idx]
        for mask in range(min(per, K - len(out))):
            extra = [zeros[b] for b in range(z) if mask >> b & 1]
            out.append((tuple(sorted(chosen + extra)), total))
        if len(out) >= K:
            break
    return out


def _all_sums(ground):
    sums = [0]
    for s in ground:
        sums = sums + [t + s for t in sums]
    return sums


def k_smallest_subsets_oracle(sizes, K, *, allow_zero=False):
    """Exhaustive reference: all ``2**m`` subsets sorted by size."""
    sizes = list(sizes)
    _check(sizes, K, allow_zero)
    m = len(sizes)
    if m > ORACLE_MAX_M:
        raise ValueError(f"oracle limited to {ORACLE_MAX_M} elements, got {m}")
    subsets = [
        (combo, sum(sizes[i] for i in combo))
        for r in range(m + 1)
        for combo in combinations(range(m), r)
    ]
    subsets.sort(key=lambda item: item[1])
    return subsets[: min(K, 1 << m)]


def is_valid_answer(sizes, answer, K) -> bool:
    """True if ``answer`` is some correct K-smallest-subsets output.

    Checks length, distinctness, sorting, stored sizes, and that no
    excluded subset is strictly smaller than an included one.
    """
    m = len(sizes)
    want = min(K, 1 << m)
    if len(answer) != want:
        return False
    seen = set()
    for idx, total in answer:
        if idx in seen or total != sum(sizes[i] for i in idx):
            return False
        seen.add(idx)
    if [t for _, t in answer] != sorted(t for _, t in answer):
        return False
    reference = k_smallest_subsets_oracle(sizes, K, allow_zero=True)
    return [t for _, t in answer] == [t for _, t in reference]
