from itertools import product

import pytest

from cpbribe import cpnet
from cpbribe.costs import BriberyAction, CostScheme
from cpbribe.oracle import OracleLimits, oracle_solve
from cpbribe.reductions import (
    SUPPORTED_ACTIONS, LobbyingInstance, PartitionInstance, Variant, majority, nol_from_ol,
    solve_lobbying_bruteforce, solve_partition_bruteforce, weighted_bribery_from_partition,
)

LIMITS = OracleLimits(max_n=12)


def test_partition_bruteforce():
    assert solve_partition_bruteforce((1, 2, 3))
    assert not solve_partition_bruteforce((1, 3))
    assert not solve_partition_bruteforce((1, 2))
    with pytest.raises(ValueError):
        solve_partition_bruteforce(range(1, 23))


def test_partition_instance_rejects_odd_sum():
    with pytest.raises(ValueError):
        PartitionInstance((1, 2))
    assert PartitionInstance((1, 3)).half == 2


def test_op_table_weights():
    profile, q = weighted_bribery_from_partition((1, 2, 3), Variant.OP_POS)
    assert [v.weight for v in profile.voters] == [3, 1, 2, 3]
    assert q.preferred == (0, 0)
    assert all(v.q == 1 for v in profile.voters)
    tops = [cpnet.top_candidate(v.net) for v in profile.voters]
    assert tops == [(0, 0), (1, 0), (1, 0), (1, 0)]
    assert profile.voters[1].net.parents == ((), (0,))


@pytest.mark.parametrize("variant", list(Variant))
def test_generated_profiles_validate(variant):
    for action in SUPPORTED_ACTIONS[variant]:
        profile, q = weighted_bribery_from_partition((2, 3, 5), variant, action)
        assert cpnet.errors(cpnet.validate(profile)) == []
        assert q.action is action
        if variant is Variant.SM_NEG:
            assert cpnet.is_o_legal(profile, profile.global_order)


def test_unsupported_action_rejected():
    with pytest.raises(ValueError):
        weighted_bribery_from_partition((1, 1), Variant.OV_DV_POS, BriberyAction.IV)


@pytest.mark.parametrize("items", [(1, 2, 3), (1, 3), (2, 2), (1, 1, 4), (3, 3, 2, 2)])
@pytest.mark.parametrize("variant", list(Variant))
def test_equivalence_small(items, variant):
    for action in SUPPORTED_ACTIONS[variant]:
        profile, q = weighted_bribery_from_partition(items, variant, action)
        assert oracle_solve(profile, q, LIMITS).feasible == solve_partition_bruteforce(items)


@pytest.mark.parametrize("scheme", [CostScheme.EQUAL, CostScheme.DIST, CostScheme.LEVEL])
def test_equivalence_other_schemes(scheme):
    for items, expected in [((1, 2, 3), True), ((1, 3), False)]:
        profile, q = weighted_bribery_from_partition(items, Variant.OP_POS, scheme=scheme)
        assert oracle_solve(profile, q, LIMITS).feasible == expected


def test_nol_construction():
    ol = LobbyingInstance(((0, 0), (1, 1), (1, 0)), 1, (1, 1))
    nol = nol_from_ol(ol)
    assert nol.negative and nol.k == 1
    assert nol.x == (1, 1, 0, 0, 0)
    assert nol.E == ((0, 0, 1, 0, 0), (1, 1, 0, 1, 0), (1, 0, 0, 0, 1))


def test_nol_single_row():
    nol = nol_from_ol(LobbyingInstance(((1,),), 0, (1,)))
    assert nol.E == ((1, 1),) and nol.x == (1, 0)


def test_lobbying_examples():
    ol = LobbyingInstance(((0, 0), (1, 1), (1, 0)), 1, (1, 1))
    assert solve_lobbying_bruteforce(ol)
    assert solve_lobbying_bruteforce(nol_from_ol(ol))
    # row 1 may become [0,1], which differs from x
    assert solve_lobbying_bruteforce(LobbyingInstance(ol.E, 1, ol.x, negative=True))
    stuck = LobbyingInstance(((0, 0), (0, 0), (1, 1)), 1, (1, 1))
    assert solve_lobbying_bruteforce(stuck)
    # the only winning edit rewrites a row into x itself
    assert not solve_lobbying_bruteforce(LobbyingInstance(stuck.E, 1, stuck.x, negative=True))


def test_majority_ties_go_to_zero():
    assert majority(((1,), (0,)), 0) == 0
    assert majority(((1,), (1,), (0,)), 0) == 1


def test_nol_needs_positive_input():
    with pytest.raises(ValueError):
        nol_from_ol(LobbyingInstance(((1,),), 0, (1,), negative=True))


def test_lobbying_instance_checks():
    with pytest.raises(ValueError):
        LobbyingInstance(((1, 0), (1,)), 1, (1, 0))
    with pytest.raises(ValueError):
        LobbyingInstance(((1,),), 2, (1,))


def test_nol_preserves_answers_from_two_rows():
    for n, m in [(2, 1), (2, 2), (3, 2)]:
        for cells in product((0, 1), repeat=n * m):
            E = tuple(tuple(cells[i * m:(i + 1) * m]) for i in range(n))
            for x in product((0, 1), repeat=m):
                for k in range(min(n, 2) + 1):
                    ol = LobbyingInstance(E, k, x)
                    assert solve_lobbying_bruteforce(ol) == solve_lobbying_bruteforce(nol_from_ol(ol))
