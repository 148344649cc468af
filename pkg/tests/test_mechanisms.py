"""Tests for rank-minimizing enumeration and the two mechanisms.

The pruned search is checked against a naive oracle that walks the full
type^agents product, so any pruning bug that drops a tied optimum shows up
as a set mismatch.
"""

import itertools
import random
from fractions import Fraction

import pytest

from rankmech import (
    Budget,
    BudgetError,
    DeterministicAssignment,
    DomainError,
    Market,
    Profile,
    check_ete,
    check_weak_ete,
    detect_modified_pattern,
    deterministic_rank_value,
    enumerate_rank_minimizers,
    get_mechanism,
    modified_mechanism,
    order_from_names,
    rank_value,
    uniform_mechanism,
)
from rankmech.examples import (
    example1_market,
    example2_market,
    example3_market,
    example4_market,
    make_denial_mechanism,
)
from rankmech.sweeps import all_profiles

F = Fraction


def naive_rank_minimizers(market, profile):
    """Reference oracle: full enumeration without pruning or ordering tricks."""
    best = None
    members = []
    for choices in itertools.product(range(market.n_types), repeat=market.n_agents):
        det = DeterministicAssignment(choices)
        if not det.respects_capacities(market):
            continue
        rv = deterministic_rank_value(det, profile)
        if best is None or rv < best:
            best = rv
            members = [choices]
        elif rv == best:
            members.append(choices)
    return best, sorted(members)


def test_enumeration_matches_naive_oracle_everywhere_small():
    """All 216 profiles of the two-type market and all 36 of the two-agent one."""
    for market in (example2_market(), example4_market()):
        for profile in all_profiles(market):
            best, members = naive_rank_minimizers(market, profile)
            rmset = enumerate_rank_minimizers(market, profile)
            assert rmset.optimum == best
            assert [det.choices for det in rmset.members] == members


def test_enumeration_matches_naive_oracle_sampled_wide():
    """Seeded samples of the four-type markets, too many to sweep in full."""
    rng = random.Random(90217)
    for market in (example1_market(), example1_market(2), example3_market()):
        orders = market.all_orders()
        for _ in range(120):
            profile = Profile(tuple(rng.choice(orders) for _ in range(market.n_agents)))
            best, members = naive_rank_minimizers(market, profile)
            rmset = enumerate_rank_minimizers(market, profile)
            assert rmset.optimum == best
            assert [det.choices for det in rmset.members] == members


def test_enumeration_members_are_sorted_and_valid():
    market = example3_market()
    profile = Profile((
        order_from_names(market, "o1>o3>o2>null"),
        order_from_names(market, "o1>o3>o2>null"),
        order_from_names(market, "o3>o1>o2>null"),
    ))
    rmset = enumerate_rank_minimizers(market, profile)
    choices = [det.choices for det in rmset.members]
    assert choices == sorted(choices)
    assert len(set(choices)) == len(choices)
    for det in rmset.members:
        assert det.respects_capacities(market)
        assert deterministic_rank_value(det, profile) == rmset.optimum


def test_budget_guard():
    names = tuple(f"a{i}" for i in range(9))
    market = Market(names, ("o1", "o2", "null"), (1, 1, 9), 2)
    profile = Profile((order_from_names(market, "o1>o2>null"),) * 9)
    with pytest.raises(BudgetError):
        enumerate_rank_minimizers(market, profile)
    rmset = enumerate_rank_minimizers(market, profile, Budget(max_agents=9))
    assert rmset.optimum == 1 + 2 + 3 * 7
    with pytest.raises(BudgetError):
        enumerate_rank_minimizers(market, profile, Budget(max_agents=9, max_types=2))


def test_uniform_mechanism_is_the_equal_weight_average():
    market = example2_market()
    profile = Profile((
        order_from_names(market, "o1>o2>null"),
        order_from_names(market, "o1>o2>null"),
        order_from_names(market, "o1>null>o2"),
    ))
    rmset = enumerate_rank_minimizers(market, profile)
    x = uniform_mechanism(market, profile)
    share = F(1, len(rmset.members))
    for a in range(market.n_agents):
        for o in range(market.n_types):
            expected = sum(
                (share for det in rmset.members if det.choices[a] == o), start=F(0)
            )
            assert x.entry(a, o) == expected
    assert rank_value(x, profile) == rmset.optimum


def test_uniform_output_is_rank_minimizing_on_random_profiles():
    rng = random.Random(3314)
    for market in (example2_market(), example3_market()):
        orders = market.all_orders()
        for _ in range(60):
            profile = Profile(tuple(rng.choice(orders) for _ in range(market.n_agents)))
            x = uniform_mechanism(market, profile)
            assert rank_value(x, profile) == enumerate_rank_minimizers(market, profile).optimum


def test_pattern_detection_golden():
    """Narrow market, one demanding agent against two who settle early.

    a1 ranks the outside option fourth; a2 and a3 rank it third, share a1's
    first two ranks and hit their capacity threshold exactly there (seats
    1 + 1 + 3 cover three agents only at rank 3).
    """
    market = example1_market()
    eager = order_from_names(market, "o1>o2>o3>null")
    patient = order_from_names(market, "o1>o2>null>o3")
    pattern = detect_modified_pattern(market, Profile((eager, patient, patient)))
    assert pattern is not None
    assert pattern.special_agent == 0
    assert pattern.focal_type == 0
    assert pattern.prefix_length == 3
    assert pattern.competitors == (1, 2)
    assert pattern.bystanders == ()


def test_pattern_with_bystanders_and_short_prefix():
    """Competitors only need the shared prefix up to their own threshold.

    With threshold 2 the competitor agrees with the special agent on rank 1
    alone; an agent ranking the outside option first is a bystander.
    """
    market = Market(
        agent_names=("a1", "a2", "a3", "a4"),
        type_names=("o1", "o2", "o3", "null"),
        capacities=(2, 1, 1, 4),
        null_type=3,
    )
    special = order_from_names(market, "o1>o2>null>o3")
    settler = order_from_names(market, "o1>null>o2>o3")
    idle = order_from_names(market, "null>o3>o2>o1")
    pattern = detect_modified_pattern(market, Profile((special, settler, settler, idle)))
    assert pattern is not None
    assert pattern.special_agent == 0
    assert pattern.focal_type == 0
    assert pattern.prefix_length == 2
    assert pattern.competitors == (1, 2)
    assert pattern.bystanders == (3,)
    x = modified_mechanism(market, Profile((special, settler, settler, idle)))
    assert x.row(0) == (F(0), F(1), F(0), F(0))
    assert x.row(1) == (F(1), F(0), F(0), F(0))
    assert x.row(2) == (F(1), F(0), F(0), F(0))
    assert x.row(3) == (F(0), F(0), F(0), F(1))


def test_pattern_requires_enough_competitors():
    """One settler cannot absorb a two-seat focal type; the parse fails."""
    market = Market(
        agent_names=("a1", "a2", "a3"),
        type_names=("o1", "o2", "o3", "null"),
        capacities=(2, 1, 1, 3),
        null_type=3,
    )
    special = order_from_names(market, "o1>o2>null>o3")
    settler = order_from_names(market, "o1>null>o2>o3")
    idle = order_from_names(market, "null>o1>o2>o3")
    assert detect_modified_pattern(market, Profile((special, settler, idle))) is None


def test_pattern_shares_excess_competitors_evenly():
    """Three settlers for one seat: each gets a third of the focal type."""
    market = Market(
        agent_names=("a1", "a2", "a3", "a4"),
        type_names=("o1", "o2", "null"),
        capacities=(1, 1, 4),
        null_type=2,
    )
    special = order_from_names(market, "o1>o2>null")
    settler = order_from_names(market, "o1>null>o2")
    profile = Profile((special, settler, settler, settler))
    pattern = detect_modified_pattern(market, profile)
    assert pattern is not None
    assert pattern.competitors == (1, 2, 3)
    x = modified_mechanism(market, profile)
    assert x.row(0) == (F(0), F(1), F(0))
    for a in (1, 2, 3):
        assert x.row(a) == (F(1, 3), F(0), F(2, 3))


def test_pattern_rejects_mixed_threshold_levels():
    """Settlers at different outside-option ranks void the parse."""
    market = example1_market()
    special = order_from_names(market, "o1>o2>o3>null")
    low = order_from_names(market, "o1>null>o2>o3")
    mid = order_from_names(market, "o1>o2>null>o3")
    profile = Profile((special, low, mid))
    assert detect_modified_pattern(market, profile) is None
    assert modified_mechanism(market, profile) == uniform_mechanism(market, profile)


def test_pattern_rejects_prefix_disagreement():
    """A settler whose acceptable block differs from the special agent's."""
    market = example1_market()
    special = order_from_names(market, "o1>o2>o3>null")
    patient = order_from_names(market, "o1>o2>null>o3")
    other = order_from_names(market, "o2>o1>null>o3")
    assert detect_modified_pattern(market, Profile((special, patient, other))) is None


def test_pattern_rejects_special_with_early_outside_option():
    market = example4_market()
    narrow = order_from_names(market, "o1>null>o2")
    assert detect_modified_pattern(market, Profile((narrow, narrow))) is None


def test_pattern_never_fires_without_threshold_at_level():
    """Widening o2 pushes the settlers' threshold to 2, below their level 3."""
    market = example1_market(second_capacity=2)
    eager = order_from_names(market, "o1>o2>o3>null")
    patient = order_from_names(market, "o1>o2>null>o3")
    assert detect_modified_pattern(market, Profile((eager, patient, patient))) is None


def test_detection_never_raises_on_full_small_sweeps():
    """Every profile of the small markets parses to one pattern or none."""
    for market in (example2_market(), example4_market()):
        for profile in all_profiles(market):
            detect_modified_pattern(market, profile)


def test_modified_mechanism_equals_uniform_off_pattern():
    market = example2_market()
    rng = random.Random(577)
    orders = market.all_orders()
    for _ in range(40):
        profile = Profile(tuple(rng.choice(orders) for _ in range(market.n_agents)))
        if detect_modified_pattern(market, profile) is None:
            assert modified_mechanism(market, profile) == uniform_mechanism(market, profile)


def test_get_mechanism_lookup():
    assert get_mechanism("uniform") is uniform_mechanism
    assert get_mechanism("modified") is modified_mechanism
    with pytest.raises(DomainError):
        get_mechanism("serial")


def test_ete_checkers_on_uniform_and_denial_fixture():
    market = example1_market(second_capacity=2)
    eager = order_from_names(market, "o1>o2>o3>null")
    patient = order_from_names(market, "o1>o2>null>o3")
    profile = Profile((eager, patient, patient))
    assert check_ete(uniform_mechanism, market, profile)
    assert check_weak_ete(uniform_mechanism, market, profile)
    denial = make_denial_mechanism(market, "o1>o2>o3>null", "o1>o2>null>o3", "o1")
    # eager and patient are essentially equal here (threshold 2, shared prefix),
    # so denying o1 to the eager reveal alone is an equal-treatment violation.
    assert not check_ete(denial, market, profile)
    # Weak equal treatment only compares identical reveals and still holds.
    assert check_weak_ete(denial, market, profile)
