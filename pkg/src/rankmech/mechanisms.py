"""Rank-minimizing deterministic enumeration and the two fair mechanisms.

The uniform mechanism averages every deterministic assignment of minimal
expected total rank with equal weight.  The modified mechanism coincides with
it except on profiles matching a narrow crowd-out pattern, where it instead
denies the patterned agent its first best.  Both treat agents with
essentially equal revealed orders identically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .assignment import Assignment, DeterministicAssignment, build_assignment, ZERO, ONE
from .errors import BudgetError, DomainError, PatternAmbiguityError
from .market import AgentIndex, Market, Profile, TypeIndex, check_profile


@dataclass(frozen=True)
class Budget:
    """Hard size limits for brute-force enumeration."""

    max_agents: int = 8
    max_types: int = 6


DEFAULT_BUDGET = Budget()

MechanismFn = Callable[[Market, Profile], Assignment]


@dataclass(frozen=True)
class RankMinimizingSet:
    """Every deterministic assignment reaching the minimal total rank."""

    optimum: Fraction
    members: tuple[DeterministicAssignment, ...]


def _check_budget(market: Market, budget: Budget) -> None:
    if market.n_agents > budget.max_agents or market.n_types > budget.max_types:
        raise BudgetError(
            f"market size {market.n_agents} agents x {market.n_types} types exceeds "
            f"the enumeration budget of {budget.max_agents} x {budget.max_types}; "
            f"raise the budget explicitly if the blow-up is intended"
        )


def enumerate_rank_minimizers(
    market: Market, profile: Profile, budget: Budget = DEFAULT_BUDGET
) -> RankMinimizingSet:
    """Enumerate all deterministic assignments of minimal total rank.

    Depth-first search over agents in index order.  A branch is cut when its
    partial rank total plus an optimistic completion (each remaining agent on
    its best type with remaining capacity) already exceeds the incumbent
    optimum; the bound never overestimates, so no optimal leaf is lost and
    ties are kept.
    """
    check_profile(market, profile)
    _check_budget(market, budget)
    return _enumerate_cached(market, profile, budget)


@lru_cache(maxsize=None)
def _enumerate_cached(market: Market, profile: Profile, budget: Budget) -> RankMinimizingSet:
    n = market.n_agents
    m = market.n_types
    ranks = [[profile[a].rank(o) for o in range(m)] for a in range(n)]
    remaining = list(market.capacities)
    choices = [0] * n
    best: list[int | None] = [None]
    members: list[tuple[TypeIndex, ...]] = []

    def lower_bound(depth: int) -> int:
        bound = 0
        for a in range(depth, n):
            bound += min(ranks[a][o] for o in range(m) if remaining[o] > 0)
        return bound

    def search(depth: int, partial: int) -> None:
        if best[0] is not None and partial + lower_bound(depth) > best[0]:
            return
        if depth == n:
            if best[0] is None or partial < best[0]:
                best[0] = partial
                members.clear()
            members.append(tuple(choices))
            return
        for o in range(m):
            if remaining[o] == 0:
                continue
            remaining[o] -= 1
            choices[depth] = o
            search(depth + 1, partial + ranks[depth][o])
            remaining[o] += 1

    search(0, 0)
    assert best[0] is not None
    return RankMinimizingSet(
        optimum=Fraction(best[0]),
        members=tuple(DeterministicAssignment(c) for c in sorted(members)),
    )


def uniform_mechanism(
    market: Market, profile: Profile, budget: Budget = DEFAULT_BUDGET
) -> Assignment:
    """Equal-weight average of every rank-minimizing deterministic assignment."""
    rmset = enumerate_rank_minimizers(market, profile, budget)
    count = len(rmset.members)
    rows = [[ZERO] * market.n_types for _ in range(market.n_agents)]
    share = Fraction(1, count)
    for det in rmset.members:
        for a, o in enumerate(det.choices):
            rows[a][o] += share
    return build_assignment(market, rows)


@dataclass(frozen=True)
class ModifiedPattern:
    """Parse of the crowd-out profile the modified mechanism reacts to.

    ``special_agent`` ranks ``focal_type`` first and the outside option no
    better than third.  Every competitor ranks the outside option at
    ``prefix_length`` (at least second), agrees with the special agent on all
    earlier ranks, and hits its capacity threshold exactly there, meaning the
    types it finds acceptable cannot absorb every agent.  All remaining
    agents rank the outside option first.

    The competitor group holds every qualifying agent.  It must be at least
    as large as the focal type's capacity; the mechanism then shares the
    focal type evenly across the group, which keeps equal treatment of
    equals when more agents qualify than the capacity can seat.
    """

    special_agent: AgentIndex
    focal_type: TypeIndex
    prefix_length: int
    competitors: tuple[AgentIndex, ...]
    bystanders: tuple[AgentIndex, ...]


def detect_modified_pattern(market: Market, profile: Profile) -> ModifiedPattern | None:
    """Match ``profile`` against the crowd-out pattern, or return None.

    The parse classifies every agent as the special agent, a competitor or a
    bystander; any leftover agent voids the candidate parse.  Two successful
    parses cannot coexist: the special agent's outside-option rank strictly
    exceeds every competitor's, so each of two candidate specials would have
    to classify the other and neither direction is possible.  A defensive
    ambiguity error guards that argument.
    """
    check_profile(market, profile)
    parses: list[ModifiedPattern] = []
    for special in range(market.n_agents):
        pattern = _try_parse(market, profile, special)
        if pattern is not None:
            parses.append(pattern)
    if not parses:
        return None
    if len(parses) > 1:
        raise PatternAmbiguityError(
            f"profile admits {len(parses)} conflicting special-case parses"
        )
    return parses[0]


def _try_parse(market: Market, profile: Profile, special: AgentIndex) -> ModifiedPattern | None:
    order = profile[special]
    null_rank = order.rank(market.null_type)
    if null_rank < 3:
        return None
    focal = order.ranking[0]
    competitors: list[AgentIndex] = []
    bystanders: list[AgentIndex] = []
    shared_level: int | None = None
    for a in range(market.n_agents):
        if a == special:
            continue
        other = profile[a]
        if other.ranking[0] == market.null_type:
            bystanders.append(a)
            continue
        level = other.rank(market.null_type)
        if (
            level >= 2
            and level < null_rank
            and other.top(level - 1) == order.top(level - 1)
            and market.capacity_threshold_rank(other) == level
        ):
            if shared_level is None:
                shared_level = level
            elif shared_level != level:
                return None
            competitors.append(a)
            continue
        return None
    if shared_level is None or len(competitors) < market.capacities[focal]:
        return None
    return ModifiedPattern(
        special_agent=special,
        focal_type=focal,
        prefix_length=shared_level,
        competitors=tuple(competitors),
        bystanders=tuple(bystanders),
    )


def modified_mechanism(
    market: Market, profile: Profile, budget: Budget = DEFAULT_BUDGET
) -> Assignment:
    """Uniform mechanism with the crowd-out pattern overridden.

    On a patterned profile the special agent receives its revealed second
    best outright and none of the focal type; the focal type's capacity is
    shared evenly across the competitors (averaging over every way to seat
    capacity-many of them), and everyone else takes the outside option.
    """
    pattern = detect_modified_pattern(market, profile)
    if pattern is None:
        return uniform_mechanism(market, profile, budget)
    rows = [[ZERO] * market.n_types for _ in range(market.n_agents)]
    second_best = profile[pattern.special_agent].ranking[1]
    rows[pattern.special_agent][second_best] = ONE
    seats = Fraction(market.capacities[pattern.focal_type], len(pattern.competitors))
    for a in pattern.competitors:
        rows[a][pattern.focal_type] = seats
        rows[a][market.null_type] = ONE - seats
    for a in pattern.bystanders:
        rows[a][market.null_type] = ONE
    return build_assignment(market, rows)


def get_mechanism(name: str) -> MechanismFn:
    if name == "uniform":
        return uniform_mechanism
    if name == "modified":
        return modified_mechanism
    raise DomainError(f"unknown mechanism {name!r}; expected 'uniform' or 'modified'")


def check_weak_ete(mechanism: MechanismFn, market: Market, profile: Profile) -> bool:
    """Agents revealing identical orders receive identical rows."""
    x = mechanism(market, profile)
    for a, b in itertools.combinations(range(market.n_agents), 2):
        if profile[a] == profile[b] and x.row(a) != x.row(b):
            return False
    return True


def check_ete(mechanism: MechanismFn, market: Market, profile: Profile) -> bool:
    """Agents revealing essentially equal orders receive identical rows."""
    x = mechanism(market, profile)
    for a, b in itertools.combinations(range(market.n_agents), 2):
        if market.essentially_equal(profile[a], profile[b]) and x.row(a) != x.row(b):
            return False
    return True
