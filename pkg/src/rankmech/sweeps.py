"""Exhaustive property sweeps over small markets.

Each sweep walks a finite space (profiles, or truth and candidate reveals)
and counts violations of one property, keeping the first counterexample for
reporting.  Sweeps are deterministic; the optional thread pool only fans out
independent units and merges results in submission order.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .assignment import is_wasteful
from .market import Market, Profile, order_to_names
from .mechanisms import Budget, DEFAULT_BUDGET, check_ete, get_mechanism, uniform_mechanism
from .strategy import (
    DominanceQuery,
    check_dominance,
    ods_promoting,
    ods_set,
    refusal_transform,
    strict_gain_pairs,
)


@dataclass(frozen=True)
class SweepOutcome:
    name: str
    checked: int
    violations: int
    first_violation: str | None

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _run_units(
    units: Sequence,
    worker: Callable,
    parallel: bool,
) -> list:
    if parallel:
        with ThreadPoolExecutor() as pool:
            return list(pool.map(worker, units))
    return [worker(u) for u in units]


def _collect(name: str, results: Iterable[str | None]) -> SweepOutcome:
    checked = 0
    violations = 0
    first: str | None = None
    for detail in results:
        checked += 1
        if detail is not None:
            violations += 1
            if first is None:
                first = detail
    return SweepOutcome(name, checked, violations, first)


def _profile_label(market: Market, profile: Profile) -> str:
    return " ".join(
        f"{market.agent_names[a]}=({order_to_names(market, profile[a])})"
        for a in range(market.n_agents)
    )


def sweep_ete(
    market: Market,
    mechanism_name: str,
    profiles: Iterable[Profile] | None = None,
    budget: Budget = DEFAULT_BUDGET,
    parallel: bool = False,
) -> SweepOutcome:
    """Equal treatment of essentially equal reveals, profile by profile."""
    mech = get_mechanism(mechanism_name)
    if profiles is None:
        profiles = all_profiles(market)
    units = list(profiles)

    def worker(profile: Profile) -> str | None:
        if check_ete(lambda m, p: mech(m, p, budget), market, profile):
            return None
        return _profile_label(market, profile)

    return _collect(f"ete-{mechanism_name}", _run_units(units, worker, parallel))


def all_profiles(market: Market) -> list[Profile]:
    orders = market.all_orders()
    return [
        Profile(combo)
        for combo in itertools.product(orders, repeat=market.n_agents)
    ]


def sweep_demotion_weak_dominance(
    market: Market,
    budget: Budget = DEFAULT_BUDGET,
    parallel: bool = False,
) -> SweepOutcome:
    """Under refusal, every demotion weakly dominates its truth (uniform)."""
    units = [
        (agent, truth, demoted)
        for agent in range(market.n_agents)
        for truth in market.all_orders()
        for demoted in ods_set(market, truth)
    ]

    def worker(unit) -> str | None:
        agent, truth, demoted = unit
        verdict = check_dominance(
            DominanceQuery(market, agent, truth, demoted, "uniform", refusal=True),
            budget,
        )
        if verdict.weakly_dominates:
            return None
        return (
            f"agent={market.agent_names[agent]} truth=({order_to_names(market, truth)}) "
            f"demotion=({order_to_names(market, demoted)})"
        )

    return _collect("thm1", _run_units(units, worker, parallel))


def sweep_demotion_strict_gain(
    market: Market,
    budget: Budget = DEFAULT_BUDGET,
    parallel: bool = False,
) -> SweepOutcome:
    """Scarce pairs make the promoting demotion strictly dominant (refusal on)."""
    units = [
        (agent, truth, o_prime)
        for agent in range(market.n_agents)
        for truth in market.all_orders()
        for (_, o_prime) in strict_gain_pairs(market, truth)
    ]

    def worker(unit) -> str | None:
        agent, truth, o_prime = unit
        demoted = ods_promoting(market, truth, o_prime)
        verdict = check_dominance(
            DominanceQuery(market, agent, truth, demoted, "uniform", refusal=True),
            budget,
        )
        if verdict.strictly_dominates:
            return None
        return (
            f"agent={market.agent_names[agent]} truth=({order_to_names(market, truth)}) "
            f"promoted={market.type_names[o_prime]}"
        )

    return _collect("thm2", _run_units(units, worker, parallel))


def sweep_demotion_waste(
    market: Market,
    budget: Budget = DEFAULT_BUDGET,
    parallel: bool = False,
) -> SweepOutcome:
    """When everyone else reveals the same demotion, refusal strands capacity."""
    units = [
        (agent, truth, o_prime)
        for agent in range(market.n_agents)
        for truth in market.all_orders()
        for (_, o_prime) in strict_gain_pairs(market, truth)
    ]

    def worker(unit) -> str | None:
        agent, truth, o_prime = unit
        demoted = ods_promoting(market, truth, o_prime)
        orders = [demoted] * market.n_agents
        revealed = Profile(tuple(orders))
        truths = Profile(
            tuple(truth if a == agent else demoted for a in range(market.n_agents))
        )
        outcome = refusal_transform(
            market, uniform_mechanism(market, revealed, budget), truths
        )
        if is_wasteful(market, outcome, truths):
            return None
        return (
            f"agent={market.agent_names[agent]} truth=({order_to_names(market, truth)}) "
            f"promoted={market.type_names[o_prime]}"
        )

    return _collect("prop3", _run_units(units, worker, parallel))


def sweep_no_strict_dominance(
    market: Market,
    mechanism_name: str,
    refusal: bool,
    budget: Budget = DEFAULT_BUDGET,
    parallel: bool = False,
    dichotomy: bool = False,
) -> SweepOutcome:
    """No reveal strictly dominates the truth.

    With ``dichotomy`` on (the no-refusal uniform sweep), additionally demand
    that essentially equal candidates tie the truth's row at every opponent
    profile while every other candidate has a profile where it is not weakly
    preferred.
    """
    units = [
        (agent, truth, candidate)
        for agent in range(market.n_agents)
        for truth in market.all_orders()
        for candidate in market.all_orders()
        if candidate != truth
    ]

    def worker(unit) -> str | None:
        agent, truth, candidate = unit
        verdict = check_dominance(
            DominanceQuery(market, agent, truth, candidate, mechanism_name, refusal),
            budget,
        )
        label = (
            f"agent={market.agent_names[agent]} truth=({order_to_names(market, truth)}) "
            f"candidate=({order_to_names(market, candidate)})"
        )
        if verdict.strictly_dominates:
            return f"{label}: strictly dominates"
        if dichotomy:
            if market.essentially_equal(truth, candidate):
                if not verdict.weakly_dominates or verdict.strict_witness is not None:
                    return f"{label}: essentially equal but rows differ somewhere"
            elif verdict.failure_witness is None:
                return f"{label}: expected a failure witness"
        return None

    name = "prop2" if dichotomy else f"no-strict-dominance-{mechanism_name}"
    if mechanism_name == "modified" and refusal:
        name = "prop5"
    return _collect(name, _run_units(units, worker, parallel))
