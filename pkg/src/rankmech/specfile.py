"""Plain-text market files: parsing with diagnostics, and round-trip rendering.

Format, one declaration per line (blank lines and ``#`` comments allowed):

    type <name> capacity <int> [null]
    agent <name> prefers <type> > <type> > ... > <type>

Exactly one type carries the ``null`` marker (the outside option).  Agent
rankings must mention every declared type exactly once.  Declarations may
appear in any order; types are resolved in a first pass.
"""

from __future__ import annotations

from .errors import MarketSpecError
from .market import Market, PreferenceOrder, Profile

# Diagnostic codes, stable across releases:
#   E_SYNTAX             malformed declaration
#   E_DUP_TYPE           type name declared twice
#   E_DUP_AGENT          agent name declared twice
#   E_BAD_CAPACITY       capacity is not a positive integer
#   E_MULTI_NULL         more than one null marker
#   E_NO_NULL            no null marker
#   E_UNKNOWN_TYPE       ranking mentions an undeclared type
#   E_RANKING_INCOMPLETE ranking misses or repeats a type
#   E_MARKET_SIZE        fewer than 2 agents or 3 types
#   E_CAPACITY_BOUNDS    capacity out of range for its role


def parse_market_spec(text: str) -> tuple[Market, Profile]:
    """Parse a market file into a market plus the declared revealed profile."""
    lines = text.splitlines()
    type_names: list[str] = []
    capacities: list[int] = []
    type_lines: list[int] = []
    null_type: int | None = None
    agent_decls: list[tuple[int, str, list[str]]] = []

    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "type":
            _parse_type_line(lineno, tokens, type_names, capacities, type_lines)
            if len(tokens) == 5:
                if null_type is not None:
                    raise MarketSpecError(
                        "E_MULTI_NULL", lineno, "a second type carries the null marker"
                    )
                null_type = len(type_names) - 1
        elif tokens[0] == "agent":
            if len(tokens) < 4 or tokens[2] != "prefers":
                raise MarketSpecError(
                    "E_SYNTAX", lineno,
                    "expected: agent <name> prefers <type> > <type> > ...",
                )
            name = tokens[1]
            if any(name == existing for _, existing, _ in agent_decls):
                raise MarketSpecError(
                    "E_DUP_AGENT", lineno, f"agent {name!r} declared twice"
                )
            ranking_text = line.split("prefers", 1)[1]
            ranked = [part.strip() for part in ranking_text.split(">")]
            if any(not part for part in ranked):
                raise MarketSpecError(
                    "E_SYNTAX", lineno, "empty entry in the ranking list"
                )
            agent_decls.append((lineno, name, ranked))
        else:
            raise MarketSpecError(
                "E_SYNTAX", lineno, f"unknown declaration {tokens[0]!r}"
            )

    if null_type is None:
        raise MarketSpecError("E_NO_NULL", 0, "no type carries the null marker")
    if len(type_names) < 3:
        raise MarketSpecError(
            "E_MARKET_SIZE", 0, "a market needs at least three types"
        )
    if len(agent_decls) < 2:
        raise MarketSpecError(
            "E_MARKET_SIZE", 0, "a market needs at least two agents"
        )

    n_agents = len(agent_decls)
    for o, (lineno, q) in enumerate(zip(type_lines, capacities)):
        if o == null_type:
            if q < n_agents:
                raise MarketSpecError(
                    "E_CAPACITY_BOUNDS", lineno,
                    f"null capacity {q} must cover all {n_agents} agents",
                )
        elif q >= n_agents:
            raise MarketSpecError(
                "E_CAPACITY_BOUNDS", lineno,
                f"capacity {q} of {type_names[o]!r} must stay below the "
                f"agent count {n_agents}",
            )

    index = {name: o for o, name in enumerate(type_names)}
    agent_names = []
    orders = []
    for lineno, name, ranked in agent_decls:
        agent_names.append(name)
        seen = set()
        ranking = []
        for part in ranked:
            if part not in index:
                raise MarketSpecError(
                    "E_UNKNOWN_TYPE", lineno, f"ranking mentions undeclared type {part!r}"
                )
            if part in seen:
                raise MarketSpecError(
                    "E_RANKING_INCOMPLETE", lineno, f"type {part!r} ranked twice"
                )
            seen.add(part)
            ranking.append(index[part])
        if len(ranking) != len(type_names):
            missing = [t for t in type_names if t not in seen]
            raise MarketSpecError(
                "E_RANKING_INCOMPLETE", lineno,
                f"ranking omits {', '.join(repr(m) for m in missing)}",
            )
        orders.append(PreferenceOrder(tuple(ranking)))

    market = Market(
        agent_names=tuple(agent_names),
        type_names=tuple(type_names),
        capacities=tuple(capacities),
        null_type=null_type,
    )
    return market, Profile(tuple(orders))


def _parse_type_line(lineno, tokens, type_names, capacities, type_lines):
    if len(tokens) not in (4, 5) or tokens[2] != "capacity":
        raise MarketSpecError(
            "E_SYNTAX", lineno, "expected: type <name> capacity <int> [null]"
        )
    if len(tokens) == 5 and tokens[4] != "null":
        raise MarketSpecError(
            "E_SYNTAX", lineno, f"trailing token must be 'null', got {tokens[4]!r}"
        )
    name = tokens[1]
    if name in type_names:
        raise MarketSpecError("E_DUP_TYPE", lineno, f"type {name!r} declared twice")
    try:
        capacity = int(tokens[3])
    except ValueError:
        capacity = -1
    if capacity < 1:
        raise MarketSpecError(
            "E_BAD_CAPACITY", lineno, f"capacity must be a positive integer, got {tokens[3]!r}"
        )
    type_names.append(name)
    capacities.append(capacity)
    type_lines.append(lineno)


def render_market_spec(market: Market, profile: Profile) -> str:
    """Render a market and profile back to spec text; parses to equal objects."""
    lines = []
    for o, name in enumerate(market.type_names):
        marker = " null" if o == market.null_type else ""
        lines.append(f"type {name} capacity {market.capacities[o]}{marker}")
    for a, name in enumerate(market.agent_names):
        ranked = " > ".join(market.type_names[o] for o in profile[a].ranking)
        lines.append(f"agent {name} prefers {ranked}")
    return "\n".join(lines) + "\n"
