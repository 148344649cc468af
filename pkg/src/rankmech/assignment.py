"""Random assignments as exact rational matrices, plus the operations on them.

Everything here is exact: probabilities are `fractions.Fraction`, equality is
bit-for-bit, and no tolerance appears anywhere.  Matrices are indexed
``rows[agent][type]`` in the market's declaration order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .market import AgentIndex, Market, PreferenceOrder, Profile, TypeIndex, check_profile

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Assignment:
    """A random assignment: one probability row per agent over all types."""

    rows: tuple[tuple[Fraction, ...], ...]

    def row(self, agent: AgentIndex) -> tuple[Fraction, ...]:
        return self.rows[agent]

    def entry(self, agent: AgentIndex, o: TypeIndex) -> Fraction:
        return self.rows[agent][o]

    def column_sum(self, o: TypeIndex) -> Fraction:
        return sum((row[o] for row in self.rows), start=ZERO)


def build_assignment(market: Market, rows) -> Assignment:
    """Validate ``rows`` against ``market`` and wrap them as an Assignment.

    Raises DomainError when a row does not sum to one, an entry leaves [0, 1],
    a column exceeds its capacity, or the shape is off.
    """
    rows = tuple(tuple(Fraction(v) for v in row) for row in rows)
    if len(rows) != market.n_agents:
        raise DomainError(f"expected {market.n_agents} rows, got {len(rows)}")
    for a, row in enumerate(rows):
        if len(row) != market.n_types:
            raise DomainError(
                f"row {market.agent_names[a]} has {len(row)} entries, "
                f"expected {market.n_types}"
            )
        for o, v in enumerate(row):
            if not ZERO <= v <= ONE:
                raise DomainError(
                    f"probability {v} for ({market.agent_names[a]}, "
                    f"{market.type_names[o]}) is outside [0, 1]"
                )
        if sum(row, start=ZERO) != ONE:
            raise DomainError(f"row {market.agent_names[a]} does not sum to 1")
    for o in range(market.n_types):
        total = sum((row[o] for row in rows), start=ZERO)
        if total > market.capacities[o]:
            raise DomainError(
                f"column {market.type_names[o]} sums to {total}, "
                f"exceeding capacity {market.capacities[o]}"
            )
    return Assignment(rows)


@dataclass(frozen=True)
class DeterministicAssignment:
    """An assignment placing each agent on exactly one type."""

    choices: tuple[TypeIndex, ...]

    def to_assignment(self, market: Market) -> Assignment:
        rows = []
        for choice in self.choices:
            row = [ZERO] * market.n_types
            row[choice] = ONE
            rows.append(tuple(row))
        return build_assignment(market, rows)

    def respects_capacities(self, market: Market) -> bool:
        for o in range(market.n_types):
            if self.choices.count(o) > market.capacities[o]:
                return False
        return True


@dataclass(frozen=True)
class Decomposition:
    """A convex combination of deterministic assignments."""

    parts: tuple[tuple[Fraction, DeterministicAssignment], ...]

    def recombine(self, market: Market) -> Assignment:
        rows = [[ZERO] * market.n_types for _ in range(market.n_agents)]
        for weight, det in self.parts:
            for a, choice in enumerate(det.choices):
                rows[a][choice] += weight
        return build_assignment(market, rows)


def rank_value(x: Assignment, profile: Profile) -> Fraction:
    """Expected total rank of ``x`` under the revealed ``profile``."""
    if len(x.rows) != len(profile):
        raise DomainError("assignment and profile disagree on the number of agents")
    total = ZERO
    for a, row in enumerate(x.rows):
        order = profile[a]
        if len(row) != len(order):
            raise DomainError("assignment and profile disagree on the number of types")
        for o, v in enumerate(row):
            if v:
                total += order.rank(o) * v
    return total


def deterministic_rank_value(det: DeterministicAssignment, profile: Profile) -> int:
    return sum(profile[a].rank(o) for a, o in enumerate(det.choices))


def wastefulness_witness(
    market: Market, x: Assignment, profile: Profile
) -> tuple[AgentIndex, TypeIndex, TypeIndex] | None:
    """First (agent, preferred, held) triple proving waste, or None.

    Waste means some agent holds probability on a type while a type they rank
    strictly higher still has slack capacity.  The scan runs in agent order,
    then preferred-type order, then held-type order, so the witness is the
    lexicographically first one.
    """
    check_profile(market, profile)
    slack = [
        market.capacities[o] - x.column_sum(o) > 0 for o in range(market.n_types)
    ]
    for a in range(market.n_agents):
        order = profile[a]
        for o in range(market.n_types):
            if not slack[o]:
                continue
            for held in range(market.n_types):
                if x.entry(a, held) > 0 and order.rank(o) < order.rank(held):
                    return (a, o, held)
    return None


def is_wasteful(market: Market, x: Assignment, profile: Profile) -> bool:
    return wastefulness_witness(market, x, profile) is not None


def row_weakly_prefers(
    order: PreferenceOrder, row: tuple[Fraction, ...], other: tuple[Fraction, ...]
) -> bool:
    """First-order stochastic dominance of ``row`` over ``other`` under ``order``.

    Returns False when the rows are incomparable; this is a partial order,
    not a total one.
    """
    if len(row) != len(order) or len(other) != len(order):
        raise DomainError("rows and order disagree on the number of types")
    cum_row = ZERO
    cum_other = ZERO
    for o in order.ranking:
        cum_row += row[o]
        cum_other += other[o]
        if cum_row < cum_other:
            return False
    return True


def row_strictly_prefers(
    order: PreferenceOrder, row: tuple[Fraction, ...], other: tuple[Fraction, ...]
) -> bool:
    """Weak preference plus a strict cumulative gap above some rank.

    The final cumulative sums always tie at 1, so the strict gap must appear
    at a rank below the bottom one.
    """
    if not row_weakly_prefers(order, row, other):
        return False
    cum_row = ZERO
    cum_other = ZERO
    for o in order.ranking[:-1]:
        cum_row += row[o]
        cum_other += other[o]
        if cum_row > cum_other:
            return True
    return False


def weakly_prefers(order: PreferenceOrder, x: Assignment, other: Assignment, agent: AgentIndex) -> bool:
    return row_weakly_prefers(order, x.row(agent), other.row(agent))


def strictly_prefers(order: PreferenceOrder, x: Assignment, other: Assignment, agent: AgentIndex) -> bool:
    return row_strictly_prefers(order, x.row(agent), other.row(agent))


def decompose(market: Market, x: Assignment) -> Decomposition:
    """Write ``x`` as a convex combination of deterministic assignments.

    The assignment polytope here has unit demands and per-type capacities, so
    the classic bistochastic argument applies after splitting each type into
    unit-capacity copies and padding with dummy agents.  Each extraction step
    finds a perfect matching over the positive entries (one always exists for
    a matrix with equal row and column sums) and subtracts the largest weight
    that keeps the remainder nonnegative, zeroing at least one entry, so the
    loop terminates.  Projecting matched copies back to their types yields
    deterministic assignments that respect every capacity, and the weights
    recombine to ``x`` exactly.
    """
    build_assignment(market, x.rows)  # re-validate; malformed input is a domain error
    copy_type: list[TypeIndex] = []
    for o in range(market.n_types):
        copy_type.extend([o] * market.capacities[o])
    n_copies = len(copy_type)
    n_real = market.n_agents

    # Real agents spread each type's probability evenly over its copies.
    matrix: list[list[Fraction]] = []
    for a in range(n_real):
        row = [x.entry(a, o) / market.capacities[o] for o in copy_type]
        matrix.append(row)

    # Dummy agents absorb the remaining column slack, northwest-corner style.
    deficits = [ONE - sum((matrix[a][c] for a in range(n_real)), start=ZERO)
                for c in range(n_copies)]
    for _ in range(n_copies - n_real):
        row = [ZERO] * n_copies
        need = ONE
        for c in range(n_copies):
            if need == 0:
                break
            take = min(need, deficits[c])
            if take > 0:
                row[c] = take
                deficits[c] -= take
                need -= take
        assert need == 0
        matrix.append(row)
    assert all(d == 0 for d in deficits)

    weights: dict[tuple[TypeIndex, ...], Fraction] = {}
    remaining = ONE
    while remaining > 0:
        matched = _positive_perfect_matching(matrix)
        weight = min(matrix[r][matched[r]] for r in range(n_copies))
        assert weight > 0
        for r in range(n_copies):
            matrix[r][matched[r]] -= weight
        choices = tuple(copy_type[matched[a]] for a in range(n_real))
        weights[choices] = weights.get(choices, ZERO) + weight
        remaining -= weight

    parts = tuple(
        (weights[choices], DeterministicAssignment(choices))
        for choices in sorted(weights)
    )
    return Decomposition(parts)


def _positive_perfect_matching(matrix: list[list[Fraction]]) -> list[int]:
    """Kuhn's augmenting-path matching over the strictly positive entries."""
    n = len(matrix)
    col_of_row = [-1] * n
    row_of_col = [-1] * n

    def try_assign(r: int, seen: list[bool]) -> bool:
        for c in range(n):
            if matrix[r][c] > 0 and not seen[c]:
                seen[c] = True
                if row_of_col[c] == -1 or try_assign(row_of_col[c], seen):
                    row_of_col[c] = r
                    col_of_row[r] = c
                    return True
        return False

    for r in range(n):
        if not try_assign(r, [False] * n):
            raise AssertionError("no perfect matching; matrix row/column sums are unequal")
    return col_of_row


def render_matrix(market: Market, x: Assignment) -> str:
    """Aligned text grid: agents as rows, types as columns, fractions in lowest terms."""
    header = [""] + list(market.type_names)
    body = [
        [market.agent_names[a]] + [str(x.entry(a, o)) for o in range(market.n_types)]
        for a in range(market.n_agents)
    ]
    widths = [
        max(len(line[col]) for line in [header] + body)
        for col in range(len(header))
    ]
    lines = []
    for line in [header] + body:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(line, widths)).rstrip())
    return "\n".join(lines)


def csv_rows(market: Market, x: Assignment) -> list[tuple[str, str, str]]:
    """Rows for CSV export: (agent, type, probability as a fraction string)."""
    out = []
    for a in range(market.n_agents):
        for o in range(market.n_types):
            out.append(
                (market.agent_names[a], market.type_names[o], str(x.entry(a, o)))
            )
    return out
