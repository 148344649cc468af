"""Command-line interface.

Exit codes: 0 success, 1 a checked property or reproduction failed,
2 usage or spec-file errors, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import sys

from .assignment import (
    csv_rows,
    decompose,
    rank_value,
    render_matrix,
    wastefulness_witness,
)
from .errors import BudgetError, DomainError, MarketSpecError
from .examples import run_example_checks
from .market import Market, Profile, order_from_names, order_to_names
from .mechanisms import Budget, DEFAULT_BUDGET, get_mechanism
from .specfile import parse_market_spec
from .strategy import (
    DominanceQuery,
    check_dominance,
    full_extension,
    ods_set,
    refusal_transform,
)
from .sweeps import (
    sweep_demotion_strict_gain,
    sweep_demotion_waste,
    sweep_demotion_weak_dominance,
    sweep_ete,
    sweep_no_strict_dominance,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankmech",
        description="Exact fair rank-minimizing assignment with refusal analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    assign = sub.add_parser("assign", help="run a mechanism on a market file")
    _common_flags(assign)
    assign.add_argument("--truth", metavar="PATH",
                        help="market file whose rankings are the true orders "
                             "(defaults to the revealed ones)")

    dominance = sub.add_parser("dominance", help="test a reveal against the truth")
    _common_flags(dominance)
    dominance.add_argument("--agent", required=True, help="agent name from the spec")
    dominance.add_argument("--truth-order", required=True, metavar="ORDER",
                           help="true order, e.g. 'o1>null>o2'")
    group = dominance.add_mutually_exclusive_group(required=True)
    group.add_argument("--candidate", metavar="ORDER", help="candidate reveal to test")
    group.add_argument("--ods", action="store_true",
                       help="test every outside-option demotion of the truth")

    sweep = sub.add_parser("sweep", help="exhaustively check a named property")
    sweep.add_argument("property",
                       choices=["ete-fU", "ete-fM", "prop2", "prop5",
                                "thm1", "thm2", "prop3"],
                       help="property to check over the market")
    _common_flags(sweep)

    sub.add_parser("reproduce-examples",
                   help="replay the bundled example markets bit-exactly")

    decompose_cmd = sub.add_parser(
        "decompose", help="decompose a mechanism output into deterministic parts"
    )
    _common_flags(decompose_cmd)

    return parser


def _common_flags(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--spec", required=True, metavar="PATH", help="market file")
    cmd.add_argument("--mechanism", choices=["uniform", "modified"],
                     default="uniform")
    cmd.add_argument("--refusal", action="store_true",
                     help="filter outcomes through true acceptability")
    cmd.add_argument("--parallel", action="store_true",
                     help="fan sweep units out to a thread pool")
    cmd.add_argument("--budget-agents", type=int, metavar="N",
                     help="raise the enumeration budget's agent limit")
    cmd.add_argument("--csv", metavar="PATH",
                     help="also write the final matrix as agent,type,probability")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except MarketSpecError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except BudgetError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except DomainError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "assign":
        return _cmd_assign(args)
    if args.command == "dominance":
        return _cmd_dominance(args)
    if args.command == "sweep":
        return _cmd_sweep(args)
    if args.command == "reproduce-examples":
        return _cmd_reproduce()
    if args.command == "decompose":
        return _cmd_decompose(args)
    raise AssertionError(f"unhandled command {args.command!r}")


def _budget(args: argparse.Namespace) -> Budget:
    if getattr(args, "budget_agents", None):
        return Budget(max_agents=args.budget_agents)
    return DEFAULT_BUDGET


def _load(path: str) -> tuple[Market, Profile]:
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        raise MarketSpecError("E_IO", 0, f"cannot read {path}: {err}") from err
    return parse_market_spec(text)


def _write_csv(path: str, market: Market, x) -> None:
    lines = ["agent,type,probability"]
    lines += [",".join(row) for row in csv_rows(market, x)]
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def _cmd_assign(args: argparse.Namespace) -> int:
    market, revealed = _load(args.spec)
    budget = _budget(args)
    mech = get_mechanism(args.mechanism)
    x = mech(market, revealed, budget)
    print(f"mechanism: {args.mechanism}")
    for a in range(market.n_agents):
        print(f"revealed {market.agent_names[a]}: {order_to_names(market, revealed[a])}")
    print(render_matrix(market, x))
    print(f"rank value: {rank_value(x, revealed)}")
    witness = wastefulness_witness(market, x, revealed)
    print(_waste_line(market, witness))
    final = x
    if args.refusal:
        if args.truth:
            truth_market, truths = _load(args.truth)
            if truth_market != market:
                raise MarketSpecError(
                    "E_MARKET_MISMATCH", 0,
                    "the truth file declares a different market",
                )
        else:
            truths = revealed
        refused = refusal_transform(market, x, truths)
        print("after refusal:")
        print(render_matrix(market, refused))
        witness = wastefulness_witness(market, refused, truths)
        print(_waste_line(market, witness))
        final = refused
    if args.csv:
        _write_csv(args.csv, market, final)
    return 0


def _waste_line(market: Market, witness) -> str:
    if witness is None:
        return "wasteful: no"
    a, preferred, held = witness
    return (
        f"wasteful: yes (agent {market.agent_names[a]} holds "
        f"{market.type_names[held]} while {market.type_names[preferred]} has slack)"
    )


def _render_opponents(market: Market, witness) -> str:
    return " ".join(
        f"{market.agent_names[a]}=({order_to_names(market, order)})"
        for a, order in witness
    )


def _cmd_dominance(args: argparse.Namespace) -> int:
    market, _ = _load(args.spec)
    budget = _budget(args)
    agent = market.agent_index(args.agent)
    truth = order_from_names(market, args.truth_order)
    if args.candidate:
        candidates = [(order_from_names(market, args.candidate), "")]
    else:
        extension = full_extension(market, truth)
        candidates = [
            (order, " [full extension]" if order == extension else " [demotion]")
            for order in ods_set(market, truth)
        ]
    print(f"agent: {args.agent}  truth: {args.truth_order}  "
          f"mechanism: {args.mechanism}  refusal: {'on' if args.refusal else 'off'}")
    for candidate, tag in candidates:
        verdict = check_dominance(
            DominanceQuery(market, agent, truth, candidate,
                           args.mechanism, args.refusal),
            budget,
        )
        print(f"candidate {order_to_names(market, candidate)}{tag}: "
              f"weak={'yes' if verdict.weakly_dominates else 'no'} "
              f"strict={'yes' if verdict.strictly_dominates else 'no'}")
        if verdict.failure_witness is not None:
            print(f"  not weakly preferred at "
                  f"{_render_opponents(market, verdict.failure_witness)}")
        if verdict.strict_witness is not None:
            print(f"  strictly preferred at "
                  f"{_render_opponents(market, verdict.strict_witness)}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    market, _ = _load(args.spec)
    budget = _budget(args)
    runners = {
        "ete-fU": lambda: sweep_ete(market, "uniform", None, budget, args.parallel),
        "ete-fM": lambda: sweep_ete(market, "modified", None, budget, args.parallel),
        "prop2": lambda: sweep_no_strict_dominance(
            market, "uniform", False, budget, args.parallel, dichotomy=True),
        "prop5": lambda: sweep_no_strict_dominance(
            market, "modified", True, budget, args.parallel),
        "thm1": lambda: sweep_demotion_weak_dominance(market, budget, args.parallel),
        "thm2": lambda: sweep_demotion_strict_gain(market, budget, args.parallel),
        "prop3": lambda: sweep_demotion_waste(market, budget, args.parallel),
    }
    outcome = runners[args.property]()
    print(f"property: {args.property}")
    print(f"checked: {outcome.checked}")
    print(f"violations: {outcome.violations}")
    if outcome.first_violation is not None:
        print(f"first violation: {outcome.first_violation}")
    print(f"result: {'pass' if outcome.passed else 'fail'}")
    return 0 if outcome.passed else 1


def _cmd_reproduce() -> int:
    failures = 0
    for label, ok, detail in run_example_checks():
        if ok:
            print(f"ok: {label}")
        else:
            failures += 1
            suffix = f" ({detail})" if detail else ""
            print(f"MISMATCH: {label}{suffix}")
    total = "all checks passed" if failures == 0 else f"{failures} checks failed"
    print(total)
    return 0 if failures == 0 else 1


def _cmd_decompose(args: argparse.Namespace) -> int:
    market, revealed = _load(args.spec)
    budget = _budget(args)
    mech = get_mechanism(args.mechanism)
    x = mech(market, revealed, budget)
    print(f"mechanism: {args.mechanism}")
    print(render_matrix(market, x))
    decomposition = decompose(market, x)
    for weight, det in decomposition.parts:
        placing = " ".join(
            f"{market.agent_names[a]}->{market.type_names[o]}"
            for a, o in enumerate(det.choices)
        )
        print(f"weight {weight}: {placing}")
    exact = decomposition.recombine(market) == x
    print(f"recombines exactly: {'yes' if exact else 'no'}")
    if args.csv:
        _write_csv(args.csv, market, x)
    return 0 if exact else 1


if __name__ == "__main__":
    sys.exit(main())
